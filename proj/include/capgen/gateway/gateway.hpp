#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace capgen::gateway {

struct ProviderProfile {
  std::string name;     // short name used in keys and paths, e.g. "gpt"
  std::string adapter;  // openai | anthropic | gemini
  std::string model;
  long context_window = 0;
  double input_rate = 0;   // currency per 1000 input tokens
  double output_rate = 0;  // currency per 1000 output tokens
  std::string endpoint;    // full URL; "{model}" is substituted
  std::string auth_env;
  int requests_per_minute = 0;  // 0 disables rate limiting
};

enum class Mode { Live, Replay };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);

struct CompletionRequest {
  ProviderProfile provider;
  std::string prompt;
  double temperature = 0;
  int max_output_tokens = 4096;
  std::string experiment_key;  // {Cid}-{technique key}-{provider}
};

struct CompletionResult {
  std::string text;
  long input_tokens = 0;
  long output_tokens = 0;
  double cost = 0;
  std::chrono::milliseconds latency{0};
  Mode mode = Mode::Replay;
  int retries = 0;
};

class GatewayError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class MissingCredentials : public GatewayError {
 public:
  using GatewayError::GatewayError;
};
class FixtureNotFound : public GatewayError {
 public:
  using GatewayError::GatewayError;
};
class ContextOverflow : public GatewayError {
 public:
  using GatewayError::GatewayError;
};
class ProviderError : public GatewayError {
 public:
  ProviderError(const std::string& message, int status, int attempts)
      : GatewayError(message), status(status), attempts(attempts) {}
  int status;  // last HTTP status, 0 for transport failures
  int attempts;
};

struct GuardOutcome {
  bool accepted = true;
  long prompt_tokens = 0;
  long overflow = 0;  // tokens beyond the window, 0 when accepted
  std::string message;
};

// Rejects when estimate_tokens(prompt) + max_output_tokens exceeds the
// provider's context window.
GuardOutcome guard_context(const CompletionRequest& req);

double cost_of(const ProviderProfile& p, long input_tokens, long output_tokens);

struct CostSummary {
  double total = 0;
  double mean_per_prompt = 0;
};

CostSummary cost_report(const std::vector<CompletionResult>& results);

std::string experiment_key(const std::string& capability_id, const std::string& technique,
                           const std::string& provider);
// fixtures/{provider}/{Cid}-{technique key}.txt for a key such as "C1-zero-gpt".
std::filesystem::path fixture_path(const std::filesystem::path& fixtures_dir, const std::string& key);

// Provider-specific request and response shapes.
struct HttpCall {
  std::string url;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;
};

struct ParsedResponse {
  std::string text;
  long input_tokens = 0;
  long output_tokens = 0;
};

class Adapter {
 public:
  virtual ~Adapter() = default;
  virtual HttpCall build(const CompletionRequest& req, const std::string& api_key) const = 0;
  // Throws GatewayError when the body lacks the expected fields.
  virtual ParsedResponse parse(const std::string& body) const = 0;
};

std::unique_ptr<Adapter> make_adapter(const std::string& name);

struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{1000};
};

// Spaces calls at 60 / requests_per_minute seconds.
class RateLimiter {
 public:
  explicit RateLimiter(int requests_per_minute);
  void acquire();

 private:
  std::chrono::milliseconds interval_;
  std::chrono::steady_clock::time_point next_;
  std::mutex mutex_;
};

class Gateway {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  Gateway(Mode mode, std::filesystem::path fixtures_dir, RetryPolicy retry = {}, Sleeper sleeper = {});

  // Guards, then replays the stored fixture or performs the HTTP call.
  CompletionResult complete(const CompletionRequest& req);

  Mode mode() const { return mode_; }

 private:
  CompletionResult replay(const CompletionRequest& req) const;
  CompletionResult live(const CompletionRequest& req);
  std::mutex& provider_lock(const ProviderProfile& p);
  RateLimiter& limiter(const ProviderProfile& p);

  Mode mode_;
  std::filesystem::path fixtures_dir_;
  RetryPolicy retry_;
  Sleeper sleeper_;
  std::mutex registry_mutex_;
  std::map<std::string, std::unique_ptr<std::mutex>> provider_locks_;
  std::map<std::string, std::unique_ptr<RateLimiter>> limiters_;
};

void to_json(nlohmann::json& j, const CompletionResult& r);
void from_json(const nlohmann::json& j, ProviderProfile& p);
void to_json(nlohmann::json& j, const ProviderProfile& p);

}  // namespace capgen::gateway
