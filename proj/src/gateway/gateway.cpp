#include "capgen/gateway/gateway.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"

#include "capgen/prompt/prompt.hpp"

namespace capgen::gateway {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(Mode mode) { return mode == Mode::Live ? "LIVE" : "REPLAY"; }

Mode parse_mode(const std::string& text) {
  if (text == "live" || text == "LIVE") return Mode::Live;
  if (text == "replay" || text == "REPLAY") return Mode::Replay;
  throw GatewayError("unknown mode '" + text + "'");
}

GuardOutcome guard_context(const CompletionRequest& req) {
  GuardOutcome g;
  g.prompt_tokens = prompt::estimate_tokens(req.prompt);
  long needed = g.prompt_tokens + req.max_output_tokens;
  if (needed > req.provider.context_window) {
    g.accepted = false;
    g.overflow = needed - req.provider.context_window;
    g.message = req.provider.name + ": prompt needs " + std::to_string(g.prompt_tokens) + " + " +
                std::to_string(req.max_output_tokens) + " tokens, " + std::to_string(g.overflow) +
                " more than the context window of " + std::to_string(req.provider.context_window);
  }
  return g;
}

double cost_of(const ProviderProfile& p, long input_tokens, long output_tokens) {
  return static_cast<double>(input_tokens) * p.input_rate / 1000.0 +
         static_cast<double>(output_tokens) * p.output_rate / 1000.0;
}

CostSummary cost_report(const std::vector<CompletionResult>& results) {
  CostSummary s;
  for (const auto& r : results) s.total += r.cost;
  if (!results.empty()) s.mean_per_prompt = s.total / static_cast<double>(results.size());
  return s;
}

std::string experiment_key(const std::string& capability_id, const std::string& technique,
                           const std::string& provider) {
  return capability_id + "-" + prompt::technique_key(technique) + "-" + provider;
}

fs::path fixture_path(const fs::path& fixtures_dir, const std::string& key) {
  auto first = key.find('-');
  auto second = first == std::string::npos ? first : key.find('-', first + 1);
  if (second == std::string::npos) throw GatewayError("malformed experiment key '" + key + "'");
  return fixtures_dir / key.substr(second + 1) / (key.substr(0, second) + ".txt");
}

namespace {

std::string substitute_model(std::string url, const std::string& model) {
  if (auto at = url.find("{model}"); at != std::string::npos) url.replace(at, 7, model);
  return url;
}

json parse_body(const std::string& body) {
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw GatewayError(std::string("response is not JSON: ") + e.what());
  }
}

class OpenAiAdapter : public Adapter {
 public:
  HttpCall build(const CompletionRequest& req, const std::string& key) const override {
    json body = {{"model", req.provider.model},
                 {"messages", json::array({{{"role", "user"}, {"content", req.prompt}}})},
                 {"temperature", req.temperature},
                 {"max_tokens", req.max_output_tokens}};
    return {substitute_model(req.provider.endpoint, req.provider.model),
            {{"Authorization", "Bearer " + key}},
            body.dump()};
  }
  ParsedResponse parse(const std::string& raw) const override {
    json j = parse_body(raw);
    try {
      ParsedResponse r;
      r.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
      r.input_tokens = j.at("usage").at("prompt_tokens").get<long>();
      r.output_tokens = j.at("usage").at("completion_tokens").get<long>();
      return r;
    } catch (const json::exception& e) {
      throw GatewayError(std::string("unexpected openai response: ") + e.what());
    }
  }
};

class AnthropicAdapter : public Adapter {
 public:
  HttpCall build(const CompletionRequest& req, const std::string& key) const override {
    json body = {{"model", req.provider.model},
                 {"max_tokens", req.max_output_tokens},
                 {"temperature", req.temperature},
                 {"messages", json::array({{{"role", "user"}, {"content", req.prompt}}})}};
    return {substitute_model(req.provider.endpoint, req.provider.model),
            {{"x-api-key", key}, {"anthropic-version", "2023-06-01"}},
            body.dump()};
  }
  ParsedResponse parse(const std::string& raw) const override {
    json j = parse_body(raw);
    try {
      ParsedResponse r;
      for (const auto& block : j.at("content")) {
        if (block.value("type", "text") == "text") r.text += block.at("text").get<std::string>();
      }
      r.input_tokens = j.at("usage").at("input_tokens").get<long>();
      r.output_tokens = j.at("usage").at("output_tokens").get<long>();
      return r;
    } catch (const json::exception& e) {
      throw GatewayError(std::string("unexpected anthropic response: ") + e.what());
    }
  }
};

class GeminiAdapter : public Adapter {
 public:
  HttpCall build(const CompletionRequest& req, const std::string& key) const override {
    json body = {{"contents", json::array({{{"role", "user"}, {"parts", json::array({{{"text", req.prompt}}})}}})},
                 {"generationConfig", {{"temperature", req.temperature}, {"maxOutputTokens", req.max_output_tokens}}}};
    return {substitute_model(req.provider.endpoint, req.provider.model), {{"x-goog-api-key", key}}, body.dump()};
  }
  ParsedResponse parse(const std::string& raw) const override {
    json j = parse_body(raw);
    try {
      ParsedResponse r;
      for (const auto& part : j.at("candidates").at(0).at("content").at("parts")) {
        r.text += part.at("text").get<std::string>();
      }
      r.input_tokens = j.at("usageMetadata").at("promptTokenCount").get<long>();
      r.output_tokens = j.at("usageMetadata").value("candidatesTokenCount", 0L);
      return r;
    } catch (const json::exception& e) {
      throw GatewayError(std::string("unexpected gemini response: ") + e.what());
    }
  }
};

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // with query
};

SplitUrl split_url(const std::string& url) {
  auto scheme = url.find("://");
  if (scheme == std::string::npos) throw GatewayError("endpoint '" + url + "' is not an absolute URL");
  auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

bool transient(int status) { return status == 0 || status == 429 || status >= 500; }

}  // namespace

std::unique_ptr<Adapter> make_adapter(const std::string& name) {
  if (name == "openai") return std::make_unique<OpenAiAdapter>();
  if (name == "anthropic") return std::make_unique<AnthropicAdapter>();
  if (name == "gemini") return std::make_unique<GeminiAdapter>();
  throw GatewayError("unknown adapter '" + name + "'");
}

RateLimiter::RateLimiter(int requests_per_minute)
    : interval_(requests_per_minute > 0 ? 60000 / requests_per_minute : 0), next_(std::chrono::steady_clock::now()) {}

void RateLimiter::acquire() {
  std::unique_lock lock(mutex_);
  auto now = std::chrono::steady_clock::now();
  if (next_ > now) std::this_thread::sleep_until(next_);
  next_ = std::max(now, next_) + interval_;
}

Gateway::Gateway(Mode mode, fs::path fixtures_dir, RetryPolicy retry, Sleeper sleeper)
    : mode_(mode), fixtures_dir_(std::move(fixtures_dir)), retry_(retry), sleeper_(std::move(sleeper)) {
  if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  if (retry_.attempts < 1) retry_.attempts = 1;
}

CompletionResult Gateway::complete(const CompletionRequest& req) {
  GuardOutcome g = guard_context(req);
  if (!g.accepted) throw ContextOverflow(g.message);
  return mode_ == Mode::Replay ? replay(req) : live(req);
}

CompletionResult Gateway::replay(const CompletionRequest& req) const {
  fs::path path = fixture_path(fixtures_dir_, req.experiment_key);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FixtureNotFound("no fixture for " + req.experiment_key + " at " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  CompletionResult r;
  r.text = ss.str();
  r.mode = Mode::Replay;
  r.input_tokens = prompt::estimate_tokens(req.prompt);
  r.output_tokens = prompt::estimate_tokens(r.text);
  r.cost = cost_of(req.provider, r.input_tokens, r.output_tokens);
  return r;
}

std::mutex& Gateway::provider_lock(const ProviderProfile& p) {
  std::lock_guard lock(registry_mutex_);
  auto& slot = provider_locks_[p.name];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

RateLimiter& Gateway::limiter(const ProviderProfile& p) {
  std::lock_guard lock(registry_mutex_);
  auto& slot = limiters_[p.name];
  if (!slot) slot = std::make_unique<RateLimiter>(p.requests_per_minute);
  return *slot;
}

CompletionResult Gateway::live(const CompletionRequest& req) {
  const char* key = std::getenv(req.provider.auth_env.c_str());
  if (req.provider.auth_env.empty() || key == nullptr || *key == '\0') {
    throw MissingCredentials(req.provider.name + ": environment variable " + req.provider.auth_env + " is not set");
  }
  auto adapter = make_adapter(req.provider.adapter);
  HttpCall call = adapter->build(req, key);
  SplitUrl url = split_url(call.url);
  httplib::Headers headers(call.headers.begin(), call.headers.end());

  // One request at a time per provider.
  std::lock_guard serial(provider_lock(req.provider));
  auto started = std::chrono::steady_clock::now();
  int status = 0;
  std::string error;
  for (int attempt = 0; attempt < retry_.attempts; ++attempt) {
    if (attempt > 0) sleeper_(retry_.initial_backoff * (1 << (attempt - 1)));
    limiter(req.provider).acquire();
    httplib::Client client(url.origin);
    client.set_connection_timeout(30);
    client.set_read_timeout(600);
    auto res = client.Post(url.path, headers, call.body, "application/json");
    if (!res) {
      status = 0;
      error = httplib::to_string(res.error());
      continue;
    }
    status = res->status;
    if (status >= 200 && status < 300) {
      ParsedResponse parsed = adapter->parse(res->body);
      CompletionResult r;
      r.text = std::move(parsed.text);
      r.input_tokens = parsed.input_tokens;
      r.output_tokens = parsed.output_tokens;
      r.cost = cost_of(req.provider, r.input_tokens, r.output_tokens);
      r.latency = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
      r.mode = Mode::Live;
      r.retries = attempt;
      return r;
    }
    error = res->body.substr(0, 500);
    if (!transient(status)) throw ProviderError(req.provider.name + ": HTTP " + std::to_string(status) + ": " + error, status, attempt + 1);
  }
  throw ProviderError(req.provider.name + ": giving up after " + std::to_string(retry_.attempts) + " attempts (" +
                          (status ? "HTTP " + std::to_string(status) : "transport error") + ": " + error + ")",
                      status, retry_.attempts);
}

void to_json(json& j, const CompletionResult& r) {
  j = json{{"input_tokens", r.input_tokens}, {"output_tokens", r.output_tokens}, {"cost", r.cost},
           {"latency_ms", r.latency.count()}, {"mode", to_string(r.mode)},       {"retries", r.retries}};
}

void from_json(const json& j, ProviderProfile& p) {
  p.name = j.value("name", p.name);
  p.adapter = j.at("adapter").get<std::string>();
  p.model = j.at("model").get<std::string>();
  p.context_window = j.at("context_window").get<long>();
  p.input_rate = j.at("input_rate").get<double>();
  p.output_rate = j.at("output_rate").get<double>();
  p.endpoint = j.value("endpoint", std::string{});
  p.auth_env = j.value("auth_env", std::string{});
  p.requests_per_minute = j.value("requests_per_minute", 0);
  if (p.context_window <= 0) throw GatewayError("profile " + p.name + ": context_window must be positive");
}

void to_json(json& j, const ProviderProfile& p) {
  j = json{{"name", p.name},
           {"adapter", p.adapter},
           {"model", p.model},
           {"context_window", p.context_window},
           {"input_rate", p.input_rate},
           {"output_rate", p.output_rate},
           {"endpoint", p.endpoint},
           {"auth_env", p.auth_env},
           {"requests_per_minute", p.requests_per_minute}};
}

}  // namespace capgen::gateway
