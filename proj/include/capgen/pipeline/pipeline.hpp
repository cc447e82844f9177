#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "capgen/gateway/gateway.hpp"
#include "capgen/pipeline/extract.hpp"
#include "capgen/pipeline/gold_diff.hpp"
#include "capgen/pipeline/repair.hpp"
#include "capgen/prompt/corpus.hpp"
#include "capgen/reasoning/consistency.hpp"
#include "capgen/scoring/scoring.hpp"
#include "capgen/shacl/shacl.hpp"

namespace capgen::pipeline {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StudyConfig {
  std::filesystem::path source;  // the config file itself
  std::filesystem::path corpus;
  std::filesystem::path fixtures;
  std::filesystem::path out;
  gateway::Mode mode = gateway::Mode::Replay;
  int parallelism = 4;
  std::vector<std::string> providers;
  std::vector<std::string> techniques;    // long names
  std::vector<std::string> capabilities;  // empty selects every C-id
  int max_output_tokens = 4096;
  double temperature = 0;
  gateway::RetryPolicy retry;
  std::map<std::string, gateway::ProviderProfile> profiles;

  const gateway::ProviderProfile& profile(const std::string& name) const;
};

// Relative paths resolve against the config file's directory. Throws
// ConfigError on missing keys, unknown providers or techniques.
StudyConfig load_config(const std::filesystem::path& path);

// Read-only inputs shared by every experiment.
struct Workbench {
  prompt::Corpus corpus;
  rdf::Graph tbox;
  reasoning::TBoxIndex index;
  shacl::ShapeSet shapes;
  std::map<std::string, rdf::Graph> gold;  // by capability id

  const rdf::Graph& gold_for(const std::string& capability_id) const;
};

Workbench load_workbench(const std::filesystem::path& corpus_root);

struct Evaluation {
  RepairResult repaired;
  std::vector<shacl::Violation> violations;
  std::vector<reasoning::Contradiction> contradictions;
  GoldDiff diff;
  scoring::ErrorCounts counts;
};

// Repair, validation, consistency check and gold comparison of one extracted
// ontology. Throws RepairFailure when syntax issues remain after repair.
Evaluation evaluate(const Workbench& bench, const std::string& capability_id, const std::string& ontology_text);

enum class Stage { None, Gateway, Extraction, Repair, Evaluation };

std::string to_string(Stage stage);

struct ExperimentRecord {
  std::string capability_id;
  std::string technique;  // long name
  std::string provider;
  std::string model;
  gateway::Mode mode = gateway::Mode::Replay;
  prompt::PromptInstance prompt;
  std::optional<gateway::CompletionResult> completion;
  std::optional<ExtractionResult> extraction;
  std::optional<Evaluation> evaluation;
  RepairLog repair_log;
  std::vector<rdf::SyntaxIssue> residual_issues;  // set when repair failed
  Stage failed_stage = Stage::None;
  std::string failure;
  std::filesystem::path run_dir;

  bool ok() const { return failed_stage == Stage::None; }
  std::string key() const;
};

// Never throws for per-experiment problems; they end up in failed_stage.
ExperimentRecord run_experiment(const Workbench& bench, gateway::Gateway& gw, const StudyConfig& config,
                                const prompt::PromptInstance& prompt, const gateway::ProviderProfile& provider);

// counts.json content. Holds no timestamps or latencies, so replays are
// byte-identical.
nlohmann::json counts_json(const ExperimentRecord& record);

// Writes prompt.txt, response.txt, extracted.ttl, repaired.ttl,
// violations.json, contradictions.json, counts.json and companions.
void write_artifacts(const ExperimentRecord& record, const std::filesystem::path& dir);

// out/runs/{UTC timestamp}, with a numeric suffix when that already exists.
std::filesystem::path new_run_root(const std::filesystem::path& out);

struct StudyResult {
  std::filesystem::path run_root;
  std::vector<ExperimentRecord> records;  // provider, capability, technique order
};

// Runs every configured experiment on `parallelism` workers and writes each
// record's artifacts under run_root/{provider}/{Cid}-{technique key}/.
StudyResult run_study(const StudyConfig& config, const Workbench& bench, gateway::Gateway& gw,
                      const std::filesystem::path& run_root);

}  // namespace capgen::pipeline
