#include "capgen/pipeline/pipeline.hpp"

#include <atomic>
#include <ctime>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "capgen/rdf/turtle.hpp"

namespace capgen::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string> string_list(const json& j, const char* key) {
  std::vector<std::string> out;
  if (!j.contains(key)) return out;
  if (!j.at(key).is_array()) throw ConfigError(std::string("'") + key + "' must be an array");
  for (const auto& item : j.at(key)) out.push_back(item.get<std::string>());
  return out;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

rdf::Graph parse_file(const fs::path& path) {
  auto parsed = rdf::parse_turtle(prompt::read_file(path));
  if (!parsed.ok()) {
    const auto& issue = parsed.issues.front();
    throw prompt::CorpusError(path.string() + ":" + std::to_string(issue.line) + ": " + issue.message);
  }
  return std::move(*parsed.graph);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace

const gateway::ProviderProfile& StudyConfig::profile(const std::string& name) const {
  auto it = profiles.find(name);
  if (it == profiles.end()) throw ConfigError("no provider profile named '" + name + "'");
  return it->second;
}

StudyConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  StudyConfig c;
  c.source = path;
  fs::path base = path.parent_path();
  try {
    c.corpus = resolve(base, j.at("corpus").get<std::string>());
    c.fixtures = resolve(base, j.value("fixtures", std::string("fixtures")));
    c.out = resolve(base, j.value("out", std::string("out")));
    c.mode = gateway::parse_mode(j.value("mode", std::string("replay")));
    c.parallelism = j.value("parallelism", 4);
    c.providers = string_list(j, "providers");
    for (const auto& t : string_list(j, "techniques")) c.techniques.push_back(prompt::technique_name(t));
    if (c.techniques.empty()) c.techniques = prompt::kTechniques;
    c.capabilities = string_list(j, "capabilities");
    c.max_output_tokens = j.value("max_output_tokens", 4096);
    c.temperature = j.value("temperature", 0.0);
    if (j.contains("retry")) {
      c.retry.attempts = j["retry"].value("attempts", 3);
      c.retry.initial_backoff = std::chrono::milliseconds(j["retry"].value("initial_backoff_ms", 1000));
    }
    for (const auto& [name, value] : j.at("profiles").items()) {
      gateway::ProviderProfile p = value.get<gateway::ProviderProfile>();
      p.name = name;
      c.profiles.emplace(name, p);
    }
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  if (c.parallelism < 1) throw ConfigError("parallelism must be at least 1");
  if (c.max_output_tokens < 1) throw ConfigError("max_output_tokens must be positive");
  if (c.retry.attempts < 1) throw ConfigError("retry.attempts must be at least 1");
  if (c.providers.empty()) throw ConfigError("no providers selected");
  for (const auto& p : c.providers) c.profile(p);
  return c;
}

const rdf::Graph& Workbench::gold_for(const std::string& capability_id) const {
  auto it = gold.find(capability_id);
  if (it == gold.end()) throw prompt::CorpusError("no gold ontology for " + capability_id);
  return it->second;
}

Workbench load_workbench(const fs::path& corpus_root) {
  Workbench b;
  b.corpus = prompt::load_corpus(corpus_root);
  auto tbox = rdf::parse_turtle(b.corpus.tbox_text);
  if (!tbox.ok()) throw prompt::CorpusError(b.corpus.tbox_path.string() + ": " + tbox.issues.front().message);
  b.tbox = std::move(*tbox.graph);
  b.index = reasoning::index_tbox(b.tbox);
  b.shapes = shacl::load_shapes(parse_file(b.corpus.shapes_path));
  for (const auto& cap : b.corpus.capabilities) b.gold.emplace(cap.id, parse_file(cap.gold_path));
  return b;
}

Evaluation evaluate(const Workbench& bench, const std::string& capability_id, const std::string& ontology_text) {
  const rdf::Graph& gold = bench.gold_for(capability_id);
  Evaluation e{repair(ontology_text, bench.corpus.tbox_iri), {}, {}, {}, {}};
  e.violations = shacl::validate(bench.shapes, e.repaired.graph, bench.index);
  e.contradictions = reasoning::check_consistency(bench.index, e.repaired.graph);
  e.diff = diff_against_gold(e.repaired.graph, gold, e.violations);
  e.counts.syntax = static_cast<int>(e.repaired.log.added_prefixes.size());
  e.counts.contradiction = static_cast<int>(e.contradictions.size());
  e.counts.hallucination = shacl::classify(e.violations).hallucinated;
  e.counts.incomplete = static_cast<int>(e.repaired.log.added_imports.size()) + e.diff.incomplete();
  e.counts.triples = static_cast<int>(gold.size());
  return e;
}

std::string to_string(Stage stage) {
  switch (stage) {
    case Stage::None: return "none";
    case Stage::Gateway: return "gateway";
    case Stage::Extraction: return "extraction";
    case Stage::Repair: return "repair";
    case Stage::Evaluation: return "evaluation";
  }
  return "unknown";
}

std::string ExperimentRecord::key() const { return gateway::experiment_key(capability_id, technique, provider); }

ExperimentRecord run_experiment(const Workbench& bench, gateway::Gateway& gw, const StudyConfig& config,
                                const prompt::PromptInstance& prompt, const gateway::ProviderProfile& provider) {
  ExperimentRecord r;
  r.capability_id = prompt.capability_id;
  r.technique = prompt.technique;
  r.provider = provider.name;
  r.model = provider.model;
  r.mode = gw.mode();
  r.prompt = prompt;

  gateway::CompletionRequest req{provider, prompt.text, config.temperature, config.max_output_tokens, r.key()};
  try {
    r.completion = gw.complete(req);
  } catch (const gateway::GatewayError& e) {
    r.failed_stage = Stage::Gateway;
    r.failure = e.what();
    return r;
  }
  try {
    r.extraction = extract_ontology(r.completion->text);
  } catch (const ExtractionError& e) {
    r.failed_stage = Stage::Extraction;
    r.failure = e.what();
    return r;
  }
  try {
    r.evaluation = evaluate(bench, r.capability_id, r.extraction->ontology_text);
    r.repair_log = r.evaluation->repaired.log;
    scoring::relative_scores(r.evaluation->counts);
  } catch (const RepairFailure& e) {
    r.failed_stage = Stage::Repair;
    r.failure = e.what();
    r.residual_issues = e.issues;
    r.repair_log = e.log;
  } catch (const std::exception& e) {
    r.failed_stage = Stage::Evaluation;
    r.failure = e.what();
  }
  return r;
}

json counts_json(const ExperimentRecord& r) {
  json j{{"capability", r.capability_id},
         {"technique", r.technique},
         {"provider", r.provider},
         {"model", r.model},
         {"mode", gateway::to_string(r.mode)},
         {"status", r.ok() ? "ok" : "failed"},
         {"prompt_tokens", r.prompt.token_estimate}};
  if (r.completion) {
    j["input_tokens"] = r.completion->input_tokens;
    j["output_tokens"] = r.completion->output_tokens;
    j["cost"] = r.completion->cost;
  }
  if (!r.ok()) {
    j["failed_stage"] = to_string(r.failed_stage);
    j["failure"] = r.failure;
    if (r.failed_stage == Stage::Repair) {
      j["S"] = r.repair_log.added_prefixes.size() + r.residual_issues.size();
    }
    return j;
  }
  j["counts"] = r.evaluation->counts;
  j["scores"] = scoring::relative_scores(r.evaluation->counts);
  return j;
}

void write_artifacts(const ExperimentRecord& r, const fs::path& dir) {
  fs::create_directories(dir);
  write_text(dir / "prompt.txt", r.prompt.text);
  if (r.completion) {
    write_text(dir / "response.txt", r.completion->text);
    write_json(dir / "completion.json", *r.completion);
  }
  if (r.extraction) {
    write_text(dir / "extracted.ttl", r.extraction->ontology_text);
    write_json(dir / "extraction.json", json{{"fenced", r.extraction->fenced},
                                             {"leading_prose", r.extraction->leading_prose},
                                             {"trailing_prose", r.extraction->trailing_prose},
                                             {"extra_documents", r.extraction->extra_documents}});
  }
  if (r.extraction) write_json(dir / "repair.json", r.repair_log);
  if (!r.residual_issues.empty()) {
    json issues = json::array();
    for (const auto& i : r.residual_issues) {
      issues.push_back({{"category", rdf::to_string(i.category)},
                        {"line", i.line},
                        {"column", i.column},
                        {"message", i.message}});
    }
    write_json(dir / "syntax_issues.json", issues);
  }
  if (r.evaluation) {
    const auto& e = *r.evaluation;
    write_text(dir / "repaired.ttl", e.repaired.text);
    write_json(dir / "violations.json", e.violations);
    write_json(dir / "contradictions.json", e.contradictions);
    if (!e.contradictions.empty()) {
      write_text(dir / "contradictions.ttl", reasoning::witness_turtle(e.contradictions, e.repaired.graph));
    }
    write_json(dir / "gold_diff.json", e.diff);
  }
  write_json(dir / "counts.json", counts_json(r));
}

fs::path new_run_root(const fs::path& out) {
  std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%dT%H%M%SZ", &utc);
  fs::path root = out / "runs" / stamp;
  for (int n = 1; fs::exists(root); ++n) root = out / "runs" / (std::string(stamp) + "-" + std::to_string(n));
  fs::create_directories(root);
  return root;
}

StudyResult run_study(const StudyConfig& config, const Workbench& bench, gateway::Gateway& gw,
                      const fs::path& run_root) {
  struct Job {
    const gateway::ProviderProfile* provider;
    prompt::PromptInstance prompt;
  };
  std::vector<Job> jobs;
  auto matrix = prompt::build_matrix(bench.corpus, config.capabilities, config.techniques);
  for (const auto& name : config.providers) {
    for (const auto& p : matrix) jobs.push_back({&config.profile(name), p});
  }

  StudyResult result{run_root, std::vector<ExperimentRecord>(jobs.size())};
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        ExperimentRecord r = run_experiment(bench, gw, config, jobs[i].prompt, *jobs[i].provider);
        r.run_dir = run_root / r.provider / (r.capability_id + "-" + prompt::technique_key(r.technique));
        write_artifacts(r, r.run_dir);
        result.records[i] = std::move(r);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(config.parallelism), jobs.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return result;
}

}  // namespace capgen::pipeline
