#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "capgen/pipeline/pipeline.hpp"
#include "capgen/report/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace capgen;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct Options {
  std::string config = "config/study.json";
  std::string mode;
  std::vector<std::string> providers;
  std::vector<std::string> techniques;
  std::vector<std::string> capabilities;
  std::string out;
  std::string format = "text";
  int parallelism = 0;
  std::string file;
  std::string capability;
  std::string counts;
  std::string run_dir;
};

// Command-line selections override the config file.
pipeline::StudyConfig effective_config(const Options& o) {
  auto c = pipeline::load_config(o.config);
  if (!o.mode.empty()) c.mode = gateway::parse_mode(o.mode);
  if (!o.providers.empty()) {
    c.providers = o.providers;
    for (const auto& p : c.providers) c.profile(p);
  }
  if (!o.techniques.empty()) {
    c.techniques.clear();
    for (const auto& t : o.techniques) c.techniques.push_back(prompt::technique_name(t));
  }
  if (!o.capabilities.empty()) c.capabilities = o.capabilities;
  if (!o.out.empty()) c.out = o.out;
  if (o.parallelism > 0) c.parallelism = o.parallelism;
  return c;
}

std::string utc_now() {
  std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

void print_counts(const scoring::ErrorCounts& c, const std::string& format) {
  auto s = scoring::relative_scores(c);
  if (format == "json") {
    std::cout << json{{"counts", c}, {"scores", s}}.dump(2) << "\n";
    return;
  }
  std::cout << "triples " << c.triples << "\n"
            << "S " << c.syntax << " " << s.syntax.display() << "\n"
            << "C " << c.contradiction << " " << s.contradiction.display() << "\n"
            << "H " << c.hallucination << " " << s.hallucination.display() << "\n"
            << "I " << c.incomplete << " " << s.incomplete.display() << "\n"
            << "Sigma " << s.sum.display() << "\n";
}

int gen_prompts(const Options& o) {
  auto c = effective_config(o);
  auto corpus = prompt::load_corpus(c.corpus);
  auto matrix = prompt::build_matrix(corpus, c.capabilities, c.techniques);
  fs::path dir = o.out.empty() ? c.out / "prompts" : fs::path(o.out);
  fs::create_directories(dir);
  json index = json::array();
  for (const auto& p : matrix) {
    std::string name = p.capability_id + "-" + prompt::technique_key(p.technique) + ".txt";
    std::ofstream(dir / name, std::ios::binary) << p.text;
    index.push_back({{"capability", p.capability_id},
                     {"technique", p.technique},
                     {"file", name},
                     {"token_estimate", p.token_estimate},
                     {"example_blocks", prompt::count_example_blocks(p.text)}});
    if (o.format != "json") {
      std::cout << p.capability_id << " " << std::left << std::setw(10) << p.technique << " " << p.token_estimate
                << " tokens  " << (dir / name).string() << "\n";
    }
  }
  if (o.format == "json") std::cout << index.dump(2) << "\n";
  return kOk;
}

int run(const Options& o, std::optional<gateway::Mode> forced) {
  auto c = effective_config(o);
  if (forced) c.mode = *forced;
  if (c.mode == gateway::Mode::Live) {
    for (const auto& name : c.providers) {
      const auto& p = c.profile(name);
      const char* key = std::getenv(p.auth_env.c_str());
      if (p.auth_env.empty() || key == nullptr || *key == '\0') {
        std::cerr << "error: live mode needs the environment variable " << p.auth_env << " for provider " << name
                  << "\n";
        return kUsage;
      }
    }
  }
  auto bench = pipeline::load_workbench(c.corpus);
  gateway::Gateway gw(c.mode, c.fixtures, c.retry);
  fs::path root = pipeline::new_run_root(c.out);
  auto result = pipeline::run_study(c, bench, gw, root);

  json models = json::object();
  for (const auto& name : c.providers) models[name] = c.profile(name).model;
  json metadata{{"created", utc_now()},
                {"mode", gateway::to_string(c.mode)},
                {"config", fs::absolute(c.source).lexically_normal().string()},
                {"corpus_sha256", report::corpus_digest(c.corpus)},
                {"models", models},
                {"parallelism", c.parallelism},
                {"max_output_tokens", c.max_output_tokens},
                {"temperature", c.temperature}};
  auto r = report::write_report(root, metadata);

  int failed = 0;
  for (const auto& rec : result.records) {
    if (!rec.ok()) {
      ++failed;
      std::cerr << rec.key() << ": " << pipeline::to_string(rec.failed_stage) << ": " << rec.failure << "\n";
    }
  }
  for (const auto& m : r.means) {
    std::cout << m.provider << " " << std::left << std::setw(10) << m.technique << " mean error "
              << (m.mean_error ? m.mean_error->display() : "n/a") << "\n";
  }
  for (const auto& cost : r.costs) {
    std::cout << cost.provider << " cost total " << std::fixed << std::setprecision(4) << cost.total
              << " mean per prompt " << cost.mean_per_prompt << "\n";
  }
  std::cout << "run directory " << root.string() << "\n";
  return failed == 0 ? kOk : kFailed;
}

int validate(const Options& o) {
  auto c = pipeline::load_config(o.config);
  auto bench = pipeline::load_workbench(c.corpus);
  std::ifstream in(o.file, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read " << o.file << "\n";
    return kUsage;
  }
  std::ostringstream text;
  text << in.rdbuf();
  pipeline::ExtractionResult extracted;
  try {
    extracted = pipeline::extract_ontology(text.str());
  } catch (const pipeline::ExtractionError& e) {
    std::cerr << "extraction failed: " << e.what() << "\n";
    return kFailed;
  }
  try {
    auto e = pipeline::evaluate(bench, o.capability, extracted.ontology_text);
    if (o.format == "json") {
      std::cout << json{{"counts", e.counts},
                        {"scores", scoring::relative_scores(e.counts)},
                        {"repair", e.repaired.log},
                        {"violations", e.violations},
                        {"contradictions", e.contradictions},
                        {"gold_diff", e.diff}}
                       .dump(2)
                << "\n";
      return kOk;
    }
    for (const auto& line : e.repaired.log.added_prefixes) std::cout << "repair: " << line << "\n";
    for (const auto& iri : e.repaired.log.added_imports) std::cout << "repair: owl:imports <" << iri << ">\n";
    for (const auto& v : e.violations) {
      std::cout << "violation: " << shacl::to_string(v.kind) << " " << v.focus.to_string() << " " << v.path << " "
                << v.message << "\n";
    }
    for (const auto& ct : e.contradictions) {
      std::cout << "contradiction: " << reasoning::to_string(ct.kind) << " " << ct.explanation << "\n";
    }
    for (const auto& t : e.diff.missing) std::cout << "missing: " << t.to_string() << "\n";
    print_counts(e.counts, o.format);
    return kOk;
  } catch (const pipeline::RepairFailure& e) {
    std::cerr << "repair failed: " << e.what() << "\n";
    for (const auto& i : e.issues) {
      std::cerr << "  " << i.line << ":" << i.column << " " << rdf::to_string(i.category) << " " << i.message << "\n";
    }
    return kFailed;
  }
}

int score(const Options& o) {
  std::ifstream in(o.counts);
  if (!in) {
    std::cerr << "error: cannot read " << o.counts << "\n";
    return kUsage;
  }
  json j = json::parse(in);
  if (j.contains("counts")) j = j["counts"];
  if (j.is_null() || !j.contains("S")) {
    std::cerr << "error: " << o.counts << " holds no counts (failed experiment?)\n";
    return kFailed;
  }
  print_counts(j.get<scoring::ErrorCounts>(), o.format);
  return kOk;
}

int make_report(const Options& o) {
  fs::path root(o.run_dir);
  json metadata = json::object();
  if (fs::exists(root / "report.json")) {
    std::ifstream in(root / "report.json");
    metadata = json::parse(in).value("metadata", json::object());
  }
  auto r = report::write_report(root, metadata);
  if (o.format == "json") {
    std::cout << report::render_json(r, metadata).dump(2) << "\n";
  } else if (o.format == "csv") {
    std::cout << report::render_csv(r);
  } else {
    std::cout << report::render_markdown(r);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate capability ontologies with language models and score them against gold ontologies."};
  app.require_subcommand(1);
  Options o;
  auto add_selection = [&](CLI::App* cmd) {
    cmd->add_option("--config", o.config, "Study config JSON")->capture_default_str();
    cmd->add_option("--providers", o.providers, "Provider profiles to use")->delimiter(',');
    cmd->add_option("--techniques", o.techniques, "zero-shot, one-shot, few-shot")->delimiter(',');
    cmd->add_option("--capabilities", o.capabilities, "Capability ids, e.g. C1,C4")->delimiter(',');
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  };

  auto* gen = app.add_subcommand("gen-prompts", "Render the prompt matrix");
  add_selection(gen);
  auto* run_cmd = app.add_subcommand("run", "Run the study in the configured mode");
  add_selection(run_cmd);
  run_cmd->add_option("--mode", o.mode, "live or replay")->check(CLI::IsMember({"live", "replay"}));
  run_cmd->add_option("--parallelism", o.parallelism, "Worker count")->check(CLI::PositiveNumber);
  auto* replay_cmd = app.add_subcommand("replay", "Run the study from stored responses");
  add_selection(replay_cmd);
  replay_cmd->add_option("--parallelism", o.parallelism, "Worker count")->check(CLI::PositiveNumber);
  auto* validate_cmd = app.add_subcommand("validate", "Score one ontology file against a capability's gold");
  validate_cmd->add_option("file", o.file, "Turtle file or raw model response")->required();
  validate_cmd->add_option("capability", o.capability, "Capability id")->required();
  validate_cmd->add_option("--config", o.config, "Study config JSON")->capture_default_str();
  validate_cmd->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  auto* score_cmd = app.add_subcommand("score", "Relative scores of a counts.json");
  score_cmd->add_option("counts", o.counts, "counts.json")->required();
  score_cmd->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  auto* report_cmd = app.add_subcommand("report", "Rebuild the report of a run directory");
  report_cmd->add_option("run-dir", o.run_dir, "Run directory")->required();
  report_cmd->add_option("--format", o.format, "text, csv or json")->check(CLI::IsMember({"text", "csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) return gen_prompts(o);
    if (*run_cmd) return run(o, std::nullopt);
    if (*replay_cmd) return run(o, gateway::Mode::Replay);
    if (*validate_cmd) return validate(o);
    if (*score_cmd) return score(o);
    if (*report_cmd) return make_report(o);
  } catch (const pipeline::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const prompt::TemplateError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const gateway::GatewayError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}
