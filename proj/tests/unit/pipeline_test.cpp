#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <regex>

#include "capgen/faults/faults.hpp"
#include "capgen/pipeline/pipeline.hpp"
#include "capgen/rdf/vocab.hpp"
#include "support/corpus.hpp"

using namespace capgen;
using namespace capgen::pipeline;
using capgen::testing::gold;
using capgen::testing::read_text;
using capgen::testing::source_path;
namespace fs = std::filesystem;

namespace {

const Workbench& bench() {
  static const Workbench b = load_workbench(source_path("corpus"));
  return b;
}

std::string counts_str(const scoring::ErrorCounts& c) {
  return std::to_string(c.syntax) + "," + std::to_string(c.contradiction) + "," + std::to_string(c.hallucination) +
         "," + std::to_string(c.incomplete) + "/" + std::to_string(c.triples);
}

const std::string kGoldC1 = read_text("corpus/capabilities/C1/gold.ttl");

std::string without_line(std::string text, const std::string& starts) {
  auto at = text.find(starts);
  return text.erase(at, text.find('\n', at) + 1 - at);
}

fs::path temp_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("capgen-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST(Extract, PrefersFencedBlockAndKeepsProse) {
  std::string response = "Here is the ontology:\n```turtle\n" + kGoldC1 + "```\nIt models parity.\n";
  auto r = extract_ontology(response);
  EXPECT_TRUE(r.fenced);
  EXPECT_EQ(r.ontology_text, kGoldC1);
  EXPECT_EQ(r.leading_prose, "Here is the ontology:\n```turtle\n");
  EXPECT_EQ(r.trailing_prose, "```\nIt models parity.\n");
  EXPECT_EQ(r.leading_prose + r.ontology_text + r.trailing_prose, response);
}

TEST(Extract, UnfencedRegionStopsBeforeTrailingProse) {
  std::string response = "Sure.\n\n" + kGoldC1 + "\nThis ontology models the parity check.\n";
  auto r = extract_ontology(response);
  EXPECT_FALSE(r.fenced);
  EXPECT_EQ(r.leading_prose, "Sure.\n\n");
  EXPECT_EQ(r.ontology_text, kGoldC1);
  EXPECT_EQ(r.leading_prose + r.ontology_text + r.trailing_prose, response);
}

TEST(Extract, LaterDocumentsAreExtra) {
  std::string second = "@prefix : <http://example.org/other#> .\n:x :y :z .\n";
  std::string response = kGoldC1 + "\nNow a second task:\n\n" + second;
  auto r = extract_ontology(response);
  EXPECT_EQ(r.ontology_text, kGoldC1);
  ASSERT_EQ(r.extra_documents.size(), 1u);
  EXPECT_EQ(r.extra_documents[0], second);
  EXPECT_EQ(r.trailing_prose, "\nNow a second task:\n\n");
}

TEST(Extract, AcceptsRepairableMissingPrefixes) {
  std::string text = without_line(kGoldC1, "@prefix cask:");
  auto r = extract_ontology("Answer:\n" + text + "Done.\n");
  EXPECT_EQ(r.ontology_text, text);
  EXPECT_TRUE(parses_after_prefix_repair(text));
  EXPECT_FALSE(parses_after_prefix_repair(without_line(kGoldC1, "@prefix : ")));
}

TEST(Extract, ProseOnlyIsAnError) {
  EXPECT_THROW(extract_ontology("I cannot help with that request.\n"), ExtractionError);
  EXPECT_THROW(extract_ontology(""), ExtractionError);
}

TEST(Repair, DeclaresEachMissingPrefixOnce) {
  std::string text = without_line(without_line(kGoldC1, "@prefix cask:"), "@prefix vdi3682:");
  auto r = repair(text, bench().corpus.tbox_iri);
  EXPECT_EQ(r.log.added_prefixes.size(), 2u);
  EXPECT_TRUE(r.log.added_imports.empty());
  EXPECT_EQ(r.graph, gold("C1"));
}

TEST(Repair, AddsMissingImport) {
  std::string text = std::regex_replace(kGoldC1, std::regex("    owl:imports <[^>]+> ;\n"), "");
  auto r = repair(text, bench().corpus.tbox_iri);
  EXPECT_EQ(r.log.added_imports, std::vector<std::string>{bench().corpus.tbox_iri});
  EXPECT_EQ(r.graph, gold("C1"));
}

TEST(Repair, OtherSyntaxIssuesFail) {
  std::string text = kGoldC1 + "\n:Broken a cask:Capability ;; ;\n";
  try {
    repair(text, bench().corpus.tbox_iri);
    FAIL() << "expected RepairFailure";
  } catch (const RepairFailure& e) {
    EXPECT_FALSE(e.issues.empty());
  }
}

TEST(Evaluate, GoldScoresZeroEverywhere) {
  for (const char* id : capgen::testing::kCapabilities) {
    auto text = read_text("corpus/capabilities/" + std::string(id) + "/gold.ttl");
    auto e = evaluate(bench(), id, text);
    EXPECT_EQ(counts_str(e.counts), "0,0,0,0/" + std::to_string(gold(id).size())) << id;
    EXPECT_TRUE(e.violations.empty()) << id;
    EXPECT_TRUE(e.contradictions.empty()) << id;
  }
}

TEST(Evaluate, RenamedNodesStillAlign) {
  for (const char* id : capgen::testing::kCapabilities) {
    auto text = read_text("corpus/capabilities/" + std::string(id) + "/gold.ttl");
    auto g = capgen::testing::parse_or_throw(text);
    std::string ns = g.prefixes().at("");
    std::string renamed = text;
    renamed.replace(renamed.find(ns), ns.size(), "http://example.org/generated#");
    auto e = evaluate(bench(), id, renamed);
    EXPECT_EQ(counts_str(e.counts), "0,0,0,0/" + std::to_string(g.size())) << id;
  }
}

TEST(Evaluate, MissingRequiredValueCountsOnce) {
  std::string text = std::regex_replace(kGoldC1, std::regex(" ;\n    vdi3682:hasOutput :IsEven \\."), " .");
  auto e = evaluate(bench(), "C1", text);
  EXPECT_EQ(e.diff.min_count_deficit, 1);
  EXPECT_EQ(e.counts.incomplete, 1);
}

TEST(Evaluate, WorkedExampleOfZeroShotParity) {
  std::mt19937_64 rng(7);
  faults::FaultPlan plan{0, 2, 5, 6, true};
  auto f = faults::inject(gold("C1"), bench().index, bench().shapes, plan, rng);
  auto e = evaluate(bench(), "C1", f.text);
  EXPECT_EQ(counts_str(e.counts), "0,2,5,7/33");
  EXPECT_EQ(counts_str(e.counts), counts_str(f.expected));
}

TEST(Evaluate, InjectedFaultsAreCountedExactly) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> k(0, 3);
  for (int trial = 0; trial < 14; ++trial) {
    std::string id = capgen::testing::kCapabilities[trial % 7];
    faults::FaultPlan plan{k(rng), k(rng), k(rng), k(rng), trial % 2 == 0};
    auto f = faults::inject(gold(id), bench().index, bench().shapes, plan, rng);
    auto e = evaluate(bench(), id, f.text);
    EXPECT_EQ(counts_str(e.counts), counts_str(f.expected)) << id << " trial " << trial << "\n" << f.text;
  }
}

TEST(Faults, InfeasiblePlanThrows) {
  std::mt19937_64 rng(1);
  faults::FaultPlan plan{0, 0, 0, 1000, false};
  EXPECT_THROW(faults::inject(gold("C1"), bench().index, bench().shapes, plan, rng), faults::FaultError);
}

TEST(Config, LoadsAndResolvesRelativePaths) {
  fs::path dir = temp_dir("config");
  std::ofstream(dir / "study.json") << R"({
    "corpus": "../corpus", "fixtures": "fx", "out": "out", "mode": "replay",
    "providers": ["gpt"], "techniques": ["zero", "few-shot"], "parallelism": 2,
    "retry": {"attempts": 5, "initial_backoff_ms": 10},
    "profiles": {"gpt": {"adapter": "openai", "model": "m", "context_window": 1000,
                         "input_rate": 0.01, "output_rate": 0.03}}})";
  auto c = load_config(dir / "study.json");
  EXPECT_EQ(c.corpus, (dir / "../corpus").lexically_normal());
  EXPECT_EQ(c.fixtures, dir / "fx");
  EXPECT_EQ(c.techniques, (std::vector<std::string>{"zero-shot", "few-shot"}));
  EXPECT_EQ(c.retry.attempts, 5);
  EXPECT_EQ(c.profile("gpt").name, "gpt");
  fs::remove_all(dir);
}

TEST(Config, RejectsUnknownProviderAndMissingKeys) {
  fs::path dir = temp_dir("badconfig");
  std::ofstream(dir / "a.json") << R"({"corpus": ".", "providers": ["x"], "profiles": {}})";
  std::ofstream(dir / "b.json") << R"({"providers": ["x"]})";
  std::ofstream(dir / "c.json") << "{not json";
  EXPECT_THROW(load_config(dir / "a.json"), ConfigError);
  EXPECT_THROW(load_config(dir / "b.json"), ConfigError);
  EXPECT_THROW(load_config(dir / "c.json"), ConfigError);
  EXPECT_THROW(load_config(dir / "missing.json"), ConfigError);
  fs::remove_all(dir);
}

TEST(Study, ReplayWritesArtifactsAndRecordsFailures) {
  fs::path dir = temp_dir("study");
  fs::create_directories(dir / "fixtures" / "gpt");
  std::ofstream(dir / "fixtures" / "gpt" / "C1-zero.txt") << "```turtle\n" << kGoldC1 << "```\n";
  std::ofstream(dir / "fixtures" / "gpt" / "C2-zero.txt") << "No ontology today.\n";

  StudyConfig c;
  c.corpus = source_path("corpus");
  c.fixtures = dir / "fixtures";
  c.out = dir / "out";
  c.providers = {"gpt"};
  c.techniques = {"zero-shot"};
  c.capabilities = {"C1", "C2", "C3"};
  c.parallelism = 3;
  gateway::ProviderProfile p{"gpt", "openai", "m", 128000, 0.01, 0.03, "", "", 0};
  c.profiles.emplace("gpt", p);
  gateway::Gateway gw(gateway::Mode::Replay, c.fixtures);

  auto first = run_study(c, bench(), gw, new_run_root(c.out));
  ASSERT_EQ(first.records.size(), 3u);
  EXPECT_EQ(first.records[0].capability_id, "C1");
  EXPECT_TRUE(first.records[0].ok());
  EXPECT_EQ(first.records[1].failed_stage, Stage::Extraction);
  EXPECT_EQ(first.records[2].failed_stage, Stage::Gateway);
  for (const char* f : {"prompt.txt", "response.txt", "extracted.ttl", "repaired.ttl", "violations.json",
                        "contradictions.json", "counts.json"}) {
    EXPECT_TRUE(fs::exists(first.records[0].run_dir / f)) << f;
  }
  EXPECT_EQ(first.records[0].run_dir, first.run_root / "gpt" / "C1-zero");

  auto second = run_study(c, bench(), gw, new_run_root(c.out));
  EXPECT_NE(first.run_root, second.run_root);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(read_text(fs::relative(first.records[i].run_dir / "counts.json", CAPGEN_SOURCE_DIR).string()),
              read_text(fs::relative(second.records[i].run_dir / "counts.json", CAPGEN_SOURCE_DIR).string()));
  }
  fs::remove_all(dir);
}
