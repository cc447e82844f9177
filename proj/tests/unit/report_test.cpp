#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "capgen/report/report.hpp"

namespace fs = std::filesystem;
using namespace capgen;
using nlohmann::json;

namespace {

json counts_json(const std::string& provider, const std::string& cap, const std::string& technique,
                 std::optional<scoring::ErrorCounts> counts, double cost) {
  json j{{"provider", provider}, {"model", provider + "-model"}, {"capability", cap}, {"technique", technique},
         {"mode", "replay"},     {"cost", cost},                  {"input_tokens", 100}, {"output_tokens", 10}};
  if (counts) {
    j["status"] = "ok";
    j["counts"] = {{"S", counts->syntax},
                   {"C", counts->contradiction},
                   {"H", counts->hallucination},
                   {"I", counts->incomplete},
                   {"triples", counts->triples}};
  } else {
    j["status"] = "failed";
    j["failed_stage"] = "extraction";
    j["failure"] = "no ontology found";
  }
  return j;
}

class RunRoot : public ::testing::Test {
 protected:
  void SetUp() override {
    root = fs::temp_directory_path() / ("capgen-report-" + std::to_string(::getpid()));
    fs::remove_all(root);
    put("gpt/C2-zero", counts_json("gpt", "C2", "zero-shot", scoring::ErrorCounts{0, 9, 8, 16, 42}, 0.3));
    put("gpt/C1-zero", counts_json("gpt", "C1", "zero-shot", scoring::ErrorCounts{0, 2, 5, 7, 33}, 0.1));
    put("gpt/C3-zero", counts_json("gpt", "C3", "zero-shot", std::nullopt, 0.2));
  }
  void TearDown() override { fs::remove_all(root); }

  void put(const std::string& dir, const json& j) {
    fs::create_directories(root / dir);
    std::ofstream(root / dir / "counts.json") << j.dump(2);
  }

  fs::path root;
};

}  // namespace

TEST_F(RunRoot, LoadsCellsInCapabilityOrder) {
  auto cells = report::load_cells(root);
  ASSERT_EQ(cells.size(), 3u);
  EXPECT_EQ(cells[0].capability, "C1");
  EXPECT_EQ(cells[0].run_dir, "gpt/C1-zero");
  EXPECT_EQ(cells[2].status, "failed");
  EXPECT_FALSE(cells[2].counts.has_value());
}

TEST_F(RunRoot, MeanSkipsFailedCells) {
  auto r = report::build_report(report::load_cells(root));
  ASSERT_EQ(r.means.size(), 1u);
  // (14/33 + 33/42) / 2
  EXPECT_EQ(r.means[0].mean_error, scoring::Rational(559, 924));
  EXPECT_EQ(r.means[0].cells, 3);
  EXPECT_EQ(r.means[0].failed, 1);
}

TEST_F(RunRoot, CostCoversCompletedPrompts) {
  auto r = report::build_report(report::load_cells(root));
  ASSERT_EQ(r.costs.size(), 1u);
  EXPECT_EQ(r.costs[0].prompts, 3);
  EXPECT_NEAR(r.costs[0].total, 0.6, 1e-12);
  EXPECT_NEAR(r.costs[0].mean_per_prompt, 0.2, 1e-12);
}

TEST_F(RunRoot, MarkdownListsScoresAndFailures) {
  auto md = report::render_markdown(report::build_report(report::load_cells(root)));
  EXPECT_NE(md.find("| C1 | zero-shot | 33 | 0.00 | 0.06 | 0.15 | 0.21 | 0.42 |"), std::string::npos) << md;
  EXPECT_NE(md.find("Failed experiments"), std::string::npos);
  EXPECT_NE(md.find("no ontology found"), std::string::npos);
  EXPECT_EQ(md, report::render_markdown(report::build_report(report::load_cells(root))));
}

TEST_F(RunRoot, CsvHasOneRowPerCell) {
  auto csv = report::render_csv(report::build_report(report::load_cells(root)));
  std::istringstream in(csv);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST_F(RunRoot, WritesAllFormats) {
  report::write_report(root, json{{"mode", "replay"}});
  EXPECT_TRUE(fs::exists(root / "report.md"));
  EXPECT_TRUE(fs::exists(root / "report.csv"));
  auto j = json::parse(std::ifstream(root / "report.json"));
  EXPECT_EQ(j.at("metadata").at("mode"), "replay");
  EXPECT_EQ(j.at("cells").size(), 3u);
}

TEST(CorpusDigest, MatchesKnownSha256) {
  fs::path dir = fs::temp_directory_path() / ("capgen-digest-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir / "b");
  std::ofstream(dir / "a.txt") << "abc";
  std::ofstream(dir / "b" / "c.txt") << "";
  // sha256 of "a.txt\0abcb/c.txt\0"
  EXPECT_EQ(report::corpus_digest(dir), "3ebc20479ccf9d2c5e4aab0360d48c46485e0e9cdec1ed23633d0174214cb2ad");
  std::ofstream(dir / "a.txt") << "abd";
  EXPECT_NE(report::corpus_digest(dir), "3ebc20479ccf9d2c5e4aab0360d48c46485e0e9cdec1ed23633d0174214cb2ad");
  fs::remove_all(dir);
}
