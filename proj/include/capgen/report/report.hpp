#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "capgen/scoring/scoring.hpp"

namespace capgen::report {

class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One experiment as recorded in its counts.json.
struct Cell {
  std::string provider;
  std::string model;
  std::string capability;
  std::string technique;
  std::string mode;
  std::string status;  // "ok" or "failed"
  std::string failed_stage;
  std::string failure;
  std::optional<scoring::ErrorCounts> counts;
  double cost = 0;
  long input_tokens = 0;
  long output_tokens = 0;
  bool completed = false;  // the provider returned a response
  std::string run_dir;     // relative to the run root, e.g. "gpt/C1-zero"
};

Cell cell_from_json(const nlohmann::json& j, const std::string& run_dir);

// Reads every {provider}/{Cid}-{technique}/counts.json under a run root,
// ordered by provider, capability and technique.
std::vector<Cell> load_cells(const std::filesystem::path& run_root);

struct MeanRow {
  std::string provider;
  std::string technique;
  std::optional<scoring::Rational> mean_error;  // unset when no cell succeeded
  int cells = 0;
  int failed = 0;
};

struct CostRow {
  std::string provider;
  int prompts = 0;
  double total = 0;
  double mean_per_prompt = 0;
};

struct Report {
  std::vector<Cell> cells;
  std::vector<MeanRow> means;
  std::vector<CostRow> costs;
};

Report build_report(std::vector<Cell> cells);

// Two-decimal tables; byte-identical for identical cells.
std::string render_markdown(const Report& r);
// Unrounded per-cell values.
std::string render_csv(const Report& r);
// Cells, exact fractions and the given metadata.
nlohmann::json render_json(const Report& r, const nlohmann::json& metadata);

// SHA-256 over every file under root: sorted relative paths and contents.
std::string corpus_digest(const std::filesystem::path& root);

// Writes report.md, report.csv and report.json into the run root.
Report write_report(const std::filesystem::path& run_root, const nlohmann::json& metadata);

}  // namespace capgen::report
