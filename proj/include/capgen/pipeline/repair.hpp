#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "capgen/rdf/graph.hpp"
#include "capgen/rdf/turtle.hpp"

namespace capgen::pipeline {

// Namespaces the repair stage may declare on the model's behalf.
const std::map<std::string, std::string>& repair_prefix_table();

struct RepairLog {
  std::vector<std::string> added_prefixes;  // "@prefix cask: <...> ." lines
  std::vector<std::string> added_imports;   // imported IRIs
  std::vector<std::string> other_edits;     // always empty in automated mode

  bool empty() const { return added_prefixes.empty() && added_imports.empty() && other_edits.empty(); }
};

struct RepairResult {
  rdf::Graph graph;
  std::string text;  // repaired document
  RepairLog log;
};

class RepairFailure : public std::runtime_error {
 public:
  RepairFailure(const std::string& message, std::vector<rdf::SyntaxIssue> issues, RepairLog log)
      : std::runtime_error(message), issues(std::move(issues)), log(std::move(log)) {}
  std::vector<rdf::SyntaxIssue> issues;
  RepairLog log;
};

// Declares missing well-known prefixes, then adds owl:imports of the TBox
// when absent. Any other syntax issue is a RepairFailure.
RepairResult repair(const std::string& ontology_text, const std::string& tbox_iri);

void to_json(nlohmann::json& j, const RepairLog& log);

}  // namespace capgen::pipeline
