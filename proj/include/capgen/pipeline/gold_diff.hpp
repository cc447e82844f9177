#pragma once

#include <map>
#include <vector>

#include "json.hpp"

#include "capgen/rdf/graph.hpp"
#include "capgen/shacl/shacl.hpp"

namespace capgen::pipeline {

// Generated node -> gold node. Vocabulary IRIs are not listed; they always
// map to themselves.
using Alignment = std::map<rdf::Term, rdf::Term>;

// Exact IRI matches first, then a greedy pass over type sets and local-name
// similarity, then blank nodes by shared (predicate, neighbour) edges.
Alignment align(const rdf::Graph& generated, const rdf::Graph& gold);

struct GoldDiff {
  Alignment alignment;
  std::vector<rdf::Triple> missing;  // gold triples with no aligned counterpart
  int min_count_deficit = 0;         // sum of MIN_COUNT amounts
  // Missing gold triples beyond what MIN_COUNT already reports, summed over
  // (gold subject, predicate) groups.
  int uncovered_missing = 0;

  int incomplete() const { return min_count_deficit + uncovered_missing; }
};

GoldDiff diff_against_gold(const rdf::Graph& generated, const rdf::Graph& gold,
                           const std::vector<shacl::Violation>& violations);

void to_json(nlohmann::json& j, const GoldDiff& d);

}  // namespace capgen::pipeline
