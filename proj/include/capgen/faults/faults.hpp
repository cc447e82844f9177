#pragma once

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "capgen/rdf/graph.hpp"
#include "capgen/reasoning/consistency.hpp"
#include "capgen/scoring/scoring.hpp"
#include "capgen/shacl/shacl.hpp"

namespace capgen::faults {

// How many faults of each kind to plant in a gold ontology.
struct FaultPlan {
  int removed_prefixes = 0;  // declarations of used well-known prefixes
  int disjoint_types = 0;    // extra rdf:type with a class disjoint to the node's type
  int extraneous = 0;        // triples outside the closed shapes
  int deletions = 0;         // gold triples removed
  bool drop_import = false;  // remove owl:imports of the TBox
};

struct FaultedOntology {
  std::string text;   // Turtle, possibly with undeclared prefixes
  rdf::Graph graph;   // the faulted graph
  scoring::ErrorCounts expected;
  std::vector<std::string> removed_prefixes;
  std::vector<rdf::Triple> disjoint_types;
  std::vector<rdf::Triple> extraneous;
  std::vector<rdf::Triple> deleted;
};

class FaultError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Plants the planned faults. Each fault is chosen so that it produces exactly
// one error of its kind: disjoint types go on distinct nodes whose classes all
// follow from one asserted type, extraneous triples use non-functional,
// domain-compatible predicates with fresh objects, and deletions never touch
// the imports or the type triples of nodes carrying other faults. Throws
// FaultError when the gold ontology cannot host the plan.
FaultedOntology inject(const rdf::Graph& gold, const reasoning::TBoxIndex& tbox, const shacl::ShapeSet& shapes,
                       const FaultPlan& plan, std::mt19937_64& rng);

}  // namespace capgen::faults
