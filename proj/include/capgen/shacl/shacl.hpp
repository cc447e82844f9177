#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "capgen/rdf/graph.hpp"
#include "capgen/reasoning/consistency.hpp"

namespace capgen::shacl {

// Core SHACL subset: sh:targetClass node shapes with sh:property
// constraints on predicate paths, plus sh:closed.
struct PropertyConstraint {
  std::string path;
  std::optional<int> min_count;
  std::optional<int> max_count;
  std::optional<std::string> cls;
  std::optional<std::string> datatype;
  std::optional<std::string> node_kind;
  std::string message;
};

struct NodeShape {
  std::string iri;
  std::vector<std::string> target_classes;
  std::vector<PropertyConstraint> properties;
  bool closed = false;
  std::vector<std::string> ignored_properties;
  std::string message;
};

struct ShapeSet {
  std::vector<NodeShape> shapes;
  std::vector<std::string> warnings;
};

class ShapeLoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ShapeSet load_shapes(const rdf::Graph& shapes_graph);

enum class ViolationKind { MinCount, MaxCount, Class, Datatype, NodeKind, Closed };

std::string to_string(ViolationKind kind);

struct Violation {
  rdf::Term focus;
  std::string shape;
  ViolationKind kind = ViolationKind::MinCount;
  std::string path;
  std::optional<rdf::Term> value;
  std::string message;
  // MIN_COUNT: missing values. MAX_COUNT: surplus values. Otherwise 1.
  int amount = 1;
  // Data triples the violation is about; for MAX_COUNT all values on the path.
  std::vector<rdf::Triple> triples;
};

// Validates `data` against the shapes. Targets and sh:class are resolved on
// the data graph with types inferred from `tbox`.
std::vector<Violation> validate(const ShapeSet& shapes, const rdf::Graph& data, const reasoning::TBoxIndex& tbox);

struct Classification {
  int hallucinated = 0;  // distinct offending data triples
  int incomplete = 0;    // missing required values
};

Classification classify(const std::vector<Violation>& violations);

void to_json(nlohmann::json& j, const Violation& v);

}  // namespace capgen::shacl
