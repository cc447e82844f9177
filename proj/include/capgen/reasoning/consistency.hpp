#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "capgen/rdf/graph.hpp"

namespace capgen::reasoning {

// The slice of an OWL ontology the checker understands: named class
// hierarchy, disjointness, domains, ranges and functionality.
struct TBoxIndex {
  std::map<std::string, std::set<std::string>> superclasses;  // reflexive-transitive
  std::map<std::string, std::set<std::string>> superproperties;
  std::set<std::pair<std::string, std::string>> disjoint;  // declared pairs, stored both ways
  std::map<std::string, std::set<std::string>> domains;
  std::map<std::string, std::set<std::string>> ranges;  // class ranges only
  std::map<std::string, std::string> datatype_range;     // xsd:* or rdfs:Literal
  std::set<std::string> functional;
  std::set<std::string> object_properties;
  std::set<std::string> datatype_properties;
  std::set<std::string> classes;
  std::vector<std::string> ignored_constructs;

  const std::set<std::string>& supers(const std::string& cls) const;
  const std::set<std::string>& super_properties(const std::string& property) const;
  bool are_disjoint(const std::string& a, const std::string& b) const;
  bool expects_literal(const std::string& property) const;
  bool expects_resource(const std::string& property) const;
};

TBoxIndex index_tbox(const rdf::Graph& tbox);

enum class SupportSource { Asserted = 0, Domain = 1, Range = 2 };

struct TypeSupport {
  SupportSource source = SupportSource::Asserted;
  rdf::Triple triple;
  std::string via;  // the class named by the triple or its property's domain/range
};

// Inferred class memberships with one canonical support each.
using TypeMap = std::map<rdf::Term, std::map<std::string, TypeSupport>>;

TypeMap type_supports(const TBoxIndex& tbox, const rdf::Graph& abox);

// The ABox plus every rdf:type triple implied by domains, ranges and the
// class hierarchy. Idempotent.
rdf::Graph infer_types(const rdf::Graph& abox, const TBoxIndex& tbox);

enum class ContradictionKind { DisjointTypes, RangeClash, DatatypeClash, FunctionalClash };

std::string to_string(ContradictionKind kind);

struct Contradiction {
  ContradictionKind kind = ContradictionKind::DisjointTypes;
  std::vector<rdf::Triple> witness;  // sorted, minimal
  std::string explanation;

  bool operator==(const Contradiction& o) const { return kind == o.kind && witness == o.witness; }
};

// Every independent contradiction, each with a minimal witness set.
// Results are deduplicated by witness and sorted.
std::vector<Contradiction> check_consistency(const TBoxIndex& tbox, const rdf::Graph& abox);

void to_json(nlohmann::json& j, const Contradiction& c);

// Witness triples of all contradictions as one Turtle fragment, for manual
// inspection.
std::string witness_turtle(const std::vector<Contradiction>& contradictions, const rdf::Graph& abox);

}  // namespace capgen::reasoning
