#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "capgen/rdf/term.hpp"

namespace capgen::rdf {

// A set of triples plus the prefix map and base it was written with.
// Ordering of the triple set is total and deterministic, so iteration order
// is stable across runs.
class Graph {
 public:
  using TripleSet = std::set<Triple>;

  Graph() = default;

  bool insert(Triple t) { return triples_.insert(std::move(t)).second; }
  bool erase(const Triple& t) { return triples_.erase(t) > 0; }
  bool contains(const Triple& t) const { return triples_.count(t) > 0; }
  void merge(const Graph& other);

  const TripleSet& triples() const { return triples_; }
  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }

  std::map<std::string, std::string>& prefixes() { return prefixes_; }
  const std::map<std::string, std::string>& prefixes() const { return prefixes_; }
  const std::optional<std::string>& base() const { return base_; }
  void set_base(std::optional<std::string> base) { base_ = std::move(base); }

  // Objects of (subject, predicate, *), in triple order.
  std::vector<Term> objects(const Term& subject, const std::string& predicate) const;
  // Subjects of (*, predicate, object).
  std::vector<Term> subjects(const std::string& predicate, const Term& object) const;
  // All triples with the given subject.
  std::vector<Triple> about(const Term& subject) const;
  // Asserted rdf:type IRIs of a node.
  std::set<std::string> types(const Term& node) const;

  // Items of an RDF collection starting at head. Returns nullopt when the
  // structure is not a well-formed list.
  std::optional<std::vector<Term>> list_items(const Term& head) const;

  bool operator==(const Graph& other) const { return triples_ == other.triples_; }

 private:
  TripleSet triples_;
  std::map<std::string, std::string> prefixes_;
  std::optional<std::string> base_;
};

// Cardinality of the triple set; the denominator of every relative score.
inline std::size_t count_triples(const Graph& g) { return g.size(); }

}  // namespace capgen::rdf
