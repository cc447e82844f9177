#include "capgen/rdf/graph.hpp"

#include "capgen/rdf/vocab.hpp"

namespace capgen::rdf {

void Graph::merge(const Graph& other) {
  triples_.insert(other.triples_.begin(), other.triples_.end());
  for (const auto& [label, ns] : other.prefixes_) {
    prefixes_.emplace(label, ns);
  }
}

std::vector<Term> Graph::objects(const Term& subject, const std::string& predicate) const {
  std::vector<Term> out;
  // Triples are ordered subject-first, so the subject's block is contiguous.
  auto it = triples_.lower_bound(Triple{subject, Term::iri(""), Term{}});
  for (; it != triples_.end() && it->subject == subject; ++it) {
    if (it->predicate.value == predicate) out.push_back(it->object);
  }
  return out;
}

std::vector<Term> Graph::subjects(const std::string& predicate, const Term& object) const {
  std::vector<Term> out;
  for (const auto& t : triples_) {
    if (t.predicate.value == predicate && t.object == object) out.push_back(t.subject);
  }
  return out;
}

std::vector<Triple> Graph::about(const Term& subject) const {
  std::vector<Triple> out;
  auto it = triples_.lower_bound(Triple{subject, Term::iri(""), Term{}});
  for (; it != triples_.end() && it->subject == subject; ++it) out.push_back(*it);
  return out;
}

std::set<std::string> Graph::types(const Term& node) const {
  std::set<std::string> out;
  for (const auto& o : objects(node, vocab::kType)) {
    if (o.is_iri()) out.insert(o.value);
  }
  return out;
}

std::optional<std::vector<Term>> Graph::list_items(const Term& head) const {
  std::vector<Term> items;
  std::set<Term> seen;
  Term cur = head;
  while (!(cur.is_iri() && cur.value == vocab::kNil)) {
    if (!seen.insert(cur).second) return std::nullopt;
    auto first = objects(cur, vocab::kFirst);
    auto rest = objects(cur, vocab::kRest);
    if (first.size() != 1 || rest.size() != 1) return std::nullopt;
    items.push_back(first.front());
    cur = rest.front();
  }
  return items;
}

}  // namespace capgen::rdf
