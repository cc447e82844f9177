#include "capgen/faults/faults.hpp"

#include <algorithm>
#include <regex>
#include <set>
#include <sstream>

#include "capgen/pipeline/repair.hpp"
#include "capgen/rdf/turtle.hpp"
#include "capgen/rdf/vocab.hpp"

namespace capgen::faults {

namespace vocab = capgen::vocab;
using rdf::Term;
using rdf::Triple;

namespace {

bool in_domain_namespace(const std::string& iri) {
  return iri.rfind(vocab::kCask, 0) == 0 || iri.rfind(vocab::kVdi3682, 0) == 0;
}

// The single non-NamedIndividual asserted type of a node, if there is one.
std::optional<std::string> sole_type(const rdf::Graph& g, const Term& node) {
  auto types = g.types(node);
  types.erase(vocab::owl("NamedIndividual"));
  if (types.size() != 1 || !in_domain_namespace(*types.begin())) return std::nullopt;
  return *types.begin();
}

std::set<std::string> target_classes(const shacl::ShapeSet& shapes) {
  std::set<std::string> out;
  for (const auto& s : shapes.shapes) out.insert(s.target_classes.begin(), s.target_classes.end());
  return out;
}

bool hits(const std::set<std::string>& classes, const std::set<std::string>& targets) {
  return std::any_of(classes.begin(), classes.end(), [&](const auto& c) { return targets.count(c) > 0; });
}

// Every class the node gets from domains and ranges is implied by its type.
bool typing_follows_from(const rdf::Graph& g, const reasoning::TBoxIndex& tbox, const Term& node,
                         const std::string& type) {
  const auto& supers = tbox.supers(type);
  auto covered = [&](const std::map<std::string, std::set<std::string>>& by_property, const std::string& p) {
    for (const auto& prop : tbox.super_properties(p)) {
      auto it = by_property.find(prop);
      if (it == by_property.end()) continue;
      for (const auto& c : it->second) {
        if (!supers.count(c)) return false;
      }
    }
    return true;
  };
  for (const auto& t : g.triples()) {
    if (t.subject == node && !covered(tbox.domains, t.predicate.value)) return false;
    if (t.object == node && !covered(tbox.ranges, t.predicate.value)) return false;
  }
  return true;
}

bool any_disjoint(const reasoning::TBoxIndex& tbox, const std::set<std::string>& a, const std::set<std::string>& b) {
  for (const auto& x : a) {
    for (const auto& y : b) {
      if (tbox.are_disjoint(x, y)) return true;
    }
  }
  return false;
}

// Predicates a closed shape on `type` does not allow.
std::set<std::string> allowed_paths(const shacl::ShapeSet& shapes, const std::set<std::string>& classes) {
  std::set<std::string> out;
  for (const auto& s : shapes.shapes) {
    if (!s.closed) continue;
    bool targeted = std::any_of(s.target_classes.begin(), s.target_classes.end(),
                                [&](const auto& c) { return classes.count(c) > 0; });
    if (!targeted) continue;
    for (const auto& p : s.properties) out.insert(p.path);
    out.insert(s.ignored_properties.begin(), s.ignored_properties.end());
  }
  return out;
}

struct ExtraPredicate {
  std::string iri;
  std::optional<std::string> range;  // class of the fresh object; nullopt for a literal
};

std::vector<ExtraPredicate> extra_predicates(const reasoning::TBoxIndex& tbox, const shacl::ShapeSet& shapes,
                                             const std::string& type, const std::set<std::string>& targets) {
  const auto& supers = tbox.supers(type);
  auto allowed = allowed_paths(shapes, supers);
  std::vector<ExtraPredicate> out{{vocab::rdfs("comment"), std::nullopt}, {vocab::rdfs("label"), std::nullopt}};
  std::set<std::string> properties(tbox.object_properties.begin(), tbox.object_properties.end());
  properties.insert(tbox.datatype_properties.begin(), tbox.datatype_properties.end());
  for (const auto& p : properties) {
    bool blocked = false;
    std::set<std::string> domain, range;
    for (const auto& sp : tbox.super_properties(p)) {
      if (allowed.count(sp) || tbox.functional.count(sp)) blocked = true;
      if (auto it = tbox.domains.find(sp); it != tbox.domains.end()) domain.insert(it->second.begin(), it->second.end());
      if (auto it = tbox.ranges.find(sp); it != tbox.ranges.end()) range.insert(it->second.begin(), it->second.end());
    }
    if (blocked) continue;
    if (!std::all_of(domain.begin(), domain.end(), [&](const auto& c) { return supers.count(c) > 0; })) continue;
    if (tbox.expects_literal(p)) {
      auto dt = tbox.datatype_range.find(p);
      if (dt != tbox.datatype_range.end() && dt->second != vocab::xsd("string") &&
          dt->second != vocab::rdfs("Literal")) {
        continue;
      }
      out.push_back({p, std::nullopt});
      continue;
    }
    if (range.size() != 1) continue;
    const std::string& r = *range.begin();
    if (hits(tbox.supers(r), targets)) continue;
    out.push_back({p, r});
  }
  return out;
}

template <typename T>
std::vector<T> sample(std::vector<T> pool, std::size_t k, std::mt19937_64& rng) {
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(std::min(k, pool.size()));
  return pool;
}

std::string fresh_namespace(const rdf::Graph& g) {
  auto it = g.prefixes().find("");
  if (it != g.prefixes().end()) return it->second;
  return "http://example.org/faults#";
}

std::vector<std::string> used_table_labels(const std::string& body, const std::map<std::string, std::string>& prefixes) {
  std::vector<std::string> out;
  for (const auto& [label, ns] : pipeline::repair_prefix_table()) {
    auto declared = prefixes.find(label);
    if (declared == prefixes.end() || declared->second != ns) continue;
    std::regex use("(^|[\\s;,(\\[])" + label + ":");
    if (std::regex_search(body, use)) out.push_back(label);
  }
  return out;
}

}  // namespace

FaultedOntology inject(const rdf::Graph& gold, const reasoning::TBoxIndex& tbox, const shacl::ShapeSet& shapes,
                       const FaultPlan& plan, std::mt19937_64& rng) {
  FaultedOntology f;
  rdf::Graph g = gold;
  const auto targets = target_classes(shapes);
  std::set<Term> protected_nodes;

  std::vector<Term> typed;
  for (const auto& t : gold.triples()) {
    if (t.predicate.value == vocab::kType && (typed.empty() || typed.back() != t.subject)) {
      if (std::find(typed.begin(), typed.end(), t.subject) == typed.end()) typed.push_back(t.subject);
    }
  }

  // Disjoint types.
  std::vector<std::string> top_level;
  for (const auto& c : tbox.classes) {
    if (!in_domain_namespace(c) || hits(tbox.supers(c), targets)) continue;
    bool has_disjoint = std::any_of(tbox.disjoint.begin(), tbox.disjoint.end(),
                                    [&](const auto& pair) { return pair.first == c; });
    if (has_disjoint && tbox.supers(c).size() == 1) top_level.push_back(c);
  }
  std::vector<std::pair<Term, std::string>> disjoint_hosts;
  for (const auto& node : typed) {
    auto type = sole_type(gold, node);
    if (!type || !typing_follows_from(gold, tbox, node, *type)) continue;
    std::vector<std::string> classes;
    for (const auto& c : top_level) {
      if (!tbox.supers(*type).count(c) && any_disjoint(tbox, tbox.supers(*type), tbox.supers(c))) classes.push_back(c);
    }
    if (!classes.empty()) disjoint_hosts.emplace_back(node, sample(classes, 1, rng).front());
  }
  auto chosen_disjoint = sample(disjoint_hosts, static_cast<std::size_t>(plan.disjoint_types), rng);
  if (static_cast<int>(chosen_disjoint.size()) < plan.disjoint_types) {
    throw FaultError("only " + std::to_string(disjoint_hosts.size()) + " nodes can take a disjoint type");
  }
  for (const auto& [node, cls] : chosen_disjoint) {
    Triple t{node, Term::iri(vocab::kType), Term::iri(cls)};
    g.insert(t);
    f.disjoint_types.push_back(t);
    protected_nodes.insert(node);
  }

  // Extraneous triples on capability and data element nodes.
  std::vector<std::pair<Term, ExtraPredicate>> extra_options;
  for (const auto& node : typed) {
    auto type = sole_type(gold, node);
    if (!type) continue;
    const auto& supers = tbox.supers(*type);
    if (!supers.count(vocab::cask("Capability")) && !supers.count(vocab::cask("DataElement"))) continue;
    for (const auto& p : extra_predicates(tbox, shapes, *type, targets)) extra_options.emplace_back(node, p);
  }
  if (plan.extraneous > 0 && extra_options.empty()) throw FaultError("no node can take an extraneous triple");
  const std::string ns = fresh_namespace(gold);
  for (int i = 0; i < plan.extraneous; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, extra_options.size() - 1);
    const auto& [node, p] = extra_options[pick(rng)];
    Term object = p.range ? Term::iri(ns + "Extra" + std::to_string(i + 1))
                          : Term::literal("extra statement " + std::to_string(i + 1), vocab::kXsdString);
    Triple t{node, Term::iri(p.iri), object};
    g.insert(t);
    f.extraneous.push_back(t);
    protected_nodes.insert(node);
  }

  // Deletions.
  std::vector<Triple> deletable;
  for (const auto& t : gold.triples()) {
    if (t.predicate.value == vocab::owl("imports")) continue;
    if (t.predicate.value == vocab::kType && protected_nodes.count(t.subject)) continue;
    deletable.push_back(t);
  }
  if (static_cast<int>(deletable.size()) < plan.deletions) {
    throw FaultError("only " + std::to_string(deletable.size()) + " triples can be deleted");
  }
  f.deleted = sample(deletable, static_cast<std::size_t>(plan.deletions), rng);
  std::sort(f.deleted.begin(), f.deleted.end());
  for (const auto& t : f.deleted) g.erase(t);
  if (plan.drop_import) {
    std::vector<Triple> imports;
    for (const auto& t : g.triples()) {
      if (t.predicate.value == vocab::owl("imports")) imports.push_back(t);
    }
    for (const auto& t : imports) g.erase(t);
  }

  // Serialise, then strip the declarations of removed prefixes.
  std::string text = rdf::serialize_turtle(g);
  std::string header, body;
  {
    std::istringstream in(text);
    std::string line;
    bool in_header = true;
    while (std::getline(in, line)) {
      if (in_header && line.rfind("@prefix", 0) != 0) in_header = false;
      (in_header ? header : body) += line + "\n";
    }
  }
  auto labels = used_table_labels(body, g.prefixes());
  std::sort(labels.begin(), labels.end());
  f.removed_prefixes = sample(labels, static_cast<std::size_t>(plan.removed_prefixes), rng);
  if (static_cast<int>(f.removed_prefixes.size()) < plan.removed_prefixes) {
    throw FaultError("only " + std::to_string(labels.size()) + " well-known prefixes are in use");
  }
  std::sort(f.removed_prefixes.begin(), f.removed_prefixes.end());
  std::string kept;
  {
    std::istringstream in(header);
    std::string line;
    while (std::getline(in, line)) {
      bool removed = std::any_of(f.removed_prefixes.begin(), f.removed_prefixes.end(),
                                 [&](const auto& l) { return line.rfind("@prefix " + l + ":", 0) == 0; });
      if (!removed) kept += line + "\n";
    }
  }
  f.text = kept + body;
  f.graph = std::move(g);

  f.expected.syntax = plan.removed_prefixes;
  f.expected.contradiction = plan.disjoint_types;
  f.expected.hallucination = plan.extraneous;
  f.expected.incomplete = plan.deletions + (plan.drop_import ? 1 : 0);
  f.expected.triples = static_cast<int>(gold.size());
  return f;
}

}  // namespace capgen::faults
