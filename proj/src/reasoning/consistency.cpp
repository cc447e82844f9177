#include "capgen/reasoning/consistency.hpp"

#include <algorithm>
#include <deque>
#include <tuple>

#include "capgen/rdf/literal.hpp"
#include "capgen/rdf/turtle.hpp"
#include "capgen/rdf/vocab.hpp"

namespace capgen::reasoning {

using rdf::Graph;
using rdf::Term;
using rdf::Triple;
namespace vocab = capgen::vocab;

namespace {

bool is_datatype_iri(const std::string& iri) {
  return iri.rfind(vocab::kXsd, 0) == 0 || iri == vocab::rdfs("Literal") || iri == vocab::rdf("langString") ||
         iri == vocab::rdf("PlainLiteral");
}

std::map<std::string, std::set<std::string>> closure(const std::map<std::string, std::set<std::string>>& direct,
                                                     const std::set<std::string>& nodes) {
  std::map<std::string, std::set<std::string>> out;
  for (const auto& start : nodes) {
    std::set<std::string>& seen = out[start];
    std::deque<std::string> queue{start};
    while (!queue.empty()) {
      std::string n = queue.front();
      queue.pop_front();
      if (!seen.insert(n).second) continue;
      if (auto it = direct.find(n); it != direct.end()) {
        for (const auto& m : it->second) queue.push_back(m);
      }
    }
  }
  return out;
}

bool better(const TypeSupport& a, const TypeSupport& b) {
  return std::tie(a.source, a.triple) < std::tie(b.source, b.triple);
}

std::string short_name(const std::string& iri) {
  auto cut = iri.find_last_of("#/");
  return cut == std::string::npos ? iri : iri.substr(cut + 1);
}

std::string describe(const TypeSupport& s) {
  switch (s.source) {
    case SupportSource::Asserted:
      return "asserted type";
    case SupportSource::Domain:
      return "domain of " + short_name(s.triple.predicate.value);
    case SupportSource::Range:
      return "range of " + short_name(s.triple.predicate.value);
  }
  return {};
}

std::vector<Triple> sorted_unique(std::vector<Triple> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

const std::set<std::string>& TBoxIndex::supers(const std::string& cls) const {
  thread_local std::map<std::string, std::set<std::string>> singletons;
  if (auto it = superclasses.find(cls); it != superclasses.end()) return it->second;
  auto& s = singletons[cls];
  if (s.empty()) s.insert(cls);
  return s;
}

const std::set<std::string>& TBoxIndex::super_properties(const std::string& property) const {
  thread_local std::map<std::string, std::set<std::string>> singletons;
  if (auto it = superproperties.find(property); it != superproperties.end()) return it->second;
  auto& s = singletons[property];
  if (s.empty()) s.insert(property);
  return s;
}

bool TBoxIndex::are_disjoint(const std::string& a, const std::string& b) const {
  for (const auto& x : supers(a)) {
    for (const auto& y : supers(b)) {
      if (disjoint.count({x, y})) return true;
    }
  }
  return false;
}

bool TBoxIndex::expects_literal(const std::string& property) const {
  for (const auto& p : super_properties(property)) {
    if (datatype_properties.count(p) || datatype_range.count(p)) return true;
  }
  return false;
}

bool TBoxIndex::expects_resource(const std::string& property) const {
  for (const auto& p : super_properties(property)) {
    if (object_properties.count(p) || ranges.count(p)) return true;
  }
  return false;
}

TBoxIndex index_tbox(const Graph& tbox) {
  TBoxIndex idx;
  const std::string type = vocab::rdf("type");
  std::map<std::string, std::set<std::string>> sub_of, subprop_of;
  std::set<std::string> properties;
  std::set<std::string> ignored;
  std::vector<std::pair<std::string, std::string>> inverses;

  for (const auto& t : tbox.triples()) {
    const std::string& p = t.predicate.value;
    if (p == type && t.object.is_iri()) {
      const std::string& o = t.object.value;
      if (o == vocab::owl("Class") || o == vocab::rdfs("Class")) {
        if (t.subject.is_iri()) idx.classes.insert(t.subject.value);
      } else if (o == vocab::owl("ObjectProperty")) {
        idx.object_properties.insert(t.subject.value);
        properties.insert(t.subject.value);
      } else if (o == vocab::owl("DatatypeProperty")) {
        idx.datatype_properties.insert(t.subject.value);
        properties.insert(t.subject.value);
      } else if (o == vocab::owl("FunctionalProperty")) {
        idx.functional.insert(t.subject.value);
        properties.insert(t.subject.value);
      } else if (o == vocab::owl("Restriction")) {
        ignored.insert("owl:Restriction");
      } else if (o == vocab::owl("TransitiveProperty") || o == vocab::owl("SymmetricProperty") ||
                 o == vocab::owl("InverseFunctionalProperty")) {
        ignored.insert("owl:" + short_name(o));
      }
    } else if (p == vocab::rdfs("subClassOf")) {
      if (t.subject.is_iri() && t.object.is_iri()) {
        sub_of[t.subject.value].insert(t.object.value);
        idx.classes.insert(t.subject.value);
        idx.classes.insert(t.object.value);
      } else {
        ignored.insert("rdfs:subClassOf with anonymous class");
      }
    } else if (p == vocab::owl("equivalentClass")) {
      if (t.subject.is_iri() && t.object.is_iri()) {
        sub_of[t.subject.value].insert(t.object.value);
        sub_of[t.object.value].insert(t.subject.value);
      } else {
        ignored.insert("owl:equivalentClass with anonymous class");
      }
    } else if (p == vocab::rdfs("subPropertyOf") && t.subject.is_iri() && t.object.is_iri()) {
      subprop_of[t.subject.value].insert(t.object.value);
      properties.insert(t.subject.value);
      properties.insert(t.object.value);
    } else if (p == vocab::owl("disjointWith") && t.subject.is_iri() && t.object.is_iri()) {
      idx.disjoint.insert({t.subject.value, t.object.value});
      idx.disjoint.insert({t.object.value, t.subject.value});
    } else if (p == vocab::owl("members") || p == vocab::owl("distinctMembers")) {
      bool all_disjoint = tbox.contains({t.subject, Term::iri(type), Term::iri(vocab::owl("AllDisjointClasses"))});
      if (!all_disjoint) continue;
      auto items = tbox.list_items(t.object);
      if (!items) continue;
      for (const auto& a : *items) {
        for (const auto& b : *items) {
          if (a != b && a.is_iri() && b.is_iri()) idx.disjoint.insert({a.value, b.value});
        }
      }
    } else if (p == vocab::rdfs("domain") && t.object.is_iri()) {
      idx.domains[t.subject.value].insert(t.object.value);
      properties.insert(t.subject.value);
    } else if (p == vocab::rdfs("range") && t.object.is_iri()) {
      properties.insert(t.subject.value);
      if (is_datatype_iri(t.object.value)) {
        idx.datatype_range[t.subject.value] = t.object.value;
      } else {
        idx.ranges[t.subject.value].insert(t.object.value);
      }
    } else if (p == vocab::owl("inverseOf") && t.subject.is_iri() && t.object.is_iri()) {
      inverses.emplace_back(t.subject.value, t.object.value);
    } else if (p == vocab::owl("unionOf") || p == vocab::owl("intersectionOf") || p == vocab::owl("oneOf") ||
               p == vocab::owl("complementOf") || p == vocab::owl("propertyChainAxiom") ||
               p == vocab::owl("disjointUnionOf")) {
      ignored.insert("owl:" + short_name(p));
    }
  }

  for (const auto& [p, q] : inverses) {
    for (const auto& [a, b] : {std::pair{p, q}, std::pair{q, p}}) {
      if (auto it = idx.ranges.find(b); it != idx.ranges.end()) idx.domains[a].insert(it->second.begin(), it->second.end());
      if (auto it = idx.domains.find(b); it != idx.domains.end()) idx.ranges[a].insert(it->second.begin(), it->second.end());
    }
  }

  idx.superclasses = closure(sub_of, idx.classes);
  idx.superproperties = closure(subprop_of, properties);
  idx.ignored_constructs.assign(ignored.begin(), ignored.end());
  return idx;
}

TypeMap type_supports(const TBoxIndex& tbox, const Graph& abox) {
  // Direct memberships first, then propagate each to its superclasses.
  std::map<Term, std::map<std::string, TypeSupport>> direct;
  auto offer = [&](const Term& node, const std::string& cls, TypeSupport s) {
    if (node.is_literal()) return;
    s.via = cls;
    auto& slot = direct[node];
    auto it = slot.find(cls);
    if (it == slot.end() || better(s, it->second)) slot[cls] = std::move(s);
  };
  const std::string type = vocab::rdf("type");
  for (const auto& t : abox.triples()) {
    if (t.predicate.value == type) {
      if (t.object.is_iri()) offer(t.subject, t.object.value, {SupportSource::Asserted, t, {}});
      continue;
    }
    for (const auto& p : tbox.super_properties(t.predicate.value)) {
      if (auto it = tbox.domains.find(p); it != tbox.domains.end()) {
        for (const auto& c : it->second) offer(t.subject, c, {SupportSource::Domain, t, {}});
      }
      if (auto it = tbox.ranges.find(p); it != tbox.ranges.end()) {
        for (const auto& c : it->second) offer(t.object, c, {SupportSource::Range, t, {}});
      }
    }
  }
  TypeMap out;
  for (const auto& [node, classes] : direct) {
    auto& slot = out[node];
    for (const auto& [cls, support] : classes) {
      for (const auto& sup : tbox.supers(cls)) {
        auto it = slot.find(sup);
        if (it == slot.end() || better(support, it->second)) slot[sup] = support;
      }
    }
  }
  return out;
}

Graph infer_types(const Graph& abox, const TBoxIndex& tbox) {
  Graph g = abox;
  TypeMap types = type_supports(tbox, abox);
  for (const auto& [node, classes] : types) {
    for (const auto& [cls, support] : classes) g.insert({node, Term::iri(vocab::rdf("type")), Term::iri(cls)});
  }
  return g;
}

std::string to_string(ContradictionKind kind) {
  switch (kind) {
    case ContradictionKind::DisjointTypes:
      return "DISJOINT_TYPES";
    case ContradictionKind::RangeClash:
      return "RANGE_CLASH";
    case ContradictionKind::DatatypeClash:
      return "DATATYPE_CLASH";
    case ContradictionKind::FunctionalClash:
      return "FUNCTIONAL_CLASH";
  }
  return "UNKNOWN";
}

std::vector<Contradiction> check_consistency(const TBoxIndex& tbox, const Graph& abox) {
  std::vector<Contradiction> found;
  TypeMap types = type_supports(tbox, abox);

  // Disjoint memberships of one node.
  for (const auto& [node, classes] : types) {
    for (const auto& [a, b] : tbox.disjoint) {
      if (a > b) continue;
      auto ia = classes.find(a);
      auto ib = classes.find(b);
      if (ia == classes.end() || ib == classes.end()) continue;
      const TypeSupport& sa = ia->second;
      const TypeSupport& sb = ib->second;
      Contradiction c;
      c.kind = (sa.source == SupportSource::Range || sb.source == SupportSource::Range) ? ContradictionKind::RangeClash
                                                                                        : ContradictionKind::DisjointTypes;
      c.witness = sorted_unique({sa.triple, sb.triple});
      c.explanation = node.to_string() + " is a " + short_name(a) + " (" + describe(sa) + ") and a " + short_name(b) +
                      " (" + describe(sb) + "), which are disjoint";
      found.push_back(std::move(c));
    }
  }

  for (const auto& t : abox.triples()) {
    const std::string& p = t.predicate.value;
    if (t.object.is_literal() && !rdf::literal_well_formed(t.object)) {
      found.push_back({ContradictionKind::DatatypeClash, {t},
                       "\"" + t.object.value + "\" is not a valid " + short_name(t.object.datatype)});
    }
    if (t.object.is_literal() && tbox.expects_resource(p)) {
      found.push_back({ContradictionKind::RangeClash, {t}, short_name(p) + " expects a resource but has a literal"});
    }
    if (!t.object.is_literal() && tbox.expects_literal(p)) {
      found.push_back({ContradictionKind::DatatypeClash, {t}, short_name(p) + " expects a literal but has a resource"});
    }
    if (t.object.is_literal()) {
      for (const auto& sp : tbox.super_properties(p)) {
        auto it = tbox.datatype_range.find(sp);
        if (it == tbox.datatype_range.end()) continue;
        std::string actual = t.object.language.empty() ? t.object.datatype : vocab::rdf("langString");
        if (!rdf::datatype_compatible(it->second, actual)) {
          found.push_back({ContradictionKind::DatatypeClash, {t},
                           short_name(p) + " expects " + short_name(it->second) + " but has " + short_name(actual)});
        }
      }
    }
  }

  // Functional properties with two incompatible values.
  const std::string different = vocab::owl("differentFrom");
  std::map<std::pair<Term, std::string>, std::vector<Triple>> by_subject;
  for (const auto& t : abox.triples()) {
    for (const auto& sp : tbox.super_properties(t.predicate.value)) {
      if (tbox.functional.count(sp)) by_subject[{t.subject, sp}].push_back(t);
    }
  }
  for (const auto& [key, ts] : by_subject) {
    for (std::size_t i = 0; i < ts.size(); ++i) {
      for (std::size_t j = i + 1; j < ts.size(); ++j) {
        const Term& x = ts[i].object;
        const Term& y = ts[j].object;
        std::string head = short_name(key.second) + " is functional but " + key.first.to_string() + " has ";
        if (x.is_literal() && y.is_literal()) {
          if (rdf::canonical_literal(x) != rdf::canonical_literal(y)) {
            found.push_back({ContradictionKind::FunctionalClash, sorted_unique({ts[i], ts[j]}),
                             head + "the distinct values " + x.to_string() + " and " + y.to_string()});
          }
          continue;
        }
        if (x.is_literal() || y.is_literal() || x == y) continue;
        for (const auto& d : {Triple{x, Term::iri(different), y}, Triple{y, Term::iri(different), x}}) {
          if (abox.contains(d)) {
            found.push_back({ContradictionKind::FunctionalClash, sorted_unique({ts[i], ts[j], d}),
                             head + "the values " + x.to_string() + " and " + y.to_string() +
                                 ", declared different"});
          }
        }
        auto tx = types.find(x);
        auto ty = types.find(y);
        if (tx == types.end() || ty == types.end()) continue;
        for (const auto& [a, b] : tbox.disjoint) {
          auto ia = tx->second.find(a);
          auto ib = ty->second.find(b);
          if (ia == tx->second.end() || ib == ty->second.end()) continue;
          found.push_back({ContradictionKind::FunctionalClash,
                           sorted_unique({ts[i], ts[j], ia->second.triple, ib->second.triple}),
                           head + "the values " + x.to_string() + " and " + y.to_string() +
                               ", which have disjoint types " + short_name(a) + " and " + short_name(b)});
        }
      }
    }
  }

  // Keep one entry per witness set and drop any witness that strictly
  // contains another.
  std::sort(found.begin(), found.end(), [](const Contradiction& a, const Contradiction& b) {
    return std::tie(a.witness, a.kind) < std::tie(b.witness, b.kind);
  });
  found.erase(std::unique(found.begin(), found.end(),
                          [](const Contradiction& a, const Contradiction& b) { return a.witness == b.witness; }),
              found.end());
  std::vector<Contradiction> minimal;
  for (const auto& c : found) {
    bool dominated = std::any_of(found.begin(), found.end(), [&](const Contradiction& o) {
      return o.witness.size() < c.witness.size() &&
             std::includes(c.witness.begin(), c.witness.end(), o.witness.begin(), o.witness.end());
    });
    if (!dominated) minimal.push_back(c);
  }
  std::sort(minimal.begin(), minimal.end(), [](const Contradiction& a, const Contradiction& b) {
    return std::tie(a.kind, a.witness) < std::tie(b.kind, b.witness);
  });
  return minimal;
}

void to_json(nlohmann::json& j, const Contradiction& c) {
  std::vector<std::string> witness;
  for (const auto& t : c.witness) witness.push_back(t.to_string());
  j = nlohmann::json{{"kind", to_string(c.kind)}, {"witness", witness}, {"explanation", c.explanation}};
}

std::string witness_turtle(const std::vector<Contradiction>& contradictions, const Graph& abox) {
  Graph g;
  g.prefixes() = abox.prefixes();
  for (const auto& c : contradictions) {
    for (const auto& t : c.witness) g.insert(t);
  }
  return rdf::serialize_turtle(g);
}

}  // namespace capgen::reasoning
