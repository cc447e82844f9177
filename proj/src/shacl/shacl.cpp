#include "capgen/shacl/shacl.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "capgen/rdf/literal.hpp"
#include "capgen/rdf/vocab.hpp"

namespace capgen::shacl {

using rdf::Graph;
using rdf::Term;
using rdf::Triple;
namespace vocab = capgen::vocab;

namespace {

std::optional<int> int_value(const Graph& g, const Term& node, const std::string& predicate,
                             const std::string& shape) {
  auto values = g.objects(node, predicate);
  if (values.empty()) return std::nullopt;
  const Term& v = values.front();
  if (!v.is_literal() || !rdf::is_integer_datatype(v.datatype) || !rdf::literal_well_formed(v)) {
    throw ShapeLoadError("shape " + shape + ": " + predicate + " must be an integer");
  }
  return std::stoi(v.value);
}

std::optional<std::string> iri_value(const Graph& g, const Term& node, const std::string& predicate) {
  for (const auto& v : g.objects(node, predicate)) {
    if (v.is_iri()) return v.value;
  }
  return std::nullopt;
}

std::string label(const Term& t) { return t.is_iri() ? t.value : t.to_string(); }

const std::set<std::string>& tolerated() {
  static const std::set<std::string> kSet = {vocab::rdf("type"),         vocab::sh("message"),
                                             vocab::sh("name"),          vocab::sh("description"),
                                             vocab::rdfs("label"),       vocab::rdfs("comment"),
                                             vocab::sh("order"),         vocab::sh("severity")};
  return kSet;
}

}  // namespace

ShapeSet load_shapes(const Graph& g) {
  ShapeSet out;
  const std::string type = vocab::rdf("type");
  std::set<Term> shape_nodes;
  for (const auto& t : g.triples()) {
    if (t.predicate.value == type && t.object.value == vocab::sh("NodeShape")) shape_nodes.insert(t.subject);
    if (t.predicate.value == vocab::sh("targetClass")) shape_nodes.insert(t.subject);
  }
  for (const auto& node : shape_nodes) {
    NodeShape shape;
    shape.iri = label(node);
    for (const auto& t : g.about(node)) {
      const std::string& p = t.predicate.value;
      if (p == vocab::sh("targetClass")) {
        if (t.object.is_iri()) shape.target_classes.push_back(t.object.value);
      } else if (p == vocab::sh("closed")) {
        shape.closed = t.object.value == "true" || t.object.value == "1";
      } else if (p == vocab::sh("ignoredProperties")) {
        auto items = g.list_items(t.object);
        if (!items) throw ShapeLoadError("shape " + shape.iri + ": sh:ignoredProperties is not a list");
        for (const auto& i : *items) shape.ignored_properties.push_back(i.value);
      } else if (p == vocab::sh("message")) {
        shape.message = t.object.value;
      } else if (p == vocab::sh("property")) {
        const Term& ps = t.object;
        PropertyConstraint pc;
        auto paths = g.objects(ps, vocab::sh("path"));
        if (paths.empty()) throw ShapeLoadError("shape " + shape.iri + ": property constraint without sh:path");
        if (!paths.front().is_iri()) {
          out.warnings.push_back("shape " + shape.iri + ": complex sh:path is not supported; constraint skipped");
          continue;
        }
        pc.path = paths.front().value;
        pc.min_count = int_value(g, ps, vocab::sh("minCount"), shape.iri);
        pc.max_count = int_value(g, ps, vocab::sh("maxCount"), shape.iri);
        if (pc.min_count && pc.max_count && *pc.min_count > *pc.max_count) {
          throw ShapeLoadError("shape " + shape.iri + ": sh:minCount exceeds sh:maxCount on " + pc.path);
        }
        pc.cls = iri_value(g, ps, vocab::sh("class"));
        pc.datatype = iri_value(g, ps, vocab::sh("datatype"));
        pc.node_kind = iri_value(g, ps, vocab::sh("nodeKind"));
        if (auto m = g.objects(ps, vocab::sh("message")); !m.empty()) pc.message = m.front().value;
        static const std::set<std::string> kKnown = {
            vocab::sh("path"),  vocab::sh("minCount"), vocab::sh("maxCount"), vocab::sh("class"),
            vocab::sh("datatype"), vocab::sh("nodeKind")};
        for (const auto& pt : g.about(ps)) {
          if (!kKnown.count(pt.predicate.value) && !tolerated().count(pt.predicate.value)) {
            out.warnings.push_back("shape " + shape.iri + ": unsupported constraint " + pt.predicate.value +
                                   " on " + pc.path + " ignored");
          }
        }
        shape.properties.push_back(std::move(pc));
      } else if (!tolerated().count(p)) {
        out.warnings.push_back("shape " + shape.iri + ": unsupported constraint " + p + " ignored");
      }
    }
    if (shape.target_classes.empty()) out.warnings.push_back("shape " + shape.iri + " has no sh:targetClass");
    out.shapes.push_back(std::move(shape));
  }
  return out;
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::MinCount:
      return "MIN_COUNT";
    case ViolationKind::MaxCount:
      return "MAX_COUNT";
    case ViolationKind::Class:
      return "CLASS";
    case ViolationKind::Datatype:
      return "DATATYPE";
    case ViolationKind::NodeKind:
      return "NODE_KIND";
    case ViolationKind::Closed:
      return "CLOSED";
  }
  return "UNKNOWN";
}

std::vector<Violation> validate(const ShapeSet& shapes, const Graph& data, const reasoning::TBoxIndex& tbox) {
  std::vector<Violation> out;
  reasoning::TypeMap types = reasoning::type_supports(tbox, data);
  auto has_type = [&](const Term& node, const std::string& cls) {
    auto it = types.find(node);
    return it != types.end() && it->second.count(cls) > 0;
  };

  for (const auto& shape : shapes.shapes) {
    std::set<Term> focus_nodes;
    for (const auto& [node, classes] : types) {
      for (const auto& c : shape.target_classes) {
        if (classes.count(c)) focus_nodes.insert(node);
      }
    }
    for (const auto& focus : focus_nodes) {
      std::vector<Triple> about = data.about(focus);
      for (const auto& pc : shape.properties) {
        std::vector<Triple> values;
        for (const auto& t : about) {
          if (t.predicate.value == pc.path) values.push_back(t);
        }
        int n = static_cast<int>(values.size());
        auto base = [&](ViolationKind kind, std::string message) {
          Violation v;
          v.focus = focus;
          v.shape = shape.iri;
          v.kind = kind;
          v.path = pc.path;
          v.message = pc.message.empty() ? std::move(message) : pc.message;
          return v;
        };
        if (pc.min_count && n < *pc.min_count) {
          Violation v = base(ViolationKind::MinCount, "fewer than " + std::to_string(*pc.min_count) + " values");
          v.amount = *pc.min_count - n;
          out.push_back(std::move(v));
        }
        if (pc.max_count && n > *pc.max_count) {
          Violation v = base(ViolationKind::MaxCount, "more than " + std::to_string(*pc.max_count) + " values");
          v.amount = n - *pc.max_count;
          v.triples = values;
          out.push_back(std::move(v));
        }
        for (const auto& t : values) {
          const Term& o = t.object;
          auto per_value = [&](ViolationKind kind, std::string message) {
            Violation v = base(kind, std::move(message));
            v.value = o;
            v.triples = {t};
            out.push_back(std::move(v));
          };
          if (pc.cls && (o.is_literal() || !has_type(o, *pc.cls))) {
            per_value(ViolationKind::Class, "value is not a " + *pc.cls);
          }
          if (pc.datatype) {
            std::string actual = o.is_literal() ? (o.language.empty() ? o.datatype : vocab::rdf("langString")) : "";
            if (!o.is_literal() || actual != *pc.datatype || !rdf::literal_well_formed(o)) {
              per_value(ViolationKind::Datatype, "value does not have datatype " + *pc.datatype);
            }
          }
          if (pc.node_kind) {
            const std::string& k = *pc.node_kind;
            bool ok = (o.is_iri() && (k == vocab::sh("IRI") || k == vocab::sh("BlankNodeOrIRI") ||
                                      k == vocab::sh("IRIOrLiteral"))) ||
                      (o.is_blank() && (k == vocab::sh("BlankNode") || k == vocab::sh("BlankNodeOrIRI") ||
                                        k == vocab::sh("BlankNodeOrLiteral"))) ||
                      (o.is_literal() && (k == vocab::sh("Literal") || k == vocab::sh("IRIOrLiteral") ||
                                          k == vocab::sh("BlankNodeOrLiteral")));
            if (!ok) per_value(ViolationKind::NodeKind, "value does not have node kind " + k);
          }
        }
      }
      if (shape.closed) {
        std::set<std::string> allowed(shape.ignored_properties.begin(), shape.ignored_properties.end());
        for (const auto& pc : shape.properties) allowed.insert(pc.path);
        allowed.insert(vocab::rdf("type"));
        for (const auto& t : about) {
          if (allowed.count(t.predicate.value)) continue;
          Violation v;
          v.focus = focus;
          v.shape = shape.iri;
          v.kind = ViolationKind::Closed;
          v.path = t.predicate.value;
          v.value = t.object;
          v.message = shape.message.empty() ? "property not allowed by closed shape" : shape.message;
          v.triples = {t};
          out.push_back(std::move(v));
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
    return std::tie(a.focus, a.shape, a.kind, a.path, a.value) < std::tie(b.focus, b.shape, b.kind, b.path, b.value);
  });
  return out;
}

Classification classify(const std::vector<Violation>& violations) {
  Classification c;
  std::set<Triple> flagged;
  for (const auto& v : violations) {
    if (v.kind == ViolationKind::MinCount) {
      c.incomplete += v.amount;
    } else if (v.kind != ViolationKind::MaxCount) {
      flagged.insert(v.triples.begin(), v.triples.end());
    }
  }
  // Surplus values not already flagged are taken from the end in triple order.
  for (const auto& v : violations) {
    if (v.kind != ViolationKind::MaxCount) continue;
    int need = v.amount;
    for (const auto& t : v.triples) need -= static_cast<int>(flagged.count(t));
    for (auto it = v.triples.rbegin(); it != v.triples.rend() && need > 0; ++it) {
      if (flagged.insert(*it).second) --need;
    }
  }
  c.hallucinated = static_cast<int>(flagged.size());
  return c;
}

void to_json(nlohmann::json& j, const Violation& v) {
  j = nlohmann::json{{"focus", v.focus.to_string()}, {"shape", v.shape}, {"kind", to_string(v.kind)},
                     {"path", v.path},                {"message", v.message}, {"amount", v.amount}};
  j["value"] = v.value ? nlohmann::json(v.value->to_string()) : nlohmann::json(nullptr);
}

}  // namespace capgen::shacl
