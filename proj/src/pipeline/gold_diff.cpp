#include "capgen/pipeline/gold_diff.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <tuple>

#include "capgen/rdf/literal.hpp"
#include "capgen/rdf/vocab.hpp"

namespace capgen::pipeline {

namespace vocab = capgen::vocab;
using rdf::Term;
using rdf::Triple;

namespace {

bool is_vocabulary(const Term& t) {
  if (!t.is_iri()) return false;
  for (std::string_view ns : {vocab::kRdf, vocab::kRdfs, vocab::kOwl, vocab::kXsd, vocab::kSh, vocab::kCask,
                              vocab::kVdi3682, vocab::kOm}) {
    if (t.value.rfind(ns, 0) == 0) return true;
  }
  return t.value == "http://www.w3id.org/hsu-aut/cask";
}

std::set<Term> nodes(const rdf::Graph& g) {
  std::set<Term> out;
  for (const auto& t : g.triples()) {
    if (!is_vocabulary(t.subject)) out.insert(t.subject);
    if (!t.object.is_literal() && !is_vocabulary(t.object)) out.insert(t.object);
  }
  return out;
}

std::string normalized_local_name(const std::string& iri) {
  auto cut = iri.find_last_of("#/");
  std::string local = cut == std::string::npos ? iri : iri.substr(cut + 1);
  std::string out;
  for (unsigned char c : local) {
    if (std::isalnum(c)) out += static_cast<char>(std::tolower(c));
  }
  return out;
}

double name_similarity(const std::string& a, const std::string& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] != b[j - 1])});
      diag = up;
    }
  }
  return 1.0 - static_cast<double>(row[b.size()]) / static_cast<double>(std::max(a.size(), b.size()));
}

std::set<std::string> class_types(const rdf::Graph& g, const Term& node) {
  auto types = g.types(node);
  types.erase(vocab::owl("NamedIndividual"));
  return types;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t common = 0;
  for (const auto& x : a) common += b.count(x);
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

// Printable key of a term after alignment; literals compare by value.
std::string key_of(const Term& t, const Alignment& alignment) {
  if (t.is_literal()) return "L" + rdf::canonical_literal(t);
  auto it = alignment.find(t);
  const Term& mapped = it == alignment.end() ? t : it->second;
  return (mapped.is_blank() ? "B" : "I") + mapped.value;
}

using Edge = std::tuple<bool, std::string, std::string>;  // outgoing?, predicate, neighbour key

std::set<Edge> edges(const rdf::Graph& g, const Term& node, const Alignment& alignment, bool mapped_only) {
  std::set<Edge> out;
  for (const auto& t : g.triples()) {
    if (t.subject == node) {
      bool known = t.object.is_literal() || is_vocabulary(t.object) || alignment.count(t.object) || !mapped_only;
      if (known) out.emplace(true, t.predicate.value, key_of(t.object, alignment));
    }
    if (t.object == node) {
      bool known = is_vocabulary(t.subject) || alignment.count(t.subject) || !mapped_only;
      if (known) out.emplace(false, t.predicate.value, key_of(t.subject, alignment));
    }
  }
  return out;
}

}  // namespace

Alignment align(const rdf::Graph& generated, const rdf::Graph& gold) {
  Alignment alignment;
  auto gen_nodes = nodes(generated);
  auto gold_nodes = nodes(gold);
  std::set<Term> used;

  for (const auto& n : gen_nodes) {
    if (n.is_iri() && gold_nodes.count(n)) {
      alignment.emplace(n, n);
      used.insert(n);
    }
  }

  struct Candidate {
    double score;
    Term generated;
    Term gold;
  };
  auto take_greedy = [&](std::vector<Candidate> cands) {
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Candidate& a, const Candidate& b) { return a.score > b.score; });
    for (const auto& c : cands) {
      if (alignment.count(c.generated) || used.count(c.gold)) continue;
      alignment.emplace(c.generated, c.gold);
      used.insert(c.gold);
    }
  };

  std::vector<Candidate> by_name;
  for (const auto& n : gen_nodes) {
    if (!n.is_iri() || alignment.count(n)) continue;
    auto n_types = class_types(generated, n);
    auto n_name = normalized_local_name(n.value);
    for (const auto& g : gold_nodes) {
      if (!g.is_iri() || used.count(g)) continue;
      auto g_types = class_types(gold, g);
      double types = jaccard(n_types, g_types);
      if (!n_types.empty() && !g_types.empty() && types == 0.0) continue;
      double name = name_similarity(n_name, normalized_local_name(g.value));
      if (name < 0.5) continue;
      by_name.push_back({name + types, n, g});
    }
  }
  take_greedy(std::move(by_name));

  // Blank nodes, and anything still unmatched, by shared edges. Repeated so
  // that newly aligned neighbours can anchor further matches.
  for (bool changed = true; changed;) {
    std::size_t before = alignment.size();
    std::vector<Candidate> by_structure;
    for (const auto& n : gen_nodes) {
      if (alignment.count(n)) continue;
      auto n_edges = edges(generated, n, alignment, true);
      if (n_edges.empty()) continue;
      for (const auto& g : gold_nodes) {
        if (used.count(g) || (n.is_iri() && g.is_iri())) continue;
        auto g_edges = edges(gold, g, Alignment{}, true);
        std::size_t common = 0;
        for (const auto& e : n_edges) common += g_edges.count(e);
        if (common > 0) by_structure.push_back({static_cast<double>(common), n, g});
      }
    }
    take_greedy(std::move(by_structure));
    changed = alignment.size() != before;
  }
  return alignment;
}

GoldDiff diff_against_gold(const rdf::Graph& generated, const rdf::Graph& gold,
                           const std::vector<shacl::Violation>& violations) {
  GoldDiff diff;
  diff.alignment = align(generated, gold);

  std::set<std::string> present;
  for (const auto& t : generated.triples()) {
    present.insert(key_of(t.subject, diff.alignment) + " " + t.predicate.value + " " +
                   key_of(t.object, diff.alignment));
  }
  std::map<std::pair<Term, std::string>, int> missing_by_group;
  const Alignment identity;
  for (const auto& t : gold.triples()) {
    std::string k = key_of(t.subject, identity) + " " + t.predicate.value + " " + key_of(t.object, identity);
    if (present.count(k)) continue;
    diff.missing.push_back(t);
    ++missing_by_group[{t.subject, t.predicate.value}];
  }

  std::map<std::pair<Term, std::string>, int> deficit_by_group;
  for (const auto& v : violations) {
    if (v.kind != shacl::ViolationKind::MinCount) continue;
    diff.min_count_deficit += v.amount;
    auto it = diff.alignment.find(v.focus);
    const Term& focus = it == diff.alignment.end() ? v.focus : it->second;
    deficit_by_group[{focus, v.path}] += v.amount;
  }
  for (const auto& [group, missing] : missing_by_group) {
    auto it = deficit_by_group.find(group);
    int covered = it == deficit_by_group.end() ? 0 : it->second;
    diff.uncovered_missing += std::max(0, missing - covered);
  }
  return diff;
}

void to_json(nlohmann::json& j, const GoldDiff& d) {
  nlohmann::json alignment = nlohmann::json::object();
  for (const auto& [from, to] : d.alignment) {
    if (from != to) alignment[from.to_string()] = to.to_string();
  }
  nlohmann::json missing = nlohmann::json::array();
  for (const auto& t : d.missing) missing.push_back(t.to_string());
  j = nlohmann::json{{"renamed_nodes", alignment},
                     {"missing_gold_triples", missing},
                     {"min_count_deficit", d.min_count_deficit},
                     {"uncovered_missing", d.uncovered_missing}};
}

}  // namespace capgen::pipeline
