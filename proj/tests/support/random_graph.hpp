#pragma once

#include <random>
#include <string>
#include <vector>

#include "capgen/rdf/graph.hpp"
#include "capgen/rdf/vocab.hpp"

namespace capgen::testing {

// Small random graphs exercising the lexical corners of the serializer:
// escapes, language tags, numeric shorthand, odd local names and blank nodes.
inline rdf::Graph random_graph(std::mt19937_64& rng, std::size_t max_triples, std::size_t max_blanks) {
  using rdf::Term;
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  static const std::vector<std::string> kIris = {
      "http://e.org/ns#a",      "http://e.org/ns#B_c",        "http://e.org/ns#d-e.f",
      "http://other.org/x/y",   "http://other.org/x/9lives",  "http://e.org/ns#",
      "urn:isbn:0451450523",    "http://e.org/path/with%20", "http://www.w3id.org/hsu-aut/cask#Capability",
      "http://e.org/ns#with.dot."};
  static const std::vector<std::string> kPreds = {"http://e.org/ns#p", "http://e.org/ns#q",
                                                  "http://other.org/x/r", vocab::kType};
  static const std::vector<std::string> kStrings = {"plain", "", "with \"quotes\"", "line\nbreak\ttab",
                                                    "back\\slash", "unicode \xC3\xA9\xE2\x82\xAC", "# not a comment"};
  std::size_t blanks = max_blanks == 0 ? 0 : pick(max_blanks + 1);
  auto blank = [&] { return Term::blank("n" + std::to_string(pick(blanks))); };
  auto node = [&]() -> Term {
    if (blanks > 0 && pick(3) == 0) return blank();
    return Term::iri(kIris[pick(kIris.size())]);
  };
  auto object = [&]() -> Term {
    switch (pick(8)) {
      case 0: return Term::literal(kStrings[pick(kStrings.size())]);
      case 1: return Term::literal(kStrings[pick(kStrings.size())], "", pick(2) ? "en" : "de-AT");
      case 2: return Term::literal(std::to_string(static_cast<long>(pick(2000)) - 1000), vocab::xsd("integer"));
      case 3: return Term::literal(pick(2) ? "2.50" : "-.5", vocab::xsd("decimal"));
      case 4: return Term::literal(pick(2) ? "true" : "false", vocab::xsd("boolean"));
      case 5: return Term::literal(pick(2) ? "1.0E3" : "007", pick(2) ? vocab::xsd("double") : "http://e.org/ns#dt");
      default: return node();
    }
  };
  rdf::Graph g;
  g.prefixes()["ex"] = "http://e.org/ns#";
  std::size_t n = max_triples == 0 ? 0 : pick(max_triples + 1);
  for (std::size_t i = 0; i < n; ++i) g.insert(rdf::Triple{node(), Term::iri(kPreds[pick(kPreds.size())]), object()});
  return g;
}

inline rdf::Graph relabel_blanks(const rdf::Graph& g, std::mt19937_64& rng) {
  std::vector<std::string> names;
  for (const auto& t : g.triples()) {
    for (const auto* term : {&t.subject, &t.object}) {
      if (term->is_blank() && std::find(names.begin(), names.end(), term->value) == names.end()) {
        names.push_back(term->value);
      }
    }
  }
  std::vector<std::string> renamed = names;
  std::shuffle(renamed.begin(), renamed.end(), rng);
  auto map = [&](const rdf::Term& t) {
    if (!t.is_blank()) return t;
    auto i = std::find(names.begin(), names.end(), t.value) - names.begin();
    return rdf::Term::blank("r_" + renamed[static_cast<std::size_t>(i)]);
  };
  rdf::Graph out;
  out.prefixes() = g.prefixes();
  for (const auto& t : g.triples()) out.insert(rdf::Triple{map(t.subject), t.predicate, map(t.object)});
  return out;
}

}  // namespace capgen::testing
