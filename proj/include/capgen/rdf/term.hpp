#pragma once

#include <compare>
#include <string>

namespace capgen::rdf {

enum class TermKind { Iri, BlankNode, Literal };

// An RDF term. Simple literals carry xsd:string as datatype; language-tagged
// literals carry an empty datatype (rdf:langString is implied).
struct Term {
  TermKind kind = TermKind::Iri;
  std::string value;
  std::string datatype;
  std::string language;

  static Term iri(std::string value);
  static Term blank(std::string label);
  static Term literal(std::string lexical, std::string datatype = {}, std::string language = {});

  bool is_iri() const { return kind == TermKind::Iri; }
  bool is_blank() const { return kind == TermKind::BlankNode; }
  bool is_literal() const { return kind == TermKind::Literal; }

  // N-Triples style rendering, used in messages and JSON exports.
  std::string to_string() const;

  auto operator<=>(const Term&) const = default;
  bool operator==(const Term&) const = default;
};

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  std::string to_string() const;

  auto operator<=>(const Triple&) const = default;
  bool operator==(const Triple&) const = default;
};

}  // namespace capgen::rdf
