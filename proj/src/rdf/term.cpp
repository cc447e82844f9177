#include "capgen/rdf/term.hpp"

#include <cstdio>

#include "capgen/rdf/vocab.hpp"

namespace capgen::rdf {

Term Term::iri(std::string value) { return Term{TermKind::Iri, std::move(value), {}, {}}; }

Term Term::blank(std::string label) { return Term{TermKind::BlankNode, std::move(label), {}, {}}; }

Term Term::literal(std::string lexical, std::string datatype, std::string language) {
  if (!language.empty()) {
    datatype.clear();
  } else if (datatype.empty()) {
    datatype = vocab::kXsdString;
  }
  return Term{TermKind::Literal, std::move(lexical), std::move(datatype), std::move(language)};
}

namespace {

std::string escape_literal(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04X", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out;
}

}  // namespace

std::string Term::to_string() const {
  switch (kind) {
    case TermKind::Iri:
      return "<" + value + ">";
    case TermKind::BlankNode:
      return "_:" + value;
    case TermKind::Literal: {
      std::string out = "\"" + escape_literal(value) + "\"";
      if (!language.empty()) {
        out += "@" + language;
      } else if (!datatype.empty() && datatype != vocab::kXsdString) {
        out += "^^<" + datatype + ">";
      }
      return out;
    }
  }
  return value;
}

std::string Triple::to_string() const {
  return subject.to_string() + " " + predicate.to_string() + " " + object.to_string() + " .";
}

}  // namespace capgen::rdf
