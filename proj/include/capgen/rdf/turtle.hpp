#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "capgen/rdf/graph.hpp"

namespace capgen::rdf {

enum class IssueCategory { MissingPrefix, MalformedStatement, BadLiteral, BadIri, Other };

std::string_view to_string(IssueCategory c);

struct SyntaxIssue {
  IssueCategory category = IssueCategory::Other;
  int line = 1;
  int column = 1;
  std::string message;
  // For MissingPrefix this is the undeclared prefix label (without ':').
  std::string offending_token;
};

struct ParseResult {
  // Set only when the document parsed without any issue.
  std::optional<Graph> graph;
  std::vector<SyntaxIssue> issues;
  // Statements that did parse, regardless of issues elsewhere. Useful for
  // diagnostics; never scored.
  Graph partial;

  bool ok() const { return graph.has_value(); }
};

// Error-recovering Turtle parser. After an issue the parser resynchronises at
// the next statement terminator, so one call reports every independent issue
// it can localise. An undeclared prefix is reported once per label.
ParseResult parse_turtle(std::string_view document, std::optional<std::string> base = std::nullopt);

// Serialises with prefixed names wherever a declared or derivable namespace
// allows it. Every namespace that is abbreviated is declared.
std::string serialize_turtle(const Graph& g);

// Resolves a (possibly relative) IRI reference against an absolute base.
std::string resolve_iri(std::string_view base, std::string_view reference);
bool is_absolute_iri(std::string_view iri);

}  // namespace capgen::rdf
