#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace capgen::pipeline {

// The ontology part of a raw model response. leading_prose + ontology_text +
// trailing_prose reproduces the response with the extra documents cut out.
struct ExtractionResult {
  std::string ontology_text;
  std::string leading_prose;
  std::string trailing_prose;
  std::vector<std::string> extra_documents;
  bool fenced = false;
};

class ExtractionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// True when the text parses, or fails only on undeclared prefixes that the
// repair table can supply.
bool parses_after_prefix_repair(std::string_view text);

// Picks the first Turtle region, preferring fenced code blocks. Later
// parseable regions go to extra_documents. Throws ExtractionError when the
// response holds no Turtle at all.
ExtractionResult extract_ontology(const std::string& response);

}  // namespace capgen::pipeline
