#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace capgen::prompt {

// Lines wrapped around every rendered example block.
inline constexpr std::string_view kExampleBegin = "<<<EXAMPLE>>>";
inline constexpr std::string_view kExampleEnd = "<<<END EXAMPLE>>>";

inline const std::vector<std::string> kTechniques = {"zero-shot", "one-shot", "few-shot"};

// "zero-shot" -> "zero", used in file names and experiment keys.
std::string technique_key(const std::string& technique);
// Accepts either form and returns the long one.
std::string technique_name(const std::string& technique_or_key);

struct PromptTemplate {
  std::string technique;
  std::string instruction;  // first paragraph of the body
  std::vector<std::string> example_ids;
  std::string body;  // with {CONTEXT}, {EXAMPLES} and {TASK}
};

class TemplateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses "technique: ...", "examples: E1, E2" header lines, a "---" line and
// the body.
PromptTemplate parse_template(const std::string& text);

struct ExamplePair {
  std::string description;
  std::string solution;
};

struct PromptInstance {
  std::string capability_id;
  std::string technique;
  std::string text;
  long token_estimate = 0;
};

// Literal placeholder substitution. Throws TemplateError when the number of
// examples differs from the template's example ids.
PromptInstance render_prompt(const PromptTemplate& t, const std::string& tbox_text,
                             const std::vector<ExamplePair>& examples, const std::string& task,
                             const std::string& capability_id = {});

// ceil(characters / 4).
long estimate_tokens(std::string_view text);

// Number of example blocks in a rendered prompt.
int count_example_blocks(std::string_view text);

}  // namespace capgen::prompt
