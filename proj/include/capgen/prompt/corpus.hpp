#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "capgen/prompt/prompt.hpp"

namespace capgen::prompt {

// One capability row. C-ids are study targets; E-ids are prompt examples and
// carry their solution in gold_path.
struct CapabilitySpec {
  std::string id;
  std::string name;
  std::string description;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<std::string> constraints;
  std::filesystem::path gold_path;
  std::filesystem::path description_path;

  bool is_example() const { return !id.empty() && id[0] == 'E'; }
};

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Corpus {
  std::filesystem::path root;
  std::filesystem::path tbox_path;
  std::filesystem::path shapes_path;
  std::string tbox_text;
  std::string tbox_iri;
  std::vector<PromptTemplate> templates;  // zero-, one-, few-shot
  std::vector<CapabilitySpec> examples;   // manifest order
  std::vector<CapabilitySpec> capabilities;

  const CapabilitySpec& capability(const std::string& id) const;
  const CapabilitySpec& example(const std::string& id) const;
  const PromptTemplate& template_for(const std::string& technique) const;
  // Description and solution text of a template's examples, in template order.
  std::vector<ExamplePair> examples_for(const PromptTemplate& t) const;
};

// Reads manifest.json under root and every file it names.
Corpus load_corpus(const std::filesystem::path& root);

std::string read_file(const std::filesystem::path& path);

// |capabilities| x |templates| prompts, capability-major. examples[i] holds
// the example pairs for templates[i].
std::vector<PromptInstance> build_matrix(const std::vector<CapabilitySpec>& capabilities,
                                         const std::vector<PromptTemplate>& templates, const std::string& tbox_text,
                                         const std::vector<std::vector<ExamplePair>>& examples);

// Renders the full matrix for the given capability and technique subsets,
// capability-major. Empty subsets select everything.
std::vector<PromptInstance> build_matrix(const Corpus& corpus, const std::vector<std::string>& capability_ids = {},
                                         const std::vector<std::string>& techniques = {});

}  // namespace capgen::prompt
