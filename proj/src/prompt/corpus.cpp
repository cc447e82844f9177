#include "capgen/prompt/corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace capgen::prompt {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

std::vector<std::string> strings(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) return {};
  return j.at(key).get<std::vector<std::string>>();
}

CapabilitySpec read_spec(const fs::path& root, const nlohmann::json& j, const char* gold_key) {
  CapabilitySpec c;
  c.id = j.at("id").get<std::string>();
  c.name = j.value("name", c.id);
  c.description_path = root / j.at("description").get<std::string>();
  c.gold_path = root / j.at(gold_key).get<std::string>();
  c.description = read_file(c.description_path);
  c.inputs = strings(j, "inputs");
  c.outputs = strings(j, "outputs");
  c.constraints = strings(j, "constraints");
  if (!fs::exists(c.gold_path)) throw CorpusError(c.id + ": missing " + c.gold_path.string());
  return c;
}

}  // namespace

Corpus load_corpus(const fs::path& root) {
  nlohmann::json m;
  try {
    m = nlohmann::json::parse(read_file(root / "manifest.json"));
  } catch (const nlohmann::json::exception& e) {
    throw CorpusError("invalid manifest: " + std::string(e.what()));
  }
  Corpus c;
  c.root = root;
  try {
    c.tbox_path = root / m.at("tbox").get<std::string>();
    c.shapes_path = root / m.at("shapes").get<std::string>();
    c.tbox_iri = m.at("tbox_iri").get<std::string>();
    c.tbox_text = read_file(c.tbox_path);
    for (const auto& name : kTechniques) {
      if (!m.at("templates").contains(name)) continue;
      c.templates.push_back(parse_template(read_file(root / m.at("templates").at(name).get<std::string>())));
      if (c.templates.back().technique != name) {
        throw CorpusError("template registered as " + name + " declares " + c.templates.back().technique);
      }
    }
    for (const auto& e : m.at("examples")) c.examples.push_back(read_spec(root, e, "solution"));
    for (const auto& e : m.at("capabilities")) c.capabilities.push_back(read_spec(root, e, "gold"));
  } catch (const nlohmann::json::exception& e) {
    throw CorpusError("invalid manifest: " + std::string(e.what()));
  } catch (const TemplateError& e) {
    throw CorpusError(e.what());
  }
  std::set<std::string> ids;
  for (const auto* list : {&c.examples, &c.capabilities}) {
    for (const auto& s : *list) {
      if (!ids.insert(s.id).second) throw CorpusError("duplicate id " + s.id);
    }
  }
  for (const auto& s : c.examples) {
    if (!s.is_example()) throw CorpusError("example id " + s.id + " must start with 'E'");
  }
  for (const auto& s : c.capabilities) {
    if (s.is_example()) throw CorpusError("capability id " + s.id + " is reserved for examples");
  }
  for (const auto& t : c.templates) {
    for (const auto& id : t.example_ids) c.example(id);
  }
  return c;
}

const CapabilitySpec& Corpus::capability(const std::string& id) const {
  for (const auto& c : capabilities) {
    if (c.id == id) return c;
  }
  throw CorpusError("unknown capability " + id);
}

const CapabilitySpec& Corpus::example(const std::string& id) const {
  for (const auto& c : examples) {
    if (c.id == id) return c;
  }
  throw CorpusError("unknown example " + id);
}

const PromptTemplate& Corpus::template_for(const std::string& technique) const {
  std::string name = technique_name(technique);
  for (const auto& t : templates) {
    if (t.technique == name) return t;
  }
  throw CorpusError("no template for " + name);
}

std::vector<ExamplePair> Corpus::examples_for(const PromptTemplate& t) const {
  std::vector<ExamplePair> out;
  for (const auto& id : t.example_ids) {
    const CapabilitySpec& e = example(id);
    out.push_back({e.description, read_file(e.gold_path)});
  }
  return out;
}

std::vector<PromptInstance> build_matrix(const std::vector<CapabilitySpec>& capabilities,
                                         const std::vector<PromptTemplate>& templates, const std::string& tbox_text,
                                         const std::vector<std::vector<ExamplePair>>& examples) {
  if (examples.size() != templates.size()) throw TemplateError("one example list per template is required");
  std::vector<PromptInstance> out;
  for (const auto& c : capabilities) {
    for (std::size_t i = 0; i < templates.size(); ++i) {
      out.push_back(render_prompt(templates[i], tbox_text, examples[i], c.description, c.id));
    }
  }
  return out;
}

std::vector<PromptInstance> build_matrix(const Corpus& corpus, const std::vector<std::string>& capability_ids,
                                         const std::vector<std::string>& techniques) {
  std::vector<CapabilitySpec> caps;
  if (capability_ids.empty()) {
    caps = corpus.capabilities;
  } else {
    for (const auto& id : capability_ids) caps.push_back(corpus.capability(id));
  }
  std::vector<PromptTemplate> templates;
  if (techniques.empty()) {
    templates = corpus.templates;
  } else {
    for (const auto& t : techniques) templates.push_back(corpus.template_for(t));
  }
  std::vector<std::vector<ExamplePair>> examples;
  for (const auto& t : templates) examples.push_back(corpus.examples_for(t));
  return build_matrix(caps, templates, corpus.tbox_text, examples);
}

}  // namespace capgen::prompt
