#include "capgen/prompt/prompt.hpp"

#include <sstream>

namespace capgen::prompt {

namespace {

std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::size_t expected_examples(const std::string& technique) {
  if (technique == "zero-shot") return 0;
  if (technique == "one-shot") return 1;
  if (technique == "few-shot") return 3;
  throw TemplateError("unknown technique '" + technique + "'");
}

}  // namespace

std::string technique_key(const std::string& technique) {
  std::string name = technique_name(technique);
  return name.substr(0, name.find('-'));
}

std::string technique_name(const std::string& t) {
  for (const auto& name : kTechniques) {
    if (t == name || t == name.substr(0, name.find('-'))) return name;
  }
  throw TemplateError("unknown technique '" + t + "'");
}

PromptTemplate parse_template(const std::string& text) {
  PromptTemplate t;
  std::istringstream in(text);
  std::string line;
  bool separated = false;
  std::size_t consumed = 0;
  while (std::getline(in, line)) {
    consumed += line.size() + 1;
    if (trim(line) == "---") {
      separated = true;
      break;
    }
    auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    std::string key = trim(line.substr(0, colon));
    std::string value = trim(line.substr(colon + 1));
    if (key == "technique") {
      t.technique = value;
    } else if (key == "examples") {
      std::istringstream ids(value);
      for (std::string id; std::getline(ids, id, ',');) {
        if (!trim(id).empty()) t.example_ids.push_back(trim(id));
      }
    } else {
      throw TemplateError("unknown template header '" + key + "'");
    }
  }
  if (!separated) throw TemplateError("template header is not terminated by '---'");
  if (t.technique.empty()) throw TemplateError("template has no technique");
  if (t.example_ids.size() != expected_examples(t.technique)) {
    throw TemplateError(t.technique + " template lists " + std::to_string(t.example_ids.size()) + " examples");
  }
  t.body = consumed < text.size() ? text.substr(consumed) : std::string{};
  for (std::string_view marker : {"{CONTEXT}", "{EXAMPLES}", "{TASK}"}) {
    if (t.body.find(marker) == std::string::npos) {
      throw TemplateError(t.technique + " template lacks " + std::string(marker));
    }
  }
  t.instruction = trim(t.body.substr(0, t.body.find("\n\n")));
  return t;
}

PromptInstance render_prompt(const PromptTemplate& t, const std::string& tbox_text,
                             const std::vector<ExamplePair>& examples, const std::string& task,
                             const std::string& capability_id) {
  if (examples.size() != t.example_ids.size()) {
    throw TemplateError(t.technique + " template expects " + std::to_string(t.example_ids.size()) +
                        " examples, got " + std::to_string(examples.size()));
  }
  std::string blocks;
  for (const auto& e : examples) {
    blocks += std::string(kExampleBegin) + "\nTask description:\n" + e.description;
    if (blocks.back() != '\n') blocks += '\n';
    blocks += "\nOntology:\n" + e.solution;
    if (blocks.back() != '\n') blocks += '\n';
    blocks += std::string(kExampleEnd) + "\n";
  }
  // One pass over the body; substituted text is never rescanned for markers.
  std::string out;
  const std::string& body = t.body;
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t next = body.find('{', pos);
    if (next == std::string::npos) break;
    out.append(body, pos, next - pos);
    auto starts = [&](std::string_view m) { return body.compare(next, m.size(), m) == 0; };
    if (starts("{CONTEXT}")) {
      out += tbox_text;
      pos = next + 9;
    } else if (starts("{EXAMPLES}")) {
      out += blocks;
      pos = next + 10;
    } else if (starts("{TASK}")) {
      out += task;
      pos = next + 6;
    } else {
      out += '{';
      pos = next + 1;
    }
  }
  if (pos < body.size()) out.append(body, pos, std::string::npos);
  PromptInstance p;
  p.capability_id = capability_id;
  p.technique = t.technique;
  p.text = std::move(out);
  p.token_estimate = estimate_tokens(p.text);
  return p;
}

long estimate_tokens(std::string_view text) {
  // Characters are UTF-8 code points: count every byte that is not a
  // continuation byte.
  long chars = 0;
  for (unsigned char c : text) chars += (c & 0xC0) != 0x80;
  return (chars + 3) / 4;
}

int count_example_blocks(std::string_view text) {
  int n = 0;
  std::size_t pos = 0;
  std::string needle = std::string(kExampleBegin) + "\n";
  while ((pos = text.find(needle, pos)) != std::string_view::npos) {
    if (pos == 0 || text[pos - 1] == '\n') ++n;
    pos += needle.size();
  }
  return n;
}

}  // namespace capgen::prompt
