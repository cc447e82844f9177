#include "capgen/pipeline/repair.hpp"

#include "capgen/rdf/vocab.hpp"

namespace capgen::pipeline {

namespace vocab = capgen::vocab;

const std::map<std::string, std::string>& repair_prefix_table() {
  static const std::map<std::string, std::string> table = {
      {"cask", std::string(vocab::kCask)}, {"vdi3682", std::string(vocab::kVdi3682)},
      {"om", std::string(vocab::kOm)},     {"rdf", std::string(vocab::kRdf)},
      {"rdfs", std::string(vocab::kRdfs)}, {"owl", std::string(vocab::kOwl)},
      {"xsd", std::string(vocab::kXsd)},   {"sh", std::string(vocab::kSh)},
  };
  return table;
}

namespace {

std::string strip_separator(std::string iri) {
  while (!iri.empty() && (iri.back() == '#' || iri.back() == '/')) iri.pop_back();
  return iri;
}

bool imports(const rdf::Graph& g, const std::string& tbox_iri) {
  const std::string wanted = strip_separator(tbox_iri);
  for (const auto& t : g.triples()) {
    if (t.predicate.value == vocab::owl("imports") && t.object.is_iri() &&
        strip_separator(t.object.value) == wanted) {
      return true;
    }
  }
  return false;
}

// The ontology header node, else the default namespace, else a blank node.
std::string import_subject(const rdf::Graph& g) {
  for (const auto& t : g.triples()) {
    if (t.predicate.value == vocab::kType && t.object.is_iri() && t.object.value == vocab::owl("Ontology")) {
      return t.subject.is_blank() ? "_:" + t.subject.value : "<" + t.subject.value + ">";
    }
  }
  auto it = g.prefixes().find("");
  if (it != g.prefixes().end() && !strip_separator(it->second).empty()) {
    return "<" + strip_separator(it->second) + ">";
  }
  return "_:ontology";
}

}  // namespace

RepairResult repair(const std::string& ontology_text, const std::string& tbox_iri) {
  RepairLog log;
  auto parsed = rdf::parse_turtle(ontology_text);
  std::string text = ontology_text;
  if (!parsed.ok()) {
    const auto& table = repair_prefix_table();
    std::string header;
    for (const auto& issue : parsed.issues) {
      if (issue.category != rdf::IssueCategory::MissingPrefix) continue;
      auto it = table.find(issue.offending_token);
      if (it == table.end()) continue;
      std::string line = "@prefix " + it->first + ": <" + it->second + "> .";
      header += line + "\n";
      log.added_prefixes.push_back(line);
    }
    text = header + text;
    parsed = rdf::parse_turtle(text);
    if (!parsed.ok()) {
      throw RepairFailure(std::to_string(parsed.issues.size()) + " syntax issue(s) remain after prefix repair",
                          parsed.issues, log);
    }
  }
  rdf::Graph graph = std::move(*parsed.graph);
  if (!imports(graph, tbox_iri)) {
    if (!text.empty() && text.back() != '\n') text += '\n';
    text += "\n" + import_subject(graph) + " <" + vocab::owl("imports") + "> <" + tbox_iri + "> .\n";
    log.added_imports.push_back(tbox_iri);
    auto reparsed = rdf::parse_turtle(text);
    if (!reparsed.ok()) throw RepairFailure("import repair produced invalid Turtle", reparsed.issues, log);
    graph = std::move(*reparsed.graph);
  }
  return RepairResult{std::move(graph), std::move(text), std::move(log)};
}

void to_json(nlohmann::json& j, const RepairLog& log) {
  j = nlohmann::json{{"added_prefixes", log.added_prefixes},
                     {"added_imports", log.added_imports},
                     {"other_edits", log.other_edits}};
}

}  // namespace capgen::pipeline
