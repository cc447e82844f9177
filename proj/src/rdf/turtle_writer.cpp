#include <cctype>
#include <cstdio>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <string>

#include "capgen/rdf/turtle.hpp"
#include "capgen/rdf/vocab.hpp"

namespace capgen::rdf {

namespace {

bool valid_label(const std::string& label) {
  if (label.empty()) return true;
  if (!std::isalpha(static_cast<unsigned char>(label[0])) || label.back() == '.') return false;
  for (unsigned char c : label) {
    if (!std::isalnum(c) && c != '_' && c != '-' && c != '.') return false;
  }
  return true;
}

bool valid_local(std::string_view local) {
  if (local.empty()) return true;
  if (local.back() == '.') return false;
  auto first = static_cast<unsigned char>(local[0]);
  if (!(std::isalnum(first) || first == '_' || first == ':' || first >= 0x80)) return false;
  for (unsigned char c : local) {
    if (!(std::isalnum(c) || c == '_' || c == '-' || c == '.' || c == ':' || c >= 0x80)) return false;
  }
  return true;
}

std::string escape_string(const std::string& s) {
  std::string out;
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20 || c == 0x7F) {
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

class Writer {
 public:
  explicit Writer(const Graph& g) : g_(g) {
    for (const auto& [label, ns] : g.prefixes()) {
      if (valid_label(label) && !ns.empty()) labels_[label] = ns;
    }
  }

  std::string run() {
    std::ostringstream body;
    const Term* current = nullptr;
    std::vector<const Triple*> block;
    auto flush = [&] {
      if (!block.empty()) write_subject(body, block);
      block.clear();
    };
    for (const auto& t : g_.triples()) {
      if (!current || t.subject != *current) {
        flush();
        current = &t.subject;
      }
      block.push_back(&t);
    }
    flush();

    std::ostringstream out;
    for (const auto& [label, ns] : labels_) out << "@prefix " << label << ": <" << ns << "> .\n";
    if (!labels_.empty() && !g_.empty()) out << "\n";
    out << body.str();
    return out.str();
  }

 private:
  const Graph& g_;
  std::map<std::string, std::string> labels_;
  int generated_ = 0;

  std::string iri(const std::string& value) {
    std::string best_label;
    std::size_t best_len = 0;
    bool found = false;
    for (const auto& [label, ns] : labels_) {
      if (ns.size() >= best_len && value.compare(0, ns.size(), ns) == 0 &&
          valid_local(std::string_view(value).substr(ns.size()))) {
        if (!found || ns.size() > best_len) {
          best_label = label;
          best_len = ns.size();
          found = true;
        }
      }
    }
    if (found) return best_label + ":" + value.substr(best_len);

    auto cut = value.find_last_of("#/");
    if (cut != std::string::npos && cut + 1 < value.size() && is_absolute_iri(value)) {
      std::string ns = value.substr(0, cut + 1);
      std::string local = value.substr(cut + 1);
      if (valid_local(local) && (std::isalpha(static_cast<unsigned char>(local[0])) || local[0] == '_')) {
        std::string label;
        do {
          label = "ns" + std::to_string(++generated_);
        } while (labels_.count(label));
        labels_[label] = ns;
        return label + ":" + local;
      }
    }
    return "<" + value + ">";
  }

  std::string term(const Term& t) {
    switch (t.kind) {
      case TermKind::Iri: return iri(t.value);
      case TermKind::BlankNode: return "_:" + t.value;
      case TermKind::Literal: return literal(t);
    }
    return {};
  }

  std::string literal(const Term& t) {
    static const std::regex kInteger("[+-]?[0-9]+");
    static const std::regex kDecimal("[+-]?[0-9]*\\.[0-9]+");
    static const std::regex kDouble("[+-]?([0-9]+\\.[0-9]*|\\.[0-9]+|[0-9]+)[eE][+-]?[0-9]+");
    if (t.language.empty()) {
      if (t.datatype == vocab::xsd("integer") && std::regex_match(t.value, kInteger)) return t.value;
      if (t.datatype == vocab::xsd("decimal") && std::regex_match(t.value, kDecimal)) return t.value;
      if (t.datatype == vocab::xsd("double") && std::regex_match(t.value, kDouble)) return t.value;
      if (t.datatype == vocab::xsd("boolean") && (t.value == "true" || t.value == "false")) return t.value;
    }
    std::string out = "\"" + escape_string(t.value) + "\"";
    if (!t.language.empty()) return out + "@" + t.language;
    if (!t.datatype.empty() && t.datatype != vocab::kXsdString) out += "^^" + iri(t.datatype);
    return out;
  }

  void write_subject(std::ostringstream& out, const std::vector<const Triple*>& block) {
    out << term(block.front()->subject);
    // rdf:type first, then remaining predicates in triple order.
    std::vector<const Triple*> ordered;
    for (const auto* t : block) {
      if (t->predicate.value == vocab::kType) ordered.push_back(t);
    }
    for (const auto* t : block) {
      if (t->predicate.value != vocab::kType) ordered.push_back(t);
    }
    const Term* pred = nullptr;
    for (std::size_t i = 0; i < ordered.size(); ++i) {
      const Triple& t = *ordered[i];
      if (pred && *pred == t.predicate) {
        out << ", " << term(t.object);
        continue;
      }
      out << (pred ? " ;\n    " : " ");
      out << (t.predicate.value == vocab::kType ? std::string("a") : term(t.predicate)) << " "
          << term(t.object);
      pred = &t.predicate;
    }
    out << " .\n\n";
  }
};

}  // namespace

std::string serialize_turtle(const Graph& g) { return Writer(g).run(); }

}  // namespace capgen::rdf
