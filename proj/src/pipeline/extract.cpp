#include "capgen/pipeline/extract.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

#include "capgen/pipeline/repair.hpp"
#include "capgen/rdf/turtle.hpp"

namespace capgen::pipeline {

namespace {

struct Line {
  std::size_t begin;  // offset of the first character
  std::size_t end;    // offset one past the newline, or the text end
  std::string_view text;
};

std::vector<Line> split_lines(const std::string& s) {
  std::vector<Line> lines;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t nl = s.find('\n', pos);
    std::size_t end = nl == std::string::npos ? s.size() : nl + 1;
    std::size_t text_end = nl == std::string::npos ? s.size() : nl;
    lines.push_back({pos, end, std::string_view(s).substr(pos, text_end - pos)});
    pos = end;
  }
  return lines;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool istarts_with(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) != std::tolower(static_cast<unsigned char>(prefix[i]))) {
      return false;
    }
  }
  return true;
}

bool is_directive(std::string_view line) {
  auto t = trim(line);
  return t.rfind("@prefix", 0) == 0 || t.rfind("@base", 0) == 0 || istarts_with(t, "prefix ") ||
         istarts_with(t, "base ");
}

bool is_fence(std::string_view line) { return trim(line).rfind("```", 0) == 0; }

bool statement_end(std::string_view line) {
  auto t = trim(line);
  return !t.empty() && t.back() == '.';
}

// Parses with no issue other than repairable missing prefixes, and yields at
// least one triple.
bool acceptable(std::string_view text) {
  auto parsed = rdf::parse_turtle(text);
  if (parsed.ok()) return !parsed.graph->empty();
  const auto& table = repair_prefix_table();
  for (const auto& issue : parsed.issues) {
    if (issue.category != rdf::IssueCategory::MissingPrefix || !table.count(issue.offending_token)) return false;
  }
  return !parsed.partial.empty();
}

struct Span {
  std::size_t begin;
  std::size_t end;
};

// Longest acceptable line range starting at lines[start], as a byte span.
std::optional<Span> longest_region(const std::string& text, const std::vector<Line>& lines, std::size_t start) {
  for (std::size_t e = lines.size(); e > start; --e) {
    if (!statement_end(lines[e - 1].text)) continue;
    std::size_t b = lines[start].begin;
    std::size_t end = lines[e - 1].end;
    if (acceptable(std::string_view(text).substr(b, end - b))) return Span{b, end};
  }
  return std::nullopt;
}

struct Regions {
  std::vector<Span> documents;
  bool fenced = false;
};

Regions fenced_regions(const std::string& text, const std::vector<Line>& lines) {
  Regions r;
  std::optional<Span> fallback;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!is_fence(lines[i].text)) continue;
    std::size_t j = i + 1;
    while (j < lines.size() && !is_fence(lines[j].text)) ++j;
    if (j == lines.size()) break;
    Span body{lines[i].end, lines[j].begin};
    if (acceptable(std::string_view(text).substr(body.begin, body.end - body.begin))) {
      r.documents.push_back(body);
    } else if (!fallback && body.end > body.begin) {
      fallback = body;
    }
    i = j;
  }
  // A fenced block that does not parse is still the ontology; repair reports
  // what is wrong with it.
  if (r.documents.empty() && fallback) r.documents.push_back(*fallback);
  r.fenced = !r.documents.empty();
  return r;
}

Regions unfenced_regions(const std::string& text, const std::vector<Line>& lines) {
  Regions r;
  std::optional<std::size_t> first_directive;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!is_directive(lines[i].text)) continue;
    if (!first_directive) first_directive = i;
    if (auto span = longest_region(text, lines, i)) {
      r.documents.push_back(*span);
      while (i + 1 < lines.size() && lines[i + 1].begin < span->end) ++i;
    }
  }
  if (r.documents.empty() && first_directive) {
    r.documents.push_back(Span{lines[*first_directive].begin, text.size()});
  }
  return r;
}

}  // namespace

bool parses_after_prefix_repair(std::string_view text) { return acceptable(text); }

ExtractionResult extract_ontology(const std::string& response) {
  auto lines = split_lines(response);
  Regions regions = fenced_regions(response, lines);
  if (regions.documents.empty()) regions = unfenced_regions(response, lines);
  if (regions.documents.empty() && acceptable(response)) regions.documents.push_back(Span{0, response.size()});
  if (regions.documents.empty()) throw ExtractionError("response contains no Turtle document");

  ExtractionResult out;
  out.fenced = regions.fenced;
  const Span& main = regions.documents.front();
  out.leading_prose = response.substr(0, main.begin);
  out.ontology_text = response.substr(main.begin, main.end - main.begin);
  std::size_t pos = main.end;
  for (std::size_t i = 1; i < regions.documents.size(); ++i) {
    const Span& d = regions.documents[i];
    out.trailing_prose += response.substr(pos, d.begin - pos);
    out.extra_documents.push_back(response.substr(d.begin, d.end - d.begin));
    pos = d.end;
  }
  out.trailing_prose += response.substr(pos);
  return out;
}

}  // namespace capgen::pipeline
