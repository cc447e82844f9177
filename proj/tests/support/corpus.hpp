#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "capgen/rdf/turtle.hpp"

namespace capgen::testing {

inline std::string source_path(const std::string& relative) { return std::string(CAPGEN_SOURCE_DIR) + "/" + relative; }

inline std::string read_text(const std::string& relative) {
  std::ifstream in(source_path(relative), std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + relative);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline rdf::Graph load_graph(const std::string& relative) {
  auto r = rdf::parse_turtle(read_text(relative));
  if (!r.ok()) throw std::runtime_error("cannot parse " + relative + ": " + r.issues.front().message);
  return *r.graph;
}

inline rdf::Graph parse_or_throw(const std::string& doc) {
  auto r = rdf::parse_turtle(doc);
  if (!r.ok()) throw std::runtime_error(r.issues.front().message);
  return *r.graph;
}

inline const char* kCapabilities[] = {"C1", "C2", "C3", "C4", "C5", "C6", "C7"};

inline rdf::Graph gold(const std::string& id) { return load_graph("corpus/capabilities/" + id + "/gold.ttl"); }

}  // namespace capgen::testing
