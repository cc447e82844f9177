// Writes synthetic replay fixtures whose error counts match a target table.
#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"

#include "capgen/faults/faults.hpp"
#include "capgen/pipeline/pipeline.hpp"

namespace fs = std::filesystem;
using namespace capgen;

namespace {

struct Target {
  const char* capability;
  const char* technique;
  int s, c, h, i;
};

// Absolute error counts per cell.
const Target kGpt[] = {
    {"C1", "zero", 0, 2, 5, 7},   {"C1", "one", 0, 0, 1, 1},   {"C1", "few", 0, 0, 0, 0},
    {"C2", "zero", 0, 9, 8, 16},  {"C2", "one", 0, 0, 3, 0},   {"C2", "few", 0, 0, 1, 0},
    {"C3", "zero", 0, 2, 5, 21},  {"C3", "one", 0, 0, 4, 11},  {"C3", "few", 1, 0, 2, 5},
    {"C4", "zero", 1, 3, 1, 36},  {"C4", "one", 0, 0, 2, 15},  {"C4", "few", 1, 2, 0, 13},
    {"C5", "zero", 0, 3, 4, 24},  {"C5", "one", 0, 0, 0, 5},   {"C5", "few", 1, 0, 1, 3},
    {"C6", "zero", 0, 4, 5, 25},  {"C6", "one", 0, 0, 0, 6},   {"C6", "few", 0, 0, 0, 0},
    {"C7", "zero", 0, 2, 5, 66},  {"C7", "one", 0, 0, 0, 30},  {"C7", "few", 1, 3, 4, 41},
};

const Target kClaude[] = {
    {"C1", "zero", 0, 0, 5, 8},   {"C1", "one", 0, 0, 0, 0},   {"C1", "few", 0, 0, 0, 0},
    {"C2", "zero", 0, 0, 8, 14},  {"C2", "one", 0, 0, 11, 0},  {"C2", "few", 0, 0, 0, 0},
    {"C3", "zero", 0, 0, 2, 27},  {"C3", "one", 0, 0, 0, 0},   {"C3", "few", 0, 0, 0, 0},
    {"C4", "zero", 0, 5, 7, 50},  {"C4", "one", 0, 0, 0, 0},   {"C4", "few", 0, 0, 0, 6},
    {"C5", "zero", 0, 0, 0, 24},  {"C5", "one", 0, 2, 2, 1},   {"C5", "few", 0, 2, 2, 2},
    {"C6", "zero", 0, 0, 3, 17},  {"C6", "one", 0, 0, 1, 0},   {"C6", "few", 0, 0, 0, 0},
    {"C7", "zero", 0, 0, 8, 81},  {"C7", "one", 0, 0, 0, 8},   {"C7", "few", 0, 0, 0, 12},
};

const char* kExtraDocument =
    "@prefix : <http://example.org/capabilities/sorting#> .\n"
    "@prefix cask: <http://www.w3id.org/hsu-aut/cask#> .\n"
    "@prefix vdi3682: <http://www.w3id.org/hsu-aut/VDI3682#> .\n"
    "\n"
    ":Sorting a cask:Capability ;\n"
    "    vdi3682:hasInput :Items ;\n"
    "    vdi3682:hasOutput :SortedItems .\n"
    "\n"
    ":Items a vdi3682:Product .\n"
    ":SortedItems a vdi3682:Product .\n";

std::string wrap(const std::string& provider, const std::string& name, const std::string& technique,
                 const std::string& ontology, std::mt19937_64& rng) {
  int style = std::uniform_int_distribution<int>(0, 3)(rng);
  std::string text;
  if (provider == "claude") {
    text = "Here is the ontology for the " + name + " capability:\n\n```turtle\n" + ontology + "```\n\n";
    text += "The capability is linked to its inputs and outputs, and every data element has a type and an "
            "instance description.\n";
    if (technique != "zero" && style < 2) {
      text += "\nTask description:\nA sorting capability takes unsorted items and returns them in order.\n\n"
              "Ontology:\n```turtle\n" +
              std::string(kExtraDocument) + "```\n";
    }
    return text;
  }
  switch (style) {
    case 0: return "```turtle\n" + ontology + "```\n";
    case 1: return "```\n" + ontology + "```\n\nThis ontology describes the " + name + " capability.\n";
    case 2: return "Below is the capability ontology.\n\n" + ontology + "\nLet me know if you need changes.\n";
    default: return ontology;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Write replay fixtures with known error counts."};
  std::string corpus = "corpus";
  std::string out = "fixtures";
  std::uint64_t seed = 20240601;
  app.add_option("--corpus", corpus, "Corpus directory")->capture_default_str();
  app.add_option("--out", out, "Fixture directory")->capture_default_str();
  app.add_option("--seed", seed, "Random seed")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  auto bench = pipeline::load_workbench(corpus);
  std::mt19937_64 rng(seed);
  int written = 0;
  for (const auto& [provider, targets] : {std::pair{"gpt", kGpt}, std::pair{"claude", kClaude}}) {
    fs::create_directories(fs::path(out) / provider);
    for (std::size_t n = 0; n < 21; ++n) {
      const Target& t = targets[n];
      std::string technique = t.technique;
      bool zero = technique == "zero";
      faults::FaultPlan plan{t.s, t.c, t.h, t.i - (zero ? 1 : 0), zero};
      std::string name = bench.corpus.capability(t.capability).name;
      std::string text;
      scoring::ErrorCounts got;
      bool matched = false;
      for (int attempt = 0; attempt < 100 && !matched; ++attempt) {
        try {
          auto f = faults::inject(bench.gold_for(t.capability), bench.index, bench.shapes, plan, rng);
          text = wrap(provider, name, technique, f.text, rng);
          auto e = pipeline::evaluate(bench, t.capability, pipeline::extract_ontology(text).ontology_text);
          got = e.counts;
          matched = got.syntax == t.s && got.contradiction == t.c && got.hallucination == t.h &&
                    got.incomplete == t.i;
        } catch (const faults::FaultError& e) {
          std::cerr << provider << " " << t.capability << "-" << technique << ": " << e.what() << "\n";
          return 1;
        }
      }
      if (!matched) {
        std::cerr << provider << " " << t.capability << "-" << technique << ": got " << got.syntax << ","
                  << got.contradiction << "," << got.hallucination << "," << got.incomplete << "\n";
        return 1;
      }
      fs::path path = fs::path(out) / provider / (std::string(t.capability) + "-" + technique + ".txt");
      std::ofstream(path, std::ios::binary) << text;
      ++written;
    }
  }
  std::cout << "wrote " << written << " fixtures to " << out << "\n";
  return 0;
}
