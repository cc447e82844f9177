#include "capgen/report/report.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <set>
#include <sstream>

namespace capgen::report {

namespace fs = std::filesystem;
using nlohmann::json;
using scoring::Rational;

namespace {

int technique_rank(const std::string& t) {
  if (t == "zero-shot") return 0;
  if (t == "one-shot") return 1;
  if (t == "few-shot") return 2;
  return 3;
}

// "C10" sorts after "C9".
std::pair<std::size_t, std::string> capability_rank(const std::string& id) {
  return {id.size(), id};
}

std::string read(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ReportError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ReportError("cannot write " + path.string());
  out << text;
}

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string money(double v) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(4) << v;
  return ss.str();
}

json exact(const Rational& r) { return json{{"exact", r.str()}, {"value", r.to_double()}}; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::vector<std::string> providers_of(const std::vector<Cell>& cells) {
  std::vector<std::string> out;
  for (const auto& c : cells) {
    if (std::find(out.begin(), out.end(), c.provider) == out.end()) out.push_back(c.provider);
  }
  return out;
}

std::vector<std::string> techniques_of(const std::vector<Cell>& cells) {
  std::set<std::pair<int, std::string>> ranked;
  for (const auto& c : cells) ranked.emplace(technique_rank(c.technique), c.technique);
  std::vector<std::string> out;
  for (const auto& [rank, t] : ranked) out.push_back(t);
  return out;
}

std::vector<std::string> capabilities_of(const std::vector<Cell>& cells) {
  std::set<std::pair<std::size_t, std::string>> ranked;
  for (const auto& c : cells) ranked.insert(capability_rank(c.capability));
  std::vector<std::string> out;
  for (const auto& [size, id] : ranked) out.push_back(id);
  return out;
}

const Cell* find_cell(const std::vector<Cell>& cells, const std::string& provider, const std::string& capability,
                      const std::string& technique) {
  for (const auto& c : cells) {
    if (c.provider == provider && c.capability == capability && c.technique == technique) return &c;
  }
  return nullptr;
}

}  // namespace

Cell cell_from_json(const json& j, const std::string& run_dir) {
  Cell c;
  try {
    c.provider = j.at("provider").get<std::string>();
    c.model = j.value("model", std::string{});
    c.capability = j.at("capability").get<std::string>();
    c.technique = j.at("technique").get<std::string>();
    c.mode = j.value("mode", std::string{});
    c.status = j.at("status").get<std::string>();
    c.failed_stage = j.value("failed_stage", std::string{});
    c.failure = j.value("failure", std::string{});
    if (j.contains("counts")) c.counts = j.at("counts").get<scoring::ErrorCounts>();
    c.completed = j.contains("output_tokens");
    c.cost = j.value("cost", 0.0);
    c.input_tokens = j.value("input_tokens", 0L);
    c.output_tokens = j.value("output_tokens", 0L);
  } catch (const json::exception& e) {
    throw ReportError(run_dir + "/counts.json: " + e.what());
  }
  if (c.status == "ok" && !c.counts) throw ReportError(run_dir + "/counts.json: ok cell without counts");
  c.run_dir = run_dir;
  return c;
}

std::vector<Cell> load_cells(const fs::path& run_root) {
  if (!fs::is_directory(run_root)) throw ReportError("no run directory " + run_root.string());
  std::vector<Cell> cells;
  std::vector<fs::path> providers;
  for (const auto& entry : fs::directory_iterator(run_root)) {
    if (entry.is_directory()) providers.push_back(entry.path());
  }
  std::sort(providers.begin(), providers.end());
  for (const auto& p : providers) {
    for (const auto& entry : fs::directory_iterator(p)) {
      fs::path counts = entry.path() / "counts.json";
      if (!fs::exists(counts)) continue;
      json j;
      try {
        j = json::parse(read(counts));
      } catch (const json::exception& e) {
        throw ReportError(counts.string() + ": " + e.what());
      }
      cells.push_back(cell_from_json(j, fs::relative(entry.path(), run_root).generic_string()));
    }
  }
  if (cells.empty()) throw ReportError("no counts.json files under " + run_root.string());
  std::stable_sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    return std::make_tuple(a.provider, capability_rank(a.capability), technique_rank(a.technique)) <
           std::make_tuple(b.provider, capability_rank(b.capability), technique_rank(b.technique));
  });
  return cells;
}

Report build_report(std::vector<Cell> cells) {
  Report r;
  r.cells = std::move(cells);
  for (const auto& provider : providers_of(r.cells)) {
    for (const auto& technique : techniques_of(r.cells)) {
      MeanRow row{provider, technique, std::nullopt, 0, 0};
      std::vector<scoring::CapabilityCounts> ok;
      for (const auto& c : r.cells) {
        if (c.provider != provider || c.technique != technique) continue;
        ++row.cells;
        if (c.counts) {
          ok.push_back({c.capability, *c.counts});
        } else {
          ++row.failed;
        }
      }
      if (row.cells == 0) continue;
      if (!ok.empty()) row.mean_error = scoring::aggregate(technique, provider, ok).mean_error;
      r.means.push_back(row);
    }
    CostRow cost{provider, 0, 0, 0};
    for (const auto& c : r.cells) {
      if (c.provider != provider || !c.completed) continue;
      ++cost.prompts;
      cost.total += c.cost;
    }
    if (cost.prompts > 0) cost.mean_per_prompt = cost.total / cost.prompts;
    r.costs.push_back(cost);
  }
  return r;
}

std::string render_markdown(const Report& r) {
  std::ostringstream md;
  auto providers = providers_of(r.cells);
  auto techniques = techniques_of(r.cells);
  auto capabilities = capabilities_of(r.cells);

  md << "# Capability ontology generation report\n\n";
  md << "Relative error scores are error counts divided by the number of triples in the gold ontology. "
        "Sigma is the unrounded sum of the four scores, rounded once for display.\n";

  for (const auto& provider : providers) {
    std::string model;
    for (const auto& c : r.cells) {
      if (c.provider == provider && !c.model.empty()) model = c.model;
    }
    md << "\n## " << provider << (model.empty() ? "" : " (" + model + ")") << "\n\n";
    md << "| Capability | Technique | Triples | S | C | H | I | Sigma | Completeness |\n";
    md << "|---|---|---:|---:|---:|---:|---:|---:|---:|\n";
    for (const auto& c : r.cells) {
      if (c.provider != provider) continue;
      md << "| " << c.capability << " | " << c.technique << " | ";
      if (!c.counts) {
        md << " | failed (" << c.failed_stage << ") | | | | | |\n";
        continue;
      }
      auto s = scoring::relative_scores(*c.counts);
      md << c.counts->triples << " | " << s.syntax.display() << " | " << s.contradiction.display() << " | "
         << s.hallucination.display() << " | " << s.incomplete.display() << " | " << s.sum.display() << " | "
         << scoring::completeness(s.incomplete).display() << " |\n";
    }
  }

  md << "\n## Mean error by technique\n\n| Provider |";
  for (const auto& t : techniques) md << " " << t << " |";
  md << "\n|---|";
  for (std::size_t i = 0; i < techniques.size(); ++i) md << "---:|";
  md << "\n";
  for (const auto& provider : providers) {
    md << "| " << provider << " |";
    for (const auto& t : techniques) {
      auto it = std::find_if(r.means.begin(), r.means.end(),
                             [&](const MeanRow& m) { return m.provider == provider && m.technique == t; });
      std::string value = "n/a";
      if (it != r.means.end() && it->mean_error) {
        value = it->mean_error->display();
        if (it->failed > 0) value += " (" + std::to_string(it->cells - it->failed) + "/" + std::to_string(it->cells) + ")";
      }
      md << " " << value << " |";
    }
    md << "\n";
  }

  md << "\n## Completeness by capability\n\n| Capability |";
  for (const auto& p : providers) {
    for (const auto& t : techniques) md << " " << p << " " << t << " |";
  }
  md << "\n|---|";
  for (std::size_t i = 0; i < providers.size() * techniques.size(); ++i) md << "---:|";
  md << "\n";
  for (const auto& cap : capabilities) {
    md << "| " << cap << " |";
    for (const auto& p : providers) {
      for (const auto& t : techniques) {
        const Cell* c = find_cell(r.cells, p, cap, t);
        std::string value = "n/a";
        if (c && c->counts) value = scoring::completeness(scoring::relative_scores(*c->counts).incomplete).display();
        md << " " << value << " |";
      }
    }
    md << "\n";
  }

  md << "\n## Cost\n\n| Provider | Prompts | Total | Mean per prompt |\n|---|---:|---:|---:|\n";
  for (const auto& c : r.costs) {
    md << "| " << c.provider << " | " << c.prompts << " | " << money(c.total) << " | " << money(c.mean_per_prompt)
       << " |\n";
  }

  bool any_failed = std::any_of(r.cells.begin(), r.cells.end(), [](const Cell& c) { return !c.counts; });
  if (any_failed) {
    md << "\n## Failed experiments\n\n";
    for (const auto& c : r.cells) {
      if (c.counts) continue;
      md << "- " << c.provider << " " << c.capability << " " << c.technique << ": " << c.failed_stage << ": "
         << c.failure << "\n";
    }
  }
  return md.str();
}

std::string render_csv(const Report& r) {
  std::ostringstream csv;
  csv << "provider,model,capability,technique,status,failed_stage,triples,S,C,H,I,S_rel,C_rel,H_rel,I_rel,sum,"
         "completeness,cost,run_dir\n";
  for (const auto& c : r.cells) {
    csv << csv_field(c.provider) << "," << csv_field(c.model) << "," << c.capability << "," << c.technique << ","
        << c.status << "," << c.failed_stage << ",";
    if (c.counts) {
      auto s = scoring::relative_scores(*c.counts);
      csv << c.counts->triples << "," << c.counts->syntax << "," << c.counts->contradiction << ","
          << c.counts->hallucination << "," << c.counts->incomplete << "," << shortest(s.syntax.to_double()) << ","
          << shortest(s.contradiction.to_double()) << "," << shortest(s.hallucination.to_double()) << ","
          << shortest(s.incomplete.to_double()) << "," << shortest(s.sum.to_double()) << ","
          << shortest(scoring::completeness(s.incomplete).to_double()) << ",";
    } else {
      csv << ",,,,,,,,,,,";
    }
    csv << shortest(c.cost) << "," << csv_field(c.run_dir) << "\n";
  }
  return csv.str();
}

json render_json(const Report& r, const json& metadata) {
  json cells = json::array();
  for (const auto& c : r.cells) {
    json j{{"provider", c.provider},     {"model", c.model},   {"capability", c.capability},
           {"technique", c.technique},   {"status", c.status}, {"run_dir", c.run_dir},
           {"cost", c.cost},             {"input_tokens", c.input_tokens},
           {"output_tokens", c.output_tokens}};
    if (c.counts) {
      auto s = scoring::relative_scores(*c.counts);
      j["counts"] = *c.counts;
      j["scores"] = s;
      j["completeness"] = exact(scoring::completeness(s.incomplete));
    } else {
      j["failed_stage"] = c.failed_stage;
      j["failure"] = c.failure;
    }
    cells.push_back(j);
  }
  json means = json::array();
  for (const auto& m : r.means) {
    json j{{"provider", m.provider}, {"technique", m.technique}, {"cells", m.cells}, {"failed", m.failed}};
    j["mean_error"] = m.mean_error ? exact(*m.mean_error) : json(nullptr);
    means.push_back(j);
  }
  json costs = json::array();
  for (const auto& c : r.costs) {
    costs.push_back({{"provider", c.provider},
                     {"prompts", c.prompts},
                     {"total", c.total},
                     {"mean_per_prompt", c.mean_per_prompt}});
  }
  return json{{"metadata", metadata}, {"cells", cells}, {"means", means}, {"costs", costs}};
}

std::string corpus_digest(const fs::path& root) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw ReportError("SHA-256 unavailable");
  for (const auto& f : files) {
    std::string name = fs::relative(f, root).generic_string();
    std::string content = read(f);
    EVP_DigestUpdate(ctx.get(), name.data(), name.size() + 1);  // with the terminating NUL
    EVP_DigestUpdate(ctx.get(), content.data(), content.size());
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

Report write_report(const fs::path& run_root, const json& metadata) {
  Report r = build_report(load_cells(run_root));
  write(run_root / "report.md", render_markdown(r));
  write(run_root / "report.csv", render_csv(r));
  write(run_root / "report.json", render_json(r, metadata).dump(2) + "\n");
  return r;
}

}  // namespace capgen::report
