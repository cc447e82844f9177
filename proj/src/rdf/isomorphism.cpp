#include "capgen/rdf/isomorphism.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace capgen::rdf {

namespace {

struct Side {
  std::vector<Triple> ground;
  std::vector<Triple> open;  // triples mentioning at least one blank node
  std::vector<std::string> blanks;
  std::map<std::string, std::size_t> colour;
};

bool mentions_blank(const Triple& t) { return t.subject.is_blank() || t.object.is_blank(); }

Side split(const Graph& g) {
  Side s;
  std::set<std::string> blanks;
  for (const auto& t : g.triples()) {
    if (mentions_blank(t)) {
      s.open.push_back(t);
      if (t.subject.is_blank()) blanks.insert(t.subject.value);
      if (t.object.is_blank()) blanks.insert(t.object.value);
    } else {
      s.ground.push_back(t);
    }
  }
  s.blanks.assign(blanks.begin(), blanks.end());
  return s;
}

// Colour refinement over both graphs at once so colour ids are comparable.
void refine(Side& a, Side& b) {
  std::map<std::string, std::size_t> palette;
  auto signature = [](const Side& side, const std::string& node, bool initial) {
    std::vector<std::string> parts;
    for (const auto& t : side.open) {
      auto render = [&](const Term& other) {
        if (!other.is_blank()) return other.to_string();
        if (initial) return std::string("_");
        return "_" + std::to_string(side.colour.at(other.value));
      };
      if (t.subject.is_blank() && t.subject.value == node) {
        parts.push_back("out " + t.predicate.value + " " +
                        (t.object.is_blank() && t.object.value == node ? std::string("self") : render(t.object)));
      }
      if (t.object.is_blank() && t.object.value == node && !(t.subject.is_blank() && t.subject.value == node)) {
        parts.push_back("in " + t.predicate.value + " " + render(t.subject));
      }
    }
    std::sort(parts.begin(), parts.end());
    std::string sig;
    if (!initial) sig = std::to_string(side.colour.at(node)) + "|";
    for (const auto& p : parts) sig += p + "\n";
    return sig;
  };

  for (bool initial = true;; initial = false) {
    std::map<std::string, std::string> sa, sb;
    for (const auto& n : a.blanks) sa[n] = signature(a, n, initial);
    for (const auto& n : b.blanks) sb[n] = signature(b, n, initial);
    palette.clear();
    std::set<std::string> sigs;
    for (const auto& [n, s] : sa) sigs.insert(s);
    for (const auto& [n, s] : sb) sigs.insert(s);
    for (const auto& s : sigs) palette.emplace(s, palette.size());
    std::size_t before = 0;
    {
      std::set<std::size_t> distinct;
      for (const auto& [n, c] : a.colour) distinct.insert(c);
      for (const auto& [n, c] : b.colour) distinct.insert(c);
      before = distinct.size();
    }
    for (const auto& [n, s] : sa) a.colour[n] = palette.at(s);
    for (const auto& [n, s] : sb) b.colour[n] = palette.at(s);
    if (!initial && palette.size() == before) break;
  }
}

class Search {
 public:
  Search(const Side& a, const Side& b, std::uint64_t budget)
      : a_(a), b_(b), budget_(budget), target_(b.open.begin(), b.open.end()) {
    std::map<std::string, std::set<std::string>> adjacent;
    for (const auto& t : a_.open) {
      if (t.subject.is_blank()) touching_[t.subject.value].push_back(&t);
      if (t.object.is_blank() && t.object.value != t.subject.value) touching_[t.object.value].push_back(&t);
      if (t.subject.is_blank() && t.object.is_blank()) {
        adjacent[t.subject.value].insert(t.object.value);
        adjacent[t.object.value].insert(t.subject.value);
      }
    }
    std::map<std::size_t, std::size_t> freq;
    for (const auto& [n, c] : b_.colour) ++freq[c];
    // Greedy order: prefer nodes linked to already-placed ones, then the
    // rarest colour, so partial mappings are checked as early as possible.
    std::set<std::string> placed;
    while (order_.size() < a_.blanks.size()) {
      const std::string* best = nullptr;
      std::size_t best_links = 0;
      for (const auto& n : a_.blanks) {
        if (placed.count(n)) continue;
        std::size_t links = 0;
        for (const auto& m : adjacent[n]) links += placed.count(m);
        if (!best || links > best_links ||
            (links == best_links && freq[a_.colour.at(n)] < freq[a_.colour.at(*best)])) {
          best = &n;
          best_links = links;
        }
      }
      placed.insert(*best);
      order_.push_back(*best);
    }
  }

  bool run() { return assign(0); }

 private:
  const Side& a_;
  const Side& b_;
  std::uint64_t budget_;
  std::uint64_t spent_ = 0;
  std::set<Triple> target_;
  std::vector<std::string> order_;
  std::map<std::string, std::vector<const Triple*>> touching_;
  std::map<std::string, std::string> mapping_;
  std::set<std::string> used_;

  Term map_term(const Term& t) const {
    if (!t.is_blank()) return t;
    auto it = mapping_.find(t.value);
    return it == mapping_.end() ? Term{} : Term::blank(it->second);
  }

  bool consistent(const std::string& node) const {
    for (const Triple* t : touching_.at(node)) {
      bool complete = (!t->subject.is_blank() || mapping_.count(t->subject.value)) &&
                      (!t->object.is_blank() || mapping_.count(t->object.value));
      if (!complete) continue;
      Triple mapped{map_term(t->subject), t->predicate, map_term(t->object)};
      if (!target_.count(mapped)) return false;
    }
    return true;
  }

  bool assign(std::size_t i) {
    if (i == order_.size()) return true;
    const std::string& node = order_[i];
    std::size_t colour = a_.colour.at(node);
    for (const auto& candidate : b_.blanks) {
      if (used_.count(candidate) || b_.colour.at(candidate) != colour) continue;
      if (++spent_ > budget_) {
        throw SearchBudgetExceeded("blank-node isomorphism search exceeded " + std::to_string(budget_) +
                                   " candidate mappings");
      }
      mapping_[node] = candidate;
      used_.insert(candidate);
      if ((!touching_.count(node) || consistent(node)) && assign(i + 1)) return true;
      mapping_.erase(node);
      used_.erase(candidate);
    }
    return false;
  }
};

}  // namespace

bool graph_isomorphic(const Graph& a, const Graph& b, std::uint64_t budget) {
  if (a.size() != b.size()) return false;
  Side sa = split(a);
  Side sb = split(b);
  if (sa.ground != sb.ground) return false;
  if (sa.open.size() != sb.open.size() || sa.blanks.size() != sb.blanks.size()) return false;
  if (sa.blanks.empty()) return true;
  refine(sa, sb);
  std::map<std::size_t, int> histogram;
  for (const auto& [n, c] : sa.colour) ++histogram[c];
  for (const auto& [n, c] : sb.colour) --histogram[c];
  for (const auto& [c, count] : histogram) {
    if (count != 0) return false;
  }
  // Injective and every open triple of a maps into b; equal sizes make it onto.
  return Search(sa, sb, budget).run();
}

}  // namespace capgen::rdf
