#pragma once

#include <cstdint>
#include <stdexcept>

#include "capgen/rdf/graph.hpp"

namespace capgen::rdf {

class SearchBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultIsomorphismBudget = 1'000'000;

// True iff a blank-node bijection maps a onto b exactly. Candidate mappings
// are pruned by colour refinement; each tentative assignment counts against
// the budget and SearchBudgetExceeded is thrown once it is spent.
bool graph_isomorphic(const Graph& a, const Graph& b,
                      std::uint64_t budget = kDefaultIsomorphismBudget);

}  // namespace capgen::rdf
