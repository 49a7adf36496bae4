#pragma once

#include <optional>
#include <vector>

#include "seriation/graph.hpp"
#include "seriation/ordering.hpp"

namespace seriation {

enum class IntervalStatus { UnitInterval, NotUnitInterval, Disconnected };

struct IntervalOrderResult {
  IntervalStatus status = IntervalStatus::NotUnitInterval;
  std::optional<Ordering> ordering;  // present iff status == UnitInterval
};

// Lexicographic BFS visit order; among vertices with equal labels the one
// earliest in initial_tiebreak wins. Passing the reverse of a previous
// sweep gives the usual LexBFS+ sweep.
std::vector<int> lexbfs(const Graph& g, const std::vector<int>& initial_tiebreak);

// Three LexBFS sweeps followed by an explicit Robinsonian verification of
// the final order; twin vertices (equal closed neighborhoods) are put in
// ascending id order inside their block.
IntervalOrderResult recognize_unit_interval(const Graph& g);

// True iff, with unit diagonal, every row of the permuted adjacency has
// contiguous support containing the diagonal.
bool is_robinsonian_under(const Graph& g, const Ordering& ordering);

// Exhaustive oracle, n <= 9: any order passing is_robinsonian_under.
std::optional<Ordering> brute_force_interval_order(const Graph& g);

}  // namespace seriation
