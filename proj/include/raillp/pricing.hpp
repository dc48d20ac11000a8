#pragma once

#include <optional>
#include <vector>

#include "raillp/cgn.hpp"
#include "raillp/master.hpp"

namespace raillp {

// Pareto dominance on (cost, duration): true iff a is <= in both and < in at
// least one. Equal labels do not dominate each other (deduplicated aside).
bool dominates(double cost_a, int dur_a, double cost_b, int dur_b);

struct PricedColumn {
  int demand = -1;
  std::vector<int> arcs;
  int minutes = 0;
  double reduced_cost = 0.0;
};

// Demands sharing a source node, priced in one search.
struct SourceGroup {
  DemandKind kind = DemandKind::kPassenger;
  int origin = -1;
  int period = -1;  // -1 for freight groups
  std::vector<int> demand_idx;
};

std::vector<SourceGroup> group_sources(const std::vector<RoutedDemand>& demands);

struct PricingProblem {
  const ChangeGoNetwork* cgn = nullptr;
  const std::vector<RoutedDemand>* demands = nullptr;
  const LineMask* mask = nullptr;    // optional
  int elementary_cutoff_nodes = 512; // visited-set tracking below this size
};

// Prices every demand of the group against the duals. Returns, for each
// member demand with margin phi - alpha above tolerance, the best
// duration-feasible column if its reduced cost exceeds tolerance.
// Phase 1 is a duration-blind Dijkstra whose minimum cost certifies
// "no column" or, when its path already meets the duration cap, answers
// outright; phase 2 is label-correcting over (cost, duration) labels.
std::vector<PricedColumn> price_source(const PricingProblem& prob,
                                       const SourceGroup& group,
                                       const DualPrices& duals);

}  // namespace raillp
