#include "raillp/master.hpp"

#include <algorithm>
#include <map>

namespace raillp {

namespace {

// Direction of a route's traversal of track e: 0 = (u -> v), 1 = (v -> u).
int traversal_dir(const PhysicalNetwork& net, const LineRoute& route,
                  int track_pos) {
  const Track& t = net.tracks[route.tracks[track_pos]];
  return route.path[track_pos] == t.u ? 0 : 1;
}

}  // namespace

Master::Master(const PhysicalNetwork& net, const LinePool& pool,
               const ChangeGoNetwork& cgn,
               const std::vector<RoutedDemand>& demands, PlanPolicy plan,
               const ModelParams& params)
    : net_(&net),
      pool_(&pool),
      cgn_(&cgn),
      demands_(&demands),
      plan_(plan),
      params_(params) {
  const int n_periods = static_cast<int>(net.periods.size());

  // Throughput cap of track e in period t.
  auto cap_of = [&](int /*e*/, int t) {
    return params_.throughput_per_hour * net.periods[t].hours();
  };
  // Structural frequency cap of a line: tightest throughput cap along its
  // route during its period.
  auto line_cap = [&](const Line& l) {
    double cap = SimplexSolver::kInf;
    for (int e : pool.routes[l.route].tracks) {
      cap = std::min(cap, cap_of(e, l.period));
    }
    return cap;
  };

  // Frequency variables. Under the period-equal plan one variable drives a
  // (route, mode) pair in every period, and pays every period's cost.
  line_var_.assign(pool.lines.size(), -1);
  if (plan_ == PlanPolicy::kMultiPeriod) {
    for (const Line& l : pool.lines) {
      double cap = line_cap(l);
      int var = lp_.add_variable(-l.cost, 0.0, cap);
      line_var_[l.id] = var;
      freq_var_cap_.push_back(cap);
      freq_var_lines_.push_back({l.id});
    }
  } else {
    std::map<std::pair<int, int>, std::vector<int>> groups;  // (route, mode)
    for (const Line& l : pool.lines) {
      groups[{l.route, l.mode}].push_back(l.id);
    }
    for (auto& [key, lines] : groups) {
      double cost = 0.0;
      double cap = SimplexSolver::kInf;
      for (int lid : lines) {
        cost += pool.lines[lid].cost;
        cap = std::min(cap, line_cap(pool.lines[lid]));
      }
      int var = lp_.add_variable(-cost, 0.0, cap);
      for (int lid : lines) line_var_[lid] = var;
      freq_var_cap_.push_back(cap);
      freq_var_lines_.push_back(lines);
    }
  }
  num_freq_vars_ = static_cast<int>(freq_var_cap_.size());

  // Demand-cap rows for servable demands.
  demand_row_.assign(demands.size(), -1);
  for (const RoutedDemand& d : demands) {
    if (!d.servable) continue;
    demand_row_[d.index] = lp_.add_row({}, d.entry.quantity);
  }

  // Track-throughput rows where some line runs. The joint setting shares
  // one row between both directions of a track; otherwise each direction
  // gets its own.
  const int n_tracks = static_cast<int>(net.tracks.size());
  for (int e = 0; e < n_tracks; ++e) {
    for (int dir = 0; dir < (params_.throughput_joint_directions ? 1 : 2);
         ++dir) {
      for (int t = 0; t < n_periods; ++t) {
        std::map<int, double> coefs;  // var -> coefficient
        for (const Line& l : pool.lines) {
          if (l.period != t) continue;
          const LineRoute& r = pool.routes[l.route];
          for (int p = 0; p < static_cast<int>(r.tracks.size()); ++p) {
            if (r.tracks[p] != e) continue;
            if (!params_.throughput_joint_directions &&
                traversal_dir(net, r, p) != dir) {
              continue;
            }
            coefs[line_var_[l.id]] += 1.0;
          }
        }
        if (coefs.empty()) continue;
        std::vector<SimplexSolver::Coef> entries(coefs.begin(), coefs.end());
        lp_.add_row(entries, cap_of(e, t));
      }
    }
  }

  // One minimum-travel-time column per servable demand seeds the RMP.
  for (const RoutedDemand& d : demands) {
    if (!d.servable) continue;
    Column col;
    col.demand = d.index;
    col.arcs = d.min_path_arcs;
    col.minutes = d.min_minutes;
    add_column(std::move(col));
  }
}

void Master::ensure_capacity_rows(const Column& col) {
  const RoutedDemand& d = (*demands_)[col.demand];
  const bool pax = d.entry.kind == DemandKind::kPassenger;
  auto& row_map = pax ? pax_cap_row_ : freight_cap_row_;
  for (int a : col.arcs) {
    const CgnArc& arc = cgn_->arcs[a];
    if (arc.kind != ArcKind::kTravel) continue;
    if (row_map.count(a)) continue;
    double cap = pax ? arc.pax_cap : arc.freight_cap;
    std::vector<SimplexSolver::Coef> entries{{line_var_[arc.line], -cap}};
    row_map[a] = lp_.add_row(entries, 0.0);
  }
}

bool Master::add_column(Column col) {
  std::vector<int> key_arcs = col.arcs;
  std::sort(key_arcs.begin(), key_arcs.end());
  auto key = std::make_pair(col.demand, std::move(key_arcs));
  if (column_key_.count(key)) return false;

  const RoutedDemand& d = (*demands_)[col.demand];
  ensure_capacity_rows(col);

  const bool pax = d.entry.kind == DemandKind::kPassenger;
  auto& row_map = pax ? pax_cap_row_ : freight_cap_row_;
  std::map<int, double> coefs;
  coefs[demand_row_[col.demand]] += 1.0;
  for (int a : col.arcs) {
    if (cgn_->arcs[a].kind != ArcKind::kTravel) continue;
    coefs[row_map.at(a)] += 1.0;
  }
  std::vector<SimplexSolver::Coef> entries(coefs.begin(), coefs.end());
  col.var = lp_.add_variable(d.entry.unit_revenue, 0.0, SimplexSolver::kInf,
                             entries);
  col.minutes = path_duration(*cgn_, col.arcs);
  column_key_[key] = static_cast<int>(columns_.size());
  columns_.push_back(std::move(col));
  return true;
}

SolveStatus Master::solve() { return lp_.solve(); }

DualPrices Master::duals() const {
  DualPrices dp;
  dp.demand_dual.assign(demands_->size(), 0.0);
  for (int i = 0; i < static_cast<int>(demands_->size()); ++i) {
    if (demand_row_[i] >= 0) {
      dp.demand_dual[i] = std::max(0.0, lp_.dual(demand_row_[i]));
    }
  }
  for (const auto& [arc, row] : pax_cap_row_) {
    dp.pax_cap_dual[arc] = std::max(0.0, lp_.dual(row));
  }
  for (const auto& [arc, row] : freight_cap_row_) {
    dp.freight_cap_dual[arc] = std::max(0.0, lp_.dual(row));
  }
  return dp;
}

void Master::set_frequency_bounds(int var, double lo, double hi) {
  lp_.set_bounds(var, lo, hi);
}

std::pair<double, double> Master::frequency_bounds(int var) const {
  return {lp_.lower_bound(var), lp_.upper_bound(var)};
}

}  // namespace raillp
