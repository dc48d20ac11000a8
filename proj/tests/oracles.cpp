#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <utility>

#include "raillp/types.hpp"

namespace raillp::testor {

namespace {
constexpr double kEps = 1e-9;
}  // namespace

// ---------------------------------------------------------------------------
// Dense tableau simplex.
// ---------------------------------------------------------------------------

int DenseLp::add_var(double objective_coef) {
  obj.push_back(objective_coef);
  for (auto& r : rows) r.push_back(0.0);
  return nvars++;
}

void DenseLp::add_row(const std::vector<std::pair<int, double>>& coefs,
                      double bound) {
  std::vector<double> row(nvars, 0.0);
  for (const auto& [v, c] : coefs) row[v] += c;
  rows.push_back(std::move(row));
  rhs.push_back(bound);
}

DenseLpResult solve_dense_lp(const DenseLp& lp) {
  const int n = lp.nvars;
  const int m = static_cast<int>(lp.rows.size());
  const int total = n + m;
  // Tableau columns: structural vars, slacks, rhs. The slack basis is
  // feasible because every rhs is required to be nonnegative.
  std::vector<std::vector<double>> t(m, std::vector<double>(total + 1, 0.0));
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) {
    if (lp.rhs[i] < -kEps) throw RaillpError("oracle lp: negative rhs");
    for (int j = 0; j < n; ++j) t[i][j] = lp.rows[i][j];
    t[i][n + i] = 1.0;
    t[i][total] = std::max(lp.rhs[i], 0.0);
    basis[i] = n + i;
  }
  auto cost_of = [&](int j) { return j < n ? lp.obj[j] : 0.0; };

  std::vector<double> cb(m);
  for (long iter = 0;; ++iter) {
    if (iter > 200000) throw RaillpError("oracle lp: iteration limit");
    const bool bland = iter > 2000;  // anti-cycling fallback
    for (int i = 0; i < m; ++i) cb[i] = cost_of(basis[i]);
    int enter = -1;
    double best = kEps;
    for (int j = 0; j < total; ++j) {
      double d = cost_of(j);
      for (int i = 0; i < m; ++i) {
        if (cb[i] != 0.0) d -= cb[i] * t[i][j];
      }
      if (d > (bland ? kEps : best)) {
        enter = j;
        if (bland) break;
        best = d;
      }
    }
    if (enter < 0) break;  // optimal

    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      if (t[i][enter] <= kEps) continue;
      const double ratio = t[i][total] / t[i][enter];
      if (leave < 0 || ratio < best_ratio - kEps ||
          (ratio < best_ratio + kEps && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave < 0) return {false, 0.0, {}};  // unbounded

    const double piv = t[leave][enter];
    for (double& v : t[leave]) v /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      const double f = t[i][enter];
      if (f == 0.0) continue;
      for (int j = 0; j <= total; ++j) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }

  DenseLpResult res;
  res.optimal = true;
  res.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n) res.x[basis[i]] = t[i][total];
  }
  double obj = 0.0;
  for (int j = 0; j < n; ++j) obj += lp.obj[j] * res.x[j];
  res.objective = obj;
  return res;
}

// ---------------------------------------------------------------------------
// Exhaustive path enumeration.
// ---------------------------------------------------------------------------

std::vector<EnumPath> enumerate_paths(const ChangeGoNetwork& cgn,
                                      const RoutedDemand& demand,
                                      const LineMask* mask, std::size_t cap) {
  std::vector<EnumPath> out;
  if (!demand.servable) return out;
  std::vector<char> visited(cgn.nodes.size(), 0);
  std::vector<char> is_sink(cgn.nodes.size(), 0);
  for (int s : demand.sink_nodes) is_sink[s] = 1;
  std::vector<int> arcs;
  const double limit = demand.threshold_min + 1e-9;

  // Duration is tracked incrementally with the library's counting
  // convention: minutes accrue from the first board/travel arc onward, the
  // first board itself charging nothing unless count_initial_access is set.
  std::function<void(int, int, bool)> dfs = [&](int node, int minutes,
                                                bool counting) {
    if (!arcs.empty() && is_sink[node]) {
      if (out.size() >= cap) throw RaillpError("oracle: too many paths");
      out.push_back({arcs, minutes});
    }
    for (int a : cgn.out[node]) {
      const CgnArc& arc = cgn.arcs[a];
      if (!arc_allowed(cgn, arc, demand.entry.kind, demand.entry.period,
                       mask)) {
        continue;
      }
      if (visited[arc.head]) continue;
      int nm = minutes;
      bool nc = counting;
      if (nc) {
        nm += arc.minutes;
      } else if (arc.kind == ArcKind::kBoard || arc.kind == ArcKind::kTravel) {
        nc = true;
        if (arc.kind == ArcKind::kTravel) nm += arc.minutes;
      }
      // Duration only grows along extensions, so pruning here is exact.
      if (static_cast<double>(nm) > limit) continue;
      visited[arc.head] = 1;
      arcs.push_back(a);
      dfs(arc.head, nm, nc);
      arcs.pop_back();
      visited[arc.head] = 0;
    }
  };
  visited[demand.source_node] = 1;
  dfs(demand.source_node, 0, cgn.params.count_initial_access);
  return out;
}

std::vector<std::vector<EnumPath>> enumerate_all_paths(
    const ChangeGoNetwork& cgn, const std::vector<RoutedDemand>& demands,
    const LineMask* mask, std::size_t cap_per_demand) {
  std::vector<std::vector<EnumPath>> all;
  all.reserve(demands.size());
  for (const RoutedDemand& d : demands) {
    all.push_back(enumerate_paths(cgn, d, mask, cap_per_demand));
  }
  return all;
}

double path_dual_cost(const ChangeGoNetwork& cgn, const DualPrices& duals,
                      DemandKind kind, const std::vector<int>& arcs) {
  double cost = 0.0;
  for (int a : arcs) {
    if (cgn.arcs[a].kind != ArcKind::kTravel) continue;
    cost += kind == DemandKind::kPassenger ? duals.pax(a) : duals.freight(a);
  }
  return cost;
}

// ---------------------------------------------------------------------------
// Frequency model.
// ---------------------------------------------------------------------------

FreqModel derive_freq_model(const PhysicalNetwork& net, const LinePool& pool,
                            PlanPolicy plan, const ModelParams& params) {
  FreqModel fm;
  fm.var_of_line.assign(pool.lines.size(), -1);

  auto track_cap = [&](int period) {
    return params.throughput_per_hour * net.periods[period].hours();
  };
  auto line_cap = [&](const Line& l) {
    double cap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < pool.routes[l.route].tracks.size(); ++k) {
      cap = std::min(cap, track_cap(l.period));
    }
    return cap;
  };

  if (plan == PlanPolicy::kMultiPeriod) {
    for (const Line& l : pool.lines) {
      fm.var_of_line[l.id] = static_cast<int>(fm.var_lines.size());
      fm.var_lines.push_back({l.id});
      fm.cost.push_back(l.cost);
      fm.cap.push_back(line_cap(l));
    }
  } else {
    std::map<std::pair<int, int>, std::vector<int>> groups;
    for (const Line& l : pool.lines) groups[{l.route, l.mode}].push_back(l.id);
    for (const auto& [key, lines] : groups) {
      const int var = static_cast<int>(fm.var_lines.size());
      double cost = 0.0;
      double cap = std::numeric_limits<double>::infinity();
      for (int lid : lines) {
        fm.var_of_line[lid] = var;
        cost += pool.lines[lid].cost;
        cap = std::min(cap, line_cap(pool.lines[lid]));
      }
      fm.var_lines.push_back(lines);
      fm.cost.push_back(cost);
      fm.cap.push_back(cap);
    }
  }

  const int n_periods = static_cast<int>(net.periods.size());
  const int n_tracks = static_cast<int>(net.tracks.size());
  const int n_dirs = params.throughput_joint_directions ? 1 : 2;
  for (int e = 0; e < n_tracks; ++e) {
    for (int dir = 0; dir < n_dirs; ++dir) {
      for (int t = 0; t < n_periods; ++t) {
        std::map<int, double> coefs;
        for (const Line& l : pool.lines) {
          if (l.period != t) continue;
          const LineRoute& r = pool.routes[l.route];
          for (std::size_t p = 0; p < r.tracks.size(); ++p) {
            if (r.tracks[p] != e) continue;
            if (!params.throughput_joint_directions) {
              const Track& tr = net.tracks[e];
              const int d = r.path[p] == tr.u ? 0 : 1;
              if (d != dir) continue;
            }
            coefs[fm.var_of_line[l.id]] += 1.0;
          }
        }
        if (coefs.empty()) continue;
        FreqModel::ThroughputRow row;
        row.coefs.assign(coefs.begin(), coefs.end());
        row.rhs = track_cap(t);
        fm.throughput.push_back(std::move(row));
      }
    }
  }
  return fm;
}

// ---------------------------------------------------------------------------
// Full LP / fixed-frequency LP / brute force.
// ---------------------------------------------------------------------------

namespace {

// Rows coupling flows and frequency variables share this shape: for each
// (travel arc, kind) that some enumerated path touches,
//   sum of flows through the arc - capacity * frequency <= slack,
// where slack is 0 for the coupled form and cap*freq for the fixed form.
struct ArcUse {
  std::vector<std::pair<int, double>> flow_vars;  // (lp var, 1.0)
  int line = -1;
  double cap = 0.0;
};

}  // namespace

DenseLpResult solve_full_lp(const PhysicalNetwork& net, const LinePool& pool,
                            const ChangeGoNetwork& cgn,
                            const std::vector<RoutedDemand>& demands,
                            PlanPolicy plan, const ModelParams& params,
                            const std::vector<std::vector<EnumPath>>& paths) {
  const FreqModel fm = derive_freq_model(net, pool, plan, params);
  DenseLp lp;
  const int nf = static_cast<int>(fm.cost.size());
  for (int v = 0; v < nf; ++v) {
    lp.add_var(-fm.cost[v]);
  }
  for (int v = 0; v < nf; ++v) {
    lp.add_row({{v, 1.0}}, fm.cap[v]);
  }
  for (const auto& row : fm.throughput) {
    lp.add_row(row.coefs, row.rhs);
  }

  std::map<std::pair<int, int>, ArcUse> arc_use;  // (arc, kind as int)
  for (std::size_t di = 0; di < demands.size(); ++di) {
    const RoutedDemand& d = demands[di];
    if (paths[di].empty()) continue;
    std::vector<std::pair<int, double>> demand_row;
    for (const EnumPath& p : paths[di]) {
      const int x = lp.add_var(d.entry.unit_revenue);
      demand_row.push_back({x, 1.0});
      for (int a : p.arcs) {
        const CgnArc& arc = cgn.arcs[a];
        if (arc.kind != ArcKind::kTravel) continue;
        const int kind = d.entry.kind == DemandKind::kPassenger ? 0 : 1;
        ArcUse& use = arc_use[{a, kind}];
        use.flow_vars.push_back({x, 1.0});
        use.line = arc.line;
        use.cap = kind == 0 ? arc.pax_cap : arc.freight_cap;
      }
    }
    lp.add_row(demand_row, d.entry.quantity);
  }
  for (const auto& [key, use] : arc_use) {
    std::vector<std::pair<int, double>> row = use.flow_vars;
    row.push_back({fm.var_of_line[use.line], -use.cap});
    lp.add_row(row, 0.0);
  }
  return solve_dense_lp(lp);
}

double fixed_frequency_profit(const ChangeGoNetwork& cgn,
                              const std::vector<RoutedDemand>& demands,
                              const FreqModel& fm,
                              const std::vector<long long>& freq,
                              const std::vector<std::vector<EnumPath>>& paths) {
  DenseLp lp;
  std::map<std::pair<int, int>, ArcUse> arc_use;
  for (std::size_t di = 0; di < demands.size(); ++di) {
    const RoutedDemand& d = demands[di];
    if (paths[di].empty()) continue;
    std::vector<std::pair<int, double>> demand_row;
    for (const EnumPath& p : paths[di]) {
      const int x = lp.add_var(d.entry.unit_revenue);
      demand_row.push_back({x, 1.0});
      for (int a : p.arcs) {
        const CgnArc& arc = cgn.arcs[a];
        if (arc.kind != ArcKind::kTravel) continue;
        const int kind = d.entry.kind == DemandKind::kPassenger ? 0 : 1;
        ArcUse& use = arc_use[{a, kind}];
        use.flow_vars.push_back({x, 1.0});
        use.line = arc.line;
        use.cap = kind == 0 ? arc.pax_cap : arc.freight_cap;
      }
    }
    lp.add_row(demand_row, d.entry.quantity);
  }
  for (const auto& [key, use] : arc_use) {
    const double f = static_cast<double>(freq[fm.var_of_line[use.line]]);
    lp.add_row(use.flow_vars, use.cap * f);
  }
  const DenseLpResult res = solve_dense_lp(lp);
  if (!res.optimal) throw RaillpError("oracle: flow lp unbounded");
  double cost = 0.0;
  for (std::size_t v = 0; v < fm.cost.size(); ++v) {
    cost += fm.cost[v] * static_cast<double>(freq[v]);
  }
  return res.objective - cost;
}

BruteForceResult brute_force_optimum(
    const PhysicalNetwork& net, const LinePool& pool,
    const ChangeGoNetwork& cgn, const std::vector<RoutedDemand>& demands,
    PlanPolicy plan, const ModelParams& params,
    const std::vector<std::vector<EnumPath>>& paths) {
  const FreqModel fm = derive_freq_model(net, pool, plan, params);
  const int nf = static_cast<int>(fm.cost.size());
  std::vector<long long> freq(nf, 0);
  BruteForceResult best;
  best.objective = 0.0;  // the zero plan is always feasible
  best.freq.assign(nf, 0);

  auto throughput_ok = [&]() {
    for (const auto& row : fm.throughput) {
      double lhs = 0.0;
      for (const auto& [v, c] : row.coefs) {
        lhs += c * static_cast<double>(freq[v]);
      }
      if (lhs > row.rhs + 1e-9) return false;
    }
    return true;
  };

  std::function<void(int)> rec = [&](int v) {
    if (v == nf) {
      if (!throughput_ok()) return;
      const double profit = fixed_frequency_profit(cgn, demands, fm, freq, paths);
      if (profit > best.objective) {
        best.objective = profit;
        best.freq = freq;
      }
      return;
    }
    const long long cap = static_cast<long long>(std::floor(fm.cap[v] + 1e-9));
    for (long long f = 0; f <= cap; ++f) {
      freq[v] = f;
      rec(v + 1);
    }
    freq[v] = 0;
  };
  rec(0);
  return best;
}

}  // namespace raillp::testor
