#include "raillp/reporting.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "raillp/io.hpp"

namespace raillp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string describe_flow(const SolvedFlow& f) {
  std::ostringstream os;
  os << "flow demand=" << f.demand << " qty=" << f.qty;
  return os.str();
}

// Direction of a route's traversal of track e: 0 when it runs u->v.
int traversal_direction(const PhysicalNetwork& net, const LineRoute& route,
                        int track_pos) {
  int a = route.path[track_pos];
  const Track& t = net.tracks[route.tracks[track_pos]];
  return t.u == a ? 0 : 1;
}

std::string join_pct(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ";";
    out += std::isnan(v[i]) ? "n/a" : format_double(v[i]);
  }
  return out;
}

std::string fmt_or_na(double v) {
  return std::isnan(v) ? "n/a" : format_double(v);
}

}  // namespace

std::vector<Violation> check_solution(const PhysicalNetwork& net,
                                      const LinePool& pool,
                                      const ChangeGoNetwork& cgn,
                                      const std::vector<RoutedDemand>& demands,
                                      const IntegerSolution& sol,
                                      PlanPolicy plan) {
  std::vector<Violation> out;
  auto flag = [&out](const std::string& code, const std::string& detail) {
    out.push_back({code, detail});
  };

  const int n_lines = static_cast<int>(pool.lines.size());
  const int n_periods = static_cast<int>(net.periods.size());
  const int n_tracks = static_cast<int>(net.tracks.size());

  if (static_cast<int>(sol.frequency.size()) != n_lines) {
    flag("freq_size", "frequency vector does not cover the line pool");
    return out;
  }
  for (int l = 0; l < n_lines; ++l) {
    if (sol.frequency[l] < 0) {
      flag("freq_negative", "line " + std::to_string(l));
    }
  }

  // Track throughput, either joint over both directions or split.
  {
    const int dirs = cgn.params.throughput_joint_directions ? 1 : 2;
    std::vector<double> used(
        static_cast<std::size_t>(n_tracks) * n_periods * dirs, 0.0);
    for (int l = 0; l < n_lines; ++l) {
      if (sol.frequency[l] <= 0) continue;
      const Line& ln = pool.lines[l];
      const LineRoute& route = pool.routes[ln.route];
      for (std::size_t k = 0; k < route.tracks.size(); ++k) {
        int e = route.tracks[k];
        int dir = dirs == 1 ? 0
                            : traversal_direction(net, route,
                                                  static_cast<int>(k));
        used[(static_cast<std::size_t>(e) * n_periods + ln.period) * dirs +
             dir] += static_cast<double>(sol.frequency[l]);
      }
    }
    for (int e = 0; e < n_tracks; ++e) {
      for (int t = 0; t < n_periods; ++t) {
        double cap = cgn.params.throughput_per_hour * net.periods[t].hours();
        for (int dir = 0; dir < dirs; ++dir) {
          double u =
              used[(static_cast<std::size_t>(e) * n_periods + t) * dirs + dir];
          if (u > cap + tol::kFeasibility) {
            flag("throughput", "track " + std::to_string(e) + " period " +
                                   std::to_string(t) + ": " +
                                   format_double(u) + " > " +
                                   format_double(cap));
          }
        }
      }
    }
  }

  // Per-demand served totals and per-arc flow accumulation.
  std::vector<double> served(demands.size(), 0.0);
  std::vector<double> arc_pax(cgn.arcs.size(), 0.0);
  std::vector<double> arc_frt(cgn.arcs.size(), 0.0);
  for (const SolvedFlow& f : sol.flows) {
    if (f.demand < 0 || f.demand >= static_cast<int>(demands.size())) {
      flag("flow_demand_range", describe_flow(f));
      continue;
    }
    if (f.qty <= 0.0) {
      flag("flow_nonpositive", describe_flow(f));
      continue;
    }
    bool arcs_ok = true;
    for (int a : f.arcs) {
      if (a < 0 || a >= static_cast<int>(cgn.arcs.size())) {
        flag("flow_arc_range", describe_flow(f));
        arcs_ok = false;
        break;
      }
    }
    if (!arcs_ok) continue;

    const RoutedDemand& rd = demands[f.demand];
    if (!rd.servable) {
      flag("flow_unservable", describe_flow(f));
      continue;
    }
    PathCheck pc = path_rules(cgn, rd, f.arcs);
    if (!pc.ok) {
      flag("path_rule_" + pc.rule, describe_flow(f) + ": " + pc.detail);
      continue;
    }
    int dur = path_duration(cgn, f.arcs);
    if (dur != f.minutes) {
      flag("flow_minutes", describe_flow(f) + ": recorded " +
                               std::to_string(f.minutes) + " recomputed " +
                               std::to_string(dur));
    }
    served[f.demand] += f.qty;
    for (int a : f.arcs) {
      if (cgn.arcs[a].kind != ArcKind::kTravel) continue;
      if (rd.entry.kind == DemandKind::kPassenger) {
        arc_pax[a] += f.qty;
      } else {
        arc_frt[a] += f.qty;
      }
    }
  }

  for (std::size_t d = 0; d < demands.size(); ++d) {
    if (served[d] > demands[d].entry.quantity + tol::kFeasibility) {
      flag("demand_over", "demand " + std::to_string(d) + ": served " +
                              format_double(served[d]) + " > " +
                              format_double(demands[d].entry.quantity));
    }
  }

  for (std::size_t a = 0; a < cgn.arcs.size(); ++a) {
    const CgnArc& arc = cgn.arcs[a];
    if (arc.kind != ArcKind::kTravel) continue;
    double freq = static_cast<double>(sol.frequency[arc.line]);
    if (arc_pax[a] > arc.pax_cap * freq + tol::kFeasibility) {
      flag("arc_capacity",
           "arc " + std::to_string(a) + " passenger flow " +
               format_double(arc_pax[a]) + " > " +
               format_double(arc.pax_cap * freq));
    }
    if (arc_frt[a] > arc.freight_cap * freq + tol::kFeasibility) {
      flag("arc_capacity", "arc " + std::to_string(a) + " freight flow " +
                               format_double(arc_frt[a]) + " > " +
                               format_double(arc.freight_cap * freq));
    }
  }

  if (plan == PlanPolicy::kPeriodEqual) {
    // Frequencies of the same (route, mode) must agree across periods.
    for (int l = 0; l < n_lines; ++l) {
      const Line& a = pool.lines[l];
      for (int m = l + 1; m < n_lines; ++m) {
        const Line& b = pool.lines[m];
        if (a.route == b.route && a.mode == b.mode &&
            sol.frequency[l] != sol.frequency[m]) {
          flag("pe_unequal", "lines " + std::to_string(l) + "/" +
                                 std::to_string(m) + ": " +
                                 std::to_string(sol.frequency[l]) + " vs " +
                                 std::to_string(sol.frequency[m]));
        }
      }
    }
  }

  return out;
}

MetricsReport compute_metrics(const PhysicalNetwork& net, const LinePool& pool,
                              const ChangeGoNetwork& cgn,
                              const std::vector<RoutedDemand>& demands,
                              const IntegerSolution& sol, PlanPolicy plan) {
  {
    auto viol = check_solution(net, pool, cgn, demands, sol, plan);
    if (!viol.empty()) {
      throw RaillpError("infeasible solution: " + viol.front().code + " (" +
                        viol.front().detail + ")");
    }
  }

  MetricsReport m;
  m.objective = sol.objective;
  m.bound = sol.bound;
  m.gap_pct = sol.gap_pct;
  m.proven_optimal = sol.proven_optimal;

  const int n_periods = static_cast<int>(net.periods.size());

  // Served quantity and revenue per demand.
  std::vector<double> served(demands.size(), 0.0);
  double tt_pax_num = 0.0, tt_pax_den = 0.0;
  double tt_frt_num = 0.0, tt_frt_den = 0.0;
  std::vector<double> arc_pax(cgn.arcs.size(), 0.0);
  std::vector<double> arc_frt(cgn.arcs.size(), 0.0);
  for (const SolvedFlow& f : sol.flows) {
    const RoutedDemand& rd = demands[f.demand];
    served[f.demand] += f.qty;
    double hours = f.minutes / 60.0;
    if (rd.entry.kind == DemandKind::kPassenger) {
      tt_pax_num += hours * f.qty;
      tt_pax_den += f.qty;
    } else {
      tt_frt_num += hours * f.qty;
      tt_frt_den += f.qty;
    }
    for (int a : f.arcs) {
      if (cgn.arcs[a].kind != ArcKind::kTravel) continue;
      if (rd.entry.kind == DemandKind::kPassenger) {
        arc_pax[a] += f.qty;
      } else {
        arc_frt[a] += f.qty;
      }
    }
  }

  double pax_total = 0.0, pax_served = 0.0;
  std::vector<double> pax_total_t(n_periods, 0.0), pax_served_t(n_periods, 0.0);
  double frt_total = 0.0, frt_served = 0.0;
  for (std::size_t d = 0; d < demands.size(); ++d) {
    const DemandEntry& e = demands[d].entry;
    if (e.kind == DemandKind::kPassenger) {
      pax_total += e.quantity;
      pax_served += served[d];
      pax_total_t[e.period] += e.quantity;
      pax_served_t[e.period] += served[d];
      m.revenue_pax += served[d] * e.unit_revenue;
    } else {
      frt_total += e.quantity;
      frt_served += served[d];
      m.revenue_freight += served[d] * e.unit_revenue;
    }
  }
  m.sl_pax = pax_total > 0.0 ? 100.0 * pax_served / pax_total : kNaN;
  m.sl_freight = frt_total > 0.0 ? 100.0 * frt_served / frt_total : kNaN;
  m.sl_pax_by_period.assign(n_periods, kNaN);
  for (int t = 0; t < n_periods; ++t) {
    if (pax_total_t[t] > 0.0) {
      m.sl_pax_by_period[t] = 100.0 * pax_served_t[t] / pax_total_t[t];
    }
  }
  m.tt_pax_h = tt_pax_den > 0.0 ? tt_pax_num / tt_pax_den : kNaN;
  m.tt_freight_h = tt_frt_den > 0.0 ? tt_frt_num / tt_frt_den : kNaN;

  // Utilization over travel arcs of installed lines with open capacity for
  // the commodity, unweighted and frequency-weighted.
  double up_sum = 0.0, up_wsum = 0.0, up_n = 0.0, up_w = 0.0;
  double uf_sum = 0.0, uf_wsum = 0.0, uf_n = 0.0, uf_w = 0.0;
  std::vector<double> up_sum_t(n_periods, 0.0), up_n_t(n_periods, 0.0);
  for (std::size_t a = 0; a < cgn.arcs.size(); ++a) {
    const CgnArc& arc = cgn.arcs[a];
    if (arc.kind != ArcKind::kTravel) continue;
    double freq = static_cast<double>(sol.frequency[arc.line]);
    int period = pool.lines[arc.line].period;
    double pax_cap = arc.pax_cap * freq;
    double frt_cap = arc.freight_cap * freq;
    if (pax_cap > 0.0) {
      double r = 100.0 * arc_pax[a] / pax_cap;
      up_sum += r;
      up_n += 1.0;
      up_wsum += r * freq;
      up_w += freq;
      up_sum_t[period] += r;
      up_n_t[period] += 1.0;
    }
    if (frt_cap > 0.0) {
      double r = 100.0 * arc_frt[a] / frt_cap;
      uf_sum += r;
      uf_n += 1.0;
      uf_wsum += r * freq;
      uf_w += freq;
    }
  }
  m.util_pax = up_n > 0.0 ? up_sum / up_n : kNaN;
  m.util_pax_weighted = up_w > 0.0 ? up_wsum / up_w : kNaN;
  m.util_freight = uf_n > 0.0 ? uf_sum / uf_n : kNaN;
  m.util_freight_weighted = uf_w > 0.0 ? uf_wsum / uf_w : kNaN;
  m.util_pax_by_period.assign(n_periods, kNaN);
  for (int t = 0; t < n_periods; ++t) {
    if (up_n_t[t] > 0.0) m.util_pax_by_period[t] = up_sum_t[t] / up_n_t[t];
  }

  std::map<std::string, double> mode_freq;
  for (std::size_t l = 0; l < pool.lines.size(); ++l) {
    long long f = sol.frequency[l];
    if (f <= 0) continue;
    m.lines_installed += 1;
    m.total_frequency += f;
    m.line_cost += pool.lines[l].cost * static_cast<double>(f);
    mode_freq[pool.modes[pool.lines[l].mode].id] += static_cast<double>(f);
  }
  if (m.total_frequency > 0) {
    for (auto& [id, f] : mode_freq) {
      m.mode_share[id] = 100.0 * f / static_cast<double>(m.total_frequency);
    }
  }
  m.zero_plan = m.total_frequency == 0;

  double profit = m.revenue_pax + m.revenue_freight - m.line_cost;
  if (std::fabs(profit - sol.objective) > tol::kProfitIdentity) {
    throw RaillpError("profit identity violated: recomputed " +
                      format_double(profit) + " vs reported " +
                      format_double(sol.objective));
  }
  return m;
}

double profit_improvement(const MetricsReport& base,
                          const MetricsReport& variant) {
  if (base.objective <= 0.0) throw RaillpError("undefined baseline");
  return 100.0 * (variant.objective - base.objective) / base.objective;
}

std::string metrics_csv_header() {
  return "instance,scenario,plan,method,ratio,objective,bound,gap_pct,"
         "proven_optimal,zero_plan,sl_pax,sl_pax_by_period,sl_freight,"
         "tt_pax_h,tt_freight_h,util_pax,util_pax_weighted,"
         "util_pax_by_period,util_freight,util_freight_weighted,"
         "lines_installed,total_frequency,mode_share,revenue_pax,"
         "revenue_freight,line_cost";
}

std::string metrics_csv_row(const std::string& instance,
                            const std::string& scenario,
                            const std::string& plan, const std::string& method,
                            double ratio, const MetricsReport& m) {
  std::ostringstream os;
  os << instance << ',' << scenario << ',' << plan << ',' << method << ',';
  os << (ratio < 0.0 ? std::string("-") : format_double(ratio)) << ',';
  os << format_double(m.objective) << ',' << format_double(m.bound) << ','
     << fmt_or_na(m.gap_pct) << ',' << (m.proven_optimal ? 1 : 0) << ','
     << (m.zero_plan ? 1 : 0) << ',';
  os << fmt_or_na(m.sl_pax) << ',' << join_pct(m.sl_pax_by_period) << ','
     << fmt_or_na(m.sl_freight) << ',';
  os << fmt_or_na(m.tt_pax_h) << ',' << fmt_or_na(m.tt_freight_h) << ',';
  os << fmt_or_na(m.util_pax) << ',' << fmt_or_na(m.util_pax_weighted) << ','
     << join_pct(m.util_pax_by_period) << ',' << fmt_or_na(m.util_freight)
     << ',' << fmt_or_na(m.util_freight_weighted) << ',';
  os << m.lines_installed << ',' << m.total_frequency << ',';
  {
    bool first = true;
    for (const auto& [id, share] : m.mode_share) {
      if (!first) os << ';';
      os << id << ':' << format_double(share);
      first = false;
    }
    if (m.mode_share.empty()) os << "n/a";
  }
  os << ',' << format_double(m.revenue_pax) << ','
     << format_double(m.revenue_freight) << ',' << format_double(m.line_cost);
  return os.str();
}

std::string metrics_text(const MetricsReport& m) {
  std::ostringstream os;
  os << "profit            " << format_double(m.objective) << "\n";
  os << "upper bound       " << format_double(m.bound) << "\n";
  os << "gap %             " << fmt_or_na(m.gap_pct) << "\n";
  os << "proven optimal    " << (m.proven_optimal ? "yes" : "no") << "\n";
  os << "zero plan         " << (m.zero_plan ? "yes" : "no") << "\n";
  os << "service level %   passenger " << fmt_or_na(m.sl_pax) << " (periods "
     << join_pct(m.sl_pax_by_period) << "), freight "
     << fmt_or_na(m.sl_freight) << "\n";
  os << "travel time h     passenger " << fmt_or_na(m.tt_pax_h) << ", freight "
     << fmt_or_na(m.tt_freight_h) << "\n";
  os << "utilization %     passenger " << fmt_or_na(m.util_pax)
     << " (weighted " << fmt_or_na(m.util_pax_weighted) << ", periods "
     << join_pct(m.util_pax_by_period) << ")\n";
  os << "                  freight " << fmt_or_na(m.util_freight)
     << " (weighted " << fmt_or_na(m.util_freight_weighted) << ")\n";
  os << "lines installed   " << m.lines_installed << " (total frequency "
     << m.total_frequency << ")\n";
  os << "mode share %      ";
  if (m.mode_share.empty()) {
    os << "n/a";
  } else {
    bool first = true;
    for (const auto& [id, share] : m.mode_share) {
      if (!first) os << ", ";
      os << id << " " << format_double(share);
      first = false;
    }
  }
  os << "\n";
  os << "revenue           passenger " << format_double(m.revenue_pax)
     << ", freight " << format_double(m.revenue_freight) << "\n";
  os << "line cost         " << format_double(m.line_cost) << "\n";
  return os.str();
}

}  // namespace raillp
