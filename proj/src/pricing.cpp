#include "raillp/pricing.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>
#include <tuple>

#include "raillp/types.hpp"

namespace raillp {

bool dominates(double cost_a, int dur_a, double cost_b, int dur_b) {
  if (cost_a > cost_b || dur_a > dur_b) return false;
  return cost_a < cost_b || dur_a < dur_b;
}

std::vector<SourceGroup> group_sources(const std::vector<RoutedDemand>& demands) {
  std::map<std::tuple<int, int, int>, SourceGroup> groups;
  for (const RoutedDemand& d : demands) {
    if (!d.servable) continue;
    int kind = d.entry.kind == DemandKind::kPassenger ? 0 : 1;
    int period = d.entry.kind == DemandKind::kPassenger ? d.entry.period : -1;
    auto key = std::make_tuple(kind, d.entry.origin, period);
    SourceGroup& g = groups[key];
    g.kind = d.entry.kind;
    g.origin = d.entry.origin;
    g.period = period;
    g.demand_idx.push_back(d.index);
  }
  std::vector<SourceGroup> out;
  for (auto& [key, g] : groups) out.push_back(std::move(g));
  return out;
}

namespace {

double arc_price(const DualPrices& duals, int arc_id, const CgnArc& arc,
                 DemandKind kind) {
  if (arc.kind != ArcKind::kTravel) return 0.0;
  return kind == DemandKind::kPassenger ? duals.pax(arc_id)
                                        : duals.freight(arc_id);
}

bool walk_is_simple(const ChangeGoNetwork& cgn, const std::vector<int>& arcs) {
  if (arcs.empty()) return true;
  std::vector<int> nodes{cgn.arcs[arcs.front()].tail};
  for (int a : arcs) nodes.push_back(cgn.arcs[a].head);
  std::sort(nodes.begin(), nodes.end());
  return std::adjacent_find(nodes.begin(), nodes.end()) == nodes.end();
}

// ---- phase 1: duration-blind lexicographic Dijkstra --------------------

struct DijkstraResult {
  std::vector<double> cost;
  std::vector<long long> minutes;
  std::vector<int> parent_arc;
  std::vector<int> seed_of;
  std::vector<AccessSeed> seeds;
};

DijkstraResult cheapest_paths(const PricingProblem& prob,
                              const SourceGroup& group,
                              const DualPrices& duals) {
  const ChangeGoNetwork& cgn = *prob.cgn;
  const int n = static_cast<int>(cgn.nodes.size());
  DijkstraResult r;
  r.cost.assign(n, std::numeric_limits<double>::infinity());
  r.minutes.assign(n, std::numeric_limits<long long>::max());
  r.parent_arc.assign(n, -1);
  r.seed_of.assign(n, -1);
  r.seeds = access_seeds(cgn, group.origin, group.kind, group.period, prob.mask);

  using Item = std::tuple<double, long long, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  for (int i = 0; i < static_cast<int>(r.seeds.size()); ++i) {
    const AccessSeed& s = r.seeds[i];
    if (0.0 < r.cost[s.node] ||
        (r.cost[s.node] == 0.0 && s.minutes < r.minutes[s.node])) {
      r.cost[s.node] = 0.0;
      r.minutes[s.node] = s.minutes;
      r.seed_of[s.node] = i;
      r.parent_arc[s.node] = -1;
      pq.push({0.0, s.minutes, s.node});
    }
  }
  while (!pq.empty()) {
    auto [cu, mu, u] = pq.top();
    pq.pop();
    if (cu > r.cost[u] || (cu == r.cost[u] && mu > r.minutes[u])) continue;
    for (int a : cgn.out[u]) {
      const CgnArc& arc = cgn.arcs[a];
      if (!arc_allowed(cgn, arc, group.kind, group.period, prob.mask)) continue;
      double nc = cu + arc_price(duals, a, arc, group.kind);
      long long nm = mu + arc.minutes;
      int v = arc.head;
      if (nc < r.cost[v] || (nc == r.cost[v] && nm < r.minutes[v])) {
        r.cost[v] = nc;
        r.minutes[v] = nm;
        r.parent_arc[v] = a;
        r.seed_of[v] = -1;
        pq.push({nc, nm, v});
      }
    }
  }
  return r;
}

std::vector<int> recover_dijkstra_path(const DijkstraResult& r,
                                       const ChangeGoNetwork& cgn, int sink) {
  std::vector<int> rev;
  int u = sink;
  while (r.parent_arc[u] != -1) {
    rev.push_back(r.parent_arc[u]);
    u = cgn.arcs[r.parent_arc[u]].tail;
  }
  std::vector<int> arcs = r.seeds[r.seed_of[u]].prefix;
  for (auto it = rev.rbegin(); it != rev.rend(); ++it) arcs.push_back(*it);
  return arcs;
}

// ---- phase 2: label-correcting with Pareto dominance -------------------

struct Label {
  double cost = 0.0;
  int minutes = 0;
  int node = -1;
  int parent = -1;   // label id
  int arc = -1;      // arc taken into `node` (-1 for seeds)
  int seed = -1;     // seed index for root labels
  int depth = 0;     // arcs since seed, tie-breaking
  bool dead = false;
  std::vector<std::uint64_t> visited;  // empty when tracking is off
};

bool visited_subset(const std::vector<std::uint64_t>& a,
                    const std::vector<std::uint64_t>& b) {
  if (a.empty() || b.empty()) return true;  // tracking off
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] & ~b[i]) return false;
  }
  return true;
}

bool visited_test(const std::vector<std::uint64_t>& v, int node) {
  return (v[node >> 6] >> (node & 63)) & 1u;
}

void visited_set(std::vector<std::uint64_t>& v, int node) {
  v[node >> 6] |= std::uint64_t{1} << (node & 63);
}

struct LabelRun {
  std::vector<Label> arena;
  std::vector<std::vector<int>> at_node;
  std::vector<AccessSeed> seeds;
};

// Runs the label search up to `cap` minutes; prunes labels whose cost
// already exceeds `cost_ceiling` (no pending demand could profit).
LabelRun run_labels(const PricingProblem& prob, const SourceGroup& group,
                    const DualPrices& duals, long long cap,
                    double cost_ceiling, bool elementary) {
  const ChangeGoNetwork& cgn = *prob.cgn;
  const int n = static_cast<int>(cgn.nodes.size());
  LabelRun run;
  run.at_node.resize(n);
  run.seeds = access_seeds(cgn, group.origin, group.kind, group.period, prob.mask);
  const size_t blocks = elementary ? (n + 63) / 64 : 0;

  std::deque<int> queue;
  auto try_insert = [&](Label&& lab) {
    auto& bucket = run.at_node[lab.node];
    for (int id : bucket) {
      Label& ex = run.arena[id];
      if (ex.dead) continue;
      bool pair_dom = dominates(ex.cost, ex.minutes, lab.cost, lab.minutes) ||
                      (ex.cost == lab.cost && ex.minutes == lab.minutes);
      if (pair_dom && visited_subset(ex.visited, lab.visited)) return;
    }
    for (int id : bucket) {
      Label& ex = run.arena[id];
      if (ex.dead) continue;
      if (dominates(lab.cost, lab.minutes, ex.cost, ex.minutes) &&
          visited_subset(lab.visited, ex.visited)) {
        ex.dead = true;
      }
    }
    bucket.erase(std::remove_if(bucket.begin(), bucket.end(),
                                [&](int id) { return run.arena[id].dead; }),
                 bucket.end());
    int id = static_cast<int>(run.arena.size());
    bucket.push_back(id);
    queue.push_back(id);
    run.arena.push_back(std::move(lab));
  };

  for (int i = 0; i < static_cast<int>(run.seeds.size()); ++i) {
    const AccessSeed& s = run.seeds[i];
    if (static_cast<long long>(s.minutes) > cap) continue;
    Label lab;
    lab.minutes = s.minutes;
    lab.node = s.node;
    lab.seed = i;
    if (elementary) {
      lab.visited.assign(blocks, 0);
      if (!s.prefix.empty()) {
        visited_set(lab.visited, cgn.arcs[s.prefix.front()].tail);
        for (int a : s.prefix) visited_set(lab.visited, cgn.arcs[a].head);
      } else {
        visited_set(lab.visited, lab.node);
      }
    }
    try_insert(std::move(lab));
  }

  while (!queue.empty()) {
    int id = queue.front();
    queue.pop_front();
    if (run.arena[id].dead) continue;
    // Copy the scalar fields: the arena may reallocate during insertion.
    const Label cur = run.arena[id];
    for (int a : cgn.out[cur.node]) {
      const CgnArc& arc = cgn.arcs[a];
      if (!arc_allowed(cgn, arc, group.kind, group.period, prob.mask)) continue;
      long long nm = static_cast<long long>(cur.minutes) + arc.minutes;
      if (nm > cap) continue;
      double nc = cur.cost + arc_price(duals, a, arc, group.kind);
      if (nc > cost_ceiling) continue;
      if (elementary && visited_test(cur.visited, arc.head)) continue;
      Label nxt;
      nxt.cost = nc;
      nxt.minutes = static_cast<int>(nm);
      nxt.node = arc.head;
      nxt.parent = id;
      nxt.arc = a;
      nxt.depth = cur.depth + 1;
      if (elementary) {
        nxt.visited = cur.visited;
        visited_set(nxt.visited, arc.head);
      }
      try_insert(std::move(nxt));
    }
  }
  return run;
}

std::vector<int> recover_label_path(const LabelRun& run, int label_id) {
  std::vector<int> rev;
  int id = label_id;
  while (run.arena[id].parent != -1) {
    rev.push_back(run.arena[id].arc);
    id = run.arena[id].parent;
  }
  std::vector<int> arcs = run.seeds[run.arena[id].seed].prefix;
  for (auto it = rev.rbegin(); it != rev.rend(); ++it) arcs.push_back(*it);
  return arcs;
}

}  // namespace

std::vector<PricedColumn> price_source(const PricingProblem& prob,
                                       const SourceGroup& group,
                                       const DualPrices& duals) {
  const ChangeGoNetwork& cgn = *prob.cgn;
  const std::vector<RoutedDemand>& demands = *prob.demands;

  // Members that could possibly price out: margin phi - alpha above
  // tolerance (arc costs are nonnegative, so margin bounds reduced cost).
  std::vector<int> members;
  for (int d : group.demand_idx) {
    double margin = demands[d].entry.unit_revenue - duals.demand_dual[d];
    if (margin > tol::kReducedCost) members.push_back(d);
  }
  if (members.empty()) return {};

  std::map<int, PricedColumn> results;  // demand -> column
  std::vector<int> pending;

  DijkstraResult dij = cheapest_paths(prob, group, duals);
  for (int d : members) {
    const RoutedDemand& rd = demands[d];
    double margin = rd.entry.unit_revenue - duals.demand_dual[d];
    int best_sink = -1;
    for (int s : rd.sink_nodes) {
      if (!std::isfinite(dij.cost[s])) continue;
      if (best_sink == -1 || dij.cost[s] < dij.cost[best_sink] ||
          (dij.cost[s] == dij.cost[best_sink] &&
           dij.minutes[s] < dij.minutes[best_sink])) {
        best_sink = s;
      }
    }
    if (best_sink == -1) continue;  // unreachable under the mask
    double best_possible = margin - dij.cost[best_sink];
    if (best_possible <= tol::kReducedCost) continue;  // certified: no column
    if (dij.minutes[best_sink] <=
        static_cast<long long>(rd.threshold_min + 1e-9)) {
      std::vector<int> arcs = recover_dijkstra_path(dij, cgn, best_sink);
      if (walk_is_simple(cgn, arcs)) {
        PricedColumn pc;
        pc.demand = d;
        pc.minutes = static_cast<int>(dij.minutes[best_sink]);
        pc.arcs = std::move(arcs);
        pc.reduced_cost = best_possible;
        results[d] = std::move(pc);
        continue;
      }
    }
    pending.push_back(d);
  }

  if (!pending.empty()) {
    long long cap = 0;
    double max_margin = 0.0;
    for (int d : pending) {
      cap = std::max(cap,
                     static_cast<long long>(demands[d].threshold_min + 1e-9));
      max_margin = std::max(max_margin, demands[d].entry.unit_revenue -
                                            duals.demand_dual[d]);
    }
    bool elementary =
        static_cast<int>(cgn.nodes.size()) < prob.elementary_cutoff_nodes;
    for (int attempt = 0; attempt < 2; ++attempt) {
      LabelRun run = run_labels(prob, group, duals, cap,
                                max_margin - tol::kReducedCost, elementary);
      bool need_elementary_rerun = false;
      for (int d : pending) {
        const RoutedDemand& rd = demands[d];
        double margin = rd.entry.unit_revenue - duals.demand_dual[d];
        int best = -1;
        for (int sink : rd.sink_nodes) {
          for (int id : run.at_node[sink]) {
            const Label& lab = run.arena[id];
            if (lab.dead) continue;
            if (lab.minutes > rd.threshold_min + 1e-9) continue;
            if (best == -1) {
              best = id;
              continue;
            }
            const Label& bl = run.arena[best];
            if (lab.cost < bl.cost - 1e-12) {
              best = id;
            } else if (lab.cost < bl.cost + 1e-12) {
              // Tie on reduced cost: fewer arcs, then lexicographic arcs.
              if (lab.depth < bl.depth) {
                best = id;
              } else if (lab.depth == bl.depth &&
                         recover_label_path(run, id) <
                             recover_label_path(run, best)) {
                best = id;
              }
            }
          }
        }
        if (best == -1) continue;
        double reduced = margin - run.arena[best].cost;
        if (reduced <= tol::kReducedCost) continue;
        std::vector<int> arcs = recover_label_path(run, best);
        if (!elementary && !walk_is_simple(cgn, arcs)) {
          need_elementary_rerun = true;
          break;
        }
        PricedColumn pc;
        pc.demand = d;
        pc.arcs = std::move(arcs);
        pc.minutes = run.arena[best].minutes;
        pc.reduced_cost = reduced;
        results[d] = std::move(pc);
      }
      if (!need_elementary_rerun) break;
      // A cyclic walk slipped through: redo this source with node-set
      // tracking, which guarantees simple paths.
      for (int d : pending) results.erase(d);
      elementary = true;
    }
  }

  std::vector<PricedColumn> out;
  for (int d : group.demand_idx) {
    auto it = results.find(d);
    if (it != results.end()) out.push_back(std::move(it->second));
  }
  return out;
}

}  // namespace raillp
