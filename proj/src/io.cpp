#include "raillp/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>

#include <json.hpp>

namespace raillp {

namespace {

using ojson = nlohmann::ordered_json;

constexpr const char* kInstanceSchema = "rwlp-instance/1";
constexpr const char* kNetworkSchema = "rwlp-network/1";
constexpr const char* kSolutionSchema = "rwlp-solution/1";

[[noreturn]] void fail(const std::string& what) { throw RaillpError(what); }

void expect_keys(const ojson& j, std::initializer_list<const char*> allowed,
                 const std::string& ctx) {
  if (!j.is_object()) fail(ctx + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) fail(ctx + ": unknown key \"" + it.key() + "\"");
  }
}

const ojson& need(const ojson& j, const char* key, const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end()) fail(ctx + ": missing key \"" + key + "\"");
  return *it;
}

std::string need_str(const ojson& j, const char* key, const std::string& ctx) {
  const ojson& v = need(j, key, ctx);
  if (!v.is_string()) fail(ctx + ": \"" + key + "\" must be a string");
  return v.get<std::string>();
}

double need_num(const ojson& j, const char* key, const std::string& ctx) {
  const ojson& v = need(j, key, ctx);
  if (!v.is_number()) fail(ctx + ": \"" + key + "\" must be a number");
  return v.get<double>();
}

long long need_int(const ojson& j, const char* key, const std::string& ctx) {
  const ojson& v = need(j, key, ctx);
  if (!v.is_number_integer()) {
    fail(ctx + ": \"" + key + "\" must be an integer");
  }
  return v.get<long long>();
}

bool need_bool(const ojson& j, const char* key, const std::string& ctx) {
  const ojson& v = need(j, key, ctx);
  if (!v.is_boolean()) fail(ctx + ": \"" + key + "\" must be a boolean");
  return v.get<bool>();
}

ojson parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open " + path);
  try {
    return ojson::parse(in);
  } catch (const std::exception& e) {
    fail(path + ": " + e.what());
  }
}

StationClass parse_class(const std::string& s, const std::string& ctx) {
  if (s == "major") return StationClass::kMajor;
  if (s == "intermediate") return StationClass::kIntermediate;
  if (s == "small") return StationClass::kSmall;
  if (s == "minor") return StationClass::kMinor;
  fail(ctx + ": unknown station class \"" + s + "\"");
}

// Emits integral doubles as JSON integers for readability.
ojson tidy_number(double v) {
  if (std::isfinite(v) && std::floor(v) == v && std::fabs(v) < 9e15) {
    return ojson(static_cast<long long>(v));
  }
  return ojson(v);
}

ojson json_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return ojson(v);
}

PhysicalNetwork network_from_json(const ojson& j, const std::string& ctx) {
  PhysicalNetwork net;
  const ojson& stations = need(j, "stations", ctx);
  if (!stations.is_array() || stations.empty()) {
    fail(ctx + ": \"stations\" must be a non-empty array");
  }
  for (const ojson& s : stations) {
    expect_keys(s, {"id", "name", "class", "terminal"}, ctx + ".stations[]");
    Station st;
    st.id = need_str(s, "id", ctx);
    st.name = s.contains("name") ? need_str(s, "name", ctx) : st.id;
    st.cls = parse_class(need_str(s, "class", ctx), ctx);
    st.is_terminal = s.contains("terminal") ? need_bool(s, "terminal", ctx)
                                            : false;
    net.stations.push_back(std::move(st));
  }
  auto station_index = [&net, &ctx](const std::string& id) {
    auto ix = net.find_station(id);
    if (!ix) fail(ctx + ": unknown station \"" + id + "\"");
    return *ix;
  };

  const ojson& tracks = need(j, "tracks", ctx);
  if (!tracks.is_array()) fail(ctx + ": \"tracks\" must be an array");
  for (const ojson& t : tracks) {
    expect_keys(t, {"u", "v", "km"}, ctx + ".tracks[]");
    Track tr;
    tr.u = station_index(need_str(t, "u", ctx));
    tr.v = station_index(need_str(t, "v", ctx));
    tr.km = need_num(t, "km", ctx);
    net.tracks.push_back(tr);
  }

  const ojson& periods = need(j, "periods", ctx);
  if (!periods.is_array()) fail(ctx + ": \"periods\" must be an array");
  for (const ojson& p : periods) {
    expect_keys(p, {"id", "start_hour", "end_hour"}, ctx + ".periods[]");
    Period pe;
    pe.id = need_str(p, "id", ctx);
    pe.start_hour = need_num(p, "start_hour", ctx);
    pe.end_hour = need_num(p, "end_hour", ctx);
    net.periods.push_back(std::move(pe));
  }

  auto viol = validate_network(net);
  if (!viol.empty()) {
    fail(ctx + ": invalid network: " + viol.front().code + " (" +
         viol.front().detail + ")");
  }
  return net;
}

std::vector<DemandEntry> demands_from_json(const ojson& j,
                                           const PhysicalNetwork& net,
                                           const std::string& ctx) {
  std::vector<DemandEntry> demands;
  const ojson& arr = need(j, "demands", ctx);
  if (!arr.is_array()) fail(ctx + ": \"demands\" must be an array");
  for (const ojson& d : arr) {
    expect_keys(d,
                {"kind", "origin", "destination", "period", "quantity",
                 "unit_revenue"},
                ctx + ".demands[]");
    DemandEntry e;
    std::string kind = need_str(d, "kind", ctx);
    if (kind == "passenger") {
      e.kind = DemandKind::kPassenger;
    } else if (kind == "freight") {
      e.kind = DemandKind::kFreight;
    } else {
      fail(ctx + ": unknown demand kind \"" + kind + "\"");
    }
    auto o = net.find_station(need_str(d, "origin", ctx));
    auto t = net.find_station(need_str(d, "destination", ctx));
    if (!o || !t) fail(ctx + ": demand references an unknown station");
    e.origin = *o;
    e.destination = *t;
    if (e.kind == DemandKind::kPassenger) {
      auto p = net.find_period(need_str(d, "period", ctx));
      if (!p) fail(ctx + ": demand references an unknown period");
      e.period = *p;
    } else if (d.contains("period")) {
      fail(ctx + ": freight demand must not carry a period");
    }
    e.quantity = need_num(d, "quantity", ctx);
    e.unit_revenue = need_num(d, "unit_revenue", ctx);
    demands.push_back(e);
  }
  auto viol = validate_demands(net, demands);
  if (!viol.empty()) {
    fail(ctx + ": invalid demands: " + viol.front().code + " (" +
         viol.front().detail + ")");
  }
  return demands;
}

ojson network_to_json(const PhysicalNetwork& net) {
  ojson j = ojson::object();
  j["stations"] = ojson::array();
  for (const Station& s : net.stations) {
    ojson o = ojson::object();
    o["id"] = s.id;
    if (s.name != s.id) o["name"] = s.name;
    o["class"] = to_string(s.cls);
    if (s.is_terminal) o["terminal"] = true;
    j["stations"].push_back(std::move(o));
  }
  j["tracks"] = ojson::array();
  for (const Track& t : net.tracks) {
    ojson o = ojson::object();
    o["u"] = net.stations[t.u].id;
    o["v"] = net.stations[t.v].id;
    o["km"] = tidy_number(t.km);
    j["tracks"].push_back(std::move(o));
  }
  j["periods"] = ojson::array();
  for (const Period& p : net.periods) {
    ojson o = ojson::object();
    o["id"] = p.id;
    o["start_hour"] = tidy_number(p.start_hour);
    o["end_hour"] = tidy_number(p.end_hour);
    j["periods"].push_back(std::move(o));
  }
  return j;
}

ojson params_to_json(const ModelParams& p) {
  ojson j = ojson::object();
  j["speed_kmh"] = tidy_number(p.speed_kmh);
  j["dwell_min"] = p.dwell_min;
  j["transfer_min"] = p.transfer_min;
  j["interperiod_at_transfers_only"] = p.interperiod_at_transfers_only;
  j["count_initial_access"] = p.count_initial_access;
  j["passenger_detour_factor"] = p.passenger_detour_factor;
  j["freight_detour_factor"] = p.freight_detour_factor;
  j["line_cost_per_hour"] = tidy_number(p.line_cost_per_hour);
  j["throughput_per_hour"] = tidy_number(p.throughput_per_hour);
  j["throughput_joint_directions"] = p.throughput_joint_directions;
  j["route_cap"] = p.route_cap;
  j["carriage_units"] = tidy_number(p.carriage_units);
  return j;
}

ModelParams params_from_json(const ojson& j, const std::string& ctx) {
  expect_keys(j,
              {"speed_kmh", "dwell_min", "transfer_min",
               "interperiod_at_transfers_only", "count_initial_access",
               "passenger_detour_factor", "freight_detour_factor",
               "line_cost_per_hour", "throughput_per_hour",
               "throughput_joint_directions", "route_cap", "carriage_units"},
              ctx);
  ModelParams p;
  p.speed_kmh = need_num(j, "speed_kmh", ctx);
  p.dwell_min = static_cast<int>(need_int(j, "dwell_min", ctx));
  p.transfer_min = static_cast<int>(need_int(j, "transfer_min", ctx));
  p.interperiod_at_transfers_only =
      need_bool(j, "interperiod_at_transfers_only", ctx);
  p.count_initial_access = need_bool(j, "count_initial_access", ctx);
  p.passenger_detour_factor = need_num(j, "passenger_detour_factor", ctx);
  p.freight_detour_factor = need_num(j, "freight_detour_factor", ctx);
  p.line_cost_per_hour = need_num(j, "line_cost_per_hour", ctx);
  p.throughput_per_hour = need_num(j, "throughput_per_hour", ctx);
  p.throughput_joint_directions =
      need_bool(j, "throughput_joint_directions", ctx);
  p.route_cap = static_cast<int>(need_int(j, "route_cap", ctx));
  p.carriage_units = need_num(j, "carriage_units", ctx);
  return p;
}

SolveStatus parse_status(const std::string& s, const std::string& ctx) {
  for (SolveStatus st :
       {SolveStatus::kOptimal, SolveStatus::kInfeasible,
        SolveStatus::kUnbounded, SolveStatus::kIterLimit,
        SolveStatus::kNumeric}) {
    if (s == to_string(st)) return st;
  }
  fail(ctx + ": unknown status \"" + s + "\"");
}

ojson metrics_to_json(const MetricsReport& m) {
  ojson j = ojson::object();
  j["objective"] = m.objective;
  j["bound"] = m.bound;
  j["gap_pct"] = m.gap_pct;
  j["proven_optimal"] = m.proven_optimal;
  j["zero_plan"] = m.zero_plan;
  j["sl_pax"] = json_or_null(m.sl_pax);
  j["sl_pax_by_period"] = ojson::array();
  for (double v : m.sl_pax_by_period) {
    j["sl_pax_by_period"].push_back(json_or_null(v));
  }
  j["sl_freight"] = json_or_null(m.sl_freight);
  j["tt_pax_h"] = json_or_null(m.tt_pax_h);
  j["tt_freight_h"] = json_or_null(m.tt_freight_h);
  j["util_pax"] = json_or_null(m.util_pax);
  j["util_pax_weighted"] = json_or_null(m.util_pax_weighted);
  j["util_pax_by_period"] = ojson::array();
  for (double v : m.util_pax_by_period) {
    j["util_pax_by_period"].push_back(json_or_null(v));
  }
  j["util_freight"] = json_or_null(m.util_freight);
  j["util_freight_weighted"] = json_or_null(m.util_freight_weighted);
  j["lines_installed"] = m.lines_installed;
  j["total_frequency"] = m.total_frequency;
  j["mode_share"] = ojson::object();
  for (const auto& [id, share] : m.mode_share) j["mode_share"][id] = share;
  j["revenue_pax"] = m.revenue_pax;
  j["revenue_freight"] = m.revenue_freight;
  j["line_cost"] = m.line_cost;
  return j;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) fail("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) fail("rename failed: " + target.string() + ": " + ec.message());
}

Instance read_instance(const std::string& path) {
  ojson j = parse_file(path);
  expect_keys(j, {"schema", "stations", "tracks", "periods", "demands"}, path);
  std::string schema = need_str(j, "schema", path);
  if (schema != kInstanceSchema) {
    fail(path + ": expected schema " + kInstanceSchema + ", found " + schema);
  }
  Instance inst;
  inst.net = network_from_json(j, path);
  inst.demands = demands_from_json(j, inst.net, path);
  return inst;
}

std::string instance_to_json(const Instance& inst) {
  ojson j = ojson::object();
  j["schema"] = kInstanceSchema;
  ojson net = network_to_json(inst.net);
  j["stations"] = std::move(net["stations"]);
  j["tracks"] = std::move(net["tracks"]);
  j["periods"] = std::move(net["periods"]);
  j["demands"] = ojson::array();
  for (const DemandEntry& e : inst.demands) {
    ojson o = ojson::object();
    o["kind"] = to_string(e.kind);
    o["origin"] = inst.net.stations[e.origin].id;
    o["destination"] = inst.net.stations[e.destination].id;
    if (e.kind == DemandKind::kPassenger) {
      o["period"] = inst.net.periods[e.period].id;
    }
    o["quantity"] = tidy_number(e.quantity);
    o["unit_revenue"] = e.unit_revenue;
    j["demands"].push_back(std::move(o));
  }
  return j.dump(2) + "\n";
}

void write_instance(const Instance& inst, const std::string& path) {
  atomic_write(path, instance_to_json(inst));
}

PhysicalNetwork read_network_file(const std::string& path) {
  ojson j = parse_file(path);
  std::string schema =
      j.is_object() && j.contains("schema") ? need_str(j, "schema", path) : "";
  if (schema == kInstanceSchema) {
    return read_instance(path).net;
  }
  expect_keys(j, {"schema", "stations", "tracks", "periods"}, path);
  if (schema != kNetworkSchema) {
    fail(path + ": expected schema " + kNetworkSchema + " or " +
         kInstanceSchema + ", found " + schema);
  }
  return network_from_json(j, path);
}

void write_solution(const std::string& path, const SolveInvocation& inv,
                    const SolveContext& ctx, const IntegerSolution& sol,
                    const MetricsReport& metrics) {
  const PhysicalNetwork& net = ctx.instance.net;
  ojson j = ojson::object();
  j["schema"] = kSolutionSchema;

  ojson vj = ojson::object();
  vj["instance"] = inv.instance_path;
  vj["scenario"] = to_string(inv.scenario);
  vj["plan"] = to_string(inv.plan);
  vj["method"] = inv.method;
  vj["ratio"] = tidy_number(inv.ratio);
  vj["params"] = params_to_json(inv.params);
  {
    ojson c = ojson::object();
    c["early_stop"] = inv.colgen.early_stop;
    c["patience"] = inv.colgen.patience;
    c["max_iterations"] = inv.colgen.max_iterations;
    c["max_columns"] = inv.colgen.max_columns;
    c["time_limit_sec"] = tidy_number(inv.colgen.time_limit_sec);
    vj["colgen"] = std::move(c);
  }
  {
    ojson h = ojson::object();
    h["time_limit_sec"] = tidy_number(inv.heuristic.time_limit_sec);
    h["elementary_cutoff_nodes"] = inv.heuristic.elementary_cutoff_nodes;
    vj["heuristic"] = std::move(h);
  }
  j["invocation"] = std::move(vj);

  ojson sj = ojson::object();
  sj["method"] = sol.method;
  sj["status"] = to_string(sol.status);
  sj["objective"] = sol.objective;
  sj["bound"] = sol.bound;
  sj["gap_pct"] = sol.gap_pct;
  sj["proven_optimal"] = sol.proven_optimal;
  sj["zero_plan_fallback"] = sol.zero_plan_fallback;
  sj["rounds"] = sol.rounds;
  sj["colgen_iterations"] = sol.colgen_iterations;
  sj["lines"] = ctx.pool.lines.size();
  sj["frequency"] = ojson::array();
  for (std::size_t l = 0; l < sol.frequency.size(); ++l) {
    if (sol.frequency[l] <= 0) continue;
    const Line& line = ctx.pool.lines[l];
    const LineRoute& route = ctx.pool.routes[line.route];
    ojson o = ojson::object();
    o["line"] = l;
    ojson stops = ojson::array();
    for (int s : route.stops) stops.push_back(net.stations[s].id);
    o["stops"] = std::move(stops);
    o["scheme"] = to_string(route.scheme);
    o["period"] = net.periods[line.period].id;
    o["mode"] = ctx.pool.modes[line.mode].id;
    o["value"] = sol.frequency[l];
    sj["frequency"].push_back(std::move(o));
  }
  sj["flows"] = ojson::array();
  for (const SolvedFlow& f : sol.flows) {
    ojson o = ojson::object();
    o["demand"] = f.demand;
    o["qty"] = tidy_number(f.qty);
    o["minutes"] = f.minutes;
    o["arcs"] = f.arcs;
    ojson stations = ojson::array();
    int prev = -1;
    if (!f.arcs.empty()) {
      int tail = ctx.cgn.arcs[f.arcs.front()].tail;
      prev = ctx.cgn.nodes[tail].station;
      stations.push_back(net.stations[prev].id);
    }
    for (int a : f.arcs) {
      int st = ctx.cgn.nodes[ctx.cgn.arcs[a].head].station;
      if (st != prev) {
        stations.push_back(net.stations[st].id);
        prev = st;
      }
    }
    o["stations"] = std::move(stations);
    sj["flows"].push_back(std::move(o));
  }
  j["solution"] = std::move(sj);
  j["metrics"] = metrics_to_json(metrics);

  atomic_write(path, j.dump(2) + "\n");
}

std::string metrics_json_text(const MetricsReport& m) {
  return metrics_to_json(m).dump(2);
}

std::string solution_metrics_json_text(const std::string& path) {
  ojson j = parse_file(path);
  return need(j, "metrics", path).dump(2);
}

LoadedSolution read_solution(const std::string& path) {
  ojson j = parse_file(path);
  expect_keys(j, {"schema", "invocation", "solution", "metrics"}, path);
  std::string schema = need_str(j, "schema", path);
  if (schema != kSolutionSchema) {
    fail(path + ": expected schema " + kSolutionSchema + ", found " + schema);
  }

  LoadedSolution out;
  const ojson& vj = need(j, "invocation", path);
  expect_keys(vj,
              {"instance", "scenario", "plan", "method", "ratio", "params",
               "colgen", "heuristic"},
              path + ".invocation");
  out.inv.instance_path = need_str(vj, "instance", path);
  {
    auto s = parse_scenario(need_str(vj, "scenario", path));
    if (!s) fail(path + ": unknown scenario");
    out.inv.scenario = *s;
    auto p = parse_plan(need_str(vj, "plan", path));
    if (!p) fail(path + ": unknown plan");
    out.inv.plan = *p;
  }
  out.inv.method = need_str(vj, "method", path);
  out.inv.ratio = need_num(vj, "ratio", path);
  out.inv.params = params_from_json(need(vj, "params", path), path + ".params");
  {
    const ojson& c = need(vj, "colgen", path);
    expect_keys(c,
                {"early_stop", "patience", "max_iterations", "max_columns",
                 "time_limit_sec"},
                path + ".colgen");
    out.inv.colgen.early_stop = need_bool(c, "early_stop", path);
    out.inv.colgen.patience = static_cast<int>(need_int(c, "patience", path));
    out.inv.colgen.max_iterations =
        static_cast<int>(need_int(c, "max_iterations", path));
    out.inv.colgen.max_columns =
        static_cast<int>(need_int(c, "max_columns", path));
    out.inv.colgen.time_limit_sec = need_num(c, "time_limit_sec", path);
  }
  {
    const ojson& h = need(vj, "heuristic", path);
    expect_keys(h, {"time_limit_sec", "elementary_cutoff_nodes"},
                path + ".heuristic");
    out.inv.heuristic.time_limit_sec = need_num(h, "time_limit_sec", path);
    out.inv.heuristic.elementary_cutoff_nodes =
        static_cast<int>(need_int(h, "elementary_cutoff_nodes", path));
  }

  const ojson& sj = need(j, "solution", path);
  expect_keys(sj,
              {"method", "status", "objective", "bound", "gap_pct",
               "proven_optimal", "zero_plan_fallback", "rounds",
               "colgen_iterations", "lines", "frequency", "flows"},
              path + ".solution");
  out.sol.method = need_str(sj, "method", path);
  out.sol.status = parse_status(need_str(sj, "status", path), path);
  out.sol.objective = need_num(sj, "objective", path);
  out.sol.bound = need_num(sj, "bound", path);
  out.sol.gap_pct = need_num(sj, "gap_pct", path);
  out.sol.proven_optimal = need_bool(sj, "proven_optimal", path);
  out.sol.zero_plan_fallback = need_bool(sj, "zero_plan_fallback", path);
  out.sol.rounds = static_cast<int>(need_int(sj, "rounds", path));
  out.sol.colgen_iterations =
      static_cast<int>(need_int(sj, "colgen_iterations", path));
  long long lines = need_int(sj, "lines", path);
  if (lines < 0) fail(path + ": negative line count");
  out.sol.frequency.assign(static_cast<std::size_t>(lines), 0);
  const ojson& freq = need(sj, "frequency", path);
  if (!freq.is_array()) fail(path + ": \"frequency\" must be an array");
  for (const ojson& o : freq) {
    expect_keys(o, {"line", "stops", "scheme", "period", "mode", "value"},
                path + ".frequency[]");
    long long l = need_int(o, "line", path);
    if (l < 0 || l >= lines) fail(path + ": line id out of range");
    out.sol.frequency[static_cast<std::size_t>(l)] =
        need_int(o, "value", path);
  }
  const ojson& flows = need(sj, "flows", path);
  if (!flows.is_array()) fail(path + ": \"flows\" must be an array");
  for (const ojson& o : flows) {
    expect_keys(o, {"demand", "qty", "minutes", "arcs", "stations"},
                path + ".flows[]");
    SolvedFlow f;
    f.demand = static_cast<int>(need_int(o, "demand", path));
    f.qty = need_num(o, "qty", path);
    f.minutes = static_cast<int>(need_int(o, "minutes", path));
    const ojson& arcs = need(o, "arcs", path);
    if (!arcs.is_array()) fail(path + ": \"arcs\" must be an array");
    for (const ojson& a : arcs) {
      if (!a.is_number_integer()) fail(path + ": arc ids must be integers");
      f.arcs.push_back(a.get<int>());
    }
    out.sol.flows.push_back(std::move(f));
  }
  return out;
}

}  // namespace raillp
