#include "raillp/cli.hpp"

#include <algorithm>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "raillp/io.hpp"
#include "raillp/pipeline.hpp"

namespace raillp {

namespace {

// Thrown after --help/--version output so run_cli can exit 0 cleanly.
struct HelpShown {};

std::string out_dir(const RunConfig& cfg) {
  return cfg.out.empty() ? std::string(".") : cfg.out;
}

PhysicalNetwork load_network(const std::string& spec) {
  if (spec == "medium") return medium_network();
  const std::string prefix = "custom:";
  if (spec.rfind(prefix, 0) == 0) {
    return read_network_file(spec.substr(prefix.size()));
  }
  throw RaillpError("unknown network \"" + spec +
                    "\" (expected medium or custom:<file>)");
}

Scenario need_scenario(const std::string& s) {
  auto sc = parse_scenario(s);
  if (!sc) {
    throw RaillpError("unknown scenario \"" + s +
                      "\" (expected P, P+F or P+F+M)");
  }
  return *sc;
}

PlanPolicy need_plan(const std::string& s) {
  auto p = parse_plan(s);
  if (!p) throw RaillpError("unknown plan \"" + s + "\" (expected MP or PE)");
  return *p;
}

int cmd_gen(const RunConfig& cfg) {
  PhysicalNetwork net = load_network(cfg.network);
  Instance inst = generate_instance(net, cfg.seed, cfg.level, cfg.ratio);
  std::string path = cfg.out.empty() ? std::string("instance.json") : cfg.out;
  write_instance(inst, path);
  std::cout << path << "\n";
  return 0;
}

int cmd_solve(const RunConfig& cfg) {
  Instance inst = read_instance(cfg.instance_path);
  Scenario scenario = need_scenario(cfg.scenario);
  PlanPolicy plan = need_plan(cfg.plan);
  ModelParams params;
  SolveContext ctx = build_context(std::move(inst), scenario, params);

  ColgenConfig cg;
  cg.jobs = cfg.jobs;
  cg.time_limit_sec = cfg.time_limit_sec;
  HeuristicConfig hc;
  hc.time_limit_sec = cfg.time_limit_sec;

  std::vector<std::string> trace_lines;
  TraceFn tracer = nullptr;
  if (cfg.trace) {
    tracer = [&trace_lines](const std::string& line) {
      std::cerr << line << "\n";
      trace_lines.push_back(line);
    };
  }

  SolveOutput so = solve_instance(ctx, plan, cfg.method, cg, hc, tracer);

  SolveInvocation inv;
  inv.instance_path = cfg.instance_path;
  inv.scenario = scenario;
  inv.plan = plan;
  inv.method = cfg.method;
  inv.ratio = -1.0;
  inv.params = params;
  inv.colgen = cg;
  inv.heuristic = hc;

  const std::string dir = out_dir(cfg);
  write_solution(dir + "/solution.json", inv, ctx, so.sol, so.metrics);
  atomic_write(dir + "/metrics.csv",
               metrics_csv_header() + "\n" +
                   metrics_csv_row(cfg.instance_path, cfg.scenario, cfg.plan,
                                   cfg.method, -1.0, so.metrics) +
                   "\n");
  if (cfg.trace) {
    std::string blob;
    for (const std::string& line : trace_lines) blob += line + "\n";
    atomic_write(dir + "/trace.log", blob);
  }
  std::cout << metrics_text(so.metrics);
  return 0;
}

int cmd_report(const RunConfig& cfg) {
  LoadedSolution ls = read_solution(cfg.solution_path);
  Instance inst = read_instance(ls.inv.instance_path);
  if (ls.inv.ratio >= 0.0) inst = reallocate_ratio(inst, ls.inv.ratio);
  SolveContext ctx =
      build_context(std::move(inst), ls.inv.scenario, ls.inv.params);
  if (ls.sol.frequency.size() != ctx.pool.lines.size()) {
    throw RaillpError("solution does not match the rebuilt line pool");
  }
  MetricsReport m = compute_metrics(ctx.instance.net, ctx.pool, ctx.cgn,
                                    ctx.demands, ls.sol, ls.inv.plan);
  if (metrics_json_text(m) != solution_metrics_json_text(cfg.solution_path)) {
    throw RaillpError("recomputed metrics differ from the stored metrics");
  }
  std::cout << metrics_text(m);
  return 0;
}

int cmd_compare(const RunConfig& cfg) {
  Instance base = read_instance(cfg.instance_path);
  std::vector<double> ratios = cfg.ratios;
  if (ratios.empty()) ratios = {1.0, 1.5, 2.0};
  std::vector<std::string> scenarios = cfg.scenarios;
  if (scenarios.empty()) scenarios = {"P", "P+F", "P+F+M"};

  ColgenConfig cg;
  cg.jobs = cfg.jobs;
  cg.time_limit_sec = cfg.time_limit_sec;
  HeuristicConfig hc;
  hc.time_limit_sec = cfg.time_limit_sec;
  ModelParams params;

  std::ostringstream csv;
  csv << metrics_csv_header() << "\n";
  for (double ratio : ratios) {
    Instance inst = reallocate_ratio(base, ratio);
    for (const std::string& sc_name : scenarios) {
      Scenario scenario = need_scenario(sc_name);
      SolveContext ctx = build_context(inst, scenario, params);
      for (PlanPolicy plan :
           {PlanPolicy::kMultiPeriod, PlanPolicy::kPeriodEqual}) {
        if (cfg.trace) {
          std::cerr << "compare: ratio " << format_double(ratio)
                    << " scenario " << sc_name << " plan " << to_string(plan)
                    << "\n";
        }
        SolveOutput so =
            solve_instance(ctx, plan, cfg.method, cg, hc, nullptr);
        csv << metrics_csv_row(cfg.instance_path, sc_name, to_string(plan),
                               cfg.method, ratio, so.metrics)
            << "\n";
      }
    }
  }
  const std::string path = out_dir(cfg) + "/compare.csv";
  atomic_write(path, csv.str());
  std::cout << path << "\n";
  return 0;
}

int cmd_inspect(const RunConfig& cfg) {
  Instance inst = read_instance(cfg.instance_path);
  Scenario scenario = need_scenario(cfg.scenario);
  ModelParams params;
  SolveContext ctx = build_context(std::move(inst), scenario, params);
  if (cfg.dump_cgn) {
    std::cout << dump_cgn(ctx.instance.net, ctx.pool, ctx.cgn);
  } else {
    std::cout << dump_pool(ctx.instance.net, ctx.pool);
  }
  return 0;
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args) {
  RunConfig cfg;
  CLI::App app{"multi-period railway line planning with passengers and freight",
               "raillp"};
  app.require_subcommand(1);

  CLI::App* gen = app.add_subcommand("gen", "generate a demand instance");
  gen->add_option("--network", cfg.network,
                  "built-in \"medium\" or custom:<network file>");
  gen->add_option("--seed", cfg.seed, "random seed");
  gen->add_option("--level", cfg.level, "demand level 1..10")
      ->check(CLI::Range(1, 10));
  gen->add_option("--ratio", cfg.ratio, "peak/off-peak demand ratio R")
      ->check(CLI::PositiveNumber);
  gen->add_option("--out", cfg.out, "output file (default instance.json)");

  CLI::App* solve = app.add_subcommand("solve", "solve an instance");
  solve->add_option("--instance", cfg.instance_path, "instance file")
      ->required();
  solve->add_option("--scenario", cfg.scenario, "P | P+F | P+F+M");
  solve->add_option("--method", cfg.method, "diving | pnb");
  solve->add_option("--plan", cfg.plan, "MP | PE");
  solve->add_option("--jobs", cfg.jobs, "pricing threads")
      ->check(CLI::PositiveNumber);
  solve->add_option("--time-limit", cfg.time_limit_sec,
                    "seconds per phase (0 = unlimited)");
  solve->add_flag("--trace", cfg.trace, "progress to stderr + trace.log");
  solve->add_option("--out", cfg.out, "output directory (default .)");

  CLI::App* report =
      app.add_subcommand("report", "recompute metrics from a solution file");
  report->add_option("--solution", cfg.solution_path, "solution file")
      ->required();

  CLI::App* compare = app.add_subcommand(
      "compare", "solve a scenario x plan x ratio matrix into one CSV");
  compare->add_option("--instance", cfg.instance_path, "instance file")
      ->required();
  compare->add_option("--ratios", cfg.ratios, "comma-separated R values")
      ->delimiter(',');
  compare->add_option("--scenarios", cfg.scenarios,
                      "comma-separated scenario names")
      ->delimiter(',');
  compare->add_option("--method", cfg.method, "diving | pnb");
  compare->add_option("--jobs", cfg.jobs, "pricing threads")
      ->check(CLI::PositiveNumber);
  compare->add_option("--time-limit", cfg.time_limit_sec,
                      "seconds per phase (0 = unlimited)");
  compare->add_flag("--trace", cfg.trace, "progress to stderr");
  compare->add_option("--out", cfg.out, "output directory (default .)");

  CLI::App* inspect = app.add_subcommand(
      "inspect", "print the line pool (or network graph) of an instance");
  inspect->add_option("--instance", cfg.instance_path, "instance file")
      ->required();
  inspect->add_option("--scenario", cfg.scenario, "P | P+F | P+F+M");
  inspect->add_flag("--cgn", cfg.dump_cgn, "print the routing graph instead");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    throw HelpShown{};
  } catch (const CLI::CallForAllHelp& e) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    throw HelpShown{};
  } catch (const CLI::ParseError& e) {
    throw RaillpError(std::string("usage: ") + e.what());
  }

  for (CLI::App* sub : {gen, solve, report, compare, inspect}) {
    if (sub->parsed()) {
      cfg.subcommand = sub->get_name();
      break;
    }
  }
  return cfg;
}

int run_command(const RunConfig& cfg) {
  if (cfg.subcommand == "gen") return cmd_gen(cfg);
  if (cfg.subcommand == "solve") return cmd_solve(cfg);
  if (cfg.subcommand == "report") return cmd_report(cfg);
  if (cfg.subcommand == "compare") return cmd_compare(cfg);
  if (cfg.subcommand == "inspect") return cmd_inspect(cfg);
  throw RaillpError("unknown subcommand \"" + cfg.subcommand + "\"");
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  try {
    RunConfig cfg = parse_args(args);
    return run_command(cfg);
  } catch (const HelpShown&) {
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace raillp
