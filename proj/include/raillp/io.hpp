#pragma once

#include <cstdint>
#include <string>

#include "raillp/pipeline.hpp"

namespace raillp {

// Fixed-format floating point for every deliverable file (deterministic,
// locale-independent).
std::string format_double(double v);

// Writes via a temp file in the same directory + rename, so readers never
// observe a partial file.
void atomic_write(const std::string& path, const std::string& content);

// Instance files: JSON, schema "rwlp-instance/1". Unknown keys are
// rejected; all referential integrity is validated on read.
Instance read_instance(const std::string& path);
std::string instance_to_json(const Instance& inst);
void write_instance(const Instance& inst, const std::string& path);

// Network-only files, schema "rwlp-network/1" (instance files are accepted
// too; their demands are ignored).
PhysicalNetwork read_network_file(const std::string& path);

// Solution files: JSON, schema "rwlp-solution/1". Carries the invocation
// (instance path, scenario, plan, method, seed, model parameters) so the
// solve context can be rebuilt, the integer solution (frequencies and
// flows as cgn arc paths plus readable station sequences), and the metrics
// block. No timing fields: files are byte-stable across runs.
struct SolveInvocation {
  std::string instance_path;
  Scenario scenario = Scenario::kPFM;
  PlanPolicy plan = PlanPolicy::kMultiPeriod;
  std::string method = "diving";
  double ratio = -1.0;  // < 0: as generated
  ModelParams params;
  ColgenConfig colgen;      // jobs is not serialized
  HeuristicConfig heuristic;
};

void write_solution(const std::string& path, const SolveInvocation& inv,
                    const SolveContext& ctx, const IntegerSolution& sol,
                    const MetricsReport& metrics);

struct LoadedSolution {
  SolveInvocation inv;
  IntegerSolution sol;
};

// Reads a solution file back. Structural fields (line descriptors, station
// sequences) are checked against the rebuilt context by the caller.
LoadedSolution read_solution(const std::string& path);

// The exact JSON text of the metrics block as written into solution files;
// lets `report` verify byte equality of recomputed metrics.
std::string metrics_json_text(const MetricsReport& m);

// The metrics block of a solution file, re-serialized the same way.
std::string solution_metrics_json_text(const std::string& path);

}  // namespace raillp
