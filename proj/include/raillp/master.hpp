#pragma once

#include <map>
#include <optional>
#include <vector>

#include "raillp/cgn.hpp"
#include "raillp/lp_backend.hpp"

namespace raillp {

enum class PlanPolicy { kMultiPeriod, kPeriodEqual };

// One generated path column for a demand.
struct Column {
  int demand = -1;
  std::vector<int> arcs;      // cgn arc ids, in walk order
  int minutes = 0;            // counted duration
  int var = -1;               // LP variable id once added
};

// Dual prices snapshot handed to pricing. Capacity rows exist only for
// travel arcs some column touches; absent entries price as zero, which is
// exact because an uncovered arc's capacity row is slack by construction.
struct DualPrices {
  std::vector<double> demand_dual;          // by demand index
  std::map<int, double> pax_cap_dual;       // travel arc -> dual
  std::map<int, double> freight_cap_dual;

  double pax(int arc) const {
    auto it = pax_cap_dual.find(arc);
    return it == pax_cap_dual.end() ? 0.0 : it->second;
  }
  double freight(int arc) const {
    auto it = freight_cap_dual.find(arc);
    return it == freight_cap_dual.end() ? 0.0 : it->second;
  }
};

// Restricted master problem: frequency variables x_l (shared across periods
// of a (route, mode) pair under the period-equal plan), demand-cap rows,
// lazily materialized per-arc capacity rows, and per-(track, period)
// throughput rows. Value-copyable so heuristics can branch on snapshots.
class Master {
 public:
  Master(const PhysicalNetwork& net, const LinePool& pool,
         const ChangeGoNetwork& cgn, const std::vector<RoutedDemand>& demands,
         PlanPolicy plan, const ModelParams& params);

  // Adds a column unless an identical (demand, arc multiset) column exists;
  // returns false on duplicate.
  bool add_column(Column col);

  SolveStatus solve();
  double objective() const { return lp_.objective(); }
  DualPrices duals() const;

  const std::vector<Column>& columns() const { return columns_; }
  double column_value(int idx) const { return lp_.value(columns_[idx].var); }

  double line_frequency(int line) const { return lp_.value(line_var_[line]); }
  int line_var(int line) const { return line_var_[line]; }
  int num_frequency_vars() const { return num_freq_vars_; }
  // Frequency variables occupy LP ids 0..num_frequency_vars-1 in order.
  double lp_value_of_frequency_var(int var) const { return lp_.value(var); }
  int total_lines() const { return static_cast<int>(line_var_.size()); }
  const PhysicalNetwork& network() const { return *net_; }
  const LinePool& pool() const { return *pool_; }
  const ModelParams& params() const { return params_; }
  // Default (structural) upper bound of the line's frequency variable.
  double frequency_cap(int var) const { return freq_var_cap_[var]; }
  void set_frequency_bounds(int var, double lo, double hi);
  std::pair<double, double> frequency_bounds(int var) const;
  const std::vector<int>& frequency_var_lines(int var) const {
    return freq_var_lines_[var];
  }

  PlanPolicy plan() const { return plan_; }
  const std::vector<RoutedDemand>& demands() const { return *demands_; }
  const ChangeGoNetwork& cgn() const { return *cgn_; }
  const std::string& last_lp_text() { lp_text_ = lp_.write_lp(); return lp_text_; }

 private:
  void ensure_capacity_rows(const Column& col);

  const PhysicalNetwork* net_;
  const LinePool* pool_;
  const ChangeGoNetwork* cgn_;
  const std::vector<RoutedDemand>* demands_;
  PlanPolicy plan_;
  ModelParams params_;

  SimplexSolver lp_;
  std::vector<int> line_var_;               // line -> LP var (shared for PE)
  std::vector<double> freq_var_cap_;        // by frequency var id
  std::vector<std::vector<int>> freq_var_lines_;  // frequency var -> lines
  int num_freq_vars_ = 0;
  std::vector<int> demand_row_;             // demand index -> row id
  std::map<int, int> pax_cap_row_;          // travel arc -> row id
  std::map<int, int> freight_cap_row_;
  std::vector<Column> columns_;
  std::map<std::pair<int, std::vector<int>>, int> column_key_;  // dedup
  std::string lp_text_;
};

}  // namespace raillp
