#pragma once

#include "pickwave/heuristics.hpp"
#include "pickwave/pricing.hpp"

namespace pickwave {

enum class SolveMode { Cgh, ExactEnum };

struct EngineConfig {
  SolveMode mode = SolveMode::Cgh;
  double time_limit_s = 3600.0;
  double pool_time_s = 600.0;
  double pricing_time_s = 180.0;
  double final_mip_min_s = 600.0;
  double bin_solve_s = 10.0;
  bool use_mt = true;
  bool use_fs = true;
  bool use_scc = true;
  bool use_r1c = true;
  bool plain_tour_rows = false;
  long long enum_budget = 10000000;
  unsigned seed = 1;
};

struct Bounds {
  long long lb = 0;
  std::optional<long long> ub;

  double gap_percent() const {
    if (!ub || lb <= 0) return -1.0;
    return 100.0 * (double)(*ub - lb) / (double)lb;
  }
};

struct IterationTrace {
  double rmp_obj = 0.0;
  double pricing_bound = 0.0;
  long long lb_after = 0;
  size_t n_cuts_active = 0;
  bool from_pool = false;
};

struct RunStats {
  long long n_columns = 0;
  long long n_pricing_iterations = 0;
  int cuts_mt = 0, cuts_fs = 0, cuts_scc = 0, cuts_r1c = 0;
  int cut_rounds = 0;
  double pool_time_s = 0.0, cg_time_s = 0.0, cut_time_s = 0.0,
         final_time_s = 0.0, total_time_s = 0.0;
  bool lp_converged = false;
  bool scc_pool_overflow = false;
  std::vector<IterationTrace> trace;
};

struct RunResult {
  SolveStatus status = SolveStatus::TimeLimit;
  Bounds bounds;
  std::optional<Solution> solution;
  RunStats stats;
  MasterState state;
};

long long lagrangian_lower_bound(double rmp_objective, double pricing_bound,
                                 double route_count_cap);

// All capacity- and deadline-feasible routes; throws BudgetExceeded when more
// than `budget` capacity-feasible subsets exist.
std::vector<RouteSpec> enumerate_routes(const Instance& inst, Routing& routing,
                                        long long budget = 10000000);

struct RootBoundResult {
  SolveStatus status = SolveStatus::Infeasible;
  double value = 0.0;
  int rounds = 0;
  MasterState state;
};

// LP over a fixed column set with cut separation run to a fixed point.
RootBoundResult root_lower_bound(const Instance& inst, Routing& routing,
                                 const std::vector<RouteSpec>& columns,
                                 const EngineConfig& cfg, double time_limit_s);

RunResult run_cgh(const Instance& inst, const EngineConfig& cfg);
RunResult run_exact_enum(const Instance& inst, const EngineConfig& cfg);
RunResult run_instance(const Instance& inst, const EngineConfig& cfg);

}  // namespace pickwave
