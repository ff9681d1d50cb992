#pragma once

#include <optional>
#include <set>

#include "pickwave/cuts.hpp"
#include "pickwave/lp.hpp"
#include "pickwave/model.hpp"
#include "pickwave/routing.hpp"

namespace pickwave {

struct DualPrices {
  std::map<OrderId, double> alpha;  // cover rows, >= 0
  std::map<int, double> beta;       // aggregated bin rows, <= 0
  std::vector<double> gamma;        // aligned with the active cut list
};

struct MasterState {
  std::vector<RouteSpec> columns;
  std::vector<Cut> cuts;
  double last_obj = 0.0;
  std::vector<double> last_rho;
  DualPrices last_duals;

  std::set<std::vector<OrderId>> column_keys;
  std::set<std::string> cut_ids;

  bool add_column(const RouteSpec& r);
  bool add_cut(const Cut& c);
};

struct MasterLpOutcome {
  SolveStatus status = SolveStatus::Infeasible;
  double obj = 0.0;
  std::vector<double> rho;
  DualPrices duals;
};

MasterLpOutcome solve_restricted_master(MasterState& state,
                                        const Instance& inst);

double reduced_cost(const RouteSpec& route, const DualPrices& duals,
                    const std::vector<Cut>& cuts);

struct BinpackOutcome {
  SolveStatus status = SolveStatus::Infeasible;
  std::optional<Solution> solution;
  double bound = 0.0;
};

BinpackOutcome solve_binpacking_mip(const std::vector<RouteSpec>& columns,
                                    const Instance& inst, double time_limit_s,
                                    const std::vector<Cut>* cuts = nullptr,
                                    const Solution* warm = nullptr);

struct VerifyReport {
  bool ok = true;
  std::vector<std::string> violations;
};

VerifyReport verify_solution(const Solution& sol, const Instance& inst,
                             const Routing& routing);

}  // namespace pickwave
