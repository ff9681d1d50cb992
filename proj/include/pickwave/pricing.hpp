#pragma once

#include "pickwave/master.hpp"

namespace pickwave {

struct CoefficientInvalid : std::runtime_error {
  explicit CoefficientInvalid(const std::string& m) : std::runtime_error(m) {}
};

enum class TourVariant { Plain, Strengthened };
enum class CoefScheme { PickOnly, Exact, BBox };

// Lower-bounding row for the pricing duration variable: selecting the whole
// order set of `route` forces t >= route.duration.
struct TourConstraint {
  RouteSpec route;
  TourVariant variant = TourVariant::Strengthened;
  CoefScheme scheme = CoefScheme::PickOnly;
  long long base = 0;                 // fixed duration part (setup)
  std::vector<long long> coef;        // per-order contribution, indexed by order id
  long long slack = 0;                // route.duration - base - sum of route coefs
};

TourConstraint make_tour_constraint(const RouteSpec& route, const Instance& inst,
                                    Routing& routing, TourVariant variant);

// Plain lower bound implied by the row when `selected` is the chosen order set.
long long tour_row_bound(const TourConstraint& tc, const Instance& inst,
                         const std::vector<OrderId>& selected);

struct PricingModel {
  LinearModel model;
  int var_t = -1;
  std::vector<int> var_e;          // per order id
  std::vector<int> deadlines;      // distinct, ascending
  std::vector<int> var_mu;         // per deadline index
  std::vector<int> var_delta;      // per deadline index

  struct ExtVars {
    int w = -1, b1 = -1, b2 = -1, b3 = -1;  // MT
    int v = -1;                             // FS
    int z = -1;                             // SCC
    int u = -1;                             // R1C
  };
  std::vector<ExtVars> ext;        // aligned with the cut list
};

PricingModel build_pricing(const Instance& inst, const DualPrices& duals,
                           const std::vector<Cut>& cuts);

void add_tour_row(PricingModel& pm, const TourConstraint& tc, const Instance& inst);

struct PricingOptions {
  double time_limit_s = 180.0;
  int max_candidates = 10;
  bool plain_tour_rows = false;
  double tol = 1e-6;
  // reduced cost achieved by some known feasible route; prunes the search
  double initial_cutoff = kInf;
};

struct PricingResult {
  std::vector<RouteSpec> candidates;     // verified negative reduced cost, ascending
  std::vector<double> reduced_costs;     // aligned with candidates
  double lower_bound = -kInf;            // valid bound on the minimum reduced cost
  bool proven_nonnegative = false;
  bool timed_out = false;
  int solves = 0;
  long long nodes = 0;
  long long lazy_calls = 0;
  long long lp_iter_limit_hits = 0;
  double lp_time_s = 0.0;
  double lazy_time_s = 0.0;
};

// Iteratively solves the pricing MIP, verifying candidate durations with the
// routing oracle and tightening with tour rows until the model optimum is
// exact or the budget expires. `tour_rows` persists across iterations.
PricingResult solve_pricing_iteration(const Instance& inst, Routing& routing,
                                      const DualPrices& duals,
                                      const std::vector<Cut>& cuts,
                                      std::vector<TourConstraint>& tour_rows,
                                      const PricingOptions& opts);

}  // namespace pickwave
