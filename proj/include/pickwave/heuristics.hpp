#pragma once

#include "pickwave/master.hpp"

namespace pickwave {

struct EmptyRoute : std::runtime_error {
  explicit EmptyRoute(const std::string& m) : std::runtime_error(m) {}
};

// Estimated travel increment of adding order o to the batch: farthest location
// of o measured against the closest location already in the batch.
long long greedy_score(const Instance& inst, const TravelMetric& metric,
                       OrderId o, const std::vector<OrderId>& batch);

// Capacity-constrained greedy batching used to seed the giant sequence.
std::vector<std::vector<OrderId>> greedy_batches(const Instance& inst,
                                                 const TravelMetric& metric);

struct SplitResult {
  bool feasible = false;
  long long cost = 0;
  std::vector<std::pair<int, int>> arcs;  // half-open segments of sigma
};

// Optimal contiguous partition of sigma into capacity-feasible routes; arc
// cost is the full duration of the segment's route.
SplitResult split_sequence(const std::vector<OrderId>& sigma,
                           const Instance& inst, Routing& routing,
                           std::vector<RouteSpec>* materialized = nullptr);

struct PoolResult {
  std::vector<RouteSpec> pool;
  std::optional<Solution> best;
};

// Greedy batching + split + pairwise-swap local search; collects every route
// materialized along the way.
PoolResult build_pool(const Instance& inst, Routing& routing,
                      double time_limit_s, double bin_solve_s = 10.0);

std::vector<RouteSpec> initial_columns(const Instance& inst, Routing& routing,
                                       const PoolResult& pool);

struct RichSetResult {
  std::vector<RouteSpec> columns;
  std::optional<Solution> ub_candidate;
};

RichSetResult rich_column_set(const RouteSpec& k_star, const Instance& inst,
                              Routing& routing, double b_solve_s = 10.0);

}  // namespace pickwave
