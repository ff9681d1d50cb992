#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "pickwave/model.hpp"

namespace pickwave {

struct TooManyLocations : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct WrongLayout : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TravelMetric {
  std::vector<NodeId> nodes;  // pick locations plus both depots
  std::map<NodeId, int> index;
  std::vector<std::vector<long long>> dist;

  long long d(NodeId a, NodeId b) const {
    return dist[(size_t)index.at(a)][(size_t)index.at(b)];
  }
};

TravelMetric build_travel_metric(const Instance& inst);

struct BoundingBoxes {
  long long box_perimeter_time = 0;        // lower bound on travel time
  long long large_box_perimeter_time = 0;  // box enlarged to next cross aisle
};

class Routing {
 public:
  explicit Routing(const Instance& inst, int oracle_limit = 16);

  // Minimum travel time of a walk depot_start -> all locations -> depot_end.
  // Dispatches to the single-block dynamic program when the layout allows it,
  // otherwise to Held-Karp (limited to oracle_limit locations).
  long long exact_travel_time(const std::vector<NodeId>& locations) const;

  long long held_karp_travel_time(const std::vector<NodeId>& locations) const;
  long long ratliff_rosenthal_single_block(
      const std::vector<NodeId>& locations) const;
  // Exhaustive permutation search, for cross checks only.
  long long travel_time_by_permutation(
      const std::vector<NodeId>& locations) const;

  BoundingBoxes bounding_box_times(const std::vector<NodeId>& locations) const;

  long long route_duration(const std::vector<OrderId>& orders) const;
  RouteSpec build_route(std::vector<OrderId> orders) const;
  bool route_feasible(const RouteSpec& r) const {
    return r.total_size <= inst_.capacity && r.duration <= r.deadline;
  }

  // travel time over a set of orders, memoized (t~ in the tour coefficients)
  long long order_travel_time(const std::vector<OrderId>& orders) const;

  long long tour_coefficient_exact(const RouteSpec& route, int i,
                                   int budget_bits = 12) const;
  long long tour_coefficient_bbox(const RouteSpec& route, int i) const;
  // order sequence used by the coefficient formulas: increasing singleton
  // travel time, ties by order id
  std::vector<OrderId> coefficient_sequence(const RouteSpec& route) const;

  const TravelMetric& metric() const { return metric_; }
  const Instance& instance() const { return inst_; }
  int oracle_limit() const { return oracle_limit_; }

 private:
  const Instance& inst_;
  TravelMetric metric_;
  int oracle_limit_;
  bool single_block_ok_ = false;
  int depot_aisle_ = 0;

  std::vector<NodeId> order_locations(const std::vector<OrderId>& orders) const;

  mutable std::mutex memo_mutex_;
  mutable std::map<std::vector<NodeId>, long long> travel_memo_;
  mutable std::map<std::vector<OrderId>, long long> order_travel_memo_;
};

}  // namespace pickwave
