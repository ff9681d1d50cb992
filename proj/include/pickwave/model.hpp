#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace pickwave {

using NodeId = int;
using ItemId = int;
using OrderId = int;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LayoutDescriptor {
  int num_aisles = 1;
  int num_blocks = 1;
  int slots_per_aisle_side = 8;
  int aisle_pitch = 4;
  int cross_aisle_travel = 12;  // time per adjacent-aisle hop on a cross aisle
  int slot_travel = 3;          // time per one-slot step inside an aisle
};

struct NodePoint {
  NodeId id = -1;
  int x = 0;
  int y = 0;
};

struct Arc {
  NodeId from = -1;
  NodeId to = -1;
  int travel_time = 0;
};

struct Warehouse {
  LayoutDescriptor layout;
  std::vector<NodePoint> locations;      // pick slots
  std::vector<NodePoint> intersections;  // aisle / cross-aisle crossings
  NodeId depot_start = -1;               // s
  NodeId depot_end = -1;                 // s'
  std::vector<Arc> arcs;
};

struct Order {
  OrderId id = -1;
  std::vector<ItemId> items;      // sorted, unique
  int size = 0;                   // number of items
  int pick_time = 0;              // size * pick_time_per_item
  int deadline = 0;
  std::vector<NodeId> locations;  // derived from items, sorted, unique
};

struct Instance {
  std::string name;
  Warehouse warehouse;
  std::map<ItemId, NodeId> items;
  std::vector<Order> orders;  // sorted by id, ids are 0..n-1
  int num_pickers = 1;
  int capacity = 1;
  int setup_time = 0;
  int pick_time_per_item = 1;
  std::vector<int> deadlines;  // distinct order deadlines, ascending

  const Order& order(OrderId o) const { return orders.at((size_t)o); }
};

struct RouteSpec {
  std::vector<OrderId> orders;  // sorted
  long long duration = 0;       // setup + picks + exact optimal travel
  int deadline = 0;             // min deadline over the orders
  int total_size = 0;

  bool operator==(const RouteSpec& o) const { return orders == o.orders; }
};

struct RouteOrderLess {
  bool operator()(const RouteSpec& a, const RouteSpec& b) const {
    return a.orders < b.orders;
  }
};

// One picker's routes plus the total cost over all pickers.
struct Solution {
  std::vector<std::vector<RouteSpec>> per_picker;
  long long cost = 0;

  std::vector<const RouteSpec*> all_routes() const {
    std::vector<const RouteSpec*> out;
    for (const auto& pr : per_picker)
      for (const auto& r : pr) out.push_back(&r);
    return out;
  }
};

Instance parse_instance(const std::string& json_text, const std::string& name);
Instance load_instance(const std::string& path);
std::string instance_to_json(const Instance& inst);
void save_instance(const Instance& inst, const std::string& path);
void validate_instance(const Instance& inst);

}  // namespace pickwave
