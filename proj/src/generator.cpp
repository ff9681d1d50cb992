#include "pickwave/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "pickwave/routing.hpp"

namespace pickwave {

namespace {

int bounded(std::mt19937_64& rng, int n) {
  return (int)(rng() % (std::uint64_t)n);
}

// weighted draw over weights[0..n-1]
int weighted(std::mt19937_64& rng, const std::vector<long long>& w) {
  long long tot = std::accumulate(w.begin(), w.end(), 0LL);
  long long r = (long long)(rng() % (std::uint64_t)tot);
  for (size_t i = 0; i < w.size(); ++i) {
    if (r < w[i]) return (int)i;
    r -= w[i];
  }
  return (int)w.size() - 1;
}

struct Slot {
  int aisle;
  int y;
};

}  // namespace

DeadlineProfile parse_deadline_profile(const std::string& s) {
  if (s == "uniform") return DeadlineProfile::Uniform;
  if (s == "triangular_progressive") return DeadlineProfile::TriangularProgressive;
  if (s == "triangular_degressive") return DeadlineProfile::TriangularDegressive;
  throw std::invalid_argument("unknown deadline profile: " + s);
}

std::string deadline_profile_name(DeadlineProfile p) {
  switch (p) {
    case DeadlineProfile::Uniform: return "uniform";
    case DeadlineProfile::TriangularProgressive: return "triangular_progressive";
    default: return "triangular_degressive";
  }
}

Instance generate_instance(const GenParams& params) {
  if (params.num_orders < 1 || params.num_aisles < 1 || params.num_blocks < 1 ||
      params.slots_per_aisle_side < 1 || params.capacity < 1 ||
      params.num_pickers < 1 || params.min_items_per_order < 1 ||
      params.max_items_per_order < params.min_items_per_order)
    throw std::invalid_argument("invalid generator parameters");
  if (params.min_items_per_order > params.capacity)
    throw std::invalid_argument("orders cannot exceed picker capacity");

  std::mt19937_64 rng(params.seed);

  Instance inst;
  inst.name = "gen_s" + std::to_string(params.seed) + "_o" +
              std::to_string(params.num_orders);
  inst.num_pickers = params.num_pickers;
  inst.capacity = params.capacity;
  inst.setup_time = params.setup_time;
  inst.pick_time_per_item = params.pick_time;

  LayoutDescriptor lay;
  lay.num_aisles = params.num_aisles;
  lay.num_blocks = params.num_blocks;
  lay.slots_per_aisle_side = params.slots_per_aisle_side;
  Warehouse& w = inst.warehouse;
  w.layout = lay;

  const int A = lay.num_aisles, NB = lay.num_blocks,
            S = lay.slots_per_aisle_side;
  const int period = S + 1;

  w.depot_start = 0;
  w.depot_end = 1;
  int next_id = 2;
  std::vector<std::vector<NodeId>> inter(A, std::vector<NodeId>(NB + 1));
  for (int a = 0; a < A; ++a)
    for (int c = 0; c <= NB; ++c) {
      inter[a][(size_t)c] = next_id;
      w.intersections.push_back({next_id, a * lay.aisle_pitch, c * period});
      ++next_id;
    }
  w.intersections.push_back({w.depot_start, 0, 0});
  w.intersections.push_back({w.depot_end, 0, 0});

  std::vector<std::vector<NodeId>> slot_node(A);
  for (int a = 0; a < A; ++a) {
    slot_node[(size_t)a].assign((size_t)NB * S + NB + 1, -1);
    for (int b = 0; b < NB; ++b)
      for (int s = 1; s <= S; ++s) {
        int y = b * period + s;
        slot_node[(size_t)a][(size_t)y] = next_id;
        w.locations.push_back({next_id, a * lay.aisle_pitch, y});
        ++next_id;
      }
  }

  auto add_edge = [&](NodeId u, NodeId v, int t) {
    w.arcs.push_back({u, v, t});
    w.arcs.push_back({v, u, t});
  };
  for (int a = 0; a < A; ++a) {
    NodeId prev = inter[(size_t)a][0];
    for (int y = 1; y <= NB * period; ++y) {
      NodeId cur = y % period == 0 ? inter[(size_t)a][(size_t)(y / period)]
                                   : slot_node[(size_t)a][(size_t)y];
      add_edge(prev, cur, lay.slot_travel);
      prev = cur;
    }
  }
  for (int c = 0; c <= NB; ++c)
    for (int a = 0; a + 1 < A; ++a)
      add_edge(inter[(size_t)a][(size_t)c], inter[(size_t)a + 1][(size_t)c],
               lay.cross_aisle_travel);
  add_edge(w.depot_start, inter[0][0], 0);
  add_edge(w.depot_end, inter[0][0], 0);

  // storage slots: two rack sides per aisle position, sampled w/o replacement
  std::vector<Slot> slots;
  for (int a = 0; a < A; ++a)
    for (int b = 0; b < NB; ++b)
      for (int s = 1; s <= S; ++s)
        for (int side = 0; side < 2; ++side)
          slots.push_back({a, b * period + s});

  int n_items = 0;
  std::vector<int> order_sizes;
  for (int o = 0; o < params.num_orders; ++o) {
    int span = params.max_items_per_order - params.min_items_per_order + 1;
    int sz = params.min_items_per_order + bounded(rng, span);
    order_sizes.push_back(sz);
    n_items += sz;
  }
  if ((size_t)n_items > slots.size())
    throw InfeasibleGeneration("warehouse too small for the requested orders");
  for (size_t i = slots.size(); i > 1; --i)
    std::swap(slots[i - 1], slots[(size_t)bounded(rng, (int)i)]);

  int item_id = 0;
  for (int o = 0; o < params.num_orders; ++o) {
    Order od;
    od.id = o;
    for (int j = 0; j < order_sizes[(size_t)o]; ++j) {
      const Slot& sl = slots[(size_t)item_id];
      NodeId loc = slot_node[(size_t)sl.aisle][(size_t)sl.y];
      inst.items[item_id] = loc;
      od.items.push_back(item_id);
      ++item_id;
    }
    od.size = (int)od.items.size();
    od.pick_time = od.size * params.pick_time;
    od.deadline = 1;  // placeholder until sampled below
    for (ItemId it : od.items) od.locations.push_back(inst.items.at(it));
    std::sort(od.locations.begin(), od.locations.end());
    od.locations.erase(
        std::unique(od.locations.begin(), od.locations.end()),
        od.locations.end());
    inst.orders.push_back(od);
  }

  Routing routing(inst);
  std::vector<long long> singleton(inst.orders.size());
  long long sum_singleton = 0, max_singleton = 0;
  for (size_t o = 0; o < inst.orders.size(); ++o) {
    singleton[o] = routing.route_duration({(OrderId)o});
    sum_singleton += singleton[o];
    max_singleton = std::max(max_singleton, singleton[o]);
  }

  int n = params.num_orders;
  int n_d = std::max(2, std::min(8, (n + 2) / 3));
  double base_h = 1.25 * std::max((double)sum_singleton / params.num_pickers,
                                  (double)max_singleton);

  for (int round = 0; round < 5; ++round) {
    long long H = (long long)std::ceil(base_h * std::pow(1.3, round));
    std::vector<long long> dslots(static_cast<size_t>(n_d));
    for (int i = 1; i <= n_d; ++i)
      dslots[(size_t)i - 1] = std::max<long long>(1, H * i / n_d);
    std::vector<long long> weights(static_cast<size_t>(n_d));
    for (int i = 1; i <= n_d; ++i) {
      switch (params.deadline_profile) {
        case DeadlineProfile::Uniform: weights[(size_t)i - 1] = 1; break;
        case DeadlineProfile::TriangularProgressive:
          weights[(size_t)i - 1] = i;
          break;
        default: weights[(size_t)i - 1] = n_d + 1 - i; break;
      }
    }

    for (int attempt = 0; attempt < 50; ++attempt) {
      std::vector<int> picked(inst.orders.size());
      bool ok = true;
      for (size_t o = 0; o < inst.orders.size(); ++o) {
        int i = weighted(rng, weights);
        while (i < n_d && dslots[(size_t)i] < singleton[o]) ++i;
        if (i >= n_d) {
          ok = false;
          break;
        }
        picked[o] = i;
      }
      if (!ok) continue;

      // earliest-deadline-first on singleton routes across the pickers
      std::vector<size_t> by_deadline(inst.orders.size());
      std::iota(by_deadline.begin(), by_deadline.end(), 0);
      std::stable_sort(by_deadline.begin(), by_deadline.end(),
                       [&](size_t a, size_t b) {
                         return dslots[(size_t)picked[a]] <
                                dslots[(size_t)picked[b]];
                       });
      std::vector<long long> finish((size_t)params.num_pickers, 0);
      bool feas = true;
      for (size_t idx : by_deadline) {
        size_t p = 0;
        for (size_t q = 1; q < finish.size(); ++q)
          if (finish[q] < finish[p]) p = q;
        finish[p] += singleton[idx];
        if (finish[p] > dslots[(size_t)picked[idx]]) {
          feas = false;
          break;
        }
      }
      if (!feas) continue;

      for (size_t o = 0; o < inst.orders.size(); ++o)
        inst.orders[o].deadline = (int)dslots[(size_t)picked[o]];
      std::set<int> ds;
      for (const auto& od : inst.orders) ds.insert(od.deadline);
      inst.deadlines.assign(ds.begin(), ds.end());
      validate_instance(inst);
      return inst;
    }
  }
  throw InfeasibleGeneration("could not sample feasible deadlines");
}

}  // namespace pickwave
