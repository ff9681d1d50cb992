#include "pickwave/routing.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace pickwave {

namespace {
constexpr long long kBig = std::numeric_limits<long long>::max() / 4;
}

TravelMetric build_travel_metric(const Instance& inst) {
  const Warehouse& w = inst.warehouse;
  std::map<NodeId, std::vector<std::pair<NodeId, int>>> adj;
  for (const auto& a : w.arcs) adj[a.from].push_back({a.to, a.travel_time});

  TravelMetric m;
  for (const auto& p : w.locations) m.nodes.push_back(p.id);
  m.nodes.push_back(w.depot_start);
  m.nodes.push_back(w.depot_end);
  std::sort(m.nodes.begin(), m.nodes.end());
  m.nodes.erase(std::unique(m.nodes.begin(), m.nodes.end()), m.nodes.end());
  for (size_t i = 0; i < m.nodes.size(); ++i) m.index[m.nodes[i]] = (int)i;

  m.dist.assign(m.nodes.size(),
                std::vector<long long>(m.nodes.size(), kBig));
  for (size_t src = 0; src < m.nodes.size(); ++src) {
    std::map<NodeId, long long> d;
    std::priority_queue<std::pair<long long, NodeId>,
                        std::vector<std::pair<long long, NodeId>>,
                        std::greater<>>
        pq;
    d[m.nodes[src]] = 0;
    pq.push({0, m.nodes[src]});
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      auto f = d.find(u);
      if (f != d.end() && f->second < du) continue;
      for (auto [v, t] : adj[u]) {
        long long nd = du + t;
        auto g = d.find(v);
        if (g == d.end() || nd < g->second) {
          d[v] = nd;
          pq.push({nd, v});
        }
      }
    }
    for (size_t dst = 0; dst < m.nodes.size(); ++dst) {
      auto f = d.find(m.nodes[dst]);
      if (f != d.end()) m.dist[src][dst] = f->second;
    }
  }
  return m;
}

Routing::Routing(const Instance& inst, int oracle_limit)
    : inst_(inst), metric_(build_travel_metric(inst)),
      oracle_limit_(oracle_limit) {
  const Warehouse& w = inst.warehouse;
  const LayoutDescriptor& lay = w.layout;
  if (lay.num_blocks == 1) {
    // the single-block program needs the depot on the front cross aisle,
    // aligned with an aisle
    for (const auto& p : w.intersections) {
      if (p.id == w.depot_start && p.y == 0 &&
          p.x % lay.aisle_pitch == 0) {
        single_block_ok_ = true;
        depot_aisle_ = p.x / lay.aisle_pitch;
      }
    }
  }
}

std::vector<NodeId> Routing::order_locations(
    const std::vector<OrderId>& orders) const {
  std::vector<NodeId> locs;
  for (OrderId o : orders) {
    const Order& od = inst_.order(o);
    locs.insert(locs.end(), od.locations.begin(), od.locations.end());
  }
  std::sort(locs.begin(), locs.end());
  locs.erase(std::unique(locs.begin(), locs.end()), locs.end());
  return locs;
}

long long Routing::exact_travel_time(
    const std::vector<NodeId>& locations) const {
  std::vector<NodeId> locs = locations;
  std::sort(locs.begin(), locs.end());
  locs.erase(std::unique(locs.begin(), locs.end()), locs.end());
  if (locs.empty())
    return metric_.d(inst_.warehouse.depot_start, inst_.warehouse.depot_end);
  {
    std::lock_guard<std::mutex> lk(memo_mutex_);
    auto f = travel_memo_.find(locs);
    if (f != travel_memo_.end()) return f->second;
  }
  long long val;
  if (single_block_ok_)
    val = ratliff_rosenthal_single_block(locs);
  else
    val = held_karp_travel_time(locs);
  std::lock_guard<std::mutex> lk(memo_mutex_);
  travel_memo_[locs] = val;
  return val;
}

long long Routing::held_karp_travel_time(
    const std::vector<NodeId>& locations) const {
  std::vector<NodeId> locs = locations;
  std::sort(locs.begin(), locs.end());
  locs.erase(std::unique(locs.begin(), locs.end()), locs.end());
  int n = (int)locs.size();
  if (n == 0)
    return metric_.d(inst_.warehouse.depot_start, inst_.warehouse.depot_end);
  if (n > oracle_limit_)
    throw TooManyLocations("held-karp limited to " +
                           std::to_string(oracle_limit_) + " locations");
  NodeId s = inst_.warehouse.depot_start;
  NodeId t = inst_.warehouse.depot_end;
  std::vector<std::vector<long long>> d(n, std::vector<long long>(n));
  std::vector<long long> ds(n), dt(n);
  for (int i = 0; i < n; ++i) {
    ds[i] = metric_.d(s, locs[i]);
    dt[i] = metric_.d(locs[i], t);
    for (int j = 0; j < n; ++j) d[i][j] = metric_.d(locs[i], locs[j]);
  }
  size_t full = (size_t)1 << n;
  std::vector<std::vector<long long>> dp(full,
                                         std::vector<long long>(n, kBig));
  for (int j = 0; j < n; ++j) dp[(size_t)1 << j][j] = ds[j];
  for (size_t mask = 1; mask < full; ++mask) {
    for (int j = 0; j < n; ++j) {
      if (!(mask & ((size_t)1 << j))) continue;
      long long cur = dp[mask][j];
      if (cur >= kBig) continue;
      for (int k2 = 0; k2 < n; ++k2) {
        if (mask & ((size_t)1 << k2)) continue;
        size_t nm = mask | ((size_t)1 << k2);
        long long nd = cur + d[j][k2];
        if (nd < dp[nm][k2]) dp[nm][k2] = nd;
      }
    }
  }
  long long best = kBig;
  for (int j = 0; j < n; ++j)
    best = std::min(best, dp[full - 1][j] + dt[j]);
  return best;
}

long long Routing::travel_time_by_permutation(
    const std::vector<NodeId>& locations) const {
  std::vector<NodeId> locs = locations;
  std::sort(locs.begin(), locs.end());
  locs.erase(std::unique(locs.begin(), locs.end()), locs.end());
  if (locs.empty())
    return metric_.d(inst_.warehouse.depot_start, inst_.warehouse.depot_end);
  if (locs.size() > 9)
    throw TooManyLocations("permutation search limited to 9 locations");
  NodeId s = inst_.warehouse.depot_start;
  NodeId t = inst_.warehouse.depot_end;
  long long best = kBig;
  do {
    long long tot = metric_.d(s, locs.front());
    for (size_t i = 0; i + 1 < locs.size(); ++i)
      tot += metric_.d(locs[i], locs[i + 1]);
    tot += metric_.d(locs.back(), t);
    best = std::min(best, tot);
  } while (std::next_permutation(locs.begin(), locs.end()));
  return best;
}

namespace {

// connectivity classes of the partial tour subgraph at the current frontier
enum Comp { NONE = 0, F = 1, B = 2, FB = 3, TWO = 4 };

bool touches_f(Comp c) { return c == F || c == FB || c == TWO; }
bool touches_b(Comp c) { return c == B || c == FB || c == TWO; }

Comp combine(Comp a, Comp b) {
  bool f = touches_f(a) || touches_f(b);
  bool bk = touches_b(a) || touches_b(b);
  bool bridge = a == FB || b == FB;
  if (!f && !bk) return NONE;
  if (f && !bk) return F;
  if (!f && bk) return B;
  return bridge ? FB : TWO;
}

struct AisleAction {
  long long cost;
  int pf;   // parity added at the front junction
  int pb;   // parity added at the back junction
  Comp made;
};

}  // namespace

long long Routing::ratliff_rosenthal_single_block(
    const std::vector<NodeId>& locations) const {
  const LayoutDescriptor& lay = inst_.warehouse.layout;
  if (lay.num_blocks != 1)
    throw WrongLayout("single-block program requires one block");
  if (!single_block_ok_)
    throw WrongLayout("depot not on the front cross aisle");
  std::vector<NodeId> locs = locations;
  std::sort(locs.begin(), locs.end());
  locs.erase(std::unique(locs.begin(), locs.end()), locs.end());
  if (locs.empty())
    return metric_.d(inst_.warehouse.depot_start, inst_.warehouse.depot_end);

  std::map<NodeId, NodePoint> pts;
  for (const auto& p : inst_.warehouse.locations) pts[p.id] = p;
  std::map<int, std::vector<int>> depths;  // aisle -> item depths
  for (NodeId id : locs) {
    auto f = pts.find(id);
    if (f == pts.end()) throw WrongLayout("unknown location id");
    depths[f->second.x / lay.aisle_pitch].push_back(f->second.y);
  }
  int a_lo = depot_aisle_, a_hi = depot_aisle_;
  for (auto& [a, ys] : depths) {
    std::sort(ys.begin(), ys.end());
    a_lo = std::min(a_lo, a);
    a_hi = std::max(a_hi, a);
  }

  const long long st = lay.slot_travel;
  const long long full = (long long)(lay.slots_per_aisle_side + 1) * st;
  const long long cross = lay.cross_aisle_travel;

  auto actions_for = [&](const std::vector<int>& ys) {
    std::vector<AisleAction> acts;
    int m = (int)ys.size();
    if (m == 0) acts.push_back({0, 0, 0, NONE});                 // skip
    acts.push_back({full, 1, 1, FB});                            // traverse
    acts.push_back({2 * full, 0, 0, FB});                        // two passes
    if (m >= 1) {
      acts.push_back({2 * st * ys.back(), 0, 0, F});             // front return
      acts.push_back(
          {2 * st * (lay.slots_per_aisle_side + 1 - ys.front()), 0, 0, B});
    }
    if (m >= 2) {  // best split around the largest gap
      long long best = kBig;
      for (int k2 = 1; k2 < m; ++k2) {
        long long c = 2 * st * ys[(size_t)k2 - 1] +
                      2 * st * (lay.slots_per_aisle_side + 1 - ys[(size_t)k2]);
        best = std::min(best, c);
      }
      acts.push_back({best, 0, 0, TWO});
    }
    return acts;
  };

  // state: comp, parity from incoming cross edges at (front, back)
  auto key = [](Comp c, int pf, int pb) { return (int)c * 4 + pf * 2 + pb; };
  std::vector<long long> dp(20, kBig);
  dp[key(NONE, 0, 0)] = 0;

  for (int a = a_lo; a <= a_hi; ++a) {
    std::vector<int> ys;
    if (auto f = depths.find(a); f != depths.end()) ys = f->second;
    auto acts = actions_for(ys);
    std::vector<long long> nxt(20, kBig);
    bool last = a == a_hi;
    for (int c0 = 0; c0 <= 4; ++c0)
      for (int pf = 0; pf < 2; ++pf)
        for (int pb = 0; pb < 2; ++pb) {
          long long base = dp[key((Comp)c0, pf, pb)];
          if (base >= kBig) continue;
          for (const auto& act : acts) {
            Comp after = combine((Comp)c0, act.made);
            int fpar = (pf + act.pf) % 2;
            int bpar = (pb + act.pb) % 2;
            long long cost1 = base + act.cost;
            if (last) {
              if (fpar != 0 || bpar != 0) continue;
              if (after == TWO || after == NONE) continue;
              if (a == depot_aisle_ && !touches_f(after)) continue;
              nxt[key(after, 0, 0)] =
                  std::min(nxt[key(after, 0, 0)], cost1);
              continue;
            }
            for (int kf = 0; kf <= 2; ++kf)
              for (int kb = 0; kb <= 2; ++kb) {
                if ((fpar + kf) % 2 != 0 || (bpar + kb) % 2 != 0) continue;
                // stranded components are dead ends
                if ((after == F || after == TWO) && kf == 0) continue;
                if ((after == B || after == TWO) && kb == 0) continue;
                if (after == FB && kf == 0 && kb == 0) continue;
                if (a == depot_aisle_ && !touches_f(after) && kf == 0)
                  continue;
                Comp nc;
                bool nf = kf >= 1, nb = kb >= 1;
                if (!nf && !nb)
                  nc = NONE;
                else if (nf && !nb)
                  nc = F;
                else if (!nf && nb)
                  nc = B;
                else
                  nc = after == FB ? FB : (after == NONE ? TWO : TWO);
                if (nf && nb && after == FB) nc = FB;
                long long cost2 = cost1 + (kf + kb) * cross;
                int kk = key(nc, kf % 2, kb % 2);
                nxt[kk] = std::min(nxt[kk], cost2);
              }
          }
        }
    dp = std::move(nxt);
  }
  long long best = kBig;
  for (int c0 = 1; c0 <= 3; ++c0) best = std::min(best, dp[key((Comp)c0, 0, 0)]);
  if (best >= kBig) throw WrongLayout("no feasible single-block tour found");
  return best;
}

BoundingBoxes Routing::bounding_box_times(
    const std::vector<NodeId>& locations) const {
  BoundingBoxes bb;
  if (locations.empty()) return bb;
  const LayoutDescriptor& lay = inst_.warehouse.layout;
  std::map<NodeId, NodePoint> pts;
  for (const auto& p : inst_.warehouse.locations) pts[p.id] = p;
  int dep_x = 0, dep_y = 0;
  for (const auto& p : inst_.warehouse.intersections)
    if (p.id == inst_.warehouse.depot_start) {
      dep_x = p.x;
      dep_y = p.y;
    }
  int min_x = dep_x, max_x = dep_x, min_y = dep_y, max_y = dep_y;
  int max_loc_y = dep_y;
  for (NodeId id : locations) {
    auto f = pts.find(id);
    if (f == pts.end()) continue;
    min_x = std::min(min_x, f->second.x);
    max_x = std::max(max_x, f->second.x);
    min_y = std::min(min_y, f->second.y);
    max_y = std::max(max_y, f->second.y);
    max_loc_y = std::max(max_loc_y, f->second.y);
  }
  // floor keeps the small box a valid lower bound on the travel time
  long long tx = (long long)(max_x - min_x) * lay.cross_aisle_travel /
                 lay.aisle_pitch;
  long long ty = (long long)(max_y - min_y) * lay.slot_travel;
  bb.box_perimeter_time = 2 * (tx + ty);
  int period = lay.slots_per_aisle_side + 1;
  int top = ((max_loc_y + period - 1) / period) * period;
  long long ty2 = (long long)(std::max(top, max_y) - min_y) * lay.slot_travel;
  bb.large_box_perimeter_time = 2 * (tx + ty2);
  return bb;
}

long long Routing::order_travel_time(
    const std::vector<OrderId>& orders) const {
  std::vector<OrderId> os = orders;
  std::sort(os.begin(), os.end());
  os.erase(std::unique(os.begin(), os.end()), os.end());
  if (os.empty()) return 0;
  {
    std::lock_guard<std::mutex> lk(memo_mutex_);
    auto f = order_travel_memo_.find(os);
    if (f != order_travel_memo_.end()) return f->second;
  }
  long long val = exact_travel_time(order_locations(os));
  std::lock_guard<std::mutex> lk(memo_mutex_);
  order_travel_memo_[os] = val;
  return val;
}

long long Routing::route_duration(const std::vector<OrderId>& orders) const {
  long long picks = 0;
  for (OrderId o : orders) picks += inst_.order(o).pick_time;
  return inst_.setup_time + picks + order_travel_time(orders);
}

RouteSpec Routing::build_route(std::vector<OrderId> orders) const {
  std::sort(orders.begin(), orders.end());
  orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
  RouteSpec r;
  r.orders = orders;
  r.deadline = std::numeric_limits<int>::max();
  for (OrderId o : orders) {
    const Order& od = inst_.order(o);
    r.total_size += od.size;
    r.deadline = std::min(r.deadline, od.deadline);
  }
  r.duration = route_duration(orders);
  return r;
}

std::vector<OrderId> Routing::coefficient_sequence(
    const RouteSpec& route) const {
  std::vector<std::pair<long long, OrderId>> keyed;
  for (OrderId o : route.orders)
    keyed.push_back({order_travel_time({o}), o});
  std::sort(keyed.begin(), keyed.end());
  std::vector<OrderId> seq;
  for (auto& [t, o] : keyed) seq.push_back(o);
  return seq;
}

long long Routing::tour_coefficient_exact(const RouteSpec& route, int i,
                                          int budget_bits) const {
  auto seq = coefficient_sequence(route);
  if (i < 1 || i > (int)seq.size())
    throw std::out_of_range("coefficient position out of range");
  if (i - 1 > budget_bits)
    throw BudgetExceeded("exact coefficient beyond subset budget");
  OrderId oi = seq[(size_t)i - 1];
  long long pick = inst_.order(oi).pick_time;
  long long best = kBig;
  int np = i - 1;
  for (size_t mask = 0; mask < ((size_t)1 << np); ++mask) {
    std::vector<OrderId> r;
    for (int j = 0; j < np; ++j)
      if (mask & ((size_t)1 << j)) r.push_back(seq[(size_t)j]);
    long long t_r = r.empty() ? 0 : order_travel_time(r);
    r.push_back(oi);
    long long t_ri = order_travel_time(r);
    best = std::min(best, t_ri - t_r);
  }
  return pick + best;
}

long long Routing::tour_coefficient_bbox(const RouteSpec& route, int i) const {
  auto seq = coefficient_sequence(route);
  if (i < 1 || i > (int)seq.size())
    throw std::out_of_range("coefficient position out of range");
  OrderId oi = seq[(size_t)i - 1];
  long long pick = inst_.order(oi).pick_time;
  std::vector<OrderId> prefix(seq.begin(), seq.begin() + i - 1);
  auto with = prefix;
  with.push_back(oi);
  long long prev_large =
      prefix.empty() ? 0
                     : bounding_box_times(order_locations(prefix))
                           .large_box_perimeter_time;
  long long cur_box =
      bounding_box_times(order_locations(with)).box_perimeter_time;
  return pick + std::max((long long)0, cur_box - prev_large);
}

}  // namespace pickwave
