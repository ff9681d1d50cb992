#include "pickwave/heuristics.hpp"

#include <algorithm>
#include <climits>

namespace pickwave {

long long greedy_score(const Instance& inst, const TravelMetric& metric,
                       OrderId o, const std::vector<OrderId>& batch) {
  if (batch.empty()) throw EmptyRoute("score against an empty batch");
  long long best = 0;
  for (NodeId l : inst.order(o).locations) {
    long long closest = LLONG_MAX;
    for (OrderId ob : batch)
      for (NodeId lb : inst.order(ob).locations)
        closest = std::min(closest, metric.d(l, lb));
    best = std::max(best, closest);
  }
  return best;
}

namespace {

std::vector<std::vector<OrderId>> greedy_batches_from(
    const Instance& inst, const TravelMetric& metric,
    std::vector<char> assigned) {
  const int n = (int)inst.orders.size();
  std::vector<std::vector<OrderId>> batches;
  for (int seed = 0; seed < n; ++seed) {
    if (assigned[(size_t)seed]) continue;
    std::vector<OrderId> batch{seed};
    assigned[(size_t)seed] = 1;
    int load = inst.order(seed).size;
    while (true) {
      OrderId pick = -1;
      long long pick_score = 0;
      for (int o = 0; o < n; ++o) {
        if (assigned[(size_t)o] || load + inst.order(o).size > inst.capacity)
          continue;
        long long s = greedy_score(inst, metric, o, batch);
        if (pick < 0 || s < pick_score) {
          pick = o;
          pick_score = s;
        }
      }
      if (pick < 0) break;
      batch.push_back(pick);
      assigned[(size_t)pick] = 1;
      load += inst.order(pick).size;
    }
    std::sort(batch.begin(), batch.end());
    batches.push_back(std::move(batch));
  }
  return batches;
}

}  // namespace

std::vector<std::vector<OrderId>> greedy_batches(const Instance& inst,
                                                 const TravelMetric& metric) {
  return greedy_batches_from(inst, metric,
                             std::vector<char>(inst.orders.size(), 0));
}

SplitResult split_sequence(const std::vector<OrderId>& sigma,
                           const Instance& inst, Routing& routing,
                           std::vector<RouteSpec>* materialized) {
  SplitResult res;
  const int n = (int)sigma.size();
  const long long inf = LLONG_MAX / 4;
  std::vector<long long> dp((size_t)n + 1, inf);
  std::vector<int> parent((size_t)n + 1, -1);
  dp[0] = 0;
  for (int i = 0; i < n; ++i) {
    if (dp[(size_t)i] >= inf) continue;
    int load = 0;
    std::vector<OrderId> segment;
    for (int j = i + 1; j <= n; ++j) {
      load += inst.order(sigma[(size_t)j - 1]).size;
      if (load > inst.capacity) break;
      segment.push_back(sigma[(size_t)j - 1]);
      std::vector<OrderId> key(segment);
      std::sort(key.begin(), key.end());
      RouteSpec r;
      try {
        r = routing.build_route(key);
      } catch (const TooManyLocations&) {
        continue;
      }
      if (materialized && routing.route_feasible(r)) materialized->push_back(r);
      if (dp[(size_t)i] + r.duration < dp[(size_t)j]) {
        dp[(size_t)j] = dp[(size_t)i] + r.duration;
        parent[(size_t)j] = i;
      }
    }
  }
  if (dp[(size_t)n] >= inf) return res;
  res.feasible = true;
  res.cost = dp[(size_t)n];
  for (int j = n; j > 0; j = parent[(size_t)j])
    res.arcs.push_back({parent[(size_t)j], j});
  std::reverse(res.arcs.begin(), res.arcs.end());
  return res;
}

namespace {

std::vector<RouteSpec> path_routes(const SplitResult& sp,
                                   const std::vector<OrderId>& sigma,
                                   Routing& routing) {
  std::vector<RouteSpec> out;
  for (auto [i, j] : sp.arcs) {
    std::vector<OrderId> key(sigma.begin() + i, sigma.begin() + j);
    std::sort(key.begin(), key.end());
    try {
      RouteSpec r = routing.build_route(key);
      if (routing.route_feasible(r)) out.push_back(r);
    } catch (const TooManyLocations&) {
    }
  }
  return out;
}

}  // namespace

PoolResult build_pool(const Instance& inst, Routing& routing,
                      double time_limit_s, double bin_solve_s) {
  const double t0 = now_seconds();
  PoolResult pr;
  std::set<std::vector<OrderId>> keys;
  auto add_route = [&](const RouteSpec& r) {
    if (keys.insert(r.orders).second) pr.pool.push_back(r);
  };

  auto batches = greedy_batches(inst, routing.metric());
  std::vector<OrderId> sigma;
  for (const auto& b : batches) sigma.insert(sigma.end(), b.begin(), b.end());
  const int n = (int)sigma.size();

  std::vector<RouteSpec> mat;
  SplitResult sp = split_sequence(sigma, inst, routing, &mat);
  for (const auto& r : mat) add_route(r);
  if (!sp.feasible) return pr;

  std::vector<RouteSpec> s0;
  for (int o = 0; o < n; ++o) {
    RouteSpec r = routing.build_route({o});
    if (routing.route_feasible(r)) {
      s0.push_back(r);
      add_route(r);
    }
    for (int o2 = o + 1; o2 < n; ++o2) {
      if (inst.order(o).size + inst.order(o2).size > inst.capacity) continue;
      RouteSpec r2 = routing.build_route({o, o2});
      if (routing.route_feasible(r2)) {
        s0.push_back(r2);
        add_route(r2);
      }
    }
  }

  auto solve_bins = [&](const std::vector<RouteSpec>& s) {
    double budget =
        std::min(bin_solve_s, time_limit_s - (now_seconds() - t0));
    if (budget < 0.05) return;
    std::vector<RouteSpec> cols(s);
    cols.insert(cols.end(), s0.begin(), s0.end());
    std::sort(cols.begin(), cols.end(), RouteOrderLess());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    auto out = solve_binpacking_mip(cols, inst, budget);
    if (out.solution && (!pr.best || out.solution->cost < pr.best->cost))
      pr.best = out.solution;
  };
  solve_bins(path_routes(sp, sigma, routing));

  std::vector<int> arc_of((size_t)n, -1);
  auto relabel = [&]() {
    for (size_t a = 0; a < sp.arcs.size(); ++a)
      for (int p = sp.arcs[a].first; p < sp.arcs[a].second; ++p)
        arc_of[(size_t)p] = (int)a;
  };
  relabel();

  long long best_split = sp.cost;
  bool done = false;
  while (!done) {
    bool accepted = false;
    for (int i = 0; i < n - 1 && !accepted && !done; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (now_seconds() - t0 >= time_limit_s) {
          done = true;
          break;
        }
        if (arc_of[(size_t)i] == arc_of[(size_t)j]) continue;
        std::swap(sigma[(size_t)i], sigma[(size_t)j]);
        mat.clear();
        SplitResult cand = split_sequence(sigma, inst, routing, &mat);
        for (const auto& r : mat) add_route(r);
        if (cand.feasible && cand.cost < best_split) {
          sp = cand;
          best_split = cand.cost;
          relabel();
          solve_bins(path_routes(sp, sigma, routing));
          accepted = true;
          break;
        }
        std::swap(sigma[(size_t)i], sigma[(size_t)j]);
      }
    }
    if (!accepted) done = true;
  }
  return pr;
}

std::vector<RouteSpec> initial_columns(const Instance& inst, Routing& routing,
                                       const PoolResult& pool) {
  const int n = (int)inst.orders.size();
  std::vector<RouteSpec> out;
  std::set<std::vector<OrderId>> keys;
  auto add = [&](const RouteSpec& r) {
    if (keys.insert(r.orders).second) out.push_back(r);
  };

  for (int o = 0; o < n; ++o) {
    RouteSpec r = routing.build_route({o});
    if (routing.route_feasible(r)) add(r);
  }

  std::vector<RouteSpec> bases;
  int emitted = 0;
  std::vector<OrderId> cur;
  std::function<void(int, int, int)> rec = [&](int start, int load, int want) {
    if (emitted >= 2000) return;
    if ((int)cur.size() == want) {
      if (10LL * load >= 9LL * inst.capacity) {
        RouteSpec r;
        try {
          r = routing.build_route(cur);
        } catch (const TooManyLocations&) {
          return;
        }
        if (routing.route_feasible(r)) {
          add(r);
          bases.push_back(r);
          ++emitted;
        }
      }
      return;
    }
    for (int o = start; o < n; ++o) {
      if (load + inst.order(o).size > inst.capacity) continue;
      cur.push_back(o);
      rec(o + 1, load + inst.order(o).size, want);
      cur.pop_back();
      if (emitted >= 2000) return;
    }
  };
  for (int want = 2; want <= 4 && emitted < 2000; ++want) rec(0, 0, want);

  for (const auto& base : bases) {
    std::vector<OrderId> ext = base.orders;
    int load = base.total_size;
    while (true) {
      OrderId pick = -1;
      long long pick_score = 0;
      for (int o = 0; o < n; ++o) {
        if (std::binary_search(ext.begin(), ext.end(), o)) continue;
        if (load + inst.order(o).size > inst.capacity) continue;
        long long s = greedy_score(inst, routing.metric(), o, ext);
        if (pick < 0 || s < pick_score) {
          pick = o;
          pick_score = s;
        }
      }
      if (pick < 0) break;
      std::vector<OrderId> next = ext;
      next.insert(std::upper_bound(next.begin(), next.end(), pick), pick);
      RouteSpec r;
      try {
        r = routing.build_route(next);
      } catch (const TooManyLocations&) {
        break;
      }
      if (!routing.route_feasible(r)) break;
      add(r);
      ext = std::move(next);
      load += inst.order(pick).size;
    }
  }

  if (pool.best)
    for (const RouteSpec* r : pool.best->all_routes()) add(*r);
  return out;
}

RichSetResult rich_column_set(const RouteSpec& k_star, const Instance& inst,
                              Routing& routing, double b_solve_s) {
  RichSetResult rs;
  const int n = (int)inst.orders.size();
  std::set<std::vector<OrderId>> keys;
  auto add = [&](const RouteSpec& r) {
    if (keys.insert(r.orders).second) rs.columns.push_back(r);
  };

  std::vector<char> assigned((size_t)n, 0);
  for (OrderId o : k_star.orders) assigned[(size_t)o] = 1;
  std::vector<RouteSpec> cover{k_star};
  size_t covered = k_star.orders.size();
  for (const auto& batch : greedy_batches_from(inst, routing.metric(), assigned)) {
    RouteSpec r;
    try {
      r = routing.build_route(batch);
    } catch (const TooManyLocations&) {
      continue;
    }
    if (!routing.route_feasible(r)) continue;
    add(r);
    cover.push_back(r);
    covered += batch.size();
  }
  if (covered == (size_t)n && b_solve_s > 0.05) {
    auto out = solve_binpacking_mip(cover, inst, b_solve_s);
    if (out.solution) rs.ub_candidate = out.solution;
  }

  const auto& ks = k_star.orders;
  const size_t m = ks.size();
  if (m < 8) {
    for (unsigned mask = 1; mask + 1 < (1u << m); ++mask) {
      std::vector<OrderId> sub;
      int load = 0;
      for (size_t i = 0; i < m; ++i)
        if (mask & (1u << i)) {
          sub.push_back(ks[i]);
          load += inst.order(ks[i]).size;
        }
      if (4LL * load > 3LL * inst.capacity) continue;
      RouteSpec r = routing.build_route(sub);
      if (routing.route_feasible(r)) add(r);
    }
  } else {
    for (size_t drop = 0; drop < m; ++drop) {
      std::vector<OrderId> sub;
      for (size_t i = 0; i < m; ++i)
        if (i != drop) sub.push_back(ks[i]);
      try {
        RouteSpec r = routing.build_route(sub);
        if (routing.route_feasible(r)) add(r);
      } catch (const TooManyLocations&) {
      }
    }
  }
  return rs;
}

}  // namespace pickwave
