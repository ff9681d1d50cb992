#include "pickwave/engine.hpp"

#include <algorithm>
#include <climits>
#include <cmath>

namespace pickwave {

long long lagrangian_lower_bound(double rmp_objective, double pricing_bound,
                                 double route_count_cap) {
  double v = rmp_objective + route_count_cap * std::min(0.0, pricing_bound);
  return (long long)std::ceil(v - 1e-6);
}

std::vector<RouteSpec> enumerate_routes(const Instance& inst, Routing& routing,
                                        long long budget) {
  const int n = (int)inst.orders.size();
  std::vector<RouteSpec> out;
  long long visited = 0;
  std::vector<OrderId> cur;
  std::function<void(int, int)> dfs = [&](int start, int load) {
    for (int o = start; o < n; ++o) {
      if (load + inst.order(o).size > inst.capacity) continue;
      cur.push_back(o);
      if (++visited > budget)
        throw BudgetExceeded("route enumeration exceeded its budget");
      RouteSpec r = routing.build_route(cur);
      bool feasible = routing.route_feasible(r);
      if (feasible) {
        out.push_back(r);
        dfs(o + 1, load + inst.order(o).size);
      }
      cur.pop_back();
    }
  };
  dfs(0, 0);
  return out;
}

namespace {

struct SepContext {
  std::vector<std::vector<OrderId>> scc_pool;
  bool scc_pool_ready = false;
  bool scc_pool_overflow = false;
};

int separate_all(MasterState& state, const Instance& inst,
                 const EngineConfig& cfg, SepContext& ctx, RunStats& stats) {
  std::vector<RouteValue> sol;
  for (size_t i = 0; i < state.columns.size(); ++i)
    if (i < state.last_rho.size() && state.last_rho[i] > 1e-9)
      sol.push_back({&state.columns[i], state.last_rho[i]});
  int added = 0;
  if (cfg.use_mt)
    for (auto& c : separate_mt(sol, inst))
      if (state.add_cut(c)) {
        ++added;
        ++stats.cuts_mt;
      }
  if (cfg.use_fs)
    for (auto& c : separate_fs(sol, inst))
      if (state.add_cut(c)) {
        ++added;
        ++stats.cuts_fs;
      }
  if (cfg.use_scc) {
    if (!ctx.scc_pool_ready) {
      ctx.scc_pool_ready = true;
      try {
        ctx.scc_pool = build_scc_pool(inst);
      } catch (const PoolOverflow&) {
        ctx.scc_pool_overflow = true;
        std::vector<OrderId> all;
        for (int o = 0; o < (int)inst.orders.size(); ++o) all.push_back(o);
        ctx.scc_pool = {all};
      }
      stats.scc_pool_overflow = ctx.scc_pool_overflow;
    }
    for (auto& c : separate_scc(sol, inst, ctx.scc_pool))
      if (state.add_cut(c)) {
        ++added;
        ++stats.cuts_scc;
      }
  }
  if (cfg.use_r1c)
    for (auto& c : separate_r1c(sol, inst, inst.orders.size() <= 18))
      if (state.add_cut(c)) {
        ++added;
        ++stats.cuts_r1c;
      }
  return added;
}

bool all_orders_covered(const MasterState& state, const Instance& inst) {
  std::vector<char> covered(inst.orders.size(), 0);
  for (const auto& r : state.columns)
    for (OrderId o : r.orders) covered[(size_t)o] = 1;
  for (size_t o = 0; o < covered.size(); ++o)
    if (!covered[o]) return false;
  return true;
}

}  // namespace

RootBoundResult root_lower_bound(const Instance& inst, Routing& routing,
                                 const std::vector<RouteSpec>& columns,
                                 const EngineConfig& cfg, double time_limit_s) {
  (void)routing;
  const double t0 = now_seconds();
  RootBoundResult rb;
  MasterState& st = rb.state;
  for (const auto& r : columns) st.add_column(r);
  if (cfg.use_scc) {
    std::vector<OrderId> all;
    for (int o = 0; o < (int)inst.orders.size(); ++o) all.push_back(o);
    st.add_cut(make_scc_cut(all, inst));
  }
  SepContext ctx;
  RunStats scratch;
  for (int round = 0; round < 500; ++round) {
    auto lm = solve_restricted_master(st, inst);
    rb.status = lm.status;
    if (lm.status != SolveStatus::Optimal) return rb;
    rb.value = lm.obj;
    rb.rounds = round;
    if (now_seconds() - t0 > time_limit_s) break;
    if (separate_all(st, inst, cfg, ctx, scratch) == 0) break;
  }
  return rb;
}

RunResult run_cgh(const Instance& inst, const EngineConfig& cfg) {
  const double t0 = now_seconds();
  auto remaining = [&] { return cfg.time_limit_s - (now_seconds() - t0); };

  RunResult res;
  Routing routing(inst);
  const TourVariant variant =
      cfg.plain_tour_rows ? TourVariant::Plain : TourVariant::Strengthened;

  double pt0 = now_seconds();
  PoolResult pool = build_pool(inst, routing,
                               std::min(cfg.pool_time_s, remaining()),
                               cfg.bin_solve_s);
  res.stats.pool_time_s = now_seconds() - pt0;

  auto consider_ub = [&](const Solution& s) {
    if (!verify_solution(s, inst, routing).ok) return;
    if (!res.bounds.ub || s.cost < *res.bounds.ub) {
      res.bounds.ub = s.cost;
      res.solution = s;
    }
  };
  if (pool.best) consider_ub(*pool.best);

  MasterState& state = res.state;
  for (const auto& r : initial_columns(inst, routing, pool))
    if (state.add_column(r)) ++res.stats.n_columns;
  if (!all_orders_covered(state, inst)) {
    res.status = SolveStatus::Infeasible;
    res.stats.total_time_s = now_seconds() - t0;
    return res;
  }
  if (cfg.use_scc) {
    std::vector<OrderId> all;
    for (int o = 0; o < (int)inst.orders.size(); ++o) all.push_back(o);
    if (state.add_cut(make_scc_cut(all, inst))) ++res.stats.cuts_scc;
  }

  std::vector<TourConstraint> tour_rows;
  long long t_min = LLONG_MAX;
  const int n_ord = (int)inst.orders.size();
  for (int o = 0; o < n_ord; ++o) {
    RouteSpec r = routing.build_route({o});
    t_min = std::min(t_min, r.duration);
    if (routing.route_feasible(r))
      tour_rows.push_back(make_tour_constraint(r, inst, routing, variant));
  }
  for (int a = 0; a < n_ord; ++a)
    for (int b = a + 1; b < n_ord; ++b) {
      if (inst.order(a).size + inst.order(b).size > inst.capacity) continue;
      try {
        RouteSpec r = routing.build_route({a, b});
        tour_rows.push_back(make_tour_constraint(r, inst, routing, variant));
      } catch (const TooManyLocations&) {
      }
    }

  long long lb = 0;
  SepContext sep;
  bool out_of_time = false;
  double cg0 = now_seconds();
  do {
    bool lm_optimal = false;
    int inner_guard = 0;
    while (!lm_optimal && remaining() > 0.5 && ++inner_guard < 10000) {
      auto lm = solve_restricted_master(state, inst);
      if (lm.status != SolveStatus::Optimal) {
        out_of_time = true;
        break;
      }
      bool progress = false;
      RouteSpec kstar;
      double kstar_cbar = -1e-6;
      double scan_min = kInf;
      for (const auto& r : pool.pool) {
        if (state.column_keys.count(r.orders)) continue;
        double cb = reduced_cost(r, lm.duals, state.cuts);
        scan_min = std::min(scan_min, cb);
        if (cb < -1e-6) {
          if (state.add_column(r)) {
            ++res.stats.n_columns;
            progress = true;
          }
          if (cb < kstar_cbar) {
            kstar_cbar = cb;
            kstar = r;
          }
        }
      }
      if (!progress) {
        for (const auto& c : state.columns)
          scan_min = std::min(scan_min, reduced_cost(c, lm.duals, state.cuts));
        ++res.stats.n_pricing_iterations;
        PricingOptions po;
        po.time_limit_s = std::min(cfg.pricing_time_s, remaining());
        po.plain_tour_rows = cfg.plain_tour_rows;
        po.initial_cutoff = scan_min;
        auto pr =
            solve_pricing_iteration(inst, routing, lm.duals, state.cuts,
                                    tour_rows, po);
        int added = 0;
        for (const auto& r : pr.candidates)
          if (state.add_column(r)) {
            ++added;
            ++res.stats.n_columns;
          }
        if (added > 0) progress = true;
        if (!pr.timed_out && pr.lower_bound > -kInf / 2) {
          double kappa = lm.obj / (double)t_min;
          lb = std::max(lb, lagrangian_lower_bound(lm.obj, pr.lower_bound,
                                                   kappa));
          res.stats.trace.push_back(
              {lm.obj, pr.lower_bound, lb, state.cuts.size(), false});
        }
        if (pr.proven_nonnegative && added == 0) {
          lm_optimal = true;
          res.stats.lp_converged = true;
        }
        if (!pr.candidates.empty()) {
          kstar = pr.candidates.front();
          kstar_cbar = pr.reduced_costs.front();
        }
      }
      if (!kstar.orders.empty() && !lm_optimal) {
        auto rich = rich_column_set(
            kstar, inst, routing,
            std::min(cfg.bin_solve_s, std::max(0.0, remaining())));
        for (const auto& r : rich.columns)
          if (state.add_column(r)) {
            ++res.stats.n_columns;
            progress = true;
          }
        if (rich.ub_candidate) consider_ub(*rich.ub_candidate);
      }
      if (!progress && !lm_optimal) break;
    }
    if (remaining() <= 0.5 || out_of_time) {
      out_of_time = true;
      break;
    }
    ++res.stats.cut_rounds;
    double ct0 = now_seconds();
    int added_cuts = separate_all(state, inst, cfg, sep, res.stats);
    res.stats.cut_time_s += now_seconds() - ct0;
    if (added_cuts == 0) break;
  } while (true);
  res.stats.cg_time_s = now_seconds() - cg0 - res.stats.cut_time_s;

  double ft0 = now_seconds();
  double tau_l = std::max(remaining(), cfg.final_mip_min_s);
  const Solution* warm = res.solution ? &*res.solution : nullptr;
  auto bo = solve_binpacking_mip(state.columns, inst, tau_l, &state.cuts, warm);
  if (bo.solution) consider_ub(*bo.solution);
  res.stats.final_time_s = now_seconds() - ft0;

  res.bounds.lb = lb;
  if (res.bounds.ub && lb >= *res.bounds.ub)
    res.status = SolveStatus::Optimal;
  else
    res.status = SolveStatus::TimeLimit;
  res.stats.total_time_s = now_seconds() - t0;
  return res;
}

RunResult run_exact_enum(const Instance& inst, const EngineConfig& cfg) {
  const double t0 = now_seconds();
  auto remaining = [&] { return cfg.time_limit_s - (now_seconds() - t0); };

  RunResult res;
  Routing routing(inst);
  auto routes = enumerate_routes(inst, routing, cfg.enum_budget);
  for (const auto& r : routes) res.state.add_column(r);
  res.stats.n_columns = (long long)res.state.columns.size();
  if (!all_orders_covered(res.state, inst)) {
    res.status = SolveStatus::Infeasible;
    res.stats.total_time_s = now_seconds() - t0;
    return res;
  }

  double rt0 = now_seconds();
  auto root = root_lower_bound(inst, routing, routes, cfg,
                               std::max(1.0, remaining() * 0.3));
  res.stats.cut_time_s = now_seconds() - rt0;
  for (const auto& c : root.state.cuts) {
    if (!res.state.add_cut(c)) continue;
    switch (c.kind) {
      case CutKind::MT: ++res.stats.cuts_mt; break;
      case CutKind::FS: ++res.stats.cuts_fs; break;
      case CutKind::SCC: ++res.stats.cuts_scc; break;
      case CutKind::R1C: ++res.stats.cuts_r1c; break;
    }
  }
  res.stats.cut_rounds = root.rounds;

  double ft0 = now_seconds();
  auto bo = solve_binpacking_mip(res.state.columns, inst,
                                 std::max(1.0, remaining()), &res.state.cuts,
                                 nullptr);
  res.stats.final_time_s = now_seconds() - ft0;
  if (bo.status == SolveStatus::Infeasible) {
    res.status = SolveStatus::Infeasible;
    res.stats.total_time_s = now_seconds() - t0;
    return res;
  }
  if (bo.solution) {
    if (verify_solution(*bo.solution, inst, routing).ok) {
      res.solution = bo.solution;
      res.bounds.ub = bo.solution->cost;
    }
  }
  long long lb = (long long)std::ceil(bo.bound - 1e-6);
  if (root.status == SolveStatus::Optimal)
    lb = std::max(lb, (long long)std::ceil(root.value - 1e-6));
  if (bo.status == SolveStatus::Optimal && res.bounds.ub)
    lb = *res.bounds.ub;
  res.bounds.lb = lb;
  res.status = (res.bounds.ub && lb >= *res.bounds.ub)
                   ? SolveStatus::Optimal
                   : SolveStatus::TimeLimit;
  res.stats.total_time_s = now_seconds() - t0;
  return res;
}

RunResult run_instance(const Instance& inst, const EngineConfig& cfg) {
  return cfg.mode == SolveMode::Cgh ? run_cgh(inst, cfg)
                                    : run_exact_enum(inst, cfg);
}

}  // namespace pickwave
