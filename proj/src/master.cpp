#include "pickwave/master.hpp"

#include <algorithm>
#include <sstream>

namespace pickwave {

bool MasterState::add_column(const RouteSpec& r) {
  if (!column_keys.insert(r.orders).second) return false;
  columns.push_back(r);
  return true;
}

bool MasterState::add_cut(const Cut& c) {
  if (!cut_ids.insert(c.id).second) return false;
  cuts.push_back(c);
  return true;
}

namespace {

LinearModel build_master_model(const std::vector<RouteSpec>& columns,
                               const std::vector<Cut>& cuts,
                               const Instance& inst, bool integer) {
  LinearModel m;
  size_t n_orders = inst.orders.size();
  for (const auto& r : columns)
    m.add_var(0.0, integer ? 1.0 : kInf, (double)r.duration, integer);
  for (size_t o = 0; o < n_orders; ++o) m.add_row('G', 1.0);
  for (int dbar : inst.deadlines)
    m.add_row('L', (double)dbar * inst.num_pickers);
  for (const auto& c : cuts) m.add_row(c.sense, (double)c.rhs);
  for (size_t k = 0; k < columns.size(); ++k) {
    const RouteSpec& r = columns[k];
    for (OrderId o : r.orders) m.set_coef((int)o, (int)k, 1.0);
    for (size_t d = 0; d < inst.deadlines.size(); ++d)
      if (r.deadline <= inst.deadlines[d])
        m.set_coef((int)(n_orders + d), (int)k, (double)r.duration);
    for (size_t c = 0; c < cuts.size(); ++c) {
      long long coef = cuts[c].coefficient(r);
      if (coef != 0)
        m.set_coef((int)(n_orders + inst.deadlines.size() + c), (int)k,
                   (double)coef);
    }
  }
  return m;
}

}  // namespace

MasterLpOutcome solve_restricted_master(MasterState& state,
                                        const Instance& inst) {
  LinearModel m = build_master_model(state.columns, state.cuts, inst, false);
  LpResult lp = solve_lp(m);
  MasterLpOutcome out;
  out.status = lp.status;
  if (lp.status != SolveStatus::Optimal) return out;
  out.obj = lp.obj;
  out.rho = lp.x;
  size_t n_orders = inst.orders.size();
  for (size_t o = 0; o < n_orders; ++o)
    out.duals.alpha[(OrderId)inst.orders[o].id] = lp.duals[o];
  for (size_t d = 0; d < inst.deadlines.size(); ++d)
    out.duals.beta[inst.deadlines[d]] = lp.duals[n_orders + d];
  for (size_t c = 0; c < state.cuts.size(); ++c)
    out.duals.gamma.push_back(lp.duals[n_orders + inst.deadlines.size() + c]);
  state.last_obj = out.obj;
  state.last_rho = out.rho;
  state.last_duals = out.duals;
  return out;
}

double reduced_cost(const RouteSpec& route, const DualPrices& duals,
                    const std::vector<Cut>& cuts) {
  double c = (double)route.duration;
  for (OrderId o : route.orders) {
    auto f = duals.alpha.find(o);
    if (f != duals.alpha.end()) c -= f->second;
  }
  for (const auto& [dbar, beta] : duals.beta)
    if (route.deadline <= dbar) c -= beta * (double)route.duration;
  for (size_t i = 0; i < cuts.size() && i < duals.gamma.size(); ++i) {
    if (duals.gamma[i] == 0.0) continue;
    long long coef = cuts[i].coefficient(route);
    if (coef != 0) c -= duals.gamma[i] * (double)coef;
  }
  return c;
}

namespace {

// earliest-deadline-first feasibility of one picker's route multiset
bool edf_feasible(std::vector<const RouteSpec*> routes) {
  std::stable_sort(routes.begin(), routes.end(),
                   [](const RouteSpec* a, const RouteSpec* b) {
                     if (a->deadline != b->deadline)
                       return a->deadline < b->deadline;
                     return a->orders < b->orders;
                   });
  long long t = 0;
  for (const RouteSpec* r : routes) {
    t += r->duration;
    if (t > r->deadline) return false;
  }
  return true;
}

// assign selected routes to pickers: x_kp binary with EDF prefix rows
std::optional<Solution> schedule_selection(
    const std::vector<const RouteSpec*>& sel, const Instance& inst,
    double time_limit_s) {
  Solution out;
  out.per_picker.assign((size_t)inst.num_pickers, {});
  if (sel.empty()) {
    out.cost = 0;
    return out;
  }
  if (inst.num_pickers == 1) {
    if (!edf_feasible(sel)) return std::nullopt;
    for (const RouteSpec* r : sel) out.per_picker[0].push_back(*r);
  } else {
    LinearModel m;
    size_t nk = sel.size(), np = (size_t)inst.num_pickers;
    for (size_t k = 0; k < nk; ++k)
      for (size_t p = 0; p < np; ++p) m.add_var(0.0, 1.0, 0.0, true);
    for (size_t k = 0; k < nk; ++k) {
      std::vector<std::pair<int, double>> row;
      for (size_t p = 0; p < np; ++p)
        row.push_back({(int)(k * np + p), 1.0});
      m.add_row(row, 'E', 1.0);
    }
    for (size_t p = 0; p < np; ++p)
      for (int dbar : inst.deadlines) {
        std::vector<std::pair<int, double>> row;
        for (size_t k = 0; k < nk; ++k)
          if (sel[k]->deadline <= dbar)
            row.push_back({(int)(k * np + p), (double)sel[k]->duration});
        if (!row.empty()) m.add_row(row, 'L', (double)dbar);
      }
    MipOptions mo;
    mo.time_limit_s = time_limit_s;
    MipResult res = solve_mip(m, mo);
    if (!res.has_incumbent) return std::nullopt;
    for (size_t k = 0; k < nk; ++k)
      for (size_t p = 0; p < np; ++p)
        if (res.x[k * np + p] > 0.5) out.per_picker[p].push_back(*sel[k]);
  }
  for (auto& pr : out.per_picker) {
    std::stable_sort(pr.begin(), pr.end(),
                     [](const RouteSpec& a, const RouteSpec& b) {
                       if (a.deadline != b.deadline)
                         return a.deadline < b.deadline;
                       return a.orders < b.orders;
                     });
    long long t = 0;
    for (const auto& r : pr) {
      t += r.duration;
      if (t > r.deadline) return std::nullopt;
    }
  }
  out.cost = 0;
  for (const auto& pr : out.per_picker)
    for (const auto& r : pr) out.cost += r.duration;
  return out;
}

BinpackOutcome solve_direct_b(const std::vector<RouteSpec>& columns,
                              const Instance& inst, double time_limit_s,
                              const Solution* warm) {
  double t0 = now_seconds();
  LinearModel m;
  size_t nk = columns.size(), np = (size_t)inst.num_pickers;
  size_t n_orders = inst.orders.size();
  for (size_t k = 0; k < nk; ++k)
    for (size_t p = 0; p < np; ++p)
      m.add_var(0.0, 1.0, (double)columns[k].duration, true);
  for (size_t o = 0; o < n_orders; ++o) m.add_row('G', 1.0);
  for (size_t k = 0; k < nk; ++k)
    for (OrderId o : columns[k].orders)
      for (size_t p = 0; p < np; ++p)
        m.set_coef((int)o, (int)(k * np + p), 1.0);
  for (size_t p = 0; p < np; ++p)
    for (int dbar : inst.deadlines) {
      std::vector<std::pair<int, double>> row;
      for (size_t k = 0; k < nk; ++k)
        if (columns[k].deadline <= dbar)
          row.push_back({(int)(k * np + p), (double)columns[k].duration});
      m.add_row(row, 'L', (double)dbar);
    }
  // interchangeable pickers: order them by decreasing assigned time
  for (size_t p = 0; p + 1 < np; ++p) {
    std::vector<std::pair<int, double>> row;
    for (size_t k = 0; k < nk; ++k) {
      row.push_back({(int)(k * np + p), (double)columns[k].duration});
      row.push_back({(int)(k * np + p + 1), -(double)columns[k].duration});
    }
    m.add_row(row, 'G', 0.0);
  }

  MipOptions mo;
  mo.time_limit_s = std::max(0.1, time_limit_s - (now_seconds() - t0));
  if (warm) {
    std::vector<double> wx(nk * np, 0.0);
    bool ok = true;
    std::vector<std::pair<long long, size_t>> loads;
    for (size_t p = 0; p < warm->per_picker.size() && p < np; ++p) {
      long long L = 0;
      for (const auto& r : warm->per_picker[p]) L += r.duration;
      loads.push_back({-L, p});
    }
    std::sort(loads.begin(), loads.end());
    size_t tgt = 0;
    for (auto [negL, p] : loads) {
      for (const auto& r : warm->per_picker[p]) {
        auto it = std::find_if(columns.begin(), columns.end(),
                               [&](const RouteSpec& c) {
                                 return c.orders == r.orders;
                               });
        if (it == columns.end()) {
          ok = false;
          break;
        }
        wx[(size_t)(it - columns.begin()) * np + tgt] = 1.0;
      }
      if (!ok) break;
      ++tgt;
    }
    if (ok) {
      mo.has_warm = true;
      mo.warm_x = wx;
    }
  }
  MipResult res = solve_mip(m, mo);
  BinpackOutcome out;
  out.bound = res.bound;
  if (!res.has_incumbent) {
    out.status = res.status == SolveStatus::TimeLimit ? SolveStatus::TimeLimit
                                                      : SolveStatus::Infeasible;
    return out;
  }
  Solution sol;
  sol.per_picker.assign(np, {});
  for (size_t k = 0; k < nk; ++k)
    for (size_t p = 0; p < np; ++p)
      if (res.x[k * np + p] > 0.5) sol.per_picker[p].push_back(columns[k]);
  for (auto& pr : sol.per_picker)
    std::stable_sort(pr.begin(), pr.end(),
                     [](const RouteSpec& a, const RouteSpec& b) {
                       if (a.deadline != b.deadline)
                         return a.deadline < b.deadline;
                       return a.orders < b.orders;
                     });
  sol.cost = 0;
  for (const auto& pr : sol.per_picker)
    for (const auto& r : pr) sol.cost += r.duration;
  out.solution = std::move(sol);
  out.status = res.status;
  return out;
}

}  // namespace

BinpackOutcome solve_binpacking_mip(const std::vector<RouteSpec>& columns,
                                    const Instance& inst, double time_limit_s,
                                    const std::vector<Cut>* cuts,
                                    const Solution* warm) {
  BinpackOutcome out;
  if (columns.empty()) return out;
  double t0 = now_seconds();
  std::vector<Cut> no_cuts;
  const std::vector<Cut>& cs = cuts ? *cuts : no_cuts;

  // stage one: integer selection on the aggregated model, then a scheduling
  // check; unschedulable selections are excluded and the selection re-solved
  std::vector<std::vector<int>> nogoods;
  std::optional<Solution> best;
  double stage_bound = 0.0;
  for (int round = 0; round < 50; ++round) {
    double remain = time_limit_s - (now_seconds() - t0);
    if (remain < 0.05) break;
    LinearModel m = build_master_model(columns, cs, inst, true);
    for (const auto& ng : nogoods) {
      std::vector<std::pair<int, double>> row;
      for (int k : ng) row.push_back({k, 1.0});
      m.add_row(row, 'L', (double)ng.size() - 1.0);
    }
    MipOptions mo;
    mo.time_limit_s = remain;
    if (round == 0 && warm) {
      std::vector<double> wx(columns.size(), 0.0);
      bool ok = true;
      for (const auto& pr : warm->per_picker)
        for (const auto& r : pr) {
          auto it = std::find_if(
              columns.begin(), columns.end(),
              [&](const RouteSpec& c) { return c.orders == r.orders; });
          if (it == columns.end()) ok = false;
          else wx[(size_t)(it - columns.begin())] = 1.0;
        }
      if (ok) {
        mo.has_warm = true;
        mo.warm_x = wx;
      }
    }
    MipResult res = solve_mip(m, mo);
    if (round == 0) stage_bound = res.bound;
    if (!res.has_incumbent) {
      if (res.status == SolveStatus::Infeasible && round == 0) {
        out.status = SolveStatus::Infeasible;
        return out;
      }
      break;
    }
    std::vector<const RouteSpec*> sel;
    std::vector<int> sel_idx;
    for (size_t k = 0; k < columns.size(); ++k)
      if (res.x[k] > 0.5) {
        sel.push_back(&columns[k]);
        sel_idx.push_back((int)k);
      }
    double sched_budget =
        std::min(10.0, std::max(0.1, time_limit_s - (now_seconds() - t0)));
    auto sol = schedule_selection(sel, inst, sched_budget);
    if (sol) {
      if (!best || sol->cost < best->cost) best = sol;
      if (res.status == SolveStatus::Optimal) {
        out.status = SolveStatus::Optimal;
        out.solution = best;
        out.bound = (double)best->cost;
        return out;
      }
      break;
    }
    nogoods.push_back(sel_idx);
  }

  // fall back to the full assignment formulation
  double remain = time_limit_s - (now_seconds() - t0);
  if (remain > 0.1) {
    BinpackOutcome direct = solve_direct_b(
        columns, inst, remain, best ? &*best : warm);
    if (direct.solution &&
        (!best || direct.solution->cost < best->cost))
      best = direct.solution;
    if (direct.status == SolveStatus::Optimal && best &&
        best->cost <= direct.solution->cost) {
      out.status = SolveStatus::Optimal;
      out.solution = best;
      out.bound = (double)best->cost;
      return out;
    }
    out.bound = direct.bound;
    out.status = direct.status;
  } else {
    out.bound = stage_bound;
    out.status = best ? SolveStatus::TimeLimit : SolveStatus::Infeasible;
  }
  if (best) {
    out.solution = best;
    if (out.status == SolveStatus::Infeasible)
      out.status = SolveStatus::TimeLimit;
  }
  return out;
}

VerifyReport verify_solution(const Solution& sol, const Instance& inst,
                             const Routing& routing) {
  VerifyReport rep;
  auto fail = [&](const std::string& s) {
    rep.ok = false;
    rep.violations.push_back(s);
  };
  std::set<OrderId> covered;
  if (sol.per_picker.size() > (size_t)inst.num_pickers)
    fail("too many pickers used");
  long long cost = 0;
  for (size_t p = 0; p < sol.per_picker.size(); ++p) {
    auto routes = sol.per_picker[p];
    std::stable_sort(routes.begin(), routes.end(),
                     [](const RouteSpec& a, const RouteSpec& b) {
                       if (a.deadline != b.deadline)
                         return a.deadline < b.deadline;
                       return a.orders < b.orders;
                     });
    long long t = 0;
    for (const auto& r : routes) {
      if (r.orders.empty()) {
        fail("empty route");
        continue;
      }
      if (r.total_size > inst.capacity) fail("route exceeds capacity");
      long long true_dur = routing.route_duration(r.orders);
      if (true_dur != r.duration) fail("duration mismatch");
      int dmin = std::numeric_limits<int>::max();
      int sz = 0;
      for (OrderId o : r.orders) {
        covered.insert(o);
        dmin = std::min(dmin, inst.order(o).deadline);
        sz += inst.order(o).size;
      }
      if (dmin != r.deadline) fail("deadline mismatch");
      if (sz != r.total_size) fail("size mismatch");
      t += r.duration;
      if (t > r.deadline) fail("route finishes after its deadline");
      cost += r.duration;
    }
  }
  for (const auto& o : inst.orders)
    if (!covered.count(o.id)) fail("uncovered order " + std::to_string(o.id));
  if (cost != sol.cost) fail("cost mismatch");
  return rep;
}

}  // namespace pickwave
