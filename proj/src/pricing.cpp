#include "pickwave/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace pickwave {

namespace {

long long lcm_ll(long long a, long long b) { return a / std::gcd(a, b) * b; }

bool bbox_coefs_plausible(const RouteSpec& route, const Instance& inst,
                          Routing& routing, const std::vector<OrderId>& seq,
                          const std::vector<long long>& a) {
  // sampled check that each coefficient underestimates the marginal travel
  // time of its order against subsets of its prefix
  std::mt19937_64 rng(0x5eedULL + (unsigned long long)route.orders.size());
  int checked = 0;
  for (int trial = 0; trial < 40 && checked < 20; ++trial) {
    size_t i = 1 + (size_t)(rng() % (seq.size() - 1));
    std::vector<OrderId> r;
    for (size_t j = 0; j < i; ++j)
      if (rng() % 2 == 0) r.push_back(seq[j]);
    if (r.size() > 3) r.resize(3);
    std::sort(r.begin(), r.end());
    std::vector<OrderId> ri = r;
    ri.push_back(seq[i]);
    std::sort(ri.begin(), ri.end());
    try {
      long long inc = routing.order_travel_time(ri) - routing.order_travel_time(r);
      long long pick = inst.order(seq[i]).pick_time;
      if (a[(size_t)seq[i]] > pick + inc) return false;
      ++checked;
    } catch (const TooManyLocations&) {
      continue;
    }
  }
  return true;
}

}  // namespace

TourConstraint make_tour_constraint(const RouteSpec& route, const Instance& inst,
                                    Routing& routing, TourVariant variant) {
  TourConstraint tc;
  tc.route = route;
  tc.variant = variant;
  if (variant == TourVariant::Plain) return tc;

  const int n = (int)inst.orders.size();
  tc.base = inst.setup_time;
  tc.coef.assign((size_t)n, 0);
  for (int o = 0; o < n; ++o) tc.coef[(size_t)o] = inst.order(o).pick_time;

  auto seq = routing.coefficient_sequence(route);
  auto finish = [&](CoefScheme scheme) {
    tc.scheme = scheme;
    long long sum = tc.base;
    for (OrderId o : route.orders) sum += tc.coef[(size_t)o];
    tc.slack = route.duration - sum;
    if (tc.slack < 0)
      throw CoefficientInvalid("tour coefficients exceed the route duration");
  };

  if (route.orders.size() <= 5) {
    try {
      for (size_t i = 0; i < seq.size(); ++i)
        tc.coef[(size_t)seq[i]] =
            routing.tour_coefficient_exact(route, (int)i + 1);
      finish(CoefScheme::Exact);
      return tc;
    } catch (const std::exception&) {
      for (OrderId o : route.orders)
        tc.coef[(size_t)o] = inst.order(o).pick_time;
    }
  } else {
    std::vector<long long> a(tc.coef);
    bool ok = true;
    try {
      for (size_t i = 0; i < seq.size(); ++i)
        a[(size_t)seq[i]] = routing.tour_coefficient_bbox(route, (int)i + 1);
    } catch (const std::exception&) {
      ok = false;
    }
    if (ok && bbox_coefs_plausible(route, inst, routing, seq, a)) {
      long long sum = tc.base;
      for (OrderId o : route.orders) sum += a[(size_t)o];
      if (route.duration - sum >= 0) {
        tc.coef = a;
        finish(CoefScheme::BBox);
        return tc;
      }
    }
    for (OrderId o : route.orders)
      tc.coef[(size_t)o] = inst.order(o).pick_time;
  }
  finish(CoefScheme::PickOnly);
  return tc;
}

long long tour_row_bound(const TourConstraint& tc, const Instance& inst,
                         const std::vector<OrderId>& selected) {
  (void)inst;
  long long in_route = 0;
  for (OrderId o : selected)
    if (std::binary_search(tc.route.orders.begin(), tc.route.orders.end(), o))
      ++in_route;
  long long m = in_route - (long long)tc.route.orders.size() + 1;
  if (tc.variant == TourVariant::Plain) return tc.route.duration * m;
  long long lhs = tc.base + tc.slack * m;
  for (OrderId o : selected) lhs += tc.coef[(size_t)o];
  return lhs;
}

PricingModel build_pricing(const Instance& inst, const DualPrices& duals,
                           const std::vector<Cut>& cuts) {
  PricingModel pm;
  const int n = (int)inst.orders.size();
  pm.deadlines = inst.deadlines;
  const int nd = (int)pm.deadlines.size();
  const double max_d = (double)pm.deadlines.back();
  auto& m = pm.model;

  pm.var_t = m.add_var(0.0, max_d, 1.0, false);
  pm.var_e.resize((size_t)n);
  for (int o = 0; o < n; ++o) {
    auto it = duals.alpha.find(o);
    double a = it == duals.alpha.end() ? 0.0 : it->second;
    pm.var_e[(size_t)o] = m.add_var(0.0, 1.0, -a, true);
  }
  pm.var_mu.resize((size_t)nd);
  pm.var_delta.resize((size_t)nd);
  for (int j = 0; j < nd; ++j)
    pm.var_mu[(size_t)j] = m.add_var(0.0, 1.0, 0.0, true);
  for (int j = 0; j < nd; ++j) {
    auto it = duals.beta.find(pm.deadlines[(size_t)j]);
    double b = it == duals.beta.end() ? 0.0 : it->second;
    pm.var_delta[(size_t)j] = m.add_var(0.0, max_d, -b, false);
  }

  std::vector<std::pair<int, double>> row;
  for (int o = 0; o < n; ++o)
    row.push_back({pm.var_e[(size_t)o], (double)inst.order(o).size});
  m.add_row(row, 'L', (double)inst.capacity);

  row.clear();
  for (int j = 0; j < nd; ++j) row.push_back({pm.var_mu[(size_t)j], 1.0});
  m.add_row(row, 'E', 1.0);

  for (int j = 0; j < nd; ++j) {
    row.clear();
    for (int o = 0; o < n; ++o)
      if (inst.order(o).deadline == pm.deadlines[(size_t)j])
        row.push_back({pm.var_e[(size_t)o], 1.0});
    row.push_back({pm.var_mu[(size_t)j], -1.0});
    m.add_row(row, 'G', 0.0);
  }

  for (int o = 0; o < n; ++o) {
    row.clear();
    for (int j = 0; j < nd; ++j)
      if (pm.deadlines[(size_t)j] <= inst.order(o).deadline)
        row.push_back({pm.var_mu[(size_t)j], 1.0});
    row.push_back({pm.var_e[(size_t)o], -1.0});
    m.add_row(row, 'G', 0.0);
  }

  for (int j = 0; j < nd; ++j) {
    row.clear();
    row.push_back({pm.var_t, 1.0});
    row.push_back({pm.var_delta[(size_t)j], -1.0});
    for (int j2 = j + 1; j2 < nd; ++j2)
      row.push_back({pm.var_mu[(size_t)j2], -(double)pm.deadlines[(size_t)j2]});
    m.add_row(row, 'L', 0.0);
  }

  row.clear();
  row.push_back({pm.var_t, 1.0});
  for (int j = 0; j < nd; ++j)
    row.push_back({pm.var_mu[(size_t)j], -(double)pm.deadlines[(size_t)j]});
  m.add_row(row, 'L', 0.0);

  row.clear();
  for (int o = 0; o < n; ++o) row.push_back({pm.var_e[(size_t)o], 1.0});
  m.add_row(row, 'G', 1.0);

  row.clear();
  for (int o = 0; o < n; ++o)
    row.push_back({pm.var_e[(size_t)o], (double)inst.order(o).pick_time});
  row.push_back({pm.var_t, -1.0});
  m.add_row(row, 'L', -(double)inst.setup_time);

  {
    // box excursion vars: travel of any route covers the selected orders' box
    const auto& w = inst.warehouse;
    const auto& lay = w.layout;
    int dx = 0, dy = 0;
    for (const auto& p : w.intersections)
      if (p.id == w.depot_start) {
        dx = p.x;
        dy = p.y;
      }
    std::map<NodeId, std::pair<int, int>> pts;
    for (const auto& p : w.locations) pts[p.id] = {p.x, p.y};
    int xp = m.add_var(0.0, kInf, 0.0, false);
    int xm = m.add_var(0.0, kInf, 0.0, false);
    int yp = m.add_var(0.0, kInf, 0.0, false);
    int ym = m.add_var(0.0, kInf, 0.0, false);
    for (int o = 0; o < n; ++o) {
      int mxo = dx, nxo = dx, myo = dy, nyo = dy;
      for (NodeId l : inst.order(o).locations) {
        auto f = pts.find(l);
        if (f == pts.end()) continue;
        mxo = std::max(mxo, f->second.first);
        nxo = std::min(nxo, f->second.first);
        myo = std::max(myo, f->second.second);
        nyo = std::min(nyo, f->second.second);
      }
      if (mxo > dx)
        m.add_row({{pm.var_e[(size_t)o], (double)(mxo - dx)}, {xp, -1.0}}, 'L', 0.0);
      if (nxo < dx)
        m.add_row({{pm.var_e[(size_t)o], (double)(dx - nxo)}, {xm, -1.0}}, 'L', 0.0);
      if (myo > dy)
        m.add_row({{pm.var_e[(size_t)o], (double)(myo - dy)}, {yp, -1.0}}, 'L', 0.0);
      if (nyo < dy)
        m.add_row({{pm.var_e[(size_t)o], (double)(dy - nyo)}, {ym, -1.0}}, 'L', 0.0);
    }
    double fx = 2.0 * (double)lay.cross_aisle_travel / (double)lay.aisle_pitch;
    double fy = 2.0 * (double)lay.slot_travel;
    row.clear();
    for (int o = 0; o < n; ++o)
      row.push_back({pm.var_e[(size_t)o], (double)inst.order(o).pick_time});
    row.push_back({xp, fx});
    row.push_back({xm, fx});
    row.push_back({yp, fy});
    row.push_back({ym, fy});
    row.push_back({pm.var_t, -1.0});
    m.add_row(row, 'L', -(double)inst.setup_time);
  }

  pm.ext.resize(cuts.size());
  for (size_t c = 0; c < cuts.size(); ++c) {
    double g = c < duals.gamma.size() ? duals.gamma[c] : 0.0;
    if (std::fabs(g) < 1e-9) continue;
    const Cut& cut = cuts[c];
    auto& ev = pm.ext[c];
    if (cut.kind == CutKind::MT) {
      double dbar = (double)cut.dbar, q = (double)cut.q;
      ev.w = m.add_var(0.0, max_d, -g, false);
      ev.b1 = m.add_var(0.0, 1.0, 0.0, true);
      ev.b2 = m.add_var(0.0, 1.0, 0.0, true);
      ev.b3 = m.add_var(0.0, 1.0, 0.0, true);
      row.clear();
      row.push_back({ev.b1, 1.0});
      row.push_back({ev.b2, 1.0});
      row.push_back({ev.b3, 1.0});
      for (int j = 0; j < nd; ++j)
        if (pm.deadlines[(size_t)j] > cut.dbar)
          row.push_back({pm.var_mu[(size_t)j], 1.0});
      m.add_row(row, 'E', 1.0);
      m.add_row({{ev.w, 1.0}, {ev.b1, -dbar}}, 'G', 0.0);
      m.add_row({{ev.w, 1.0}, {pm.var_t, -1.0}, {ev.b2, -max_d}}, 'G', -max_d);
      m.add_row({{pm.var_t, 1.0}, {ev.b2, -q}, {ev.b1, -(dbar - q + 1.0)}}, 'G',
                0.0);
      row.clear();
      row.push_back({pm.var_t, 1.0});
      row.push_back({ev.b1, -dbar});
      row.push_back({ev.b2, -(dbar - q)});
      row.push_back({ev.b3, -(q - 1.0)});
      for (int j = 0; j < nd; ++j)
        if (pm.deadlines[(size_t)j] > cut.dbar)
          row.push_back({pm.var_mu[(size_t)j], -(double)pm.deadlines[(size_t)j]});
      m.add_row(row, 'L', 0.0);
    } else if (cut.kind == CutKind::FS) {
      double dbar = (double)cut.dbar, q = (double)cut.q;
      ev.v = m.add_var(0.0, q - 1.0, -g, true);
      row.clear();
      row.push_back({pm.var_t, q});
      row.push_back({ev.v, -dbar});
      for (int j = 0; j < nd; ++j)
        if (pm.deadlines[(size_t)j] > cut.dbar)
          row.push_back(
              {pm.var_mu[(size_t)j], -(q * (double)pm.deadlines[(size_t)j] - dbar)});
      m.add_row(row, 'L', dbar);
      m.add_row({{pm.var_t, q}, {ev.v, -dbar}}, 'G', 1.0);
    } else if (cut.kind == CutKind::SCC) {
      ev.z = m.add_var(0.0, 1.0, -g, true);
      row.clear();
      for (OrderId o : cut.subset) row.push_back({pm.var_e[(size_t)o], 1.0});
      row.push_back({ev.z, -1.0});
      m.add_row(row, 'G', 0.0);
    } else {
      long long tstar = 1;
      for (const Rat& p : cut.mult) tstar = lcm_ll(tstar, p.den);
      Rat total(0);
      for (const Rat& p : cut.mult) total = total + p;
      long long cap = total.floor();
      if (cap <= 0) continue;
      ev.u = m.add_var(0.0, (double)cap, -g, true);
      row.clear();
      for (size_t i = 0; i < cut.subset.size(); ++i) {
        long long s = (cut.mult[i] * Rat(tstar)).num;
        row.push_back({pm.var_e[(size_t)cut.subset[i]], (double)s});
      }
      row.push_back({ev.u, -(double)tstar});
      m.add_row(row, 'L', (double)(tstar - 1));
      const size_t r = cut.subset.size();
      for (unsigned mask = 1; mask < (1u << r); ++mask) {
        Rat sum(0);
        Rat pmin(0);
        bool first = true;
        int sz = 0;
        for (size_t i = 0; i < r; ++i)
          if (mask & (1u << i)) {
            sum = sum + cut.mult[i];
            if (first || cut.mult[i] < pmin) pmin = cut.mult[i];
            first = false;
            ++sz;
          }
        long long mm = sum.floor();
        if (mm < 1) continue;
        if (!((sum - pmin) < Rat(mm))) continue;
        row.clear();
        for (size_t i = 0; i < r; ++i)
          if (mask & (1u << i))
            row.push_back({pm.var_e[(size_t)cut.subset[i]], 1.0});
        row.push_back({ev.u, -1.0});
        m.add_row(row, 'L', (double)(sz - mm));
      }
    }
  }
  return pm;
}

namespace {

LazyRow tour_lazy_row(const PricingModel& pm, const TourConstraint& tc,
                      const Instance& inst) {
  LazyRow lr;
  lr.sense = 'L';
  const auto& k = tc.route.orders;
  if (tc.variant == TourVariant::Plain) {
    for (OrderId o : k)
      lr.coeffs.push_back({pm.var_e[(size_t)o], (double)tc.route.duration});
    lr.coeffs.push_back({pm.var_t, -1.0});
    lr.rhs = (double)(tc.route.duration * ((long long)k.size() - 1));
    return lr;
  }
  const int n = (int)inst.orders.size();
  for (int o = 0; o < n; ++o) {
    double a = (double)tc.coef[(size_t)o];
    if (std::binary_search(k.begin(), k.end(), o)) a += (double)tc.slack;
    if (a != 0.0) lr.coeffs.push_back({pm.var_e[(size_t)o], a});
  }
  lr.coeffs.push_back({pm.var_t, -1.0});
  lr.rhs = (double)(tc.slack * ((long long)k.size() - 1) - tc.base);
  return lr;
}

}  // namespace

void add_tour_row(PricingModel& pm, const TourConstraint& tc, const Instance& inst) {
  LazyRow lr = tour_lazy_row(pm, tc, inst);
  pm.model.add_row(lr.coeffs, lr.sense, lr.rhs);
}

namespace {

std::vector<OrderId> decode_orders(const PricingModel& pm,
                                   const std::vector<double>& x) {
  std::vector<OrderId> s;
  for (size_t o = 0; o < pm.var_e.size(); ++o)
    if (x[(size_t)pm.var_e[o]] > 0.5) s.push_back((OrderId)o);
  return s;
}

}  // namespace

PricingResult solve_pricing_iteration(const Instance& inst, Routing& routing,
                                      const DualPrices& duals,
                                      const std::vector<Cut>& cuts,
                                      std::vector<TourConstraint>& tour_rows,
                                      const PricingOptions& opts) {
  const double t0 = now_seconds();
  PricingResult res;
  const TourVariant variant =
      opts.plain_tour_rows ? TourVariant::Plain : TourVariant::Strengthened;

  PricingModel pm = build_pricing(inst, duals, cuts);
  std::map<std::vector<OrderId>, size_t> learned;
  std::set<std::vector<OrderId>> row_keys;
  for (size_t i = 0; i < tour_rows.size(); ++i) {
    const auto& tc = tour_rows[i];
    learned.emplace(tc.route.orders, i);
    if (tc.route.orders.size() <= 2) {
      add_tour_row(pm, tc, inst);
      row_keys.insert(tc.route.orders);
    }
  }

  struct Verified {
    RouteSpec route;
    double cbar = 0.0;
    bool feasible = false;
    bool oracle_ok = true;
  };
  std::map<std::vector<OrderId>, Verified> seen;
  auto verify = [&](const std::vector<OrderId>& s) -> Verified& {
    auto it = seen.find(s);
    if (it != seen.end()) return it->second;
    Verified v;
    try {
      v.route = routing.build_route(s);
      v.feasible = routing.route_feasible(v.route);
      if (v.feasible) v.cbar = reduced_cost(v.route, duals, cuts);
    } catch (const TooManyLocations&) {
      v.oracle_ok = false;
      v.route.orders = s;
      long long dur = inst.setup_time;
      std::vector<NodeId> locs;
      for (OrderId o : s) {
        dur += inst.order(o).pick_time;
        for (NodeId l : inst.order(o).locations) locs.push_back(l);
      }
      std::sort(locs.begin(), locs.end());
      locs.erase(std::unique(locs.begin(), locs.end()), locs.end());
      v.route.duration = dur + routing.bounding_box_times(locs).box_perimeter_time;
    }
    return seen.emplace(s, std::move(v)).first->second;
  };

  double best_seen = opts.initial_cutoff;
  auto note_seen = [&](const Verified& v) {
    if (v.oracle_ok && v.feasible && v.cbar < best_seen) best_seen = v.cbar;
  };
  for (OrderId o = 0; o < (OrderId)inst.orders.size(); ++o) {
    if (inst.order(o).size <= inst.capacity) note_seen(verify({o}));
  }

  MipOptions mo;
  mo.time_limit_s = std::max(0.05, opts.time_limit_s - (now_seconds() - t0));
  mo.live_cutoff = &best_seen;
  mo.lazy_rows = [&](const std::vector<double>& x) -> std::vector<LazyRow> {
    auto s = decode_orders(pm, x);
    if (s.empty()) return {};
    Verified& v = verify(s);
    note_seen(v);
    if (x[(size_t)pm.var_t] >= (double)v.route.duration - 0.5) return {};
    if (row_keys.count(s)) return {};
    row_keys.insert(s);
    auto it = learned.find(s);
    if (it != learned.end()) return {tour_lazy_row(pm, tour_rows[it->second], inst)};
    TourConstraint tc;
    if (v.oracle_ok) {
      tc = make_tour_constraint(v.route, inst, routing, variant);
    } else {
      tc.route = v.route;
      tc.variant = TourVariant::Plain;
    }
    LazyRow lr = tour_lazy_row(pm, tc, inst);
    learned.emplace(s, tour_rows.size());
    tour_rows.push_back(std::move(tc));
    return {lr};
  };
  ++res.solves;
  MipResult out = solve_mip(pm.model, mo);
  res.nodes = out.nodes;
  res.lazy_calls = out.lazy_calls;
  res.lp_iter_limit_hits = out.lp_iter_limit_hits;
  res.lp_time_s = out.lp_time_s;
  res.lazy_time_s = out.lazy_time_s;
  if (out.status == SolveStatus::Infeasible) {
    res.lower_bound = std::max(res.lower_bound, 0.0);
    res.proven_nonnegative = true;
  } else {
    res.lower_bound = std::max(res.lower_bound, out.bound);
    if (out.status == SolveStatus::Optimal) {
      res.proven_nonnegative = out.bound >= -opts.tol;
    } else {
      res.timed_out = true;
    }
  }

  std::vector<const Verified*> good;
  for (const auto& [key, v] : seen)
    if (v.oracle_ok && v.feasible && v.cbar < -1e-9) good.push_back(&v);
  std::sort(good.begin(), good.end(), [](const Verified* a, const Verified* b) {
    if (a->cbar != b->cbar) return a->cbar < b->cbar;
    return a->route.orders < b->route.orders;
  });
  if ((int)good.size() > opts.max_candidates) good.resize((size_t)opts.max_candidates);
  for (const Verified* v : good) {
    res.candidates.push_back(v->route);
    res.reduced_costs.push_back(v->cbar);
  }
  return res;
}

}  // namespace pickwave
