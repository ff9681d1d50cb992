#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "pickwave/engine.hpp"
#include "pickwave/generator.hpp"
#include "pickwave/master.hpp"

using namespace pickwave;

namespace {

Instance gen(unsigned seed, int orders, int pickers = 2, int capacity = 15) {
  GenParams gp;
  gp.seed = seed;
  gp.num_orders = orders;
  gp.num_pickers = pickers;
  gp.capacity = capacity;
  return generate_instance(gp);
}

std::vector<RouteSpec> singletons(const Instance& inst,
                                  const Routing& routing) {
  std::vector<RouteSpec> out;
  for (const auto& o : inst.orders) out.push_back(routing.build_route({o.id}));
  return out;
}

// every assignment of partition blocks to pickers, EDF checked per picker
bool schedulable(const std::vector<RouteSpec>& blocks, const Instance& inst) {
  size_t np = (size_t)inst.num_pickers;
  size_t nb = blocks.size();
  std::vector<size_t> who(nb, 0);
  while (true) {
    std::vector<std::vector<const RouteSpec*>> byp(np);
    for (size_t b = 0; b < nb; ++b) byp[who[b]].push_back(&blocks[b]);
    bool ok = true;
    for (const auto& lst : byp) {
      auto sorted = lst;
      std::sort(sorted.begin(), sorted.end(),
                [](const RouteSpec* a, const RouteSpec* b) {
                  return a->deadline < b->deadline;
                });
      long long t = 0;
      for (const RouteSpec* r : sorted) {
        t += r->duration;
        if (t > r->deadline) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (ok) return true;
    size_t i = 0;
    while (i < nb && who[i] + 1 == np) who[i++] = 0;
    if (i == nb) return false;
    ++who[i];
  }
}

long long brute_force_optimum(const Instance& inst, const Routing& routing) {
  size_t n = inst.orders.size();
  std::vector<size_t> part(n, 0);
  long long best = -1;
  // restricted growth strings enumerate set partitions
  std::function<void(size_t, size_t)> rec = [&](size_t i, size_t maxb) {
    if (i == n) {
      size_t nb = maxb;
      std::vector<std::vector<OrderId>> blocks(nb);
      for (size_t j = 0; j < n; ++j) blocks[part[j]].push_back((OrderId)j);
      std::vector<RouteSpec> routes;
      long long cost = 0;
      for (auto& b : blocks) {
        int sz = 0;
        for (OrderId o : b) sz += inst.order(o).size;
        if (sz > inst.capacity) return;
        routes.push_back(routing.build_route(b));
        cost += routes.back().duration;
      }
      if (best >= 0 && cost >= best) return;
      if (schedulable(routes, inst)) best = cost;
      return;
    }
    for (size_t b = 0; b <= maxb; ++b) {
      part[i] = b;
      rec(i + 1, std::max(maxb, b + 1));
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace

TEST_CASE("reduced cost composes duals") {
  RouteSpec r;
  r.orders = {0, 1};
  r.duration = 100;
  r.deadline = 5;
  DualPrices d;
  CHECK(reduced_cost(r, d, {}) == doctest::Approx(100.0));
  d.alpha[0] = 10.0;
  d.alpha[1] = 20.0;
  d.beta[5] = -0.1;
  d.beta[10] = -0.05;
  CHECK(reduced_cost(r, d, {}) == doctest::Approx(85.0));

  Instance inst = gen(9, 3);
  std::vector<Cut> cuts{make_scc_cut({0, 1}, inst)};
  d.gamma = {4.0};
  CHECK(reduced_cost(r, d, cuts) == doctest::Approx(81.0));
  // later deadline leaves the early bin
  r.deadline = 7;
  CHECK(reduced_cost(r, d, cuts) == doctest::Approx(100.0 - 30.0 + 5.0 - 4.0));
}

TEST_CASE("column and cut keys deduplicate") {
  MasterState st;
  RouteSpec a;
  a.orders = {0, 2};
  a.duration = 10;
  CHECK(st.add_column(a));
  CHECK(!st.add_column(a));
  CHECK(st.columns.size() == 1);
  Cut c = make_mt_cut(10, 2, 1);
  CHECK(st.add_cut(c));
  CHECK(!st.add_cut(make_mt_cut(10, 2, 1)));
  CHECK(st.cuts.size() == 1);
}

TEST_CASE("singleton master equals the sum of singleton durations") {
  Instance inst = gen(3, 7);
  Routing routing(inst);
  MasterState st;
  long long total = 0;
  for (const auto& r : singletons(inst, routing)) {
    st.add_column(r);
    total += r.duration;
  }
  auto out = solve_restricted_master(st, inst);
  REQUIRE(out.status == SolveStatus::Optimal);
  CHECK(out.obj == doctest::Approx((double)total));
  for (const auto& [o, a] : out.duals.alpha) CHECK(a >= -1e-7);
  for (const auto& [dbar, b] : out.duals.beta) CHECK(b <= 1e-7);
  for (const auto& r : st.columns)
    CHECK(reduced_cost(r, out.duals, st.cuts) >= -1e-6);
}

TEST_CASE("a merged column can only improve the relaxation") {
  Instance inst = gen(5, 6);
  for (auto& o : inst.orders) o.deadline = 1000000;
  inst.deadlines = {1000000};
  Routing routing(inst);
  MasterState st;
  long long ta = 0, tb = 0;
  for (const auto& r : singletons(inst, routing)) {
    if (r.orders[0] == 0) ta = r.duration;
    if (r.orders[0] == 1) tb = r.duration;
    st.add_column(r);
  }
  double before = solve_restricted_master(st, inst).obj;
  RouteSpec pair = routing.build_route({0, 1});
  REQUIRE(pair.total_size <= inst.capacity);
  st.add_column(pair);
  auto out = solve_restricted_master(st, inst);
  REQUIRE(out.status == SolveStatus::Optimal);
  CHECK(out.obj == doctest::Approx(before - (double)(ta + tb - pair.duration)));
  CHECK(reduced_cost(pair, out.duals, st.cuts) >= -1e-6);
}

TEST_CASE("aggregated relaxation matches the assignment relaxation") {
  for (unsigned seed : {21u, 22u, 23u}) {
    Instance inst = gen(seed, 7, seed == 23u ? 3 : 2);
    Routing routing(inst);
    auto columns = enumerate_routes(inst, routing);
    REQUIRE(!columns.empty());

    MasterState st;
    for (const auto& r : columns) st.add_column(r);
    auto agg = solve_restricted_master(st, inst);
    REQUIRE(agg.status == SolveStatus::Optimal);

    LinearModel m;
    size_t nk = columns.size(), np = (size_t)inst.num_pickers;
    for (size_t k = 0; k < nk; ++k)
      for (size_t p = 0; p < np; ++p)
        m.add_var(0.0, 1.0, (double)columns[k].duration);
    for (size_t o = 0; o < inst.orders.size(); ++o) m.add_row('G', 1.0);
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
    LpResult lp = solve_lp(m);
    REQUIRE(lp.status == SolveStatus::Optimal);
    CHECK(std::abs(lp.obj - agg.obj) < 1e-6 * std::max(1.0, std::abs(lp.obj)));
  }
}

TEST_CASE("binpacking matches exhaustive partition search") {
  for (unsigned seed : {31u, 32u}) {
    Instance inst = gen(seed, 6);
    Routing routing(inst);
    auto columns = enumerate_routes(inst, routing);
    long long want = brute_force_optimum(inst, routing);
    REQUIRE(want >= 0);
    auto out = solve_binpacking_mip(columns, inst, 60.0);
    REQUIRE(out.status == SolveStatus::Optimal);
    REQUIRE(out.solution.has_value());
    CHECK(out.solution->cost == want);
    auto rep = verify_solution(*out.solution, inst, routing);
    CHECK(rep.ok);
    CHECK(rep.violations.empty());
  }
}

TEST_CASE("verification flags tampering") {
  Instance inst = gen(31, 6);
  Routing routing(inst);
  auto columns = enumerate_routes(inst, routing);
  auto out = solve_binpacking_mip(columns, inst, 60.0);
  REQUIRE(out.solution.has_value());
  Solution sol = *out.solution;

  Solution bad = sol;
  for (auto& pr : bad.per_picker)
    if (!pr.empty()) {
      pr[0].duration += 5;
      break;
    }
  auto rep = verify_solution(bad, inst, routing);
  CHECK(!rep.ok);
  bool mentions = false;
  for (const auto& v : rep.violations)
    mentions |= v.find("duration mismatch") != std::string::npos ||
                v.find("cost mismatch") != std::string::npos;
  CHECK(mentions);

  Solution dropped = sol;
  for (auto& pr : dropped.per_picker)
    if (!pr.empty()) {
      dropped.cost -= pr.back().duration;
      pr.pop_back();
      break;
    }
  rep = verify_solution(dropped, inst, routing);
  CHECK(!rep.ok);
  bool uncovered = false;
  for (const auto& v : rep.violations)
    uncovered |= v.find("uncovered order") != std::string::npos;
  CHECK(uncovered);
}

TEST_CASE("binpacking reports infeasible when no schedule exists") {
  Instance inst = gen(31, 6, 1);
  for (auto& o : inst.orders) o.deadline = 1;
  inst.deadlines = {1};
  Routing routing(inst);
  auto columns = enumerate_routes(inst, routing);
  for (auto& r : columns) r.deadline = 1;
  auto out = solve_binpacking_mip(columns, inst, 30.0);
  CHECK(out.status == SolveStatus::Infeasible);
  CHECK(!out.solution.has_value());
}
