#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pickwave/cuts.hpp"
#include "pickwave/generator.hpp"

using namespace pickwave;

namespace {

RouteSpec route_of(std::vector<OrderId> orders, long long duration,
                   int deadline) {
  RouteSpec r;
  r.orders = std::move(orders);
  std::sort(r.orders.begin(), r.orders.end());
  r.duration = duration;
  r.deadline = deadline;
  return r;
}

Instance bare_instance(std::vector<int> sizes, int capacity, int pickers,
                       std::vector<int> deadlines) {
  Instance inst;
  inst.capacity = capacity;
  inst.num_pickers = pickers;
  inst.deadlines = std::move(deadlines);
  for (size_t i = 0; i < sizes.size(); ++i) {
    Order o;
    o.id = (OrderId)i;
    o.size = sizes[i];
    o.deadline = inst.deadlines.empty() ? 1 : inst.deadlines.back();
    inst.orders.push_back(o);
  }
  return inst;
}

}  // namespace

TEST_CASE("f0 branch values") {
  CHECK(dff_f0(Rat(3, 10), Rat(1, 2)) == Rat(1, 2));
  CHECK(dff_f0(Rat(3, 10), Rat(4, 5)) == Rat(1));
  CHECK(dff_f0(Rat(3, 10), Rat(1, 5)) == Rat(0));
  CHECK(dff_f0(Rat(0), Rat(0)) == Rat(0));
  CHECK(dff_f0(Rat(1, 2), Rat(1, 2)) == Rat(1, 2));
  CHECK_THROWS_AS(dff_f0(Rat(2, 3), Rat(1, 2)), DomainError);
  CHECK_THROWS_AS(dff_f0(Rat(1, 4), Rat(3, 2)), DomainError);
}

TEST_CASE("g branch values") {
  CHECK(dff_g(2, Rat(1, 3)) == Rat(0));
  CHECK(dff_g(2, Rat(1, 2)) == Rat(1, 2));
  CHECK(dff_g(2, Rat(2, 3)) == Rat(1, 2));
  CHECK(dff_g(3, Rat(0)) == Rat(0));
  CHECK(dff_g(1, Rat(1)) == Rat(1));
  CHECK_THROWS_AS(dff_g(0, Rat(1, 2)), DomainError);
  CHECK_THROWS_AS(dff_g(2, Rat(-1, 2)), DomainError);
}

TEST_CASE("dff safety: no random multiset ever exceeds one") {
  std::mt19937 rng(123);
  for (int trial = 0; trial < 20000; ++trial) {
    long long den = 2 + (long long)(rng() % 24);
    int k = 1 + (int)(rng() % 6);
    std::vector<Rat> xs;
    long long left = den;
    for (int i = 0; i < k && left > 0; ++i) {
      long long a = (long long)(rng() % (std::uint64_t)(left + 1));
      xs.push_back(Rat(a, den));
      left -= a;
    }
    Rat sum(0);
    for (const Rat& x : xs) sum = sum + x;
    REQUIRE(sum <= Rat(1));

    Rat lam((long long)(rng() % 7), 12);  // within [0, 1/2]
    Rat tot_f0(0);
    for (const Rat& x : xs) tot_f0 = tot_f0 + dff_f0(lam, x);
    CHECK(tot_f0 <= Rat(1));

    long long gl = 1 + (long long)(rng() % 6);
    Rat tot_g(0);
    for (const Rat& x : xs) tot_g = tot_g + dff_g(gl, x);
    CHECK(tot_g <= Rat(1));
  }
}

TEST_CASE("g never exceeds the maximal fs function") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 10000; ++trial) {
    long long lam = 1 + (long long)(rng() % 8);
    long long den = 1 + (long long)(rng() % 30);
    long long numr = (long long)(rng() % (std::uint64_t)(den + 1));
    Rat x(numr, den);
    CHECK(dff_g(lam, x) <= dff_f_fs1(lam, x));
  }
}

TEST_CASE("mt coefficients match the dff form") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 4000; ++trial) {
    int dbar = 4 + (int)(rng() % 60);
    long long q = 1 + (long long)(rng() % (std::uint64_t)(dbar / 2));
    long long t = (long long)(rng() % (std::uint64_t)(dbar + 1));
    Cut c = make_mt_cut(dbar, q, 1);
    RouteSpec r = route_of({0}, t, dbar);
    Rat dff = Rat(dbar) * dff_f0(Rat(q, dbar), Rat(t, dbar));
    CHECK(Rat(c.coefficient(r)) == dff);
  }
}

TEST_CASE("mt worked example: durations eight and four against deadline ten") {
  Cut c = make_mt_cut(10, 3, 1);
  RouteSpec r8 = route_of({0}, 8, 10);
  RouteSpec r4 = route_of({1}, 4, 10);
  CHECK(c.coefficient(r8) == 10);
  CHECK(c.coefficient(r4) == 4);
  CHECK(c.rhs == 10);
  std::vector<RouteValue> sol{{&r8, 1.0}, {&r4, 1.0}};
  CHECK(cut_lhs(c, sol) == doctest::Approx(14.0));
  CHECK(cut_violation(c, sol) == doctest::Approx(4.0));

  Instance inst = bare_instance({8, 4}, 15, 1, {10});
  auto cuts = separate_mt(sol, inst);
  REQUIRE(cuts.size() == 1);
  CHECK(cuts[0].q == 3);
  CHECK(cuts[0].dbar == 10);

  // no route reaches half the deadline: no candidate q
  RouteSpec s1 = route_of({0}, 5, 10);
  RouteSpec s2 = route_of({1}, 4, 10);
  std::vector<RouteValue> low{{&s1, 1.0}, {&s2, 1.0}};
  CHECK(separate_mt(low, inst).empty());
}

TEST_CASE("late routes never enter earlier deadline cuts") {
  Cut c = make_mt_cut(10, 3, 1);
  RouteSpec late = route_of({0}, 9, 50);
  CHECK(c.coefficient(late) == 0);
  Cut f = make_fs_cut(10, 2, 1);
  CHECK(f.coefficient(late) == 0);
}

TEST_CASE("fs interval index") {
  Cut c = make_fs_cut(10, 2, 1);
  RouteSpec r6 = route_of({0}, 6, 10);
  CHECK(c.coefficient(r6) == 1);
  CHECK(c.rhs == 1);
  RouteSpec r6b = route_of({1}, 6, 10);
  std::vector<RouteValue> sol{{&r6, 1.0}, {&r6b, 1.0}};
  CHECK(cut_lhs(c, sol) == doctest::Approx(2.0));
  CHECK(cut_violation(c, sol) == doctest::Approx(1.0));

  std::mt19937 rng(29);
  for (int trial = 0; trial < 4000; ++trial) {
    int dbar = 4 + (int)(rng() % 50);
    long long q = 2 + (long long)(rng() % 12);
    long long t = 1 + (long long)(rng() % (std::uint64_t)dbar);
    Cut k = make_fs_cut(dbar, q, 1);
    long long i = k.coefficient(route_of({0}, t, dbar));
    // i is the unique index with i*dbar/q < t <= (i+1)*dbar/q
    CHECK(Rat(i * dbar, q) < Rat(t));
    CHECK(Rat(t) <= Rat((i + 1) * dbar, q));
  }
}

TEST_CASE("fs separation returns the most violated q per deadline") {
  Instance inst = bare_instance({5, 5}, 15, 1, {10});
  RouteSpec r6 = route_of({0}, 6, 10);
  RouteSpec r6b = route_of({1}, 6, 10);
  std::vector<RouteValue> sol{{&r6, 1.0}, {&r6b, 1.0}};
  auto cuts = separate_fs(sol, inst);
  REQUIRE(cuts.size() == 1);
  double got = cut_violation(cuts[0], sol);
  for (long long q = 2; q <= 10; ++q)
    CHECK(got >= cut_violation(make_fs_cut(10, q, 1), sol) - 1e-12);

  RouteSpec tiny = route_of({0}, 1, 10);
  std::vector<RouteValue> low{{&tiny, 1.0}};
  CHECK(separate_fs(low, inst).empty());
}

TEST_CASE("scc worked example and separation") {
  Instance inst = bare_instance({8, 8, 8}, 15, 1, {100});
  Cut c = make_scc_cut({0, 1, 2}, inst);
  CHECK(c.rhs == 2);
  CHECK(c.sense == 'G');
  RouteSpec all = route_of({0, 1, 2}, 50, 100);
  std::vector<RouteValue> sol{{&all, 1.0}};
  CHECK(cut_lhs(c, sol) == doctest::Approx(1.0));
  CHECK(cut_violation(c, sol) == doctest::Approx(1.0));

  auto pool = build_scc_pool(inst);
  auto cuts = separate_scc(sol, inst, pool);
  REQUIRE(!cuts.empty());
  for (const auto& k : cuts) CHECK(cut_violation(k, sol) > 1e-6);
}

TEST_CASE("scc pool equals brute-force minimal subsets") {
  for (unsigned seed : {3u, 8u}) {
    GenParams gp;
    gp.seed = seed;
    gp.num_orders = 11;
    gp.capacity = 15;
    Instance inst = generate_instance(gp);
    auto pool = build_scc_pool(inst);

    long long total = 0;
    for (const auto& o : inst.orders) total += o.size;
    long long want = (total + inst.capacity - 1) / inst.capacity;
    std::vector<std::vector<OrderId>> brute;
    size_t n = inst.orders.size();
    for (size_t mask = 1; mask < ((size_t)1 << n); ++mask) {
      long long s = 0;
      std::vector<OrderId> sub;
      for (size_t j = 0; j < n; ++j)
        if (mask & ((size_t)1 << j)) {
          s += inst.orders[j].size;
          sub.push_back((OrderId)j);
        }
      if ((s + inst.capacity - 1) / inst.capacity != want) continue;
      bool minimal = true;
      for (OrderId o : sub) {
        long long s2 = s - inst.order(o).size;
        if ((s2 + inst.capacity - 1) / inst.capacity == want) {
          minimal = false;
          break;
        }
      }
      if (minimal) brute.push_back(sub);
    }
    std::sort(brute.begin(), brute.end());
    CHECK(pool == brute);
  }
}

TEST_CASE("rank-1 triple cut and integral validity") {
  Cut c = make_r1c_cut({0, 1, 2}, {Rat(1, 2), Rat(1, 2), Rat(1, 2)});
  CHECK(c.rhs == 1);
  RouteSpec k1 = route_of({0, 1}, 10, 100);
  RouteSpec k2 = route_of({1, 2}, 10, 100);
  CHECK(c.coefficient(k1) == 1);
  CHECK(c.coefficient(k2) == 1);
  std::vector<RouteValue> frac{{&k1, 1.0}, {&k2, 1.0}};
  CHECK(cut_violation(c, frac) == doctest::Approx(1.0));

  // partitions never violate: floors are superadditive
  std::mt19937 rng(41);
  for (int trial = 0; trial < 2000; ++trial) {
    int n = 5 + (int)(rng() % 5);
    std::vector<OrderId> perm((size_t)n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<RouteSpec> routes;
    for (size_t i = 0; i < perm.size();) {
      size_t len = 1 + (size_t)(rng() % 3);
      len = std::min(len, perm.size() - i);
      routes.push_back(route_of({perm.begin() + (long)i,
                                 perm.begin() + (long)(i + len)},
                                10, 100));
      i += len;
    }
    std::vector<RouteValue> sol;
    for (const auto& r : routes) sol.push_back({&r, 1.0});

    int size = 3 + (int)(rng() % 3);
    if (size > n) size = 3;
    std::vector<OrderId> sub(perm.begin(), perm.begin() + size);
    std::sort(sub.begin(), sub.end());
    const auto& cat = r1c_multiplier_catalogue(size);
    const auto& mult = cat[rng() % cat.size()];
    Cut rc = make_r1c_cut(sub, mult);
    CHECK(cut_violation(rc, sol) <= 1e-9);
  }
}

TEST_CASE("rank-1 separation finds the brute-force most violated") {
  GenParams gp;
  gp.seed = 6;
  gp.num_orders = 6;
  gp.capacity = 15;
  Instance inst = generate_instance(gp);

  std::mt19937 rng(55);
  std::vector<RouteSpec> routes;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<OrderId> pick;
    for (OrderId o = 0; o < 6; ++o)
      if (rng() % 2) pick.push_back(o);
    if (pick.size() < 2) continue;
    routes.push_back(route_of(pick, 100, 1000));
  }
  std::vector<RouteValue> sol;
  for (const auto& r : routes) sol.push_back({&r, 0.5});

  auto cuts = separate_r1c(sol, inst, true);
  // scans of larger sizes stop early, but size three is exhaustive here
  double best_brute = 0.0;
  constexpr int kSize = 3;
  std::vector<size_t> idx(kSize);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    std::vector<OrderId> sub;
    for (size_t i : idx) sub.push_back((OrderId)i);
    for (const auto& mult : r1c_multiplier_catalogue(kSize))
      best_brute = std::max(best_brute,
                            cut_violation(make_r1c_cut(sub, mult), sol));
    int i = kSize - 1;
    while (i >= 0 && idx[(size_t)i] == 6 - (size_t)(kSize - i)) --i;
    if (i < 0) break;
    ++idx[(size_t)i];
    for (int j = i + 1; j < kSize; ++j) idx[(size_t)j] = idx[(size_t)j - 1] + 1;
  }
  if (best_brute > 1e-6) {
    REQUIRE(!cuts.empty());
    CHECK(cut_violation(cuts[0], sol) >= best_brute - 1e-9);
  }
  for (const auto& c : cuts) CHECK(cut_violation(c, sol) > 1e-6);
  CHECK(cuts.size() <= 20);
}

TEST_CASE("empty solution has zero lhs") {
  Cut c = make_mt_cut(10, 3, 1);
  CHECK(cut_lhs(c, {}) == doctest::Approx(0.0));
  Cut s = make_scc_cut({0, 1}, bare_instance({5, 5}, 15, 1, {10}));
  CHECK(cut_lhs(s, {}) == doctest::Approx(0.0));
}

TEST_CASE("mt cut with a single middle route prices at its duration") {
  Cut c = make_mt_cut(20, 5, 2);
  RouteSpec mid = route_of({0}, 9, 20);
  std::vector<RouteValue> sol{{&mid, 1.0}};
  CHECK(cut_lhs(c, sol) == doctest::Approx(9.0));
}
