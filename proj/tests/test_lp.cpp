#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pickwave/lp.hpp"

using namespace pickwave;

TEST_CASE("one-variable lower bound with its dual") {
  LinearModel m;
  int x = m.add_var(0.0, kInf, 1.0);
  m.add_row({{x, 1.0}}, 'G', 3.0);
  auto r = solve_lp(m);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.obj == doctest::Approx(3.0));
  CHECK(r.x[0] == doctest::Approx(3.0));
  CHECK(r.duals[0] == doctest::Approx(1.0));
}

TEST_CASE("contradictory rows are infeasible") {
  LinearModel m;
  int x = m.add_var(0.0, kInf, 1.0);
  m.add_row({{x, 1.0}}, 'G', 1.0);
  m.add_row({{x, 1.0}}, 'L', 0.0);
  CHECK(solve_lp(m).status == SolveStatus::Infeasible);
}

TEST_CASE("unbounded objective is detected") {
  LinearModel m;
  int x = m.add_var(-kInf, kInf, 1.0);
  m.add_row({{x, 1.0}}, 'L', 5.0);
  CHECK(solve_lp(m).status == SolveStatus::Unbounded);
}

TEST_CASE("hand lp with active and slack rows") {
  LinearModel m;
  int x = m.add_var(0.0, kInf, 2.0);
  int y = m.add_var(0.0, kInf, 3.0);
  m.add_row({{x, 1.0}, {y, 1.0}}, 'G', 4.0);
  m.add_row({{x, 1.0}}, 'L', 10.0);
  auto r = solve_lp(m);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.obj == doctest::Approx(8.0));
  CHECK(r.x[0] == doctest::Approx(4.0));
  CHECK(r.x[1] == doctest::Approx(0.0));
  CHECK(r.duals[0] == doctest::Approx(2.0));
  CHECK(r.duals[1] == doctest::Approx(0.0));
}

TEST_CASE("dual signs and complementary slackness on random lps") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  std::uniform_real_distribution<double> pos(0.2, 2.0);
  int solved = 0;
  for (int trial = 0; trial < 300; ++trial) {
    int n = 2 + (int)(rng() % 4);
    int mr = 1 + (int)(rng() % 5);
    LinearModel m;
    std::vector<double> z((size_t)n);
    for (int j = 0; j < n; ++j) {
      m.add_var(0.0, 6.0, pos(rng));
      z[(size_t)j] = pos(rng);
    }
    for (int i = 0; i < mr; ++i) {
      std::vector<std::pair<int, double>> row;
      double act = 0.0;
      for (int j = 0; j < n; ++j) {
        double a = coef(rng);
        row.push_back({j, a});
        act += a * z[(size_t)j];
      }
      char sense = (rng() % 2) ? 'G' : 'L';
      double slackd = pos(rng) - 1.0;
      m.add_row(row, sense, sense == 'G' ? act - slackd : act + slackd);
    }
    auto r = solve_lp(m);
    if (r.status != SolveStatus::Optimal) continue;
    ++solved;
    for (int i = 0; i < m.num_rows(); ++i) {
      double a = m.row_activity(i, r.x);
      const auto& row = m.row(i);
      if (row.sense == 'G') {
        CHECK(a >= row.rhs - 1e-6);
        CHECK(r.duals[(size_t)i] >= -1e-7);
        if (a > row.rhs + 1e-6) CHECK(std::fabs(r.duals[(size_t)i]) < 1e-6);
      } else {
        CHECK(a <= row.rhs + 1e-6);
        CHECK(r.duals[(size_t)i] <= 1e-7);
        if (a < row.rhs - 1e-6) CHECK(std::fabs(r.duals[(size_t)i]) < 1e-6);
      }
    }
  }
  CHECK(solved > 100);
}

TEST_CASE("binary knapsack") {
  LinearModel m;
  int a = m.add_var(0.0, 1.0, -2.0, true);
  int b = m.add_var(0.0, 1.0, -3.0, true);
  m.add_row({{a, 1.0}, {b, 1.0}}, 'L', 1.0);
  auto r = solve_mip(m);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.obj == doctest::Approx(-3.0));
  CHECK(r.bound == doctest::Approx(-3.0));
  CHECK(r.x[(size_t)a] == doctest::Approx(0.0));
  CHECK(r.x[(size_t)b] == doctest::Approx(1.0));
}

TEST_CASE("integer knapsack against dynamic programming") {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 5 + (int)(rng() % 5);
    int cap = 8 + (int)(rng() % 10);
    std::vector<int> w((size_t)n), v((size_t)n);
    for (int j = 0; j < n; ++j) {
      w[(size_t)j] = 1 + (int)(rng() % 6);
      v[(size_t)j] = 1 + (int)(rng() % 9);
    }
    std::vector<long long> dp((size_t)cap + 1, 0);
    for (int j = 0; j < n; ++j)
      for (int c = cap; c >= w[(size_t)j]; --c)
        dp[(size_t)c] = std::max(dp[(size_t)c],
                                 dp[(size_t)(c - w[(size_t)j])] + v[(size_t)j]);

    LinearModel m;
    std::vector<std::pair<int, double>> row;
    for (int j = 0; j < n; ++j) {
      int var = m.add_var(0.0, 1.0, -(double)v[(size_t)j], true);
      row.push_back({var, (double)w[(size_t)j]});
    }
    m.add_row(row, 'L', (double)cap);
    auto r = solve_mip(m);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.obj == doctest::Approx(-(double)dp[(size_t)cap]));
  }
}

TEST_CASE("mip bound stays valid when the clock runs out") {
  std::mt19937 rng(5);
  LinearModel m;
  std::vector<std::pair<int, double>> row;
  for (int j = 0; j < 40; ++j) {
    int var = m.add_var(0.0, 1.0, -(double)(1 + rng() % 50), true);
    row.push_back({var, (double)(1 + rng() % 40)});
  }
  m.add_row(row, 'L', 200.0);
  MipOptions opts;
  opts.time_limit_s = 0.01;
  auto r = solve_mip(m, opts);
  if (r.status == SolveStatus::TimeLimit) {
    CHECK(r.bound <= r.obj + 1e-9);
  } else {
    CHECK(r.status == SolveStatus::Optimal);
  }
  auto full = solve_mip(m);
  REQUIRE(full.status == SolveStatus::Optimal);
  CHECK(r.bound <= full.obj + 1e-6);
  if (r.has_incumbent) CHECK(r.obj >= full.obj - 1e-6);
}

TEST_CASE("warm start seeds the incumbent") {
  LinearModel m;
  int a = m.add_var(0.0, 1.0, -2.0, true);
  int b = m.add_var(0.0, 1.0, -3.0, true);
  m.add_row({{a, 1.0}, {b, 1.0}}, 'L', 1.0);
  MipOptions opts;
  opts.has_warm = true;
  opts.warm_x = {1.0, 0.0};
  opts.node_limit = 0;
  auto r = solve_mip(m, opts);
  CHECK(r.has_incumbent);
  CHECK(r.obj == doctest::Approx(-2.0));
}

TEST_CASE("improving incumbents are reported through the callback") {
  LinearModel m;
  int a = m.add_var(0.0, 1.0, -2.0, true);
  int b = m.add_var(0.0, 1.0, -3.0, true);
  m.add_row({{a, 1.0}, {b, 1.0}}, 'L', 1.0);
  MipOptions opts;
  std::vector<double> seen;
  opts.incumbent_callback = [&](const std::vector<double>&, double obj) {
    seen.push_back(obj);
  };
  auto r = solve_mip(m, opts);
  REQUIRE(r.status == SolveStatus::Optimal);
  REQUIRE(!seen.empty());
  CHECK(seen.back() == doctest::Approx(-3.0));
  for (size_t i = 1; i < seen.size(); ++i) CHECK(seen[i] < seen[i - 1]);
}

TEST_CASE("lazy rows cut off integral points") {
  LinearModel m;
  int x = m.add_var(0.0, 5.0, -1.0, true);
  long long calls = 0;
  MipOptions opts;
  opts.lazy_rows = [&](const std::vector<double>& p) -> std::vector<LazyRow> {
    ++calls;
    if (p[0] > 3.0 + 1e-6) return {LazyRow{{{x, 1.0}}, 'L', 3.0}};
    return {};
  };
  auto r = solve_mip(m, opts);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.obj == doctest::Approx(-3.0));
  CHECK(calls >= 2);
  CHECK(r.lazy_calls >= 2);
}

TEST_CASE("external cutoff caps the bound and prunes") {
  LinearModel m;
  int a = m.add_var(0.0, 1.0, -2.0, true);
  int b = m.add_var(0.0, 1.0, -3.0, true);
  m.add_row({{a, 1.0}, {b, 1.0}}, 'L', 1.0);

  MipOptions opts;
  opts.cutoff = -3.0;  // an external solution that matches the optimum
  auto r = solve_mip(m, opts);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.bound == doctest::Approx(-3.0));

  MipOptions deep;
  deep.cutoff = -10.0;  // an external solution strictly better than this model
  auto r2 = solve_mip(m, deep);
  REQUIRE(r2.status == SolveStatus::Optimal);
  CHECK(r2.bound <= -10.0 + 1e-9);

  double live = -3.0;
  MipOptions lv;
  lv.live_cutoff = &live;
  auto r3 = solve_mip(m, lv);
  REQUIRE(r3.status == SolveStatus::Optimal);
  CHECK(r3.bound == doctest::Approx(-3.0));
}

TEST_CASE("row-heavy lps agree with the primal reference") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_real_distribution<double> pos(0.1, 1.5);
  int agree = 0, infeas = 0;
  for (int trial = 0; trial < 600; ++trial) {
    int n = 2 + (int)(rng() % 4);
    int mr = 2 * n + 1 + (int)(rng() % 8);  // rows > 2*vars
    LinearModel m;
    std::vector<double> z((size_t)n);
    for (int j = 0; j < n; ++j) {
      double lb = (rng() % 3 == 0) ? -2.0 : 0.0;
      m.add_var(lb, 4.0, coef(rng) + 2.5, false);
      z[(size_t)j] = lb + pos(rng);
    }
    bool force_infeasible = trial % 3 == 0;
    for (int i = 0; i < mr; ++i) {
      std::vector<std::pair<int, double>> row;
      double act = 0.0;
      for (int j = 0; j < n; ++j) {
        double a = coef(rng);
        row.push_back({j, a});
        act += a * z[(size_t)j];
      }
      char sense = (rng() % 2) ? 'G' : 'L';
      if (force_infeasible) {
        m.add_row(row, sense, coef(rng) * 4.0);
      } else {
        double s = pos(rng);
        m.add_row(row, sense, sense == 'G' ? act - s : act + s);
      }
    }
    auto ref = solve_lp(m);
    auto via = solve_mip(m);  // all-continuous model takes the mip driver path
    if (ref.status == SolveStatus::Infeasible) {
      CHECK(via.status == SolveStatus::Infeasible);
      ++infeas;
      continue;
    }
    if (ref.status != SolveStatus::Optimal) continue;
    REQUIRE(via.status == SolveStatus::Optimal);
    CHECK(std::fabs(via.obj - ref.obj) <=
          1e-5 * std::max(1.0, std::fabs(ref.obj)));
    for (int i = 0; i < m.num_rows(); ++i) {
      double a = m.row_activity(i, via.x);
      const auto& row = m.row(i);
      if (row.sense == 'G') CHECK(a >= row.rhs - 1e-5);
      if (row.sense == 'L') CHECK(a <= row.rhs + 1e-5);
    }
    ++agree;
  }
  CHECK(agree > 200);
  CHECK(infeas > 100);
}

TEST_CASE("equality rows and free variables") {
  LinearModel m;
  int x = m.add_var(-kInf, kInf, 1.0);
  int y = m.add_var(0.0, kInf, 1.0);
  m.add_row({{x, 1.0}, {y, 1.0}}, 'E', 5.0);
  m.add_row({{x, 1.0}, {y, -1.0}}, 'G', -1.0);
  auto r = solve_lp(m);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.obj == doctest::Approx(5.0));
  CHECK(r.x[(size_t)x] + r.x[(size_t)y] == doctest::Approx(5.0));
}
