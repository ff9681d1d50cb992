#pragma once

#include <chrono>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace pickwave {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class SolveStatus { Optimal, Infeasible, Unbounded, TimeLimit, IterLimit };

// minimization model: rows are <= ('L'), >= ('G') or == ('E')
class LinearModel {
 public:
  struct Column {
    double lb = 0.0;
    double ub = kInf;
    double obj = 0.0;
    bool integer = false;
    std::vector<std::pair<int, double>> entries;  // (row, coef)
  };
  struct Row {
    char sense = 'L';
    double rhs = 0.0;
  };

  int add_var(double lb, double ub, double obj, bool integer = false);
  int add_row(char sense, double rhs);
  void set_coef(int row, int var, double coef);
  void add_row(const std::vector<std::pair<int, double>>& coeffs, char sense,
               double rhs);

  int num_vars() const { return (int)cols_.size(); }
  int num_rows() const { return (int)rows_.size(); }
  const Column& col(int j) const { return cols_[(size_t)j]; }
  Column& col(int j) { return cols_[(size_t)j]; }
  const Row& row(int i) const { return rows_[(size_t)i]; }

  double row_activity(int i, const std::vector<double>& x) const;

 private:
  std::vector<Column> cols_;
  std::vector<Row> rows_;
};

struct LpResult {
  SolveStatus status = SolveStatus::Infeasible;
  double obj = 0.0;
  std::vector<double> x;
  std::vector<double> duals;  // one per row, sign-consistent for minimization
};

struct LpOptions {
  double tol = 1e-9;
  long long max_iters = 500000;
};

LpResult solve_lp(const LinearModel& model, const LpOptions& opts = {});

struct MipResult {
  SolveStatus status = SolveStatus::Infeasible;
  bool has_incumbent = false;
  double obj = 0.0;    // incumbent objective
  double bound = -kInf;  // valid lower bound on the optimum
  std::vector<double> x;
  long long nodes = 0;
  long long lazy_calls = 0;
  long long lp_iter_limit_hits = 0;
  double lp_time_s = 0.0;
  double lazy_time_s = 0.0;
};

struct LazyRow {
  std::vector<std::pair<int, double>> coeffs;
  char sense = 'L';
  double rhs = 0.0;
};

struct MipOptions {
  double int_tol = 1e-6;
  double gap_tol = 0.0;  // relative; stop once the gap closes below it
  double time_limit_s = kInf;
  long long node_limit = 50000000;
  bool has_warm = false;
  std::vector<double> warm_x;
  // externally achieved objective value: subtrees that cannot beat it are
  // pruned and it caps the reported bound; requires the caller to guarantee
  // a feasible point with this value exists
  double cutoff = kInf;
  // optional live refinement of cutoff, polled at every node
  const double* live_cutoff = nullptr;
  // called on every strictly improving incumbent
  std::function<void(const std::vector<double>&, double)> incumbent_callback;
  // called on integral points; returned rows are added to the model and the
  // point is rejected (accepted only when the result is empty)
  std::function<std::vector<LazyRow>(const std::vector<double>&)> lazy_rows;
};

MipResult solve_mip(const LinearModel& model, const MipOptions& opts = {});

double now_seconds();

}  // namespace pickwave
