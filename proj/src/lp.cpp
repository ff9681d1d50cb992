#include "pickwave/lp.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace pickwave {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

int LinearModel::add_var(double lb, double ub, double obj, bool integer) {
  Column c;
  c.lb = lb;
  c.ub = ub;
  c.obj = obj;
  c.integer = integer;
  cols_.push_back(std::move(c));
  return (int)cols_.size() - 1;
}

int LinearModel::add_row(char sense, double rhs) {
  rows_.push_back({sense, rhs});
  return (int)rows_.size() - 1;
}

void LinearModel::set_coef(int row, int var, double coef) {
  if (coef == 0.0) return;
  cols_[(size_t)var].entries.push_back({row, coef});
}

void LinearModel::add_row(const std::vector<std::pair<int, double>>& coeffs,
                          char sense, double rhs) {
  int r = add_row(sense, rhs);
  for (auto [v, c] : coeffs) set_coef(r, v, c);
}

double LinearModel::row_activity(int i, const std::vector<double>& x) const {
  double a = 0.0;
  for (int j = 0; j < num_vars(); ++j)
    for (auto [r, c] : cols_[(size_t)j].entries)
      if (r == i) a += c * x[(size_t)j];
  return a;
}

namespace {

enum VState : unsigned char { kBasic, kAtLower, kAtUpper, kFreeZero };

class Simplex {
 public:
  Simplex(const LinearModel& model, const std::vector<double>& lb,
          const std::vector<double>& ub, const LpOptions& opts)
      : m_((size_t)model.num_rows()), opts_(opts) {
    size_t n = (size_t)model.num_vars();
    nstruct_ = n;
    lb_ = lb;
    ub_ = ub;
    cost_.resize(n);
    colent_.resize(n);
    for (size_t j = 0; j < n; ++j) {
      cost_[j] = model.col((int)j).obj;
      colent_[j] = model.col((int)j).entries;
    }
    b_.resize(m_);
    for (size_t i = 0; i < m_; ++i) {
      const auto& row = model.row((int)i);
      b_[i] = row.rhs;
      double sl = 0, su = 0;
      if (row.sense == 'L') su = kInf;
      else if (row.sense == 'G') sl = -kInf;
      add_internal_var(sl, su, 0.0, {{(int)i, 1.0}});
    }
  }

  LpResult run() {
    LpResult res;
    for (size_t j = 0; j < lb_.size(); ++j)
      if (lb_[j] > ub_[j] + 1e-12) return res;  // Infeasible

    state_.assign(lb_.size(), kAtLower);
    for (size_t j = 0; j < lb_.size(); ++j) {
      if (std::isfinite(lb_[j])) state_[j] = kAtLower;
      else if (std::isfinite(ub_[j])) state_[j] = kAtUpper;
      else state_[j] = kFreeZero;
    }
    basic_.resize(m_);
    for (size_t i = 0; i < m_; ++i) {
      basic_[i] = (int)(nstruct_ + i);
      state_[nstruct_ + i] = kBasic;
    }
    refactor();

    // phase 1: clamp infeasible slacks to a bound, cover with artificials
    size_t first_art = lb_.size();
    bool need_phase1 = false;
    for (size_t i = 0; i < m_; ++i) {
      size_t s = nstruct_ + i;
      double v = xb_[i];
      if (v >= lb_[s] - 1e-9 && v <= ub_[s] + 1e-9) continue;
      double clamp = v < lb_[s] ? lb_[s] : ub_[s];
      double g = v - clamp;
      state_[s] = clamp == lb_[s] ? kAtLower : kAtUpper;
      size_t a = add_internal_var(0.0, kInf, 0.0,
                                  {{(int)i, g > 0 ? 1.0 : -1.0}});
      state_.push_back(kBasic);
      basic_[i] = (int)a;
      need_phase1 = true;
    }
    if (need_phase1) {
      std::vector<double> real_cost = cost_;
      for (size_t j = 0; j < cost_.size(); ++j)
        cost_[j] = j >= first_art ? 1.0 : 0.0;
      refactor();
      SolveStatus st = iterate(false);
      if (st == SolveStatus::IterLimit) {
        res.status = st;
        return res;
      }
      double infeas = 0;
      for (size_t j = first_art; j < cost_.size(); ++j) infeas += value_of(j);
      if (infeas > 1e-7) {
        res.status = SolveStatus::Infeasible;
        return res;
      }
      cost_ = real_cost;
      cost_.resize(state_.size(), 0.0);
      for (size_t j = first_art; j < state_.size(); ++j) {
        lb_[j] = 0.0;
        ub_[j] = 0.0;
        if (state_[j] != kBasic) state_[j] = kAtLower;
      }
      refactor();
    }

    SolveStatus st = iterate(true);
    if (st != SolveStatus::Optimal) {
      res.status = st;
      return res;
    }
    res.status = SolveStatus::Optimal;
    res.x.resize(nstruct_);
    for (size_t j = 0; j < nstruct_; ++j) res.x[j] = value_of(j);
    res.obj = 0;
    for (size_t j = 0; j < nstruct_; ++j) res.obj += cost_[j] * res.x[j];
    res.duals = dual_vector();
    return res;
  }

 private:
  size_t m_;
  size_t nstruct_;
  LpOptions opts_;
  std::vector<double> lb_, ub_, cost_, b_;
  std::vector<std::vector<std::pair<int, double>>> colent_;
  std::vector<VState> state_;
  std::vector<int> basic_;
  std::vector<std::vector<double>> binv_;
  std::vector<double> xb_;
  long long pivots_since_refactor_ = 0;
  long long degen_streak_ = 0;

  size_t add_internal_var(double lo, double hi, double c,
                          std::vector<std::pair<int, double>> ent) {
    lb_.push_back(lo);
    ub_.push_back(hi);
    cost_.push_back(c);
    colent_.push_back(std::move(ent));
    return lb_.size() - 1;
  }

  double nonbasic_value(size_t j) const {
    switch (state_[j]) {
      case kAtLower: return lb_[j];
      case kAtUpper: return ub_[j];
      default: return 0.0;
    }
  }

  double value_of(size_t j) const {
    if (state_[j] == kBasic) {
      for (size_t i = 0; i < m_; ++i)
        if (basic_[i] == (int)j) return xb_[i];
      return 0.0;
    }
    return nonbasic_value(j);
  }

  void refactor() {
    // dense inverse of the basis via gaussian elimination
    std::vector<std::vector<double>> a(m_, std::vector<double>(m_, 0.0));
    for (size_t i = 0; i < m_; ++i)
      for (auto [r, c] : colent_[(size_t)basic_[i]]) a[(size_t)r][i] += c;
    binv_.assign(m_, std::vector<double>(m_, 0.0));
    for (size_t i = 0; i < m_; ++i) binv_[i][i] = 1.0;
    for (size_t col = 0; col < m_; ++col) {
      size_t piv = col;
      for (size_t r = col + 1; r < m_; ++r)
        if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
      std::swap(a[piv], a[col]);
      std::swap(binv_[piv], binv_[col]);
      double p = a[col][col];
      if (std::fabs(p) < 1e-13) p = p < 0 ? -1e-13 : 1e-13;
      for (size_t k = 0; k < m_; ++k) {
        a[col][k] /= p;
        binv_[col][k] /= p;
      }
      for (size_t r = 0; r < m_; ++r) {
        if (r == col) continue;
        double f = a[r][col];
        if (f == 0.0) continue;
        for (size_t k = 0; k < m_; ++k) {
          a[r][k] -= f * a[col][k];
          binv_[r][k] -= f * binv_[col][k];
        }
      }
    }
    recompute_basics();
    pivots_since_refactor_ = 0;
  }

  void recompute_basics() {
    std::vector<double> rhs = b_;
    for (size_t j = 0; j < state_.size(); ++j) {
      if (state_[j] == kBasic) continue;
      double v = nonbasic_value(j);
      if (v == 0.0) continue;
      for (auto [r, c] : colent_[j]) rhs[(size_t)r] -= c * v;
    }
    xb_.assign(m_, 0.0);
    for (size_t i = 0; i < m_; ++i)
      for (size_t k = 0; k < m_; ++k) xb_[i] += binv_[i][k] * rhs[k];
  }

  std::vector<double> dual_vector() const {
    std::vector<double> y(m_, 0.0);
    for (size_t i = 0; i < m_; ++i) {
      double cb = cost_[(size_t)basic_[i]];
      if (cb == 0.0) continue;
      for (size_t k = 0; k < m_; ++k) y[k] += cb * binv_[i][k];
    }
    std::vector<double> out(y.begin(), y.begin() + (long)m_);
    return out;
  }

  double reduced_cost(size_t j, const std::vector<double>& y) const {
    double d = cost_[j];
    for (auto [r, c] : colent_[j]) d -= y[(size_t)r] * c;
    return d;
  }

  SolveStatus iterate(bool phase2) {
    const double tol = opts_.tol * 1000;  // pricing tolerance
    for (long long it = 0; it < opts_.max_iters; ++it) {
      std::vector<double> y = dual_vector();
      bool bland = degen_streak_ > 2000;
      size_t enter = state_.size();
      int dir = 0;
      double best = tol;
      for (size_t j = 0; j < state_.size(); ++j) {
        if (state_[j] == kBasic) continue;
        if (ub_[j] - lb_[j] < 1e-15) continue;
        double d = reduced_cost(j, y);
        double score = 0;
        int dd = 0;
        if (state_[j] == kAtLower && d < -tol) { score = -d; dd = 1; }
        else if (state_[j] == kAtUpper && d > tol) { score = d; dd = -1; }
        else if (state_[j] == kFreeZero && std::fabs(d) > tol) {
          score = std::fabs(d);
          dd = d < 0 ? 1 : -1;
        }
        if (dd == 0) continue;
        if (bland) { enter = j; dir = dd; break; }
        if (score > best) { best = score; enter = j; dir = dd; }
      }
      if (enter == state_.size()) return SolveStatus::Optimal;

      std::vector<double> w(m_, 0.0);
      for (auto [r, c] : colent_[enter])
        for (size_t i = 0; i < m_; ++i) w[i] += binv_[i][(size_t)r] * c;

      double best_delta = kInf;
      size_t leave_row = m_;
      double leave_w = 0;
      for (size_t i = 0; i < m_; ++i) {
        if (std::fabs(w[i]) < 1e-9) continue;
        double rate = dir * w[i];
        size_t bv = (size_t)basic_[i];
        double delta;
        if (rate > 0) {
          if (!std::isfinite(lb_[bv])) continue;
          delta = (xb_[i] - lb_[bv]) / rate;
        } else {
          if (!std::isfinite(ub_[bv])) continue;
          delta = (xb_[i] - ub_[bv]) / rate;
        }
        if (delta < -1e-9) delta = 0;
        if (delta < best_delta - 1e-12 ||
            (delta < best_delta + 1e-12 &&
             (leave_row == m_ || std::fabs(w[i]) > std::fabs(leave_w) + 1e-12)))
        {
          best_delta = std::max(0.0, delta);
          leave_row = i;
          leave_w = w[i];
        }
      }
      double flip = std::isfinite(lb_[enter]) && std::isfinite(ub_[enter])
                        ? ub_[enter] - lb_[enter]
                        : kInf;
      if (flip < best_delta - 1e-12) {
        for (size_t i = 0; i < m_; ++i) xb_[i] -= dir * flip * w[i];
        state_[enter] = state_[enter] == kAtLower ? kAtUpper : kAtLower;
        degen_streak_ = flip < 1e-12 ? degen_streak_ + 1 : 0;
        continue;
      }
      if (leave_row == m_) {
        return phase2 ? SolveStatus::Unbounded : SolveStatus::IterLimit;
      }

      double delta = best_delta;
      size_t leave = (size_t)basic_[leave_row];
      double enter_val = nonbasic_value(enter) + dir * delta;
      for (size_t i = 0; i < m_; ++i) xb_[i] -= dir * delta * w[i];
      state_[leave] = dir * leave_w > 0 ? kAtLower : kAtUpper;
      if (!std::isfinite(nonbasic_value(leave))) state_[leave] = kFreeZero;
      basic_[leave_row] = (int)enter;
      state_[enter] = kBasic;
      xb_[leave_row] = enter_val;

      double piv = w[leave_row];
      for (size_t k = 0; k < m_; ++k) binv_[leave_row][k] /= piv;
      for (size_t i = 0; i < m_; ++i) {
        if (i == leave_row) continue;
        double f = w[i];
        if (f == 0.0) continue;
        for (size_t k = 0; k < m_; ++k)
          binv_[i][k] -= f * binv_[leave_row][k];
      }
      degen_streak_ = delta < 1e-12 ? degen_streak_ + 1 : 0;
      if (++pivots_since_refactor_ >= 100) refactor();
    }
    return SolveStatus::IterLimit;
  }
};

}  // namespace

LpResult solve_lp(const LinearModel& model, const LpOptions& opts) {
  std::vector<double> lb((size_t)model.num_vars()),
      ub((size_t)model.num_vars());
  for (int j = 0; j < model.num_vars(); ++j) {
    lb[(size_t)j] = model.col(j).lb;
    ub[(size_t)j] = model.col(j).ub;
  }
  Simplex s(model, lb, ub, opts);
  return s.run();
}

namespace {

LpResult solve_lp_bounds(const LinearModel& model,
                         const std::vector<double>& lb,
                         const std::vector<double>& ub) {
  LpOptions o;
  Simplex s(model, lb, ub, o);
  return s.run();
}

// solves min c'x via the LP dual; the dual basis has one row per structural
// variable, which stays small when the model carries many rows
LpResult solve_lp_via_dual(const LinearModel& model,
                           const std::vector<double>& lb,
                           const std::vector<double>& ub) {
  const int n = model.num_vars();
  const int m = model.num_rows();
  LinearModel dual;
  std::vector<int> yv((size_t)m);
  for (int i = 0; i < m; ++i) {
    const auto& r = model.row(i);
    double lo = -kInf, hi = kInf;
    if (r.sense == 'G') lo = 0.0;
    if (r.sense == 'L') hi = 0.0;
    yv[(size_t)i] = dual.add_var(lo, hi, -r.rhs, false);
  }
  for (int j = 0; j < n; ++j) {
    std::vector<std::pair<int, double>> row;
    for (auto [r, c] : model.col(j).entries) row.push_back({yv[(size_t)r], c});
    if (lb[(size_t)j] > -kInf / 2) {
      int lam = dual.add_var(0.0, kInf, -lb[(size_t)j], false);
      row.push_back({lam, 1.0});
    }
    if (ub[(size_t)j] < kInf / 2) {
      int mu = dual.add_var(0.0, kInf, ub[(size_t)j], false);
      row.push_back({mu, -1.0});
    }
    dual.add_row(row, 'E', model.col(j).obj);
  }
  LpResult dres = solve_lp(dual);
  LpResult res;
  if (dres.status == SolveStatus::Unbounded) {
    res.status = SolveStatus::Infeasible;
    return res;
  }
  if (dres.status != SolveStatus::Optimal) {
    res.status = SolveStatus::IterLimit;
    return res;
  }
  res.status = SolveStatus::Optimal;
  res.obj = -dres.obj;
  res.x.resize((size_t)n);
  for (int j = 0; j < n; ++j) {
    double v = -dres.duals[(size_t)j];
    v = std::min(std::max(v, lb[(size_t)j]), ub[(size_t)j]);
    res.x[(size_t)j] = v;
  }
  return res;
}

struct BbNode {
  long long parent = -1;
  int var = -1;
  double new_lb = 0, new_ub = 0;
  double bound = -kInf;
};

}  // namespace

MipResult solve_mip(const LinearModel& base_model, const MipOptions& opts) {
  LinearModel work = base_model;
  const LinearModel& model = work;
  MipResult res;
  double t0 = now_seconds();
  size_t n = (size_t)model.num_vars();
  std::vector<double> base_lb(n), base_ub(n);
  for (size_t j = 0; j < n; ++j) {
    base_lb[j] = model.col((int)j).lb;
    base_ub[j] = model.col((int)j).ub;
  }

  bool integral_obj = true;
  for (size_t j = 0; j < n; ++j) {
    double c = model.col((int)j).obj;
    if (c == 0.0) continue;
    if (!model.col((int)j).integer ||
        std::fabs(c - std::llround(c)) > 1e-9) {
      integral_obj = false;
      break;
    }
  }

  double inc_obj = kInf;
  std::vector<double> inc_x;
  bool has_inc = false;

  auto try_incumbent = [&](const std::vector<double>& x, double obj) {
    if (obj >= inc_obj - 1e-9) return;
    inc_obj = obj;
    inc_x = x;
    has_inc = true;
    if (opts.incumbent_callback) opts.incumbent_callback(x, obj);
  };

  if (opts.has_warm && opts.warm_x.size() == n) {
    bool ok = true;
    for (size_t j = 0; j < n && ok; ++j) {
      double v = opts.warm_x[j];
      if (v < base_lb[j] - 1e-6 || v > base_ub[j] + 1e-6) ok = false;
      if (model.col((int)j).integer &&
          std::fabs(v - std::llround(v)) > 1e-6)
        ok = false;
    }
    for (int i = 0; i < model.num_rows() && ok; ++i) {
      double a = model.row_activity(i, opts.warm_x);
      const auto& row = model.row(i);
      if (row.sense == 'L' && a > row.rhs + 1e-6) ok = false;
      if (row.sense == 'G' && a < row.rhs - 1e-6) ok = false;
      if (row.sense == 'E' && std::fabs(a - row.rhs) > 1e-6) ok = false;
    }
    if (ok && opts.lazy_rows) {
      auto extra = opts.lazy_rows(opts.warm_x);
      for (const auto& lr : extra) work.add_row(lr.coeffs, lr.sense, lr.rhs);
      if (!extra.empty()) ok = false;
    }
    if (ok) {
      double obj = 0;
      for (size_t j = 0; j < n; ++j)
        obj += model.col((int)j).obj * opts.warm_x[j];
      try_incumbent(opts.warm_x, obj);
    }
  }

  std::vector<BbNode> nodes;
  nodes.push_back({});
  std::set<std::pair<double, long long>> open;
  open.insert({-kInf, 0});
  bool stopped = false;

  auto ext_cutoff = [&]() {
    double c = opts.cutoff;
    if (opts.live_cutoff) c = std::min(c, *opts.live_cutoff);
    return c;
  };

  auto prunable = [&](double bound) {
    double lim = std::min(has_inc ? inc_obj : kInf, ext_cutoff());
    if (lim >= kInf / 2) return false;
    if (integral_obj && std::ceil(bound - 1e-6) >= lim - 1e-9) return true;
    if (bound >= lim - 1e-9) return true;
    if (opts.gap_tol > 0 &&
        lim - bound <= opts.gap_tol * std::max(1.0, std::fabs(lim)))
      return true;
    return false;
  };

  while (!open.empty()) {
    if (now_seconds() - t0 > opts.time_limit_s ||
        res.nodes >= opts.node_limit) {
      stopped = true;
      break;
    }
    auto it = open.begin();
    long long id = it->second;
    open.erase(it);
    ++res.nodes;
    if (prunable(nodes[(size_t)id].bound)) continue;

    std::vector<double> lb = base_lb, ub = base_ub;
    for (long long cur = id; cur > 0; cur = nodes[(size_t)cur].parent) {
      const BbNode& nd = nodes[(size_t)cur];
      lb[(size_t)nd.var] = std::max(lb[(size_t)nd.var], nd.new_lb);
      ub[(size_t)nd.var] = std::min(ub[(size_t)nd.var], nd.new_ub);
    }
    bool empty = false;
    for (size_t j = 0; j < n; ++j)
      if (lb[j] > ub[j] + 1e-12) empty = true;
    if (empty) continue;

    double lt0 = now_seconds();
    LpResult lp = model.num_rows() > 2 * model.num_vars()
                      ? solve_lp_via_dual(model, lb, ub)
                      : solve_lp_bounds(model, lb, ub);
    res.lp_time_s += now_seconds() - lt0;
    if (lp.status == SolveStatus::Infeasible) continue;
    if (lp.status != SolveStatus::Optimal) {
      if (lp.status == SolveStatus::Unbounded) {
        res.status = SolveStatus::Unbounded;
        return res;
      }
      // node LP unresolved: restore the node so its bound stays accounted for
      ++res.lp_iter_limit_hits;
      open.insert({nodes[(size_t)id].bound, id});
      stopped = true;
      break;
    }
    double bound = std::max(nodes[(size_t)id].bound, lp.obj);
    if (prunable(bound)) continue;

    int frac_var = -1;
    double frac_score = 0.0;
    for (size_t j = 0; j < n; ++j) {
      if (!model.col((int)j).integer) continue;
      double v = lp.x[j];
      double f = v - std::floor(v);
      double dist = std::min(f, 1.0 - f);
      if (dist <= opts.int_tol) continue;
      double score = dist * (1.0 + std::fabs(model.col((int)j).obj));
      if (frac_var < 0 || score > frac_score) {
        frac_score = score;
        frac_var = (int)j;
      }
    }
    if (frac_var < 0) {
      if (opts.lazy_rows) {
        ++res.lazy_calls;
        double zt0 = now_seconds();
        auto extra = opts.lazy_rows(lp.x);
        res.lazy_time_s += now_seconds() - zt0;
        if (!extra.empty()) {
          for (const auto& lr : extra) work.add_row(lr.coeffs, lr.sense, lr.rhs);
          nodes[(size_t)id].bound = bound;
          open.insert({bound, id});
          continue;
        }
      }
      try_incumbent(lp.x, lp.obj);
      continue;
    }
    double v = lp.x[(size_t)frac_var];
    BbNode down;
    down.parent = id;
    down.var = frac_var;
    down.new_lb = -kInf;
    down.new_ub = std::floor(v);
    down.bound = bound;
    BbNode up;
    up.parent = id;
    up.var = frac_var;
    up.new_lb = std::ceil(v);
    up.new_ub = kInf;
    up.bound = bound;
    nodes.push_back(down);
    open.insert({bound, (long long)nodes.size() - 1});
    nodes.push_back(up);
    open.insert({bound, (long long)nodes.size() - 1});
  }

  double ext = ext_cutoff();
  double best_open = kInf;
  for (const auto& [bnd, id] : open)
    best_open = std::min(best_open, nodes[(size_t)id].bound);
  if (open.empty()) {
    res.bound = std::min(has_inc ? inc_obj : kInf, ext);
    res.status = (has_inc || ext < kInf / 2) ? SolveStatus::Optimal
                                             : SolveStatus::Infeasible;
  } else {
    res.bound = std::min({best_open, has_inc ? inc_obj : kInf, ext});
    res.status = SolveStatus::TimeLimit;
    (void)stopped;
  }
  res.has_incumbent = has_inc;
  if (has_inc) {
    res.obj = inc_obj;
    res.x = inc_x;
  }
  return res;
}

}  // namespace pickwave
