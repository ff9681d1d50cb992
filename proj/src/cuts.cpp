#include "pickwave/cuts.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace pickwave {

Rat dff_f0(const Rat& lambda, const Rat& x) {
  if (lambda < Rat(0) || Rat(1, 2) < lambda)
    throw DomainError("lambda must lie in [0, 1/2]");
  if (x < Rat(0) || Rat(1) < x) throw DomainError("x must lie in [0, 1]");
  if (Rat(1) - lambda < x) return Rat(1);
  if (x < lambda) return Rat(0);
  return x;
}

Rat dff_g(long long lambda, const Rat& x) {
  if (lambda < 1) throw DomainError("lambda must be a positive integer");
  if (x < Rat(0) || Rat(1) < x) throw DomainError("x must lie in [0, 1]");
  if (x == Rat(0)) return Rat(0);
  Rat scaled = x * Rat(lambda + 1);
  if (scaled.is_integer()) return (scaled - Rat(1)) / Rat(lambda);
  return Rat(scaled.floor()) / Rat(lambda);
}

Rat dff_f_fs1(long long lambda, const Rat& x) {
  if (lambda < 1) throw DomainError("lambda must be a positive integer");
  if (x < Rat(0) || Rat(1) < x) throw DomainError("x must lie in [0, 1]");
  Rat scaled = x * Rat(lambda + 1);
  if (scaled.is_integer()) return x;
  return Rat(scaled.floor()) / Rat(lambda);
}

long long Cut::coefficient(const RouteSpec& r) const {
  switch (kind) {
    case CutKind::MT: {
      if (r.deadline > dbar) return 0;
      long long t = r.duration;
      if (t > dbar - q) return dbar;
      if (t >= q) return t;
      return 0;
    }
    case CutKind::FS: {
      if (r.deadline > dbar) return 0;
      long long t = r.duration;
      if (t <= 0) return 0;
      return (t * q - 1) / dbar;
    }
    case CutKind::SCC: {
      for (OrderId o : r.orders)
        if (std::binary_search(subset.begin(), subset.end(), o)) return 1;
      return 0;
    }
    case CutKind::R1C: {
      Rat s(0);
      for (size_t i = 0; i < subset.size(); ++i)
        if (std::binary_search(r.orders.begin(), r.orders.end(), subset[i]))
          s = s + mult[i];
      return s.floor();
    }
  }
  return 0;
}

Cut make_mt_cut(int dbar, long long q, int num_pickers) {
  Cut c;
  c.kind = CutKind::MT;
  c.dbar = dbar;
  c.q = q;
  c.sense = 'L';
  c.rhs = (long long)dbar * num_pickers;
  c.id = "mt:" + std::to_string(dbar) + ":" + std::to_string(q);
  return c;
}

Cut make_fs_cut(int dbar, long long q, int num_pickers) {
  Cut c;
  c.kind = CutKind::FS;
  c.dbar = dbar;
  c.q = q;
  c.sense = 'L';
  c.rhs = (q - 1) * num_pickers;
  c.id = "fs:" + std::to_string(dbar) + ":" + std::to_string(q);
  return c;
}

Cut make_scc_cut(std::vector<OrderId> subset, const Instance& inst) {
  std::sort(subset.begin(), subset.end());
  Cut c;
  c.kind = CutKind::SCC;
  c.subset = std::move(subset);
  c.sense = 'G';
  long long tot = 0;
  for (OrderId o : c.subset) tot += inst.order(o).size;
  c.rhs = (tot + inst.capacity - 1) / inst.capacity;
  std::ostringstream os;
  os << "scc:";
  for (OrderId o : c.subset) os << o << ",";
  c.id = os.str();
  return c;
}

Cut make_r1c_cut(std::vector<OrderId> subset, std::vector<Rat> mult) {
  Cut c;
  c.kind = CutKind::R1C;
  c.subset = std::move(subset);
  c.mult = std::move(mult);
  c.sense = 'L';
  Rat s(0);
  for (const Rat& p : c.mult) s = s + p;
  c.rhs = s.floor();
  std::ostringstream os;
  os << "r1c:";
  for (size_t i = 0; i < c.subset.size(); ++i)
    os << c.subset[i] << "*" << c.mult[i].str() << ",";
  c.id = os.str();
  return c;
}

double cut_lhs(const Cut& cut, const std::vector<RouteValue>& sol) {
  double s = 0;
  for (const auto& [r, v] : sol) s += (double)cut.coefficient(*r) * v;
  return s;
}

double cut_violation(const Cut& cut, const std::vector<RouteValue>& sol) {
  double lhs = cut_lhs(cut, sol);
  return cut.sense == 'L' ? lhs - (double)cut.rhs : (double)cut.rhs - lhs;
}

std::vector<Cut> separate_mt(const std::vector<RouteValue>& sol,
                             const Instance& inst) {
  std::vector<Cut> out;
  for (int dbar : inst.deadlines) {
    std::set<long long> qs;
    for (const auto& [r, v] : sol) {
      if (v <= 1e-6 || r->deadline > dbar) continue;
      if (2 * r->duration >= dbar + 2) qs.insert(dbar - r->duration + 1);
    }
    for (long long q : qs) {
      if (q < 1) continue;
      Cut c = make_mt_cut(dbar, q, inst.num_pickers);
      if (cut_violation(c, sol) > 1e-6) out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<Cut> separate_fs(const std::vector<RouteValue>& sol,
                             const Instance& inst) {
  std::vector<Cut> out;
  for (int dbar : inst.deadlines) {
    long long best_q = -1;
    double best_v = 1e-6;
    long long qmax = std::min<long long>(dbar, 200);
    for (long long q = 2; q <= qmax; ++q) {
      Cut c = make_fs_cut(dbar, q, inst.num_pickers);
      double v = cut_violation(c, sol);
      if (v > best_v) {
        best_v = v;
        best_q = q;
      }
    }
    if (best_q > 0) out.push_back(make_fs_cut(dbar, best_q, inst.num_pickers));
  }
  return out;
}

std::vector<std::vector<OrderId>> build_scc_pool(const Instance& inst,
                                                 size_t cap) {
  long long total = 0;
  for (const auto& o : inst.orders) total += o.size;
  long long bcap = inst.capacity;
  long long trolleys = (total + bcap - 1) / bcap;
  long long lo = (trolleys - 1) * bcap + 1;  // minimal qualifying item sum

  std::vector<std::vector<OrderId>> pool;
  std::vector<OrderId> cur;
  long long nodes = 0;
  size_t n = inst.orders.size();
  std::vector<long long> suffix(n + 1, 0);
  for (size_t i = n; i-- > 0;)
    suffix[i] = suffix[i + 1] + inst.orders[i].size;

  // minimal R: sum(R) >= lo and sum(R) - min_size(R) < lo
  std::function<void(size_t, long long, long long)> rec =
      [&](size_t idx, long long sum, long long min_sz) {
        if (++nodes > 20000000)
          throw PoolOverflow("subset enumeration budget exhausted");
        if (sum >= lo) {
          if (sum - min_sz < lo) pool.push_back(cur);
          if (pool.size() > cap) throw PoolOverflow("subset pool too large");
          return;  // supersets cannot be minimal
        }
        if (idx == n || sum + suffix[idx] < lo) return;
        for (size_t j = idx; j < n; ++j) {
          long long sz = inst.orders[j].size;
          if (sum + suffix[j] < lo) break;
          cur.push_back((OrderId)inst.orders[j].id);
          rec(j + 1, sum + sz, std::min(min_sz, sz));
          cur.pop_back();
        }
      };
  rec(0, 0, std::numeric_limits<long long>::max() / 2);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::vector<Cut> separate_scc(const std::vector<RouteValue>& sol,
                              const Instance& inst,
                              const std::vector<std::vector<OrderId>>& pool) {
  std::vector<std::pair<double, Cut>> cand;
  for (const auto& r : pool) {
    Cut c = make_scc_cut(r, inst);
    double v = cut_violation(c, sol);
    if (v > 1e-6) cand.push_back({v, std::move(c)});
  }
  std::stable_sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) {
    return a.first > b.first;
  });
  if (cand.size() > 50) cand.resize(50);
  std::vector<Cut> out;
  for (auto& [v, c] : cand) out.push_back(std::move(c));
  return out;
}

const std::vector<std::vector<Rat>>& r1c_multiplier_catalogue(int size) {
  static const std::vector<std::vector<Rat>> empty;
  auto perms = [](std::vector<Rat> base) {
    std::sort(base.begin(), base.end());
    std::vector<std::vector<Rat>> out;
    do {
      out.push_back(base);
    } while (std::next_permutation(base.begin(), base.end()));
    return out;
  };
  static const std::vector<std::vector<Rat>> s3 =
      perms({Rat(1, 2), Rat(1, 2), Rat(1, 2)});
  static const std::vector<std::vector<Rat>> s4 = [&] {
    auto v = perms({Rat(2, 3), Rat(1, 3), Rat(1, 3), Rat(1, 3)});
    return v;
  }();
  static const std::vector<std::vector<Rat>> s5 = [&] {
    std::vector<std::vector<Rat>> v;
    for (auto& base : {std::vector<Rat>{Rat(1, 3), Rat(1, 3), Rat(1, 3),
                                        Rat(1, 3), Rat(1, 3)},
                       std::vector<Rat>{Rat(1, 2), Rat(1, 2), Rat(1, 2),
                                        Rat(1, 2), Rat(1, 2)},
                       std::vector<Rat>{Rat(2, 3), Rat(2, 3), Rat(1, 3),
                                        Rat(1, 3), Rat(1, 3)},
                       std::vector<Rat>{Rat(3, 4), Rat(1, 4), Rat(1, 4),
                                        Rat(1, 4), Rat(1, 4)},
                       std::vector<Rat>{Rat(3, 4), Rat(3, 4), Rat(2, 4),
                                        Rat(1, 4), Rat(1, 4)}}) {
      for (auto& p : perms(base)) v.push_back(p);
    }
    return v;
  }();
  switch (size) {
    case 3: return s3;
    case 4: return s4;
    case 5: return s5;
    default: return empty;
  }
}

namespace {

void scan_r1c_size(const std::vector<RouteValue>& sol, const Instance& inst,
                   int size, std::vector<std::pair<double, Cut>>& cand,
                   size_t stop_at) {
  size_t n = inst.orders.size();
  if (n < (size_t)size) return;
  const auto& cat = r1c_multiplier_catalogue(size);
  std::vector<OrderId> pick((size_t)size);
  std::vector<size_t> idx((size_t)size);
  for (int i = 0; i < size; ++i) idx[(size_t)i] = (size_t)i;
  while (true) {
    for (int i = 0; i < size; ++i)
      pick[(size_t)i] = inst.orders[idx[(size_t)i]].id;
    for (const auto& mult : cat) {
      Cut c = make_r1c_cut(pick, mult);
      double v = cut_violation(c, sol);
      if (v > 1e-6) {
        cand.push_back({v, std::move(c)});
        if (cand.size() >= stop_at) return;
      }
    }
    int i = size - 1;
    while (i >= 0 && idx[(size_t)i] == n - (size_t)(size - i)) --i;
    if (i < 0) break;
    ++idx[(size_t)i];
    for (int j = i + 1; j < size; ++j) idx[(size_t)j] = idx[(size_t)j - 1] + 1;
  }
}

}  // namespace

std::vector<Cut> separate_r1c(const std::vector<RouteValue>& sol,
                              const Instance& inst, bool small_instance) {
  std::vector<std::pair<double, Cut>> cand;
  scan_r1c_size(sol, inst, 3, cand, 40);
  if (cand.size() < 40) scan_r1c_size(sol, inst, 4, cand, 40);
  if (cand.size() < 40 && small_instance)
    scan_r1c_size(sol, inst, 5, cand, 40);
  std::stable_sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) {
    return a.first > b.first;
  });
  if (cand.size() > 20) cand.resize(20);
  std::vector<Cut> out;
  for (auto& [v, c] : cand) out.push_back(std::move(c));
  return out;
}

}  // namespace pickwave
