#pragma once

#include <string>
#include <vector>

#include "pickwave/model.hpp"
#include "pickwave/rational.hpp"

namespace pickwave {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PoolOverflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Rat dff_f0(const Rat& lambda, const Rat& x);
Rat dff_g(long long lambda, const Rat& x);
Rat dff_f_fs1(long long lambda, const Rat& x);

enum class CutKind { MT, FS, SCC, R1C };

struct Cut {
  CutKind kind = CutKind::MT;
  int dbar = 0;                  // MT, FS
  long long q = 0;               // MT, FS
  std::vector<OrderId> subset;   // SCC, R1C (sorted)
  std::vector<Rat> mult;         // R1C, aligned with subset
  char sense = 'L';
  long long rhs = 0;
  std::string id;

  long long coefficient(const RouteSpec& r) const;
};

Cut make_mt_cut(int dbar, long long q, int num_pickers);
Cut make_fs_cut(int dbar, long long q, int num_pickers);
Cut make_scc_cut(std::vector<OrderId> subset, const Instance& inst);
Cut make_r1c_cut(std::vector<OrderId> subset, std::vector<Rat> mult);

using RouteValue = std::pair<const RouteSpec*, double>;

double cut_lhs(const Cut& cut, const std::vector<RouteValue>& sol);
double cut_violation(const Cut& cut, const std::vector<RouteValue>& sol);

std::vector<Cut> separate_mt(const std::vector<RouteValue>& sol,
                             const Instance& inst);
std::vector<Cut> separate_fs(const std::vector<RouteValue>& sol,
                             const Instance& inst);

// all inclusion-minimal subsets whose trolley count matches the full set
std::vector<std::vector<OrderId>> build_scc_pool(const Instance& inst,
                                                 size_t cap = 100000);
std::vector<Cut> separate_scc(const std::vector<RouteValue>& sol,
                              const Instance& inst,
                              const std::vector<std::vector<OrderId>>& pool);
std::vector<Cut> separate_r1c(const std::vector<RouteValue>& sol,
                              const Instance& inst, bool small_instance);

// multiplier catalogue for subsets of size 3..5, every distinct assignment
const std::vector<std::vector<Rat>>& r1c_multiplier_catalogue(int size);

}  // namespace pickwave
