#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "pickwave/model.hpp"

namespace pickwave {

struct InfeasibleGeneration : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class DeadlineProfile { Uniform, TriangularProgressive, TriangularDegressive };

struct GenParams {
  std::uint64_t seed = 1;
  int num_orders = 10;
  int num_aisles = 4;
  int num_blocks = 1;
  int slots_per_aisle_side = 8;
  int capacity = 15;
  int num_pickers = 2;
  int min_items_per_order = 1;
  int max_items_per_order = 5;
  int pick_time = 10;
  int setup_time = 180;
  DeadlineProfile deadline_profile = DeadlineProfile::Uniform;
};

DeadlineProfile parse_deadline_profile(const std::string& s);
std::string deadline_profile_name(DeadlineProfile p);

Instance generate_instance(const GenParams& params);

}  // namespace pickwave
