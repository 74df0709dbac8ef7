#pragma once

#include <cstdint>
#include <vector>

#include "pareto_mall/core.hpp"

namespace pareto_mall {

struct WorkloadOptions {
  std::size_t n = 100;
  std::size_t dimensions = 4;  // 1..21
  std::uint64_t seed = 0;
  double duplicate_rate = 0.0;  // fraction of rows overwritten by copies of other rows
  bool integer_grid = false;    // draw values from {0, ..., grid_levels - 1}
  int grid_levels = 1000;
  bool mixed_directions = true;  // otherwise every dimension is MIN
};

struct Workload {
  QuerySpec spec;
  std::vector<QueryPoint> points;
};

/// Seeded random point set for property checks and benchmarks. Points have
/// no source record; codes are P000001, P000002, ...
Workload random_workload(const WorkloadOptions& options);

}  // namespace pareto_mall
