#include "pareto_mall/workload.hpp"

#include <algorithm>
#include <cstdio>
#include <random>

namespace pareto_mall {

Workload random_workload(const WorkloadOptions& options) {
  constexpr std::size_t kAttributes = 6;
  if (options.dimensions == 0 || options.dimensions > kAttributes + kFacilityCount) {
    throw Error(ErrorKind::InvalidArgument, "workload dimensions must be in [1, 21]");
  }
  if (options.duplicate_rate < 0.0 || options.duplicate_rate > 1.0) {
    throw Error(ErrorKind::InvalidArgument, "duplicate rate must be in [0, 1]");
  }
  std::mt19937_64 rng(options.seed);
  std::bernoulli_distribution coin(0.5);

  Workload w;
  w.spec.origin = {0.0, 0.0};
  for (std::size_t k = 0; k < options.dimensions; ++k) {
    const DimensionId id = k < kAttributes
                               ? DimensionId{static_cast<Attribute>(k)}
                               : DimensionId::facility_count(static_cast<int>(k - kAttributes));
    const Direction dir =
        options.mixed_directions && coin(rng) ? Direction::Max : Direction::Min;
    w.spec.dimensions.push_back({id, dir});
  }

  std::uniform_real_distribution<double> real(0.0, 1.0);
  std::uniform_int_distribution<int> level(0, std::max(1, options.grid_levels) - 1);
  const auto d = static_cast<Eigen::Index>(options.dimensions);
  w.points.reserve(options.n);
  for (std::size_t i = 0; i < options.n; ++i) {
    char code[16];
    std::snprintf(code, sizeof(code), "P%06zu", i + 1);
    QueryPoint p{code, Eigen::VectorXd(d), nullptr};
    for (Eigen::Index k = 0; k < d; ++k) {
      p.values(k) = options.integer_grid ? static_cast<double>(level(rng)) : real(rng);
    }
    w.points.push_back(std::move(p));
  }

  if (options.n > 1 && options.duplicate_rate > 0.0) {
    std::bernoulli_distribution duplicate(options.duplicate_rate);
    std::uniform_int_distribution<std::size_t> pick(0, options.n - 1);
    for (std::size_t i = 0; i < options.n; ++i) {
      if (!duplicate(rng)) continue;
      std::size_t j = pick(rng);
      if (j == i) j = (j + 1) % options.n;
      w.points[i].values = w.points[j].values;
    }
  }
  return w;
}

}  // namespace pareto_mall
