#pragma once

// Shared fixtures and a naive skyline reference that shares no code with
// the library kernels.

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pareto_mall/core.hpp"
#include "pareto_mall/engine.hpp"
#include "pareto_mall/ingest.hpp"

#ifndef PARETO_MALL_TEST_DIR
#error "PARETO_MALL_TEST_DIR must point at the tests directory"
#endif

namespace fixtures {

inline std::string test_path(const std::string& relative) {
  return std::string(PARETO_MALL_TEST_DIR) + "/" + relative;
}

inline std::string read_text(const std::string& relative) {
  std::ifstream in(test_path(relative), std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline pareto_mall::Dataset table2() { return pareto_mall::load_mall_csv(test_path("data/table2.csv")); }

/// store_number MAX, parking_space MAX, food_court MAX, income MIN, population MIN.
inline pareto_mall::QuerySpec table2_spec() {
  using namespace pareto_mall;
  QuerySpec spec;
  spec.origin = {41.502744, -81.502225};
  spec.dimensions = {
      {{Attribute::StoreNumber}, Direction::Max},
      {{Attribute::ParkingSpace}, Direction::Max},
      {{Attribute::FoodCourt}, Direction::Max},
      {{Attribute::AvgHouseholdIncome}, Direction::Min},
      {{Attribute::Population}, Direction::Min},
  };
  return spec;
}

/// Fixture rows projected onto table2_spec(); no distance dimension.
inline std::vector<pareto_mall::QueryPoint> table2_points(const pareto_mall::Dataset& d) {
  using namespace pareto_mall;
  const QuerySpec spec = table2_spec();
  std::vector<QueryPoint> out;
  for (const MallRecord& r : d.records) {
    QueryPoint p{r.code, Eigen::VectorXd(static_cast<Eigen::Index>(spec.size())), &r};
    for (std::size_t k = 0; k < spec.size(); ++k) {
      p.values(static_cast<Eigen::Index>(k)) = attribute_value(r, spec.dimensions[k].id, 0.0);
    }
    out.push_back(std::move(p));
  }
  return out;
}

inline pareto_mall::QueryPoint make_point(std::string code, std::vector<double> values) {
  pareto_mall::QueryPoint p;
  p.code = std::move(code);
  p.values = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  return p;
}

inline pareto_mall::QuerySpec all_min_spec(std::size_t d) {
  using namespace pareto_mall;
  QuerySpec spec;
  for (std::size_t k = 0; k < d; ++k) {
    spec.dimensions.push_back({DimensionId::facility_count(static_cast<int>(k)), Direction::Min});
  }
  return spec;
}

/// Direct reading of the definition: better-or-equal everywhere, strictly
/// better somewhere, with MIN/MAX compared on raw values.
inline bool naive_dominates(const pareto_mall::QueryPoint& a, const pareto_mall::QueryPoint& b,
                            const pareto_mall::QuerySpec& spec) {
  bool strictly = false;
  for (std::size_t k = 0; k < spec.dimensions.size(); ++k) {
    const double x = a.values(static_cast<Eigen::Index>(k));
    const double y = b.values(static_cast<Eigen::Index>(k));
    const bool max = spec.dimensions[k].direction == pareto_mall::Direction::Max;
    const bool worse = max ? x < y : x > y;
    const bool better = max ? x > y : x < y;
    if (worse) return false;
    if (better) strictly = true;
  }
  return strictly;
}

inline std::set<std::string> naive_skyline(const std::vector<pareto_mall::QueryPoint>& points,
                                           const pareto_mall::QuerySpec& spec) {
  std::set<std::string> out;
  for (const auto& candidate : points) {
    bool dominated = false;
    for (const auto& other : points) {
      if (naive_dominates(other, candidate, spec)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.insert(candidate.code);
  }
  return out;
}

inline std::set<std::string> codes(const std::vector<pareto_mall::QueryPoint>& points) {
  std::set<std::string> out;
  for (const auto& p : points) out.insert(p.code);
  return out;
}

}  // namespace fixtures
