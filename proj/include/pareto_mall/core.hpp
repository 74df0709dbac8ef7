#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "pareto_mall/error.hpp"

namespace pareto_mall {

inline constexpr std::size_t kFacilityCount = 15;

/// Canonical facility category order; index i of a facility vector counts
/// stores of category i.
inline constexpr std::array<std::string_view, kFacilityCount> kFacilityNames = {
    "Anchor",
    "Services",
    "Miscellaneous",
    "Hi-Tech",
    "Restaurants",
    "Specialty",
    "Barbers and Beauty",
    "Women's wear",
    "Men's wear",
    "Unisex and Family Clothing",
    "Shoes",
    "Children Apparel",
    "Gifts Cards and Books",
    "Jewelry",
    "Entertainment",
};

using FacilityCounts = std::array<std::int64_t, kFacilityCount>;

struct GeoPoint {
  double lat = 0.0;
  double lng = 0.0;

  bool operator==(const GeoPoint&) const = default;
};

bool is_valid(const GeoPoint& p) noexcept;

/// Throws ErrorKind::InvalidValue when `p` is outside the lat/lng ranges.
void check_geo_point(const GeoPoint& p);

struct MallRecord {
  std::string code;
  std::string name;
  GeoPoint location;
  std::int64_t store_number = 0;
  std::int64_t parking_space = 0;
  bool food_court = false;
  std::int64_t avg_household_income = 0;
  std::int64_t population = 0;
  FacilityCounts facilities{};
  double probability = 0.0;

  bool operator==(const MallRecord&) const = default;
};

/// Throws ErrorKind::Validation naming the first offending field.
void check_mall_record(const MallRecord& r);

enum class Direction { Min, Max };

std::string_view to_string(Direction d) noexcept;

enum class Attribute {
  Distance,
  StoreNumber,
  ParkingSpace,
  FoodCourt,
  AvgHouseholdIncome,
  Population,
  Facility,
};

/// A query dimension. Facility dimensions carry the category index.
struct DimensionId {
  Attribute attribute = Attribute::Distance;
  int facility = -1;

  static DimensionId facility_count(int index) { return {Attribute::Facility, index}; }

  /// Column name: distance, store_number, ..., facility_<i>.
  std::string name() const;
  static DimensionId parse(std::string_view name);

  auto operator<=>(const DimensionId&) const = default;
};

struct Dimension {
  DimensionId id;
  Direction direction = Direction::Min;

  bool operator==(const Dimension&) const = default;
};

struct QuerySpec {
  GeoPoint origin;
  std::vector<Dimension> dimensions;
  std::vector<int> selected_facilities;
  int limit = 10;

  std::size_t size() const noexcept { return dimensions.size(); }
};

/// distance MIN, store_number MAX, parking_space MAX, avg_household_income
/// MIN, population MIN, then food_court MAX when requested, then one MAX
/// dimension per selected facility.
QuerySpec make_default_spec(GeoPoint origin, std::vector<int> selected_facilities,
                            bool include_food_court = false, int limit = 10);

/// Throws EmptySpec, InvalidArgument (duplicate id, facility index, limit)
/// or InvalidValue (origin).
void validate_spec(const QuerySpec& spec);

/// Raw value of `id` for a record; distance comes from the caller.
double attribute_value(const MallRecord& r, const DimensionId& id, double distance_km);

/// A mall projected onto the query's dimensions.
struct QueryPoint {
  std::string code;
  Eigen::VectorXd values;
  const MallRecord* source = nullptr;
};

inline bool operator==(const QueryPoint& a, const QueryPoint& b) {
  return a.code == b.code && a.values.size() == b.values.size() && a.values == b.values;
}

/// Returns value for MIN and -value for MAX so smaller is uniformly better.
double orient(double value, Direction direction);

/// Oriented copy of a point's values.
Eigen::VectorXd oriented(const QueryPoint& p, const QuerySpec& spec);

/// Row-major n x d matrix of oriented values, one row per point.
Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> oriented_matrix(
    std::span<const QueryPoint> points, const QuerySpec& spec);

bool dominates(const QueryPoint& a, const QueryPoint& b, const QuerySpec& spec);

/// Per-dimension raw (min, max) over a dataset.
struct ScoreBounds {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

ScoreBounds compute_bounds(std::span<const QueryPoint> points, const QuerySpec& spec);

/// Sum over dimensions of the oriented value min-max scaled into [0, 1].
/// Degenerate dimensions contribute 0. dominates(a, b) implies
/// monotone_score(a) < monotone_score(b).
double monotone_score(const QueryPoint& p, const QuerySpec& spec, const ScoreBounds& bounds);

}  // namespace pareto_mall
