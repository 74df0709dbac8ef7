#include "pareto_mall/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "pareto_mall/skyline.hpp"

namespace pareto_mall {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidValue: return "invalid-value";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::SpecMismatch: return "spec-mismatch";
    case ErrorKind::UnknownCategory: return "unknown-category";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::FacilityLength: return "facility-length";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::EmptyDataset: return "empty-dataset";
    case ErrorKind::ProviderUnavailable: return "provider-unavailable";
    case ErrorKind::Identifier: return "identifier";
    case ErrorKind::EmptySpec: return "empty-spec";
    case ErrorKind::MissingDistance: return "missing-distance";
  }
  return "unknown";
}

bool is_valid(const GeoPoint& p) noexcept {
  return std::isfinite(p.lat) && std::isfinite(p.lng) && p.lat >= -90.0 && p.lat <= 90.0 &&
         p.lng >= -180.0 && p.lng <= 180.0;
}

void check_geo_point(const GeoPoint& p) {
  if (!std::isfinite(p.lat) || p.lat < -90.0 || p.lat > 90.0) {
    throw Error(ErrorKind::InvalidValue, "latitude must be a finite value in [-90, 90]");
  }
  if (!std::isfinite(p.lng) || p.lng < -180.0 || p.lng > 180.0) {
    throw Error(ErrorKind::InvalidValue, "longitude must be a finite value in [-180, 180]");
  }
}

void check_mall_record(const MallRecord& r) {
  auto fail = [&](std::string_view field, std::string_view what) {
    throw Error(ErrorKind::Validation,
                "mall '" + r.code + "' field " + std::string(field) + ": " + std::string(what));
  };
  if (r.code.empty()) fail("Code", "must not be empty");
  if (!std::isfinite(r.location.lat) || r.location.lat < -90.0 || r.location.lat > 90.0) {
    fail("Lat", "must be in [-90, 90]");
  }
  if (!std::isfinite(r.location.lng) || r.location.lng < -180.0 || r.location.lng > 180.0) {
    fail("Lng", "must be in [-180, 180]");
  }
  if (r.store_number < 0) fail("StoreNumber", "must be non-negative");
  if (r.parking_space < 0) fail("ParkingSpace", "must be non-negative");
  if (r.avg_household_income < 0) fail("AvgHouseholdIncome", "must be non-negative");
  if (r.population < 0) fail("Population", "must be non-negative");
  for (std::int64_t f : r.facilities) {
    if (f < 0) fail("Facilities", "counts must be non-negative");
  }
  if (!std::isfinite(r.probability) || r.probability < 0.0 || r.probability > 1.0) {
    fail("Probability", "must be in [0, 1]");
  }
}

std::string_view to_string(Direction d) noexcept { return d == Direction::Min ? "min" : "max"; }

std::string DimensionId::name() const {
  switch (attribute) {
    case Attribute::Distance: return "distance";
    case Attribute::StoreNumber: return "store_number";
    case Attribute::ParkingSpace: return "parking_space";
    case Attribute::FoodCourt: return "food_court";
    case Attribute::AvgHouseholdIncome: return "avg_household_income";
    case Attribute::Population: return "population";
    case Attribute::Facility: return "facility_" + std::to_string(facility);
  }
  return "unknown";
}

DimensionId DimensionId::parse(std::string_view name) {
  if (name == "distance") return {Attribute::Distance};
  if (name == "store_number") return {Attribute::StoreNumber};
  if (name == "parking_space") return {Attribute::ParkingSpace};
  if (name == "food_court") return {Attribute::FoodCourt};
  if (name == "avg_household_income") return {Attribute::AvgHouseholdIncome};
  if (name == "population") return {Attribute::Population};
  constexpr std::string_view prefix = "facility_";
  if (name.starts_with(prefix)) {
    const std::string_view digits = name.substr(prefix.size());
    int index = -1;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
    if (ec == std::errc{} && ptr == digits.data() + digits.size() && !digits.empty() &&
        index >= 0 && index < static_cast<int>(kFacilityCount)) {
      return facility_count(index);
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown dimension '" + std::string(name) + "'");
}

QuerySpec make_default_spec(GeoPoint origin, std::vector<int> selected_facilities,
                            bool include_food_court, int limit) {
  QuerySpec spec;
  spec.origin = origin;
  spec.limit = limit;
  spec.dimensions = {
      {{Attribute::Distance}, Direction::Min},
      {{Attribute::StoreNumber}, Direction::Max},
      {{Attribute::ParkingSpace}, Direction::Max},
      {{Attribute::AvgHouseholdIncome}, Direction::Min},
      {{Attribute::Population}, Direction::Min},
  };
  if (include_food_court) spec.dimensions.push_back({{Attribute::FoodCourt}, Direction::Max});
  for (int index : selected_facilities) {
    spec.dimensions.push_back({DimensionId::facility_count(index), Direction::Max});
  }
  spec.selected_facilities = std::move(selected_facilities);
  validate_spec(spec);
  return spec;
}

void validate_spec(const QuerySpec& spec) {
  if (spec.dimensions.empty()) {
    throw Error(ErrorKind::EmptySpec, "query spec has no dimensions");
  }
  std::set<DimensionId> seen;
  for (const Dimension& d : spec.dimensions) {
    if (d.id.attribute == Attribute::Facility &&
        (d.id.facility < 0 || d.id.facility >= static_cast<int>(kFacilityCount))) {
      throw Error(ErrorKind::InvalidArgument,
                  "facility index " + std::to_string(d.id.facility) + " outside [0, 14]");
    }
    if (!seen.insert(d.id).second) {
      throw Error(ErrorKind::InvalidArgument, "duplicate dimension '" + d.id.name() + "'");
    }
  }
  for (int index : spec.selected_facilities) {
    if (index < 0 || index >= static_cast<int>(kFacilityCount)) {
      throw Error(ErrorKind::InvalidArgument,
                  "facility index " + std::to_string(index) + " outside [0, 14]");
    }
  }
  if (spec.limit < 1) throw Error(ErrorKind::InvalidArgument, "limit must be positive");
  check_geo_point(spec.origin);
}

double attribute_value(const MallRecord& r, const DimensionId& id, double distance_km) {
  switch (id.attribute) {
    case Attribute::Distance: return distance_km;
    case Attribute::StoreNumber: return static_cast<double>(r.store_number);
    case Attribute::ParkingSpace: return static_cast<double>(r.parking_space);
    case Attribute::FoodCourt: return r.food_court ? 1.0 : 0.0;
    case Attribute::AvgHouseholdIncome: return static_cast<double>(r.avg_household_income);
    case Attribute::Population: return static_cast<double>(r.population);
    case Attribute::Facility:
      if (id.facility < 0 || id.facility >= static_cast<int>(kFacilityCount)) {
        throw Error(ErrorKind::InvalidArgument, "facility index out of range");
      }
      return static_cast<double>(r.facilities[static_cast<std::size_t>(id.facility)]);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown attribute");
}

double orient(double value, Direction direction) {
  if (!std::isfinite(value)) throw Error(ErrorKind::InvalidValue, "non-finite dimension value");
  return direction == Direction::Min ? value : -value;
}

namespace {

void check_conforms(const QueryPoint& p, const QuerySpec& spec) {
  if (static_cast<std::size_t>(p.values.size()) != spec.size()) {
    throw Error(ErrorKind::SpecMismatch, "point '" + p.code + "' has " +
                                             std::to_string(p.values.size()) +
                                             " values, spec has " +
                                             std::to_string(spec.size()) + " dimensions");
  }
}

}  // namespace

Eigen::VectorXd oriented(const QueryPoint& p, const QuerySpec& spec) {
  check_conforms(p, spec);
  Eigen::VectorXd out(p.values.size());
  for (Eigen::Index k = 0; k < p.values.size(); ++k) {
    out(k) = orient(p.values(k), spec.dimensions[static_cast<std::size_t>(k)].direction);
  }
  return out;
}

Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> oriented_matrix(
    std::span<const QueryPoint> points, const QuerySpec& spec) {
  skyline::PointMatrix<double> m(static_cast<Eigen::Index>(points.size()),
                                 static_cast<Eigen::Index>(spec.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i)) = oriented(points[i], spec).transpose();
  }
  return m;
}

bool dominates(const QueryPoint& a, const QueryPoint& b, const QuerySpec& spec) {
  return skyline::dominates(oriented(a, spec), oriented(b, spec));
}

ScoreBounds compute_bounds(std::span<const QueryPoint> points, const QuerySpec& spec) {
  const auto d = static_cast<Eigen::Index>(spec.size());
  ScoreBounds b{Eigen::VectorXd::Zero(d), Eigen::VectorXd::Zero(d)};
  if (points.empty()) return b;
  for (const QueryPoint& p : points) check_conforms(p, spec);
  b.lower = points.front().values;
  b.upper = points.front().values;
  for (const QueryPoint& p : points) {
    b.lower = b.lower.cwiseMin(p.values);
    b.upper = b.upper.cwiseMax(p.values);
  }
  return b;
}

double monotone_score(const QueryPoint& p, const QuerySpec& spec, const ScoreBounds& bounds) {
  check_conforms(p, spec);
  if (bounds.lower.size() != p.values.size() || bounds.upper.size() != p.values.size()) {
    throw Error(ErrorKind::SpecMismatch, "score bounds do not match the spec");
  }
  double score = 0.0;
  for (Eigen::Index k = 0; k < p.values.size(); ++k) {
    const double range = bounds.upper(k) - bounds.lower(k);
    if (!(range > 0.0)) continue;
    // Same arithmetic as skyline::monotone_scores on oriented values.
    const double offset = spec.dimensions[static_cast<std::size_t>(k)].direction == Direction::Min
                              ? p.values(k) - bounds.lower(k)
                              : bounds.upper(k) - p.values(k);
    score += offset / range;
  }
  return score;
}

}  // namespace pareto_mall
