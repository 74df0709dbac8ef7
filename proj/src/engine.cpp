#include "pareto_mall/engine.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace pareto_mall {

std::string_view to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::Oracle: return "oracle";
    case Algorithm::Bnl: return "bnl";
    case Algorithm::Sfs: return "sfs";
    case Algorithm::Dnc: return "dnc";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view tag) noexcept {
  if (tag == "oracle") return Algorithm::Oracle;
  if (tag == "bnl") return Algorithm::Bnl;
  if (tag == "sfs") return Algorithm::Sfs;
  if (tag == "dnc") return Algorithm::Dnc;
  return std::nullopt;
}

std::vector<QueryPoint> project(const Dataset& dataset, const QuerySpec& spec,
                                const DistanceMatrix& matrix) {
  validate_spec(spec);
  std::vector<QueryPoint> points;
  points.reserve(dataset.records.size());
  const bool needs_distance =
      std::any_of(spec.dimensions.begin(), spec.dimensions.end(),
                  [](const Dimension& d) { return d.id.attribute == Attribute::Distance; });
  for (const MallRecord& r : dataset.records) {
    const double km = needs_distance ? matrix.at(r.code) : 0.0;
    QueryPoint p{r.code, Eigen::VectorXd(static_cast<Eigen::Index>(spec.size())), &r};
    for (std::size_t k = 0; k < spec.size(); ++k) {
      p.values(static_cast<Eigen::Index>(k)) = attribute_value(r, spec.dimensions[k].id, km);
    }
    points.push_back(std::move(p));
  }
  return points;
}

namespace {

std::vector<QueryPoint> select(std::span<const QueryPoint> points,
                               const std::vector<skyline::Index>& rows) {
  std::vector<QueryPoint> out;
  out.reserve(rows.size());
  for (skyline::Index i : rows) out.push_back(points[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace

std::vector<QueryPoint> skyline_oracle(std::span<const QueryPoint> points, const QuerySpec& spec,
                                       skyline::Stats* stats) {
  const auto m = oriented_matrix(points, spec);
  return select(points, skyline::oracle(m, stats));
}

std::vector<QueryPoint> skyline_bnl(std::span<const QueryPoint> points, const QuerySpec& spec,
                                    std::size_t window_capacity, skyline::Stats* stats) {
  if (window_capacity == 0) {
    throw Error(ErrorKind::InvalidArgument, "BNL window capacity must be at least 1");
  }
  const auto m = oriented_matrix(points, spec);
  return select(points, skyline::bnl(m, window_capacity, stats));
}

std::vector<QueryPoint> skyline_sfs(std::span<const QueryPoint> points, const QuerySpec& spec,
                                    skyline::Stats* stats) {
  const auto m = oriented_matrix(points, spec);
  std::vector<std::size_t> by_code(points.size());
  std::iota(by_code.begin(), by_code.end(), std::size_t{0});
  std::stable_sort(by_code.begin(), by_code.end(),
                   [&](std::size_t a, std::size_t b) { return points[a].code < points[b].code; });
  std::vector<std::size_t> tie_rank(points.size());
  for (std::size_t r = 0; r < by_code.size(); ++r) tie_rank[by_code[r]] = r;
  return select(points, skyline::sfs(m, tie_rank, stats));
}

std::vector<QueryPoint> skyline_dnc(std::span<const QueryPoint> points, const QuerySpec& spec,
                                    skyline::Stats* stats) {
  const auto m = oriented_matrix(points, spec);
  return select(points, skyline::dnc(m, skyline::kDefaultDncBaseCase, stats));
}

std::vector<QueryPoint> run_skyline(Algorithm algorithm, std::span<const QueryPoint> points,
                                    const QuerySpec& spec, skyline::Stats* stats) {
  switch (algorithm) {
    case Algorithm::Oracle: return skyline_oracle(points, spec, stats);
    case Algorithm::Bnl: return skyline_bnl(points, spec, skyline::kDefaultWindowCapacity, stats);
    case Algorithm::Sfs: return skyline_sfs(points, spec, stats);
    case Algorithm::Dnc: return skyline_dnc(points, spec, stats);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown algorithm");
}

bool is_sql_identifier(std::string_view name) noexcept {
  if (name.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(name.front())) return false;
  return std::all_of(name.begin(), name.end(), [&](char c) { return alpha(c) || digit(c); });
}

std::string emit_skyline_sql(const QuerySpec& spec, std::string_view table_name) {
  if (spec.dimensions.empty()) throw Error(ErrorKind::EmptySpec, "query spec has no dimensions");
  if (!is_sql_identifier(table_name)) {
    throw Error(ErrorKind::Identifier, "'" + std::string(table_name) + "' is not a valid SQL identifier");
  }
  std::string weak;
  std::string strict;
  for (const Dimension& d : spec.dimensions) {
    const std::string col = d.id.name();
    const bool min = d.direction == Direction::Min;
    if (!weak.empty()) weak += " AND ";
    weak += "S1." + col + (min ? " <= " : " >= ") + "S." + col;
    if (!strict.empty()) strict += " OR ";
    strict += "S1." + col + (min ? " < " : " > ") + "S." + col;
  }
  const std::string table(table_name);
  return "SELECT * FROM " + table + " S WHERE NOT EXISTS (SELECT * FROM " + table + " S1 WHERE " +
         weak + " AND (" + strict + "))";
}

MatchResult match_results(std::span<const QueryPoint> a, std::span<const QueryPoint> b) {
  std::set<std::string_view> in_a;
  std::set<std::string_view> in_b;
  for (const QueryPoint& p : a) in_a.insert(p.code);
  for (const QueryPoint& p : b) in_b.insert(p.code);

  MatchResult result;
  for (const QueryPoint& p : a) {
    if (in_b.contains(p.code)) result.points.push_back(p);
  }
  result.divergence = in_a != in_b;
  return result;
}

SkylineResult rank_results(std::span<const QueryPoint> skyline, const DistanceMatrix& matrix,
                           int limit) {
  if (limit < 1) throw Error(ErrorKind::InvalidArgument, "limit must be positive");
  std::vector<RankedEntry> entries;
  entries.reserve(skyline.size());
  for (const QueryPoint& p : skyline) {
    if (p.source == nullptr) {
      throw Error(ErrorKind::InvalidArgument, "point '" + p.code + "' has no source record");
    }
    entries.push_back({0, p.code, matrix.at(p.code), p.source->probability, p.source});
  }
  std::sort(entries.begin(), entries.end(), [](const RankedEntry& x, const RankedEntry& y) {
    if (x.distance_km != y.distance_km) return x.distance_km < y.distance_km;
    if (x.probability != y.probability) return x.probability > y.probability;
    return x.code < y.code;
  });
  if (entries.size() > static_cast<std::size_t>(limit)) entries.resize(static_cast<std::size_t>(limit));
  for (std::size_t i = 0; i < entries.size(); ++i) entries[i].rank = static_cast<int>(i) + 1;
  return {std::move(entries), "", {}};
}

}  // namespace pareto_mall
