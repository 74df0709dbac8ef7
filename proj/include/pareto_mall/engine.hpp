#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pareto_mall/core.hpp"
#include "pareto_mall/geo.hpp"
#include "pareto_mall/ingest.hpp"
#include "pareto_mall/skyline.hpp"

namespace pareto_mall {

enum class Algorithm { Oracle, Bnl, Sfs, Dnc };

std::string_view to_string(Algorithm a) noexcept;
std::optional<Algorithm> parse_algorithm(std::string_view tag) noexcept;

/// One QueryPoint per record, values in spec order. The points borrow the
/// records: `dataset` must outlive them.
std::vector<QueryPoint> project(const Dataset& dataset, const QuerySpec& spec,
                                const DistanceMatrix& matrix);

// Skylines over QueryPoints. Each returns the undominated points in input
// order; empty input gives an empty result.

std::vector<QueryPoint> skyline_oracle(std::span<const QueryPoint> points, const QuerySpec& spec,
                                       skyline::Stats* stats = nullptr);
std::vector<QueryPoint> skyline_bnl(std::span<const QueryPoint> points, const QuerySpec& spec,
                                    std::size_t window_capacity = skyline::kDefaultWindowCapacity,
                                    skyline::Stats* stats = nullptr);
/// Score ties are broken by mall code.
std::vector<QueryPoint> skyline_sfs(std::span<const QueryPoint> points, const QuerySpec& spec,
                                    skyline::Stats* stats = nullptr);
std::vector<QueryPoint> skyline_dnc(std::span<const QueryPoint> points, const QuerySpec& spec,
                                    skyline::Stats* stats = nullptr);

std::vector<QueryPoint> run_skyline(Algorithm algorithm, std::span<const QueryPoint> points,
                                    const QuerySpec& spec, skyline::Stats* stats = nullptr);

/// NOT EXISTS anti-join equivalent of the skyline over `table_name`, whose
/// columns are the dimension names.
std::string emit_skyline_sql(const QuerySpec& spec, std::string_view table_name);

bool is_sql_identifier(std::string_view name) noexcept;

struct MatchResult {
  std::vector<QueryPoint> points;
  bool divergence = false;
};

/// Intersection by code, keeping `a`'s payloads and order. `divergence` is
/// set when the two inputs are not the same set of codes.
MatchResult match_results(std::span<const QueryPoint> a, std::span<const QueryPoint> b);

struct RankedEntry {
  int rank = 0;
  std::string code;
  double distance_km = 0.0;
  double probability = 0.0;
  const MallRecord* source = nullptr;
};

struct SkylineResult {
  std::vector<RankedEntry> entries;
  std::string algorithm;
  QuerySpec spec;
};

/// Ascending distance, then descending probability, then code; truncated
/// to `limit` with ranks 1..k. Points must carry their source record.
SkylineResult rank_results(std::span<const QueryPoint> skyline, const DistanceMatrix& matrix,
                           int limit);

}  // namespace pareto_mall
