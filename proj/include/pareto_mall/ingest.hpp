#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pareto_mall/core.hpp"

namespace pareto_mall {

/// Per-category store counts gathered from a mall report, before summation.
/// Keys are canonical facility names.
using RawFacilityReport = std::map<std::string, std::vector<std::int64_t>, std::less<>>;

/// Sums each category into its canonical slot; absent categories are 0.
FacilityCounts facility_totals(const RawFacilityReport& report);

/// Index of a canonical facility name, or -1.
int facility_index(std::string_view name) noexcept;

struct Dataset {
  std::vector<MallRecord> records;
  std::string source_path;
  std::chrono::system_clock::time_point loaded_at{};

  const MallRecord* find(std::string_view code) const noexcept;
  std::size_t size() const noexcept { return records.size(); }
};

inline constexpr std::string_view kMallCsvHeader =
    "Mall,Code,Lat,Lng,StoreNumber,ParkingSpace,FoodCourt,AvgHouseholdIncome,Population,"
    "Facilities,Probability";

struct CsvIssue {
  std::size_t row = 0;  // 1-based line number; the header is row 1
  std::string field;
  ErrorKind kind = ErrorKind::Validation;
  std::string message;
};

/// Every problem in the file, in row order. Empty means parse_mall_csv
/// would succeed.
std::vector<CsvIssue> validate_mall_csv(std::string_view text);

Dataset parse_mall_csv(std::string_view text, std::string source_path = "<memory>");
Dataset parse_mall_csv(std::istream& in, std::string source_path = "<stream>");
Dataset load_mall_csv(const std::filesystem::path& path);

std::string serialize_mall_csv(const Dataset& dataset);
void save_mall_csv(const Dataset& dataset, const std::filesystem::path& path);

/// Deterministic stand-in for the scraped corpus: Northeast Ohio positions
/// and attribute ranges bracketing the sample rows.
Dataset generate_synthetic_dataset(std::size_t n, std::uint64_t seed);

}  // namespace pareto_mall
