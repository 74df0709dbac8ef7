#include "pareto_mall/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <random>
#include <set>
#include <sstream>

namespace pareto_mall {

int facility_index(std::string_view name) noexcept {
  const auto it = std::find(kFacilityNames.begin(), kFacilityNames.end(), name);
  return it == kFacilityNames.end() ? -1 : static_cast<int>(it - kFacilityNames.begin());
}

FacilityCounts facility_totals(const RawFacilityReport& report) {
  FacilityCounts totals{};
  for (const auto& [category, counts] : report) {
    const int index = facility_index(category);
    if (index < 0) {
      throw Error(ErrorKind::UnknownCategory, "unknown facility category '" + category + "'");
    }
    for (std::int64_t c : counts) {
      if (c < 0) {
        throw Error(ErrorKind::InvalidValue, "negative store count in category '" + category + "'");
      }
      totals[static_cast<std::size_t>(index)] += c;
    }
  }
  return totals;
}

const MallRecord* Dataset::find(std::string_view code) const noexcept {
  for (const MallRecord& r : records) {
    if (r.code == code) return &r;
  }
  return nullptr;
}

namespace {

constexpr std::size_t kColumnCount = 11;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

/// Splits one CSV line. Double-quoted fields may contain commas and "" escapes.
bool split_csv_line(std::string_view line, std::vector<std::string>& fields) {
  fields.clear();
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  return !quoted;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  text = trim(text);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

struct RowParser {
  std::size_t row;
  std::vector<CsvIssue>& issues;

  void report(std::string field, ErrorKind kind, std::string message) {
    issues.push_back({row, std::move(field), kind, std::move(message)});
  }

  bool count(std::string_view field, std::string_view text, std::int64_t& out) {
    if (!parse_number(text, out)) {
      report(std::string(field), ErrorKind::Validation,
             "'" + std::string(text) + "' is not an integer");
      return false;
    }
    if (out < 0) {
      report(std::string(field), ErrorKind::Validation, "must be non-negative");
      return false;
    }
    return true;
  }

  bool real(std::string_view field, std::string_view text, double lo, double hi, double& out) {
    if (!parse_number(text, out) || !std::isfinite(out)) {
      report(std::string(field), ErrorKind::Validation, "'" + std::string(text) + "' is not a number");
      return false;
    }
    if (out < lo || out > hi) {
      std::ostringstream msg;
      msg << "value " << text << " outside [" << lo << ", " << hi << "]";
      report(std::string(field), ErrorKind::Validation, msg.str());
      return false;
    }
    return true;
  }

  bool facilities(std::string_view text, FacilityCounts& out) {
    text = trim(text);
    if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
      report("Facilities", ErrorKind::Validation, "expected a bracketed integer list");
      return false;
    }
    text = text.substr(1, text.size() - 2);
    std::vector<std::int64_t> values;
    if (!trim(text).empty()) {
      std::size_t start = 0;
      while (true) {
        const std::size_t comma = text.find(',', start);
        const std::string_view item =
            text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        std::int64_t v = 0;
        if (!parse_number(item, v) || v < 0) {
          report("Facilities", ErrorKind::Validation,
                 "'" + std::string(trim(item)) + "' is not a non-negative integer");
          return false;
        }
        values.push_back(v);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
    }
    if (values.size() != kFacilityCount) {
      report("Facilities", ErrorKind::FacilityLength,
             "expected 15 facility counts, found " + std::to_string(values.size()));
      return false;
    }
    std::copy(values.begin(), values.end(), out.begin());
    return true;
  }
};

struct ParseOutcome {
  std::vector<MallRecord> records;
  std::vector<CsvIssue> issues;
};

ParseOutcome parse_rows(std::string_view text) {
  ParseOutcome result;
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::vector<std::string> fields;
  std::set<std::string, std::less<>> codes;
  bool header_seen = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.ends_with('\r')) line.remove_suffix(1);
    if (trim(line).empty()) continue;

    RowParser row{line_no, result.issues};
    if (!split_csv_line(line, fields)) {
      row.report("", ErrorKind::Schema, "unterminated quoted field");
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      std::string joined;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) joined += ',';
        joined += trim(fields[i]);
      }
      if (joined != kMallCsvHeader) {
        row.report("", ErrorKind::Schema,
                   "header must be exactly '" + std::string(kMallCsvHeader) + "'");
        return result;
      }
      continue;
    }
    if (fields.size() != kColumnCount) {
      row.report("", ErrorKind::Schema,
                 "expected 11 columns, found " + std::to_string(fields.size()));
      continue;
    }

    MallRecord r;
    bool ok = true;
    r.name = std::string(trim(fields[0]));
    r.code = std::string(trim(fields[1]));
    if (r.code.empty()) {
      row.report("Code", ErrorKind::Validation, "must not be empty");
      ok = false;
    } else if (!codes.insert(r.code).second) {
      row.report("Code", ErrorKind::Validation, "duplicate code '" + r.code + "'");
      ok = false;
    }
    ok &= row.real("Lat", fields[2], -90.0, 90.0, r.location.lat);
    ok &= row.real("Lng", fields[3], -180.0, 180.0, r.location.lng);
    ok &= row.count("StoreNumber", fields[4], r.store_number);
    ok &= row.count("ParkingSpace", fields[5], r.parking_space);
    std::int64_t food_court = 0;
    if (row.count("FoodCourt", fields[6], food_court)) {
      if (food_court > 1) {
        row.report("FoodCourt", ErrorKind::Validation, "must be 0 or 1");
        ok = false;
      }
      r.food_court = food_court == 1;
    } else {
      ok = false;
    }
    ok &= row.count("AvgHouseholdIncome", fields[7], r.avg_household_income);
    ok &= row.count("Population", fields[8], r.population);
    ok &= row.facilities(fields[9], r.facilities);
    ok &= row.real("Probability", fields[10], 0.0, 1.0, r.probability);
    if (ok) result.records.push_back(std::move(r));
  }
  if (!header_seen) {
    result.issues.push_back({1, "", ErrorKind::EmptyDataset, "empty file"});
  } else if (result.records.empty() && result.issues.empty()) {
    result.issues.push_back({line_no, "", ErrorKind::EmptyDataset, "no data rows"});
  }
  return result;
}

void append_csv_field(std::string& out, std::string_view value) {
  if (value.find_first_of(",\"\n\r") == std::string_view::npos) {
    out += value;
    return;
  }
  out += '"';
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

template <typename T>
void append_number(std::string& out, T value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, ptr);
}

}  // namespace

std::vector<CsvIssue> validate_mall_csv(std::string_view text) { return parse_rows(text).issues; }

Dataset parse_mall_csv(std::string_view text, std::string source_path) {
  ParseOutcome outcome = parse_rows(text);
  if (!outcome.issues.empty()) {
    const CsvIssue& first = outcome.issues.front();
    std::string message = "row " + std::to_string(first.row);
    if (!first.field.empty()) message += " field " + first.field;
    message += ": " + first.message;
    throw Error(first.kind, message);
  }
  Dataset d;
  d.records = std::move(outcome.records);
  d.source_path = std::move(source_path);
  d.loaded_at = std::chrono::system_clock::now();
  return d;
}

Dataset parse_mall_csv(std::istream& in, std::string source_path) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_mall_csv(std::string_view(text), std::move(source_path));
}

Dataset load_mall_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + path.string());
  return parse_mall_csv(in, path.string());
}

std::string serialize_mall_csv(const Dataset& dataset) {
  std::string out(kMallCsvHeader);
  out += '\n';
  for (const MallRecord& r : dataset.records) {
    append_csv_field(out, r.name);
    out += ',';
    append_csv_field(out, r.code);
    out += ',';
    append_number(out, r.location.lat);
    out += ',';
    append_number(out, r.location.lng);
    out += ',';
    append_number(out, r.store_number);
    out += ',';
    append_number(out, r.parking_space);
    out += r.food_court ? ",1," : ",0,";
    append_number(out, r.avg_household_income);
    out += ',';
    append_number(out, r.population);
    out += ",\"[";
    for (std::size_t i = 0; i < r.facilities.size(); ++i) {
      if (i > 0) out += ',';
      append_number(out, r.facilities[i]);
    }
    out += "]\",";
    append_number(out, r.probability);
    out += '\n';
  }
  return out;
}

void save_mall_csv(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  out << serialize_mall_csv(dataset);
}

Dataset generate_synthetic_dataset(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "dataset size must be at least 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> lat(40.8, 41.8);
  std::uniform_real_distribution<double> lng(-82.2, -81.0);
  std::uniform_int_distribution<std::int64_t> stores(5, 60);
  std::uniform_int_distribution<std::int64_t> parking(0, 3000);
  std::uniform_int_distribution<std::int64_t> income(40000, 120000);
  std::uniform_int_distribution<std::int64_t> population(20000, 500000);
  std::uniform_int_distribution<std::int64_t> facility(0, 10);
  std::uniform_real_distribution<double> probability(0.0, 1.0);
  std::bernoulli_distribution food_court(0.5);

  auto round_to = [](double v, double scale) { return std::round(v * scale) / scale; };

  Dataset d;
  d.source_path = "synthetic:n=" + std::to_string(n) + ",seed=" + std::to_string(seed);
  d.loaded_at = std::chrono::system_clock::now();
  d.records.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) {
    MallRecord r;
    r.name = "S" + std::to_string(i);
    r.code = "OH" + std::to_string(i);
    r.location = {round_to(lat(rng), 1e6), round_to(lng(rng), 1e6)};
    r.store_number = stores(rng);
    r.parking_space = parking(rng);
    r.food_court = food_court(rng);
    r.avg_household_income = income(rng);
    r.population = population(rng);
    for (auto& f : r.facilities) f = facility(rng);
    r.probability = std::clamp(round_to(probability(rng), 100.0), 0.0, 1.0);
    d.records.push_back(std::move(r));
  }
  return d;
}

}  // namespace pareto_mall
