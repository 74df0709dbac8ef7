#include "pareto_mall/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pareto_mall/engine.hpp"
#include "pareto_mall/ingest.hpp"
#include "pareto_mall/service.hpp"
#include "pareto_mall/workload.hpp"

namespace pareto_mall {

namespace {

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

GeoPoint parse_origin(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw UsageError("--origin expects LAT,LNG");
  GeoPoint p;
  try {
    std::size_t used = 0;
    p.lat = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw UsageError("bad latitude");
    p.lng = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw UsageError("bad longitude");
  } catch (const std::logic_error&) {
    throw UsageError("--origin expects numeric LAT,LNG");
  }
  if (!is_valid(p)) throw UsageError("--origin outside latitude/longitude ranges");
  return p;
}

std::vector<int> parse_facilities(const std::string& text) {
  std::vector<int> out;
  if (text.empty()) return out;
  for (const std::string& part : split(text, ',')) {
    try {
      std::size_t used = 0;
      const int index = std::stoi(part, &used);
      if (used != part.size() || index < 0 || index >= static_cast<int>(kFacilityCount)) {
        throw UsageError("");
      }
      out.push_back(index);
    } catch (const std::exception&) {
      throw UsageError("--facilities expects comma-separated indices in [0, 14]");
    }
  }
  return out;
}

std::vector<Dimension> parse_dims(const std::string& text) {
  std::vector<Dimension> dims;
  for (const std::string& part : split(text, ',')) {
    const auto colon = part.find(':');
    if (colon == std::string::npos) throw UsageError("--dims expects NAME:min|max items");
    const std::string dir = part.substr(colon + 1);
    if (dir != "min" && dir != "max") throw UsageError("direction must be min or max: " + part);
    try {
      dims.push_back({DimensionId::parse(part.substr(0, colon)),
                      dir == "min" ? Direction::Min : Direction::Max});
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  return dims;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string facilities_text(const FacilityCounts& f) {
  std::string s = "[";
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i > 0) s += ',';
    s += std::to_string(f[i]);
  }
  return s + "]";
}

void print_query_table(const QueryResponse& response, const Dataset& dataset, std::ostream& out) {
  out << std::left << std::setw(5) << "Rank" << std::setw(8) << "Mall" << std::setw(8) << "Code"
      << std::right << std::setw(14) << "Distance (km)" << std::setw(14) << "Store number"
      << std::setw(15) << "Parking space" << std::setw(12) << "Food court" << std::setw(26)
      << "Average household income" << std::setw(12) << "Population" << "  " << std::left
      << std::setw(40) << "Facilities" << std::right << std::setw(12) << "Probability" << '\n';
  for (const ResponseEntry& e : response.entries) {
    const MallRecord* r = dataset.find(e.code);
    out << std::left << std::setw(5) << e.rank << std::setw(8) << e.name << std::setw(8) << e.code
        << std::right << std::fixed << std::setprecision(3) << std::setw(14) << e.distance_km
        << std::setw(14) << e.store_number << std::setw(15) << e.parking_space << std::setw(12)
        << (e.food_court ? 1 : 0) << std::setw(26) << e.income << std::setw(12) << e.population
        << "  " << std::left << std::setw(40) << (r ? facilities_text(r->facilities) : "")
        << std::right << std::setprecision(2) << std::setw(12) << e.probability << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

int cmd_validate(const std::string& data, std::ostream& out) {
  const std::string text = read_file(data);
  const auto issues = validate_mall_csv(text);
  if (issues.empty()) {
    out << data << ": ok, " << parse_mall_csv(text, data).size() << " records\n";
    return 0;
  }
  for (const CsvIssue& i : issues) {
    out << data << ": row " << i.row;
    if (!i.field.empty()) out << " field " << i.field;
    out << " [" << to_string(i.kind) << "]: " << i.message << '\n';
  }
  return kExitData;
}

int cmd_query(const std::string& data, const std::string& origin, const std::string& facilities,
              bool food_court, const std::string& algorithm, int limit, std::ostream& out) {
  QueryRequest req;
  req.origin = parse_origin(origin);
  req.selected_facilities = parse_facilities(facilities);
  req.include_food_court = food_court;
  const auto algo = parse_algorithm(algorithm);
  if (!algo) throw UsageError("unknown algorithm '" + algorithm + "'");
  req.algorithm = *algo;
  if (limit < 1 || limit > kMaxQueryLimit) throw UsageError("--limit must be in [1, 100]");
  req.limit = limit;

  MallService service(provider_from_env());
  service.load(load_mall_csv(data));
  const QueryResponse response = service.handle_query(req);
  print_query_table(response, *service.snapshot(), out);
  if (response.divergence) out << "warning: algorithm and oracle results diverged\n";
  return 0;
}

int cmd_emit_sql(const std::string& dims, const std::string& facilities, bool food_court,
                 const std::string& table, std::ostream& out) {
  QuerySpec spec;
  if (!dims.empty()) {
    spec.dimensions = parse_dims(dims);
  } else {
    spec = make_default_spec({0.0, 0.0}, parse_facilities(facilities), food_court);
  }
  try {
    validate_spec(spec);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  out << emit_skyline_sql(spec, table) << '\n';
  return 0;
}

int cmd_bench(std::size_t n, std::size_t d, std::uint64_t seed, int trials, std::size_t capacity,
              bool csv, std::ostream& out) {
  if (n == 0) throw UsageError("--n must be at least 1");
  if (d == 0 || d > 21) throw UsageError("--d must be in [1, 21]");
  if (trials < 1) throw UsageError("--trials must be at least 1");
  if (capacity == 0) throw UsageError("--capacity must be at least 1");

  struct Totals {
    double wall_ms = 0.0;
    std::uint64_t tests = 0;
    std::size_t size = 0;
  };
  const std::array<Algorithm, 4> algorithms = {Algorithm::Oracle, Algorithm::Bnl, Algorithm::Sfs,
                                               Algorithm::Dnc};
  std::array<Totals, 4> totals{};
  bool agree = true;

  if (csv) out << "trial,n,d,algorithm,wall_ms,dominance_tests,skyline_size\n";
  for (int t = 0; t < trials; ++t) {
    const Workload w = random_workload({.n = n,
                                        .dimensions = d,
                                        .seed = seed + static_cast<std::uint64_t>(t),
                                        .duplicate_rate = 0.05});
    std::vector<std::string> reference;
    for (std::size_t a = 0; a < algorithms.size(); ++a) {
      skyline::Stats stats;
      const auto start = std::chrono::steady_clock::now();
      const auto result = algorithms[a] == Algorithm::Bnl
                              ? skyline_bnl(w.points, w.spec, capacity, &stats)
                              : run_skyline(algorithms[a], w.points, w.spec, &stats);
      const double ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      std::vector<std::string> codes;
      for (const QueryPoint& p : result) codes.push_back(p.code);
      std::sort(codes.begin(), codes.end());
      if (a == 0) {
        reference = codes;
      } else if (codes != reference) {
        agree = false;
      }
      totals[a].wall_ms += ms;
      totals[a].tests += stats.dominance_tests;
      totals[a].size += result.size();
      if (csv) {
        out << t << ',' << n << ',' << d << ',' << to_string(algorithms[a]) << ',' << std::fixed
            << std::setprecision(3) << ms << ',' << stats.dominance_tests << ',' << result.size()
            << '\n';
        out.unsetf(std::ios::floatfield);
      }
    }
  }
  if (!csv) {
    out << "n=" << n << " d=" << d << " seed=" << seed << " trials=" << trials
        << " bnl_capacity=" << capacity << '\n';
    out << std::left << std::setw(10) << "algorithm" << std::right << std::setw(14) << "wall_ms"
        << std::setw(18) << "dominance_tests" << std::setw(14) << "skyline_size" << '\n';
    for (std::size_t a = 0; a < algorithms.size(); ++a) {
      out << std::left << std::setw(10) << to_string(algorithms[a]) << std::right << std::fixed
          << std::setprecision(3) << std::setw(14) << totals[a].wall_ms << std::setw(18)
          << totals[a].tests << std::setw(14) << totals[a].size << '\n';
    }
    out.unsetf(std::ios::floatfield);
  }
  out << "all algorithms agree: " << (agree ? "true" : "false") << '\n';
  return agree ? 0 : kExitData;
}

int cmd_gen(std::size_t n, std::uint64_t seed, const std::string& path, std::ostream& out) {
  if (n == 0) throw UsageError("--n must be at least 1");
  const Dataset d = generate_synthetic_dataset(n, seed);
  if (path.empty() || path == "-") {
    out << serialize_mall_csv(d);
  } else {
    save_mall_csv(d, path);
    out << "wrote " << n << " records to " << path << '\n';
  }
  return 0;
}

int cmd_serve(std::string data, std::string host, int port, std::ostream& out) {
  if (data.empty()) {
    if (const char* env = std::getenv("PARETO_MALL_DATA")) data = env;
  }
  if (data.empty()) throw UsageError("serve needs --data or PARETO_MALL_DATA");
  if (port == 0) {
    port = 8080;
    if (const char* env = std::getenv("PARETO_MALL_PORT")) {
      try {
        port = std::stoi(env);
      } catch (const std::exception&) {
        throw UsageError("PARETO_MALL_PORT is not a port number");
      }
    }
  }
  MallService service(provider_from_env());
  service.load(load_mall_csv(data));
  out << "serving " << service.snapshot()->size() << " malls on http://" << host << ':' << port
      << '\n'
      << std::flush;
  if (!serve(service, host, port)) {
    throw Error(ErrorKind::InvalidArgument, "cannot listen on " + host + ":" + std::to_string(port));
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Skyline (Pareto-frontier) queries over shopping mall records", "pareto_mall"};
  app.require_subcommand(1);

  std::string data, origin, facilities, algorithm = "sfs", dims, table = "malls", output;
  std::string host = "0.0.0.0";
  bool food_court = false, csv = false;
  int limit = 10, trials = 1, port = 0;
  std::size_t n = 90, d = 5, capacity = skyline::kDefaultWindowCapacity;
  std::uint64_t seed = 42;

  auto* validate = app.add_subcommand("validate", "Check a mall CSV file and report every bad row");
  validate->add_option("--data", data, "Mall CSV path")->required();

  auto* query = app.add_subcommand("query", "Run a skyline query and print the ranked result");
  query->add_option("--data", data, "Mall CSV path")->required();
  query->add_option("--origin", origin, "User location as LAT,LNG")->required();
  query->add_option("--facilities", facilities, "Facility category indices, e.g. 0,4");
  query->add_flag("--food-court", food_court, "Add food court as a MAX dimension");
  query->add_option("--algorithm", algorithm, "oracle | bnl | sfs | dnc");
  query->add_option("--limit", limit, "Maximum rows (1-100)");

  auto* emit = app.add_subcommand("emit-sql", "Print the NOT EXISTS SQL for a skyline query");
  emit->add_option("--dims", dims, "NAME:min|max list, e.g. distance:min,store_number:max");
  emit->add_option("--facilities", facilities, "Facility indices (default spec only)");
  emit->add_flag("--food-court", food_court, "Food court dimension (default spec only)");
  emit->add_option("--table", table, "Table name");

  auto* bench = app.add_subcommand("bench", "Time all algorithms on random datasets");
  bench->add_option("--n", n, "Points per dataset");
  bench->add_option("--d", d, "Dimensions");
  bench->add_option("--seed", seed, "Base seed");
  bench->add_option("--trials", trials, "Datasets to run");
  bench->add_option("--capacity", capacity, "BNL window capacity");
  bench->add_flag("--csv", csv, "Emit per-trial CSV rows");

  auto* gen = app.add_subcommand("gen", "Write a synthetic mall CSV");
  gen->add_option("--n", n, "Number of malls");
  gen->add_option("--seed", seed, "Seed");
  gen->add_option("--out", output, "Output path (stdout when omitted)");

  auto* serve_cmd = app.add_subcommand("serve", "Start the HTTP service");
  serve_cmd->add_option("--data", data, "Mall CSV path (default $PARETO_MALL_DATA)");
  serve_cmd->add_option("--port", port, "Port (default $PARETO_MALL_PORT or 8080)");
  serve_cmd->add_option("--host", host, "Bind address");

  std::vector<const char*> argv{"pareto_mall"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(data, out);
    if (*query) return cmd_query(data, origin, facilities, food_court, algorithm, limit, out);
    if (*emit) return cmd_emit_sql(dims, facilities, food_court, table, out);
    if (*bench) return cmd_bench(n, d, seed, trials, capacity, csv, out);
    if (*gen) return cmd_gen(n, seed, output, out);
    if (*serve_cmd) return cmd_serve(data, host, port, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return e.kind() == ErrorKind::Identifier ? kExitUsage : kExitData;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace pareto_mall
