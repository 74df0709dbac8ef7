#include "pareto_mall/service.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include <httplib.h>

namespace pareto_mall {

namespace {

std::string summarize(const std::vector<FieldIssue>& issues) {
  std::string s = "invalid request";
  for (const FieldIssue& i : issues) s += "; " + i.field + ": " + i.message;
  return s;
}

nlohmann::json error_body(std::string_view message) {
  return nlohmann::json{{"error", message}};
}

}  // namespace

RequestError::RequestError(std::vector<FieldIssue> issues)
    : std::runtime_error(summarize(issues)), issues_(std::move(issues)) {}

QueryRequest parse_query_request(const nlohmann::json& body) {
  std::vector<FieldIssue> issues;
  QueryRequest req;
  if (!body.is_object()) throw RequestError("body", "expected a JSON object");

  const auto origin = body.find("origin");
  if (origin == body.end() || !origin->is_object()) {
    issues.push_back({"origin", "required object {\"lat\": number, \"lng\": number}"});
  } else {
    auto coordinate = [&](const char* key, double lo, double hi, double& out) {
      const auto v = origin->find(key);
      const std::string field = std::string("origin.") + key;
      if (v == origin->end() || !v->is_number()) {
        issues.push_back({field, "required number"});
      } else if (out = v->get<double>(); !(out >= lo && out <= hi)) {
        issues.push_back({field, "must be in [" + std::to_string(static_cast<int>(lo)) + ", " +
                                     std::to_string(static_cast<int>(hi)) + "]"});
      }
    };
    coordinate("lat", -90.0, 90.0, req.origin.lat);
    coordinate("lng", -180.0, 180.0, req.origin.lng);
  }

  if (const auto f = body.find("selected_facilities"); f != body.end() && !f->is_null()) {
    if (!f->is_array()) {
      issues.push_back({"selected_facilities", "expected an array of category indices"});
    } else {
      std::set<int> seen;
      for (const auto& item : *f) {
        if (!item.is_number_integer() || item.get<std::int64_t>() < 0 ||
            item.get<std::int64_t>() >= static_cast<std::int64_t>(kFacilityCount)) {
          issues.push_back({"selected_facilities", "indices must be integers in [0, 14]"});
          break;
        }
        const int index = item.get<int>();
        if (!seen.insert(index).second) {
          issues.push_back({"selected_facilities", "duplicate index " + std::to_string(index)});
          break;
        }
        req.selected_facilities.push_back(index);
      }
    }
  }

  if (const auto f = body.find("include_food_court"); f != body.end() && !f->is_null()) {
    if (!f->is_boolean()) {
      issues.push_back({"include_food_court", "expected a boolean"});
    } else {
      req.include_food_court = f->get<bool>();
    }
  }

  if (const auto a = body.find("algorithm"); a != body.end() && !a->is_null()) {
    const auto parsed = a->is_string() ? parse_algorithm(a->get<std::string>()) : std::nullopt;
    if (!parsed) {
      issues.push_back({"algorithm", "unknown algorithm; expected oracle, bnl, sfs or dnc"});
    } else {
      req.algorithm = *parsed;
    }
  }

  if (const auto l = body.find("limit"); l != body.end() && !l->is_null()) {
    if (!l->is_number_integer() || l->get<std::int64_t>() < 1 ||
        l->get<std::int64_t>() > kMaxQueryLimit) {
      issues.push_back({"limit", "expected an integer in [1, 100]"});
    } else {
      req.limit = l->get<int>();
    }
  }

  if (!issues.empty()) throw RequestError(std::move(issues));
  return req;
}

nlohmann::json to_json(const QueryResponse& response) {
  nlohmann::json entries = nlohmann::json::array();
  for (const ResponseEntry& e : response.entries) {
    entries.push_back({
        {"rank", e.rank},
        {"code", e.code},
        {"name", e.name},
        {"lat", e.lat},
        {"lng", e.lng},
        {"distance_km", e.distance_km},
        {"store_number", e.store_number},
        {"parking_space", e.parking_space},
        {"food_court", e.food_court},
        {"income", e.income},
        {"population", e.population},
        {"selected_facility_counts", e.selected_facility_counts},
        {"probability", e.probability},
    });
  }
  return {
      {"entries", std::move(entries)},
      {"algorithm", response.algorithm},
      {"divergence", response.divergence},
      {"elapsed_ms", response.elapsed_ms},
  };
}

MallService::MallService(std::shared_ptr<const DistanceProvider> provider)
    : provider_(std::move(provider)) {
  if (!provider_) throw Error(ErrorKind::InvalidArgument, "distance provider is required");
}

void MallService::load(Dataset dataset) {
  if (dataset.records.empty()) throw Error(ErrorKind::EmptyDataset, "dataset has no records");
  auto next = std::make_shared<const Dataset>(std::move(dataset));
  std::lock_guard lock(snapshot_mutex_);
  dataset_ = std::move(next);
}

bool MallService::loaded() const { return snapshot() != nullptr; }

std::shared_ptr<const Dataset> MallService::snapshot() const {
  std::lock_guard lock(snapshot_mutex_);
  return dataset_;
}

QueryResponse MallService::handle_query(const QueryRequest& request) const {
  const auto started = std::chrono::steady_clock::now();
  const std::shared_ptr<const Dataset> dataset = snapshot();
  if (!dataset) throw ServiceUnavailable("dataset not loaded");

  if (!is_valid(request.origin)) throw RequestError("origin", "coordinates out of range");
  if (request.limit < 1 || request.limit > kMaxQueryLimit) {
    throw RequestError("limit", "expected an integer in [1, 100]");
  }
  QuerySpec spec;
  try {
    spec = make_default_spec(request.origin, request.selected_facilities,
                             request.include_food_court, request.limit);
  } catch (const Error& e) {
    throw RequestError("selected_facilities", e.what());
  }

  DistanceMatrix matrix;
  if (provider_->supports_concurrency()) {
    matrix = build_distance_matrix(request.origin, *dataset, *provider_);
  } else {
    std::lock_guard lock(provider_mutex_);
    matrix = build_distance_matrix(request.origin, *dataset, *provider_);
  }

  const std::vector<QueryPoint> points = project(*dataset, spec, matrix);
  const std::vector<QueryPoint> requested = run_skyline(request.algorithm, points, spec);
  const std::vector<QueryPoint> reference = skyline_oracle(points, spec);
  const MatchResult matched = match_results(requested, reference);
  const SkylineResult ranked = rank_results(matched.points, matrix, request.limit);

  QueryResponse response;
  response.algorithm = std::string(to_string(request.algorithm));
  response.divergence = matched.divergence;
  for (const RankedEntry& r : ranked.entries) {
    const MallRecord& m = *r.source;
    ResponseEntry e;
    e.rank = r.rank;
    e.code = m.code;
    e.name = m.name;
    e.lat = m.location.lat;
    e.lng = m.location.lng;
    e.distance_km = r.distance_km;
    e.store_number = m.store_number;
    e.parking_space = m.parking_space;
    e.food_court = m.food_court;
    e.income = m.avg_household_income;
    e.population = m.population;
    for (int index : request.selected_facilities) {
      e.selected_facility_counts.push_back(m.facilities[static_cast<std::size_t>(index)]);
    }
    e.probability = r.probability;
    response.entries.push_back(std::move(e));
  }
  response.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return response;
}

std::vector<MallSummary> MallService::list_malls() const {
  const std::shared_ptr<const Dataset> dataset = snapshot();
  if (!dataset) throw ServiceUnavailable("dataset not loaded");
  std::vector<MallSummary> out;
  out.reserve(dataset->records.size());
  for (const MallRecord& r : dataset->records) {
    out.push_back({r.code, r.name, r.location.lat, r.location.lng});
  }
  // Natural order so OH2 precedes OH10.
  std::sort(out.begin(), out.end(), [](const MallSummary& a, const MallSummary& b) {
    if (a.code.size() != b.code.size()) return a.code.size() < b.code.size();
    return a.code < b.code;
  });
  return out;
}

HttpReply MallService::query_endpoint(std::string_view body) const {
  const auto json = nlohmann::json::parse(body, nullptr, false);
  if (json.is_discarded()) {
    return {400, {{"error", "invalid request"},
                  {"fields", {{{"field", "body"}, {"message", "malformed JSON"}}}}}};
  }
  try {
    return {200, to_json(handle_query(parse_query_request(json)))};
  } catch (const RequestError& e) {
    nlohmann::json fields = nlohmann::json::array();
    for (const FieldIssue& i : e.issues()) {
      fields.push_back({{"field", i.field}, {"message", i.message}});
    }
    return {400, {{"error", "invalid request"}, {"fields", std::move(fields)}}};
  } catch (const ServiceUnavailable& e) {
    return {503, error_body(e.what())};
  } catch (const Error& e) {
    return {500, error_body(e.what())};
  }
}

HttpReply MallService::malls_endpoint() const {
  try {
    nlohmann::json malls = nlohmann::json::array();
    for (const MallSummary& m : list_malls()) {
      malls.push_back({{"code", m.code}, {"name", m.name}, {"lat", m.lat}, {"lng", m.lng}});
    }
    return {200, std::move(malls)};
  } catch (const ServiceUnavailable& e) {
    return {503, error_body(e.what())};
  }
}

HttpReply MallService::health_endpoint() const {
  if (!loaded()) return {503, {{"status", "loading"}}};
  return {200, {{"status", "ok"}, {"records", snapshot()->records.size()}}};
}

void MallService::mount(httplib::Server& server) const {
  auto reply = [](httplib::Response& res, const HttpReply& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server.Get("/api/malls", [this, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, malls_endpoint());
  });
  server.Post("/api/skyline", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, query_endpoint(req.body));
  });
  server.Get("/healthz", [this, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, health_endpoint());
  });
}

bool serve(const MallService& service, const std::string& host, int port) {
  httplib::Server server;
  service.mount(server);
  return server.listen(host, port);
}

}  // namespace pareto_mall
