#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pareto_mall/engine.hpp"
#include "pareto_mall/geo.hpp"
#include "pareto_mall/ingest.hpp"

namespace httplib {
class Server;
}

namespace pareto_mall {

inline constexpr int kMaxQueryLimit = 100;

struct QueryRequest {
  GeoPoint origin;
  std::vector<int> selected_facilities;
  bool include_food_court = false;
  Algorithm algorithm = Algorithm::Sfs;
  int limit = 10;
};

struct FieldIssue {
  std::string field;
  std::string message;
};

/// Raised for a request that fails validation; maps to HTTP 400.
class RequestError : public std::runtime_error {
 public:
  explicit RequestError(std::vector<FieldIssue> issues);
  RequestError(std::string field, std::string message)
      : RequestError(std::vector<FieldIssue>{{std::move(field), std::move(message)}}) {}
  const std::vector<FieldIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<FieldIssue> issues_;
};

/// Raised when no dataset is loaded; maps to HTTP 503.
class ServiceUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses and validates a request body, reporting every bad field at once.
QueryRequest parse_query_request(const nlohmann::json& body);

struct ResponseEntry {
  int rank = 0;
  std::string code;
  std::string name;
  double lat = 0.0;
  double lng = 0.0;
  double distance_km = 0.0;
  std::int64_t store_number = 0;
  std::int64_t parking_space = 0;
  bool food_court = false;
  std::int64_t income = 0;
  std::int64_t population = 0;
  std::vector<std::int64_t> selected_facility_counts;
  double probability = 0.0;
};

struct QueryResponse {
  std::vector<ResponseEntry> entries;
  std::string algorithm;
  bool divergence = false;
  double elapsed_ms = 0.0;
};

nlohmann::json to_json(const QueryResponse& response);

struct MallSummary {
  std::string code;
  std::string name;
  double lat = 0.0;
  double lng = 0.0;
};

struct HttpReply {
  int status = 200;
  nlohmann::json body;
};

/// In-memory query service. Queries run against an immutable dataset
/// snapshot; `load` swaps the snapshot so in-flight queries keep theirs.
class MallService {
 public:
  explicit MallService(std::shared_ptr<const DistanceProvider> provider =
                           std::make_shared<GreatCircleProvider>());

  void load(Dataset dataset);
  bool loaded() const;
  std::shared_ptr<const Dataset> snapshot() const;

  /// Throws ServiceUnavailable or RequestError.
  QueryResponse handle_query(const QueryRequest& request) const;
  std::vector<MallSummary> list_malls() const;

  // HTTP-shaped entry points used by the server routes.
  HttpReply query_endpoint(std::string_view body) const;
  HttpReply malls_endpoint() const;
  HttpReply health_endpoint() const;

  void mount(httplib::Server& server) const;

 private:
  std::shared_ptr<const DistanceProvider> provider_;
  mutable std::mutex provider_mutex_;
  mutable std::mutex snapshot_mutex_;
  std::shared_ptr<const Dataset> dataset_;
};

/// Blocks serving `service` on host:port until the server stops.
bool serve(const MallService& service, const std::string& host, int port);

}  // namespace pareto_mall
