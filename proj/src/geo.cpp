#include "pareto_mall/geo.hpp"

#include <cmath>
#include <cstdlib>
#include <future>
#include <numbers>
#include <sstream>
#include <vector>

#include <httplib.h>
#include <json.hpp>

namespace pareto_mall {

double haversine_km(const GeoPoint& p, const GeoPoint& q) {
  constexpr double kRad = std::numbers::pi / 180.0;
  const double phi1 = p.lat * kRad;
  const double phi2 = q.lat * kRad;
  const double dphi = (q.lat - p.lat) * kRad;
  const double dlambda = (q.lng - p.lng) * kRad;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  // Product form is symmetric in (p, q) bit for bit.
  const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(std::min(1.0, h)));
}

HttpRoutingProvider::HttpRoutingProvider(RoutingConfig config) : config_(std::move(config)) {
  const std::string& url = config_.url;
  const auto scheme = url.find("://");
  if (scheme == std::string::npos || url.substr(0, scheme) != "http") {
    throw Error(ErrorKind::InvalidArgument, "routing URL must start with http://: " + url);
  }
  const auto path_start = url.find('/', scheme + 3);
  host_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
}

std::optional<RoutingConfig> HttpRoutingProvider::config_from_env() {
  const char* url = std::getenv("PARETO_MALL_ROUTING_URL");
  if (url == nullptr || *url == '\0') return std::nullopt;
  RoutingConfig config;
  config.url = url;
  if (const char* key = std::getenv("PARETO_MALL_ROUTING_KEY")) config.api_key = key;
  return config;
}

std::optional<double> HttpRoutingProvider::distance_km(const GeoPoint& origin,
                                                       const GeoPoint& destination) const {
  httplib::Client client(host_);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());

  std::ostringstream o, d;
  o.precision(9);
  d.precision(9);
  o << origin.lat << ',' << origin.lng;
  d << destination.lat << ',' << destination.lng;
  httplib::Params params{{"origin", o.str()}, {"destination", d.str()}};
  if (!config_.api_key.empty()) params.emplace("key", config_.api_key);

  const auto res = client.Get(path_, params, httplib::Headers{});
  if (!res || res->status != 200) return std::nullopt;
  const auto body = nlohmann::json::parse(res->body, nullptr, false);
  if (body.is_discarded() || !body.is_object() || !body.contains("distance_meters") ||
      !body["distance_meters"].is_number()) {
    return std::nullopt;
  }
  const double meters = body["distance_meters"].get<double>();
  if (!std::isfinite(meters) || meters < 0.0) return std::nullopt;
  return meters / 1000.0;
}

std::shared_ptr<const DistanceProvider> provider_from_env() {
  if (auto config = HttpRoutingProvider::config_from_env()) {
    return std::make_shared<HttpRoutingProvider>(std::move(*config));
  }
  return std::make_shared<GreatCircleProvider>();
}

double DistanceMatrix::at(std::string_view code) const {
  const auto it = entries.find(code);
  if (it == entries.end()) {
    throw Error(ErrorKind::MissingDistance, "no distance for mall '" + std::string(code) + "'");
  }
  return it->second;
}

DistanceMatrix build_distance_matrix(const GeoPoint& origin, const Dataset& dataset,
                                     const DistanceProvider& provider, bool fallback) {
  if (dataset.records.empty()) throw Error(ErrorKind::EmptyDataset, "dataset has no records");
  check_geo_point(origin);

  const std::size_t n = dataset.records.size();
  std::vector<std::optional<double>> answers(n);
  if (provider.supports_concurrency() && n > 1) {
    constexpr std::size_t kInFlight = 8;
    for (std::size_t start = 0; start < n; start += kInFlight) {
      std::vector<std::future<std::optional<double>>> batch;
      for (std::size_t i = start; i < std::min(n, start + kInFlight); ++i) {
        batch.push_back(std::async(std::launch::async, [&, i] {
          return provider.distance_km(origin, dataset.records[i].location);
        }));
      }
      for (std::size_t k = 0; k < batch.size(); ++k) answers[start + k] = batch[k].get();
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      answers[i] = provider.distance_km(origin, dataset.records[i].location);
    }
  }

  DistanceMatrix m;
  m.origin = origin;
  m.provider = provider.name();
  for (std::size_t i = 0; i < n; ++i) {
    const MallRecord& r = dataset.records[i];
    const double geodesic = haversine_km(origin, r.location);
    std::optional<double> km = answers[i];
    if (km && (!std::isfinite(*km) || *km < geodesic - kRoadDistanceSlackKm)) km.reset();
    if (!km) {
      if (!fallback) {
        throw Error(ErrorKind::ProviderUnavailable,
                    provider.name() + " returned no usable distance for '" + r.code + "'");
      }
      km = geodesic;
      ++m.fallbacks;
    }
    m.entries.emplace(r.code, *km);
  }
  if (m.fallbacks > 0) m.provider = std::string(kMixedProvider);
  return m;
}

}  // namespace pareto_mall
