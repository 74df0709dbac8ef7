#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "pareto_mall/core.hpp"
#include "pareto_mall/ingest.hpp"

namespace pareto_mall {

inline constexpr double kEarthRadiusKm = 6371.0088;

/// Great-circle distance on a sphere of radius kEarthRadiusKm.
double haversine_km(const GeoPoint& p, const GeoPoint& q);

/// Source of origin-to-destination distances. `std::nullopt` signals a
/// failed lookup. Implementations that return true from
/// `supports_concurrency` must tolerate concurrent calls.
class DistanceProvider {
 public:
  virtual ~DistanceProvider() = default;

  virtual std::string name() const = 0;
  virtual std::optional<double> distance_km(const GeoPoint& origin,
                                            const GeoPoint& destination) const = 0;
  virtual bool supports_concurrency() const { return false; }
};

class GreatCircleProvider final : public DistanceProvider {
 public:
  std::string name() const override { return "great-circle"; }
  std::optional<double> distance_km(const GeoPoint& origin,
                                    const GeoPoint& destination) const override {
    return haversine_km(origin, destination);
  }
  bool supports_concurrency() const override { return true; }
};

struct RoutingConfig {
  std::string url;  // http://host[:port]/path
  std::string api_key;
  std::chrono::milliseconds timeout{5000};
  bool concurrent = false;
};

/// Driving-distance client. Issues
///   GET <url>?origin=<lat>,<lng>&destination=<lat>,<lng>&key=<api_key>
/// and expects a JSON body {"distance_meters": <number>}.
class HttpRoutingProvider final : public DistanceProvider {
 public:
  explicit HttpRoutingProvider(RoutingConfig config);

  /// Reads PARETO_MALL_ROUTING_URL and PARETO_MALL_ROUTING_KEY; nullopt when
  /// no URL is configured.
  static std::optional<RoutingConfig> config_from_env();

  std::string name() const override { return "routing:" + host_; }
  std::optional<double> distance_km(const GeoPoint& origin,
                                    const GeoPoint& destination) const override;
  bool supports_concurrency() const override { return config_.concurrent; }

 private:
  RoutingConfig config_;
  std::string host_;
  std::string path_;
};

/// The configured routing provider, or great-circle when none is set.
std::shared_ptr<const DistanceProvider> provider_from_env();

struct DistanceMatrix {
  GeoPoint origin;
  std::map<std::string, double, std::less<>> entries;
  std::string provider;
  std::size_t fallbacks = 0;

  /// Throws ErrorKind::MissingDistance.
  double at(std::string_view code) const;
};

inline constexpr std::string_view kMixedProvider = "mixed";

/// Tolerance below the geodesic under which a provider answer is rejected.
inline constexpr double kRoadDistanceSlackKm = 0.5;

/// One entry per record. A failed or implausible provider answer falls back
/// to great-circle for that destination and tags the matrix "mixed"; with
/// fallback disabled any failure raises ErrorKind::ProviderUnavailable.
DistanceMatrix build_distance_matrix(const GeoPoint& origin, const Dataset& dataset,
                                     const DistanceProvider& provider, bool fallback = true);

}  // namespace pareto_mall
