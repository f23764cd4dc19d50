#pragma once

#include <atomic>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "geoaudit/cluster.hpp"
#include "geoaudit/geo.hpp"
#include "geoaudit/types.hpp"

namespace geoaudit {

// Reverse geocoding backend. Implementations must be deterministic within a
// run: the same point always yields the same label. Throws ProviderError on
// lookup failure.
class GeocodeProvider {
 public:
  virtual ~GeocodeProvider() = default;
  virtual std::string provider_id() const = 0;
  virtual AddressLabel lookup(const GeoPoint& p) = 0;
};

// Spatial cache of provider answers. A query hits only when a cached point
// lies strictly within radius_m of it; among several candidates the nearest
// wins, equal distances broken by insertion order (oldest first). Queries and
// insertions are serialized by an internal mutex.
class ProximityCache {
 public:
  explicit ProximityCache(double radius_m = 2.0);

  std::optional<AddressLabel> find(const GeoPoint& p) const;
  void insert(const GeoPoint& p, const AddressLabel& label);

  void count_hit() { ++hits_; }
  void count_miss() { ++misses_; }
  void count_provider_error() { ++provider_errors_; }

  double radius_m() const { return radius_m_; }
  std::size_t size() const;
  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }
  std::size_t provider_errors() const { return provider_errors_; }

 private:
  double radius_m_;
  GridIndex grid_;
  std::vector<AddressLabel> labels_;
  mutable std::mutex mu_;
  std::size_t hits_ = 0, misses_ = 0, provider_errors_ = 0;
};

// Cache-first lookup: a hit returns the cached label without touching the
// provider; a miss asks the provider and caches the answer. A provider
// failure yields an unknown label, is counted, and is never cached.
AddressLabel cached_reverse_geocode(const GeoPoint& p, ProximityCache& cache,
                                    GeocodeProvider& provider);

// Re-geocodes the midpoints of the k largest clusters with the authoritative
// provider and adopts its label when it resolves and disagrees. Clusters must
// already be ranked. Failed lookups leave the cluster untouched and are noted
// in diagnostics.
std::vector<Cluster> verify_cluster_addresses(std::vector<Cluster> clusters,
                                              GeocodeProvider& authoritative, std::size_t k = 10,
                                              std::vector<std::string>* diagnostics = nullptr);

// Offline provider backed by an address table: one JSON object per line with
// "address" plus either a seed point ("lat"/"lon") or a "polygon" of [lat,lon]
// pairs. A point resolves to the first containing polygon, else the nearest
// seed within seed_radius_m, else unknown.
class FileGeocodeProvider : public GeocodeProvider {
 public:
  struct Entry {
    std::string address;
    std::optional<GeoPoint> seed;
    std::vector<GeoPoint> polygon;
  };

  FileGeocodeProvider(std::string id, std::vector<Entry> entries, double seed_radius_m = 40.0);
  FileGeocodeProvider(FileGeocodeProvider&& other) noexcept
      : id_(std::move(other.id_)),
        entries_(std::move(other.entries_)),
        seed_radius_m_(other.seed_radius_m_),
        seed_grid_(std::move(other.seed_grid_)),
        polygon_entries_(std::move(other.polygon_entries_)),
        lookups_(other.lookups_.load()) {}
  static FileGeocodeProvider load(const std::filesystem::path& path, std::string id = "file",
                                  double seed_radius_m = 40.0);

  std::string provider_id() const override { return id_; }
  AddressLabel lookup(const GeoPoint& p) override;

  std::size_t lookup_count() const { return lookups_.load(); }

 private:
  std::string id_;
  std::vector<Entry> entries_;
  double seed_radius_m_;
  GridIndex seed_grid_;
  std::vector<std::size_t> polygon_entries_;
  std::atomic<std::size_t> lookups_ = 0;
};

bool point_in_polygon(const GeoPoint& p, const std::vector<GeoPoint>& polygon);

}  // namespace geoaudit
