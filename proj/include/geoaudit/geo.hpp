#pragma once

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

namespace geoaudit {

// Mean earth radius used for every distance in the pipeline.
inline constexpr double kEarthRadiusM = 6371000.0;
inline constexpr double kMetersPerDegreeLat = kEarthRadiusM * 3.14159265358979323846 / 180.0;

struct GeoPoint {
  double lat = 0.0;  // WGS84 degrees, [-90, 90]
  double lon = 0.0;  // WGS84 degrees, [-180, 180]

  bool operator==(const GeoPoint&) const = default;
};

bool is_valid(const GeoPoint& p);

// Great-circle distance on a sphere of radius kEarthRadiusM, in meters.
double haversine_m(const GeoPoint& a, const GeoPoint& b);

// Component-wise mean of lat/lon. Points are expected to span well under a
// kilometer (building scale), so planar averaging is fine; behavior across
// the antimeridian is unspecified. Throws std::invalid_argument on empty input.
GeoPoint geometric_midpoint(const std::vector<GeoPoint>& points);

// Uniform lat/lon bucket grid for radius queries over small radii (<= a few
// hundred meters). Cells are square in latitude degrees; queries probe every
// cell overlapping the bounding box of the radius disc, then filter by
// haversine distance, so results are exact away from the poles.
class GridIndex {
 public:
  explicit GridIndex(double cell_m);

  // Returns the insertion slot (0-based, monotonically increasing).
  std::uint32_t insert(const GeoPoint& p, std::uint32_t payload);

  struct Hit {
    std::uint32_t payload;
    std::uint32_t slot;  // insertion order
    double distance_m;
  };

  // All items with haversine distance <= radius_m, sorted by
  // (distance, insertion order). Callers wanting a strict bound filter the
  // boundary themselves.
  void query(const GeoPoint& p, double radius_m, std::vector<Hit>& out) const;

  std::size_t size() const { return items_.size(); }

 private:
  struct CellKey {
    std::int64_t x, y;
    bool operator==(const CellKey&) const = default;
  };
  struct CellHash {
    std::size_t operator()(const CellKey& c) const {
      std::uint64_t h = static_cast<std::uint64_t>(c.x) * 0x9E3779B97F4A7C15ull;
      h ^= static_cast<std::uint64_t>(c.y) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
      return static_cast<std::size_t>(h);
    }
  };

  CellKey cell_of(const GeoPoint& p) const;

  double cell_deg_;
  std::vector<std::pair<GeoPoint, std::uint32_t>> items_;
  std::unordered_map<CellKey, std::vector<std::uint32_t>, CellHash> cells_;
};

}  // namespace geoaudit
