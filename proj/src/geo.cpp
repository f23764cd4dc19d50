#include "geoaudit/geo.hpp"

#include <algorithm>
#include <cmath>

namespace geoaudit {

namespace {
constexpr double kPi = 3.14159265358979323846;

double to_rad(double deg) { return deg * kPi / 180.0; }
}  // namespace

bool is_valid(const GeoPoint& p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 && p.lat <= 90.0 &&
         p.lon >= -180.0 && p.lon <= 180.0;
}

double haversine_m(const GeoPoint& a, const GeoPoint& b) {
  const double dlat = to_rad(b.lat - a.lat);
  const double dlon = to_rad(b.lon - a.lon);
  const double slat = std::sin(dlat / 2.0);
  const double slon = std::sin(dlon / 2.0);
  double h = slat * slat + std::cos(to_rad(a.lat)) * std::cos(to_rad(b.lat)) * slon * slon;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusM * std::atan2(std::sqrt(h), std::sqrt(1.0 - h));
}

GeoPoint geometric_midpoint(const std::vector<GeoPoint>& points) {
  if (points.empty()) throw std::invalid_argument("geometric_midpoint: empty point list");
  double lat = 0.0, lon = 0.0;
  for (const auto& p : points) {
    lat += p.lat;
    lon += p.lon;
  }
  const double n = static_cast<double>(points.size());
  return {lat / n, lon / n};
}

GridIndex::GridIndex(double cell_m) : cell_deg_(cell_m / kMetersPerDegreeLat) {
  if (cell_m <= 0.0) throw std::invalid_argument("GridIndex: cell size must be positive");
}

GridIndex::CellKey GridIndex::cell_of(const GeoPoint& p) const {
  return {static_cast<std::int64_t>(std::floor(p.lon / cell_deg_)),
          static_cast<std::int64_t>(std::floor(p.lat / cell_deg_))};
}

std::uint32_t GridIndex::insert(const GeoPoint& p, std::uint32_t payload) {
  const auto slot = static_cast<std::uint32_t>(items_.size());
  items_.emplace_back(p, payload);
  cells_[cell_of(p)].push_back(slot);
  return slot;
}

void GridIndex::query(const GeoPoint& p, double radius_m, std::vector<Hit>& out) const {
  out.clear();
  if (items_.empty()) return;
  const double dlat_deg = radius_m / kMetersPerDegreeLat;
  const double cos_lat = std::max(std::cos(to_rad(p.lat)), 1e-4);
  const double dlon_deg = radius_m / (kMetersPerDegreeLat * cos_lat);

  const auto x0 = static_cast<std::int64_t>(std::floor((p.lon - dlon_deg) / cell_deg_));
  const auto x1 = static_cast<std::int64_t>(std::floor((p.lon + dlon_deg) / cell_deg_));
  const auto y0 = static_cast<std::int64_t>(std::floor((p.lat - dlat_deg) / cell_deg_));
  const auto y1 = static_cast<std::int64_t>(std::floor((p.lat + dlat_deg) / cell_deg_));

  // Close to the poles the longitude window degenerates into a huge cell
  // range; a linear scan is exact and cheap enough there.
  if (x1 - x0 > 4096) {
    for (std::uint32_t slot = 0; slot < items_.size(); ++slot) {
      const double d = haversine_m(p, items_[slot].first);
      if (d <= radius_m) out.push_back(Hit{items_[slot].second, slot, d});
    }
  } else {
    for (std::int64_t y = y0; y <= y1; ++y) {
      for (std::int64_t x = x0; x <= x1; ++x) {
        auto it = cells_.find(CellKey{x, y});
        if (it == cells_.end()) continue;
        for (std::uint32_t slot : it->second) {
          const double d = haversine_m(p, items_[slot].first);
          if (d <= radius_m) out.push_back(Hit{items_[slot].second, slot, d});
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Hit& a, const Hit& b) {
    if (a.distance_m != b.distance_m) return a.distance_m < b.distance_m;
    return a.slot < b.slot;
  });
}

}  // namespace geoaudit
