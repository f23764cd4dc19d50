#include "geoaudit/geocode.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

namespace geoaudit {

using nlohmann::json;

ProximityCache::ProximityCache(double radius_m) : radius_m_(radius_m), grid_(radius_m) {}

std::optional<AddressLabel> ProximityCache::find(const GeoPoint& p) const {
  std::lock_guard lock(mu_);
  std::vector<GridIndex::Hit> hits;
  grid_.query(p, radius_m_, hits);
  for (const auto& h : hits) {
    if (h.distance_m < radius_m_) return labels_[h.payload];  // strict bound
  }
  return std::nullopt;
}

void ProximityCache::insert(const GeoPoint& p, const AddressLabel& label) {
  std::lock_guard lock(mu_);
  const auto payload = static_cast<std::uint32_t>(labels_.size());
  labels_.push_back(label);
  grid_.insert(p, payload);
}

std::size_t ProximityCache::size() const {
  std::lock_guard lock(mu_);
  return labels_.size();
}

AddressLabel cached_reverse_geocode(const GeoPoint& p, ProximityCache& cache,
                                    GeocodeProvider& provider) {
  if (auto cached = cache.find(p)) {
    cache.count_hit();
    return *cached;
  }
  AddressLabel label;
  try {
    label = provider.lookup(p);
  } catch (const ProviderError&) {
    cache.count_provider_error();
    return AddressLabel::unknown();
  }
  cache.insert(p, label);
  cache.count_miss();
  return label;
}

std::vector<Cluster> verify_cluster_addresses(std::vector<Cluster> clusters,
                                              GeocodeProvider& authoritative, std::size_t k,
                                              std::vector<std::string>* diagnostics) {
  std::vector<std::size_t> order(clusters.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return clusters[a].rank < clusters[b].rank; });

  for (std::size_t i = 0; i < order.size() && i < k; ++i) {
    Cluster& c = clusters[order[i]];
    AddressLabel fresh;
    try {
      fresh = authoritative.lookup(c.midpoint);
    } catch (const ProviderError& e) {
      if (diagnostics)
        diagnostics->push_back("verify failed for cluster " + std::to_string(c.id) + ": " +
                               e.what());
      continue;
    }
    if (fresh.is_resolved() && fresh != c.label) c.label = fresh;
  }
  return clusters;
}

bool point_in_polygon(const GeoPoint& p, const std::vector<GeoPoint>& polygon) {
  // Even-odd rule on the lat/lon plane; fine for building-scale polygons.
  bool inside = false;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const auto& a = polygon[i];
    const auto& b = polygon[j];
    if ((a.lat > p.lat) != (b.lat > p.lat)) {
      const double x = (b.lon - a.lon) * (p.lat - a.lat) / (b.lat - a.lat) + a.lon;
      if (p.lon < x) inside = !inside;
    }
  }
  return inside;
}

FileGeocodeProvider::FileGeocodeProvider(std::string id, std::vector<Entry> entries,
                                         double seed_radius_m)
    : id_(std::move(id)),
      entries_(std::move(entries)),
      seed_radius_m_(seed_radius_m),
      seed_grid_(std::max(seed_radius_m, 1.0)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].seed) seed_grid_.insert(*entries_[i].seed, static_cast<std::uint32_t>(i));
    if (entries_[i].polygon.size() >= 3) polygon_entries_.push_back(i);
  }
}

FileGeocodeProvider FileGeocodeProvider::load(const std::filesystem::path& path, std::string id,
                                              double seed_radius_m) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open geocode db: " + path.string());
  std::vector<Entry> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
      Entry e;
      e.address = j.at("address").get<std::string>();
      if (j.contains("polygon")) {
        for (const auto& pair : j.at("polygon"))
          e.polygon.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
      } else {
        e.seed = GeoPoint{j.at("lat").get<double>(), j.at("lon").get<double>()};
      }
      entries.push_back(std::move(e));
    } catch (const json::exception& e) {
      throw FormatError("geocode db line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (entries.empty()) throw FormatError("geocode db is empty: " + path.string());
  return FileGeocodeProvider(std::move(id), std::move(entries), seed_radius_m);
}

AddressLabel FileGeocodeProvider::lookup(const GeoPoint& p) {
  ++lookups_;
  if (!is_valid(p)) throw ProviderError("invalid query point");
  for (std::size_t i : polygon_entries_)
    if (point_in_polygon(p, entries_[i].polygon)) return AddressLabel::resolved(entries_[i].address);

  std::vector<GridIndex::Hit> hits;
  seed_grid_.query(p, seed_radius_m_, hits);
  if (!hits.empty()) return AddressLabel::resolved(entries_[hits.front().payload].address);
  return AddressLabel::unknown();
}

}  // namespace geoaudit
