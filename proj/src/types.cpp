#include "geoaudit/types.hpp"

#include <cctype>

namespace geoaudit {

std::optional<SourceApp> parse_source_app(std::string_view s) {
  if (s == "android") return SourceApp::AndroidOfficial;
  if (s == "ios") return SourceApp::IOSOfficial;
  if (s == "web") return SourceApp::Web;
  if (s == "foursquare") return SourceApp::Foursquare;
  if (s == "other") return SourceApp::Other;
  return std::nullopt;
}

std::optional<GeotagKind> parse_geotag_kind(std::string_view s) {
  if (s == "gps") return GeotagKind::PreciseGPS;
  if (s == "coarse") return GeotagKind::CoarsePlace;
  if (s == "poi") return GeotagKind::PointOfInterest;
  if (s == "none") return GeotagKind::None;
  return std::nullopt;
}

std::string_view to_string(SourceApp s) {
  switch (s) {
    case SourceApp::AndroidOfficial: return "android";
    case SourceApp::IOSOfficial: return "ios";
    case SourceApp::Web: return "web";
    case SourceApp::Foursquare: return "foursquare";
    case SourceApp::Other: return "other";
  }
  return "other";
}

std::string_view to_string(GeotagKind k) {
  switch (k) {
    case GeotagKind::PreciseGPS: return "gps";
    case GeotagKind::CoarsePlace: return "coarse";
    case GeotagKind::PointOfInterest: return "poi";
    case GeotagKind::None: return "none";
  }
  return "none";
}

std::string normalize_address(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (unsigned char c : raw) {
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

AddressLabel AddressLabel::resolved(std::string_view raw) {
  AddressLabel l;
  l.address = normalize_address(raw);
  l.kind = l.address.empty() ? Kind::Unknown : Kind::Resolved;
  return l;
}

std::optional<std::string> validate_record(const PostRecord& r) {
  if (r.post_id.empty()) return "empty post_id";
  if (r.user_id.empty()) return "empty user_id";
  if (r.timestamp_utc <= 0) return "non-positive timestamp";
  if (r.coords && !is_valid(*r.coords)) return "coordinates out of range";
  if (r.geotag_kind == GeotagKind::PreciseGPS && !r.coords) return "gps geotag without coordinates";
  if (r.geotag_kind == GeotagKind::None && r.coords) return "untagged post with coordinates";
  return std::nullopt;
}

}  // namespace geoaudit
