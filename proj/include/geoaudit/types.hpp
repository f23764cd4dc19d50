#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "geoaudit/geo.hpp"

namespace geoaudit {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ProviderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidProfile : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SourceApp { AndroidOfficial, IOSOfficial, Web, Foursquare, Other };
enum class GeotagKind { PreciseGPS, CoarsePlace, PointOfInterest, None };

std::optional<SourceApp> parse_source_app(std::string_view s);
std::optional<GeotagKind> parse_geotag_kind(std::string_view s);
std::string_view to_string(SourceApp s);
std::string_view to_string(GeotagKind k);

// ASCII case-fold, collapse runs of whitespace to single spaces, trim ends.
std::string normalize_address(std::string_view raw);

struct AddressLabel {
  enum class Kind { Resolved, Unknown };

  Kind kind = Kind::Unknown;
  std::string address;  // normalized; empty iff Unknown

  static AddressLabel resolved(std::string_view raw);
  static AddressLabel unknown() { return {}; }

  bool is_resolved() const { return kind == Kind::Resolved; }
  bool operator==(const AddressLabel&) const = default;
};

struct PostRecord {
  std::string post_id;
  std::string user_id;
  std::int64_t timestamp_utc = 0;  // seconds since epoch, > 0
  std::optional<GeoPoint> coords;
  std::string text;
  SourceApp source_app = SourceApp::Other;
  GeotagKind geotag_kind = GeotagKind::None;
  std::optional<std::string> place_name;

  bool operator==(const PostRecord&) const = default;
};

// Type-level invariants a record must satisfy (gps => coords, none => no
// coords, ts > 0, coords in range). Returns an explanation on failure.
std::optional<std::string> validate_record(const PostRecord& r);

}  // namespace geoaudit
