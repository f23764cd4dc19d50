#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "geoaudit/temporal.hpp"
#include "geoaudit/textproc.hpp"

namespace geoaudit {

enum class SensitiveCategory { Health, Religion, SexNightlife };

std::string_view to_string(SensitiveCategory c);
std::optional<SensitiveCategory> parse_sensitive_category(std::string_view s);

struct Venue {
  std::string venue_id;
  std::string name;
  std::vector<std::string> category_path;  // root -> leaf, non-empty
  GeoPoint coords;
};

// CSV rows: venue_id,name,category_path(pipe-separated),lat,lon
std::vector<Venue> load_venues(const std::filesystem::path& path);

// Maps venue category strings to a sensitive category; a venue is classified
// by the deepest (leaf-most) mapped element of its category path. CSV rows:
// venue_category,sensitive_category
class CategoryMap {
 public:
  explicit CategoryMap(std::map<std::string, SensitiveCategory> mapping)
      : mapping_(std::move(mapping)) {}
  static CategoryMap load(const std::filesystem::path& path);

  std::optional<SensitiveCategory> classify(const Venue& v) const;

 private:
  std::map<std::string, SensitiveCategory> mapping_;
};

// Spatial index over the sensitive subset of a venue database.
class VenueIndex {
 public:
  VenueIndex(std::vector<Venue> venues, const CategoryMap& categories);

  struct Near {
    const Venue* venue;
    double distance_m;
    SensitiveCategory category;
  };
  // Sensitive venues within radius_m, sorted by (distance, venue_id).
  std::vector<Near> within(const GeoPoint& p, double radius_m) const;

  std::size_t sensitive_count() const { return venues_.size(); }

 private:
  std::vector<Venue> venues_;  // sensitive only
  std::vector<SensitiveCategory> categories_;
  GridIndex grid_;
};

struct PscVenue {
  std::string venue_id;
  std::string name;
  double distance_m;
  SensitiveCategory category;
};

// Potentially Sensitive Cluster: a cluster with at least one sensitive venue
// within the detection radius of its midpoint.
struct Psc {
  int cluster_id = 0;
  std::vector<PscVenue> nearby;  // sorted by distance, all within radius
  SensitiveCategory primary;     // category of the nearest venue
  std::set<SensitiveCategory> attributed;
};

std::vector<Psc> find_pscs(const std::vector<ClusterAnalysis>& clusters, const VenueIndex& venues,
                           double radius_m = 25.0);

// One lemma list per category; a lemma may appear in only one list.
class Wordlists {
 public:
  explicit Wordlists(std::map<SensitiveCategory, std::set<std::string>> lists);
  static Wordlists load(const std::filesystem::path& dir);  // health.txt, religion.txt, ...

  bool contains(SensitiveCategory c, const std::string& lemma) const;
  bool empty() const;

 private:
  std::map<SensitiveCategory, std::set<std::string>> lists_;
};

struct ContentEvidence {
  SensitiveCategory category;
  std::vector<std::string> terms;  // top terms that matched the category
};

// Matches when a top-scored term belongs to the wordlist of a category that is
// attributed to the PSC. The primary category wins when it matches at all;
// otherwise the category of the nearest matching venue.
std::optional<ContentEvidence> content_corroborate(const Psc& psc,
                                                   const std::vector<ScoredTerm>& top_terms,
                                                   const Wordlists& wordlists);

struct VisitParams {
  double max_gap_hours = 3.0;    // posts closer than this form one visit
  double min_span_minutes = 30;  // a visit must last at least this long
  double passby_minutes = 5;     // and strictly longer than this
};

struct DurationEvidence {
  enum class Kind { MultiDay, Visit };
  Kind kind;
  int distinct_dates = 0;
  std::int64_t visit_start_ts = 0;
  std::int64_t visit_end_ts = 0;
};

// Evidence of an actual visit: posts on two or more distinct local dates, or a
// single visit long enough to not be a pass-by. Single-post clusters never
// qualify.
std::optional<DurationEvidence> duration_corroborate(const std::vector<LocalizedPost>& posts,
                                                     const VisitParams& params = {});

}  // namespace geoaudit
