#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "geoaudit/cluster.hpp"
#include "geoaudit/geo.hpp"
#include "geoaudit/types.hpp"

namespace geoaudit {

struct CivilDate {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31
  auto operator<=>(const CivilDate&) const = default;
};

// Proleptic Gregorian day arithmetic (days since 1970-01-01).
std::int64_t days_from_civil(const CivilDate& d);
CivilDate civil_from_days(std::int64_t z);
int weekday_from_days(std::int64_t z);  // 0 = Monday .. 6 = Sunday

struct IsoWeek {
  int year = 0;
  int week = 0;  // 1..53, Monday-start weeks
  auto operator<=>(const IsoWeek&) const = default;
};
IsoWeek iso_week_of(const CivilDate& d);

// Maps a point to a fixed UTC offset in minutes. No DST; deterministic within
// a run.
class TimezoneProvider {
 public:
  virtual ~TimezoneProvider() = default;
  virtual std::string provider_id() const = 0;
  virtual std::optional<int> utc_offset_minutes(const GeoPoint& p) const = 0;
};

// Offline provider over bounding boxes; first matching box wins. File rows:
// min_lon,max_lon,min_lat,max_lat,offset_minutes
class BoxTimezoneProvider : public TimezoneProvider {
 public:
  struct Box {
    double min_lon, max_lon, min_lat, max_lat;
    int offset_minutes;
  };

  explicit BoxTimezoneProvider(std::vector<Box> boxes) : boxes_(std::move(boxes)) {}
  static BoxTimezoneProvider load(const std::filesystem::path& path);

  std::string provider_id() const override { return "tz-boxes"; }
  std::optional<int> utc_offset_minutes(const GeoPoint& p) const override;

  const std::vector<Box>& boxes() const { return boxes_; }

 private:
  std::vector<Box> boxes_;
};

struct LocalizedPost {
  std::size_t post_index = 0;  // into the user's geotagged post vector
  std::int64_t ts_utc = 0;
  CivilDate local_date;
  int local_hour = 0;    // 0..23
  int local_minute = 0;  // 0..59
  int weekday = 0;       // 0 = Monday .. 6 = Sunday, in local time
  IsoWeek week;
};

LocalizedPost localize_timestamp(std::size_t post_index, std::int64_t ts_utc, int offset_minutes);

// One entry per member post, all shifted by the offset of the cluster
// midpoint. Output is ordered by timestamp.
std::vector<LocalizedPost> localize_cluster(const Cluster& cluster,
                                            const std::vector<PostRecord>& posts,
                                            int offset_minutes);

// Earliest-to-latest hour span of one local date. Only dates with more than
// one post get a frame.
struct DayFrame {
  CivilDate date;
  int start_hour = 0;
  int end_hour = 0;  // inclusive; frame covers {start_hour..end_hour}
  std::int64_t first_ts = 0;
  std::int64_t last_ts = 0;
  int last_minute_of_day = 0;  // minute-of-day of the latest post
};

std::optional<DayFrame> day_frame(const std::vector<LocalizedPost>& posts_of_date);
std::vector<DayFrame> day_frames(const std::vector<LocalizedPost>& posts);

// A day frame after night-shift merging: either a single day's frame or a
// two-day shift whose hour set wraps midnight. Counts as one active day.
struct ActiveFrame {
  CivilDate date;  // starting date
  std::vector<int> hours;
  double span_minutes = 0.0;
  bool merged_night_shift = false;
};

struct NightShiftRules {
  double shift_hours = 8.0;  // maximum shift duration, and the required rest
  int end_minute = 7 * 60;   // the morning portion must terminate by 07:00
};

// Collapses activity windows that span two consecutive dates into single
// shifts: the trailing posts of date D join the posts of date D+1 that
// terminate by 07:00 when the combined window lasts at most eight hours and
// is followed by at least eight post-free hours. The merge consumes only the
// participating portions; leftover posts of either date still form their own
// frame when more than one remains (so a user working nightly keeps one shift
// per night even though every calendar date is active morning and evening).
std::vector<ActiveFrame> merge_night_shifts(const std::vector<LocalizedPost>& posts,
                                            const NightShiftRules& rules = {});

// Hours present in strictly more than half of the frames. Empty input has no
// dominant frame at all (nullopt); a non-empty input may still yield an empty
// set when no hour reaches a majority.
std::optional<std::set<int>> dominant_frame(const std::vector<ActiveFrame>& frames);

// Number of distinct local hours (0..23) with at least one post.
int hour_breadth(const std::vector<LocalizedPost>& posts);

struct TimeProfile {
  int active_weekend_count = 0;  // distinct ISO weeks with a Sat/Sun post
  int active_week_count = 0;     // distinct ISO weeks with any post
  std::vector<DayFrame> frames;
  std::vector<ActiveFrame> shifts;  // frames after night-shift merging
  std::set<int> dominant;
  bool has_dominant = false;
  int breadth = 0;
};

TimeProfile build_time_profile(const std::vector<LocalizedPost>& posts,
                               const NightShiftRules& rules = {});

// A second-level cluster with its localized posts and temporal profile; the
// unit every downstream inference consumes.
struct ClusterAnalysis {
  Cluster cluster;
  std::vector<LocalizedPost> posts;
  TimeProfile profile;
};

}  // namespace geoaudit
