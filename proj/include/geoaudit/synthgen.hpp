#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "geoaudit/geocode.hpp"
#include "geoaudit/ground_truth.hpp"
#include "geoaudit/ingest.hpp"
#include "geoaudit/sensitive.hpp"
#include "geoaudit/temporal.hpp"

namespace geoaudit {

// SplitMix64: tiny, well-documented generator; streams split by drawing a
// fresh 64-bit seed from the parent.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool chance(double p) { return uniform() < p; }
  // Box-Muller; one draw per call, deterministic across platforms.
  double gaussian(double sigma);
  SplitMix64 split() { return SplitMix64(next()); }

 private:
  std::uint64_t state_;
};

struct PlaceSpec {
  GeoPoint point;
  std::string address;
};

struct ShiftSpec {
  int start_minute = 9 * 60;      // minute of local day
  int length_minutes = 8 * 60;    // at most eight hours
  std::vector<int> workdays = {0, 1, 2, 3, 4};  // 0 = Monday
  bool crosses_midnight() const { return start_minute + length_minutes > 24 * 60; }
};

struct WorkSpec {
  PlaceSpec place;
  ShiftSpec shift;
};

struct OtherPlaceSpec {
  PlaceSpec place;
  double daily_rate = 0.15;
  int hour_lo = 17, hour_hi = 22;
};

struct SensitiveVisitSpec {
  std::string venue_id;
  GeoPoint venue_point;
  std::vector<int> day_indices;  // 0-based simulation days with a visit
  std::vector<std::string> texts;
};

struct UserProfile {
  std::string user_id;
  std::uint64_t seed = 1;
  PlaceSpec home;
  std::optional<WorkSpec> work;
  std::vector<OtherPlaceSpec> other_places;
  std::vector<SensitiveVisitSpec> sensitive_visits;
  double gps_noise_sigma_m = 10.0;
  int weeks = 26;
  double posts_per_day = 3.0;
  int utc_offset_minutes = -300;
  CivilDate start_date{2015, 1, 5};  // a Monday
  SourceApp source = SourceApp::IOSOfficial;
};

std::string profile_to_json_line(const UserProfile& p);
UserProfile profile_from_json_line(const std::string& line);
std::vector<UserProfile> load_profiles(const std::filesystem::path& path);
void write_profiles(const std::filesystem::path& path, const std::vector<UserProfile>& profiles);

struct SynthUser {
  UserTimeline timeline;
  GroundTruthEntry truth;
};

// Deterministic given the profile (same seed twice gives byte-identical
// output). Coordinates get isotropic Gaussian noise; home posts appear every
// day with guaranteed weekend presence and wide hour coverage; work posts stay
// inside the shift window; sensitive visits emit at least two posts spanning
// at least half an hour. Throws InvalidProfile on contract violations.
SynthUser generate_user(const UserProfile& profile);

struct CorpusOptions {
  int users = 200;
  int weeks = 26;
  double sigma_m = 10.0;
  double posts_per_day = 3.0;
  double work_fraction = 0.85;
  double night_shift_fraction = 0.15;  // of workers
  double sensitive_fraction = 0.40;
  int utc_offset_minutes = -300;
  CivilDate start_date{2015, 1, 5};
};

struct Corpus {
  std::vector<UserProfile> profiles;
  Dataset dataset;
  GroundTruth ground_truth;
  std::vector<FileGeocodeProvider::Entry> geocode_entries;
  std::vector<Venue> venues;
  std::vector<BoxTimezoneProvider::Box> tz_boxes;

  int night_shift_users = 0;
};

// Lays users out on a synthetic city grid and emits everything the pipeline
// needs to run hermetically: timelines, a matching address database with
// street-grid distractors, a venue database, timezone boxes and the planted
// ground truth.
Corpus generate_corpus(std::uint64_t seed, const CorpusOptions& options = {});

// dataset.jsonl, geocode_db.jsonl, venues.csv, tz.csv, ground_truth.csv,
// profiles.jsonl under dir (created if missing).
void write_corpus(const std::filesystem::path& dir, const Corpus& corpus);

void write_geocode_db(const std::filesystem::path& path,
                      const std::vector<FileGeocodeProvider::Entry>& entries);
void write_venues(const std::filesystem::path& path, const std::vector<Venue>& venues);
void write_tz_boxes(const std::filesystem::path& path,
                    const std::vector<BoxTimezoneProvider::Box>& boxes);

}  // namespace geoaudit
