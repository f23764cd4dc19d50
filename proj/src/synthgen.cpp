#include "geoaudit/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "geoaudit/policy.hpp"

namespace geoaudit {

using nlohmann::json;

double SplitMix64::gaussian(double sigma) {
  // Box-Muller on two fresh uniforms; u clamped away from zero for the log.
  const double u = std::max(uniform(), 1e-12);
  const double v = uniform();
  return sigma * std::sqrt(-2.0 * std::log(u)) *
         std::cos(2.0 * 3.14159265358979323846 * v);
}

namespace {

GeoPoint offset_meters(const GeoPoint& base, double east_m, double north_m) {
  const double lat = base.lat + north_m / kMetersPerDegreeLat;
  const double lon =
      base.lon + east_m / (kMetersPerDegreeLat * std::cos(base.lat * 3.14159265358979323846 / 180.0));
  return {lat, lon};
}

GeoPoint jitter(const GeoPoint& base, double sigma_m, SplitMix64& rng) {
  const double north = rng.gaussian(sigma_m);
  const double east = rng.gaussian(sigma_m);
  return offset_meters(base, east, north);
}

std::string two_digits(int v) { return (v < 10 ? "0" : "") + std::to_string(v); }

std::string date_to_string(const CivilDate& d) {
  return std::to_string(d.year) + "-" + two_digits(d.month) + "-" + two_digits(d.day);
}

CivilDate date_from_string(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') throw FormatError("bad date: " + s);
  return {std::stoi(s.substr(0, 4)), std::stoi(s.substr(5, 2)), std::stoi(s.substr(8, 2))};
}

const std::vector<std::string> kNeutralTexts = {
    "good morning",     "so tired today",    "coffee first",
    "what a day",       "traffic was brutal", "dinner time",
    "early start tomorrow", "weekend vibes", "cant sleep",
    "lunch break",      "this weather though", "movie night"};

struct Emitter {
  const UserProfile& profile;
  SplitMix64 rng;
  std::vector<PostRecord> posts;
  int counter = 0;
  std::int64_t ios_cutoff;

  Emitter(const UserProfile& p)
      : profile(p), rng(p.seed), ios_cutoff(*PolicyCutoffs::defaults().ios) {}

  std::int64_t ts_of(int day_index, int minute_local) {
    const std::int64_t day = days_from_civil(profile.start_date) + day_index;
    return day * 86400 + static_cast<std::int64_t>(minute_local) * 60 +
           rng.uniform_int(0, 59) - static_cast<std::int64_t>(profile.utc_offset_minutes) * 60;
  }

  void emit(const GeoPoint& place, int day_index, int minute_local, const std::string& text) {
    PostRecord r;
    r.post_id = profile.user_id + "-" + std::to_string(counter++);
    r.user_id = profile.user_id;
    r.timestamp_utc = ts_of(day_index, minute_local);
    r.coords = jitter(place, profile.gps_noise_sigma_m, rng);
    r.text = text;
    r.source_app = profile.source;
    // Official apps attached GPS to coarse geotags before the policy change.
    const bool pre_cutoff = r.timestamp_utc < ios_cutoff;
    r.geotag_kind = (pre_cutoff && rng.chance(0.5)) ? GeotagKind::CoarsePlace : GeotagKind::PreciseGPS;
    if (r.geotag_kind == GeotagKind::CoarsePlace) r.place_name = "springfield";
    posts.push_back(std::move(r));
  }

  const std::string& neutral() {
    return kNeutralTexts[static_cast<std::size_t>(rng.uniform_int(
        0, static_cast<int>(kNeutralTexts.size()) - 1))];
  }
};

void validate_profile(const UserProfile& p) {
  if (p.user_id.empty()) throw InvalidProfile("empty user_id");
  if (p.weeks < 1) throw InvalidProfile("weeks must be >= 1");
  if (p.gps_noise_sigma_m < 0) throw InvalidProfile("negative noise sigma");
  if (p.posts_per_day < 0) throw InvalidProfile("negative post rate");
  if (!is_valid(p.home.point) || p.home.address.empty()) throw InvalidProfile("bad home place");
  if (p.work) {
    const auto& s = p.work->shift;
    if (s.length_minutes <= 0 || s.length_minutes > 8 * 60)
      throw InvalidProfile("shift length must be within eight hours");
    if (s.start_minute < 0 || s.start_minute >= 24 * 60) throw InvalidProfile("bad shift start");
    if (s.workdays.empty()) throw InvalidProfile("empty workdays");
    for (int d : s.workdays)
      if (d < 0 || d > 6) throw InvalidProfile("bad workday index");
  }
  for (const auto& v : p.sensitive_visits)
    if (v.texts.empty()) throw InvalidProfile("sensitive visit without texts");
}

}  // namespace

SynthUser generate_user(const UserProfile& profile) {
  validate_profile(profile);
  if (weekday_from_days(days_from_civil(profile.start_date)) != 0)
    throw InvalidProfile("start_date must be a Monday");

  Emitter em(profile);
  const int days = profile.weeks * 7;

  for (int d = 0; d < days; ++d) {
    const int weekday = d % 7;

    // Home: one evening post every day, morning posts most days, guaranteed
    // weekend activity, plus a slot that walks through all 24 hours over the
    // weeks so the home cluster ends up with broad hour coverage.
    em.emit(profile.home.point, d, em.rng.uniform_int(19 * 60, 23 * 60 + 50), em.neutral());
    if (em.rng.chance(0.8))
      em.emit(profile.home.point, d, em.rng.uniform_int(6 * 60, 8 * 60 + 59), em.neutral());
    if (weekday >= 5)
      em.emit(profile.home.point, d, em.rng.uniform_int(10 * 60, 16 * 60), em.neutral());
    if (weekday == 2) {
      const int hour = (1 + 5 * (d / 7)) % 24;
      em.emit(profile.home.point, d, hour * 60 + em.rng.uniform_int(0, 59), em.neutral());
    }
    const int extra = std::max(0, static_cast<int>(std::lround(profile.posts_per_day)) - 1);
    for (int i = 0; i < extra; ++i)
      if (em.rng.chance(0.5))
        em.emit(profile.home.point, d, em.rng.uniform_int(18 * 60, 23 * 60), em.neutral());

    // Work: a handful of posts spread over the shift. The fractions guarantee
    // posts on both sides of midnight for shifts that cross it.
    if (profile.work &&
        std::count(profile.work->shift.workdays.begin(), profile.work->shift.workdays.end(),
                   weekday)) {
      const auto& shift = profile.work->shift;
      for (double frac : {0.04, 0.15, 0.55, 0.92}) {
        int minute = shift.start_minute +
                     static_cast<int>(frac * shift.length_minutes) + em.rng.uniform_int(-4, 4);
        minute = std::clamp(minute, shift.start_minute,
                            shift.start_minute + shift.length_minutes - 1);
        const int day_index = d + minute / (24 * 60);
        em.emit(profile.work->place.point, day_index, minute % (24 * 60), em.neutral());
      }
    }

    for (const auto& other : profile.other_places) {
      if (!em.rng.chance(other.daily_rate)) continue;
      const int start = em.rng.uniform_int(other.hour_lo * 60, other.hour_hi * 60);
      em.emit(other.place.point, d, start, em.neutral());
      em.emit(other.place.point, d, std::min(start + em.rng.uniform_int(20, 55), 24 * 60 - 1),
              em.neutral());
    }

    for (const auto& visit : profile.sensitive_visits) {
      if (!std::count(visit.day_indices.begin(), visit.day_indices.end(), d)) continue;
      const int start = em.rng.uniform_int(10 * 60, 16 * 60);
      const int n_posts = em.rng.uniform_int(2, 3);
      const int span = em.rng.uniform_int(35, 80);  // minutes, past the pass-by bound
      for (int i = 0; i < n_posts; ++i) {
        const int minute = start + (span * i) / std::max(1, n_posts - 1);
        em.emit(visit.venue_point, d, minute,
                visit.texts[static_cast<std::size_t>(i) % visit.texts.size()]);
      }
    }
  }

  SynthUser out;
  out.timeline.user_id = profile.user_id;
  out.timeline.posts = std::move(em.posts);
  std::stable_sort(out.timeline.posts.begin(), out.timeline.posts.end(),
                   [](const PostRecord& a, const PostRecord& b) {
                     return a.timestamp_utc < b.timestamp_utc;
                   });

  out.truth.user_id = profile.user_id;
  out.truth.home_address = normalize_address(profile.home.address);
  if (profile.work) out.truth.work_address = normalize_address(profile.work->place.address);
  for (const auto& v : profile.sensitive_visits) out.truth.sensitive_venue_ids.push_back(v.venue_id);
  return out;
}

// ---------------------------------------------------------------------------
// corpus layout

namespace {

constexpr double kCityLat = 40.0;
constexpr double kCityLon = -86.0;
constexpr double kHomeSpacing = 600.0;  // meters between user anchors

const std::vector<std::string> kStreets = {"oak", "maple", "elm",   "cedar",
                                           "pine", "walnut", "birch", "spruce"};

struct CategoryKit {
  SensitiveCategory category;
  std::string venue_name;
  std::string venue_category;  // leaf category string
  std::vector<std::string> texts;
};

const std::vector<CategoryKit> kCategoryKits = {
    {SensitiveCategory::Health,
     "riverside clinic",
     "Clinic",
     {"waiting at the clinic for the doctor", "doctor appointment at the clinic this morning",
      "pharmacy run for my prescription"}},
    {SensitiveCategory::Religion,
     "grace church",
     "Church",
     {"beautiful sermon at church today", "prayer night at church",
      "sunday prayer with the family"}},
    {SensitiveCategory::SexNightlife,
     "neon nightclub",
     "Nightclub",
     {"cocktails at the nightclub tonight", "bartender hooked us up", "nightclub with the crew"}}};

GeoPoint city_point(double east_m, double north_m) {
  return offset_meters({kCityLat, kCityLon}, east_m, north_m);
}

std::vector<GeoPoint> square_polygon(const GeoPoint& center, double half_m) {
  return {offset_meters(center, -half_m, -half_m), offset_meters(center, half_m, -half_m),
          offset_meters(center, half_m, half_m), offset_meters(center, -half_m, half_m)};
}

}  // namespace

Corpus generate_corpus(std::uint64_t seed, const CorpusOptions& options) {
  Corpus corpus;
  SplitMix64 master(seed);

  const int workers_mod = 100;
  const int work_threshold = static_cast<int>(options.work_fraction * workers_mod);
  const int night_every =
      options.night_shift_fraction > 0
          ? std::max(2, static_cast<int>(std::lround(1.0 / options.night_shift_fraction)))
          : 0;
  const int sensitive_threshold = static_cast<int>(options.sensitive_fraction * workers_mod);

  int worker_index = 0;
  for (int i = 0; i < options.users; ++i) {
    UserProfile p;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "u%03d", i);
    p.user_id = buf;
    p.seed = master.next();
    p.weeks = options.weeks;
    p.gps_noise_sigma_m = options.sigma_m;
    p.posts_per_day = options.posts_per_day;
    p.utc_offset_minutes = options.utc_offset_minutes;
    p.start_date = options.start_date;

    const int gx = i % 20, gy = i / 20;
    const double ex = gx * kHomeSpacing, ny = gy * kHomeSpacing;

    p.home.point = city_point(ex, ny);
    p.home.address = std::to_string(100 + 2 * gx) + " " + kStreets[gy % 8] + " st" +
                     (gy >= 8 ? " n" + std::to_string(gy / 8) : "");

    const bool has_work = (i * 37) % workers_mod < work_threshold;
    if (has_work) {
      WorkSpec w;
      w.place.point = city_point(ex + 280.0, ny + 240.0);
      w.place.address = std::to_string(400 + i) + " commerce blvd";
      const bool night = night_every > 0 && worker_index % night_every == 3 % night_every;
      if (night) {
        w.shift.start_minute = 1305 + (i % 4) * 15;  // 21:45 .. 22:30
        w.shift.length_minutes = 450;                // 7.5 h, ends by 06:00
        ++corpus.night_shift_users;
      } else {
        w.shift.start_minute = 8 * 60 + (i % 5) * 30;  // 08:00 .. 10:00
        w.shift.length_minutes = 420 + (i % 3) * 30;   // 7 .. 8 h
      }
      p.work = std::move(w);
      ++worker_index;
    }

    OtherPlaceSpec cafe;
    cafe.place.point = city_point(ex, ny + 280.0);
    cafe.place.address = std::to_string(10 + i) + " river rd";
    cafe.daily_rate = 0.18;
    OtherPlaceSpec gym;
    gym.place.point = city_point(ex - 260.0, ny);
    gym.place.address = std::to_string(10 + i) + " harbor ave";
    gym.daily_rate = 0.12;
    gym.hour_lo = 18;
    gym.hour_hi = 21;
    p.other_places = {cafe, gym};

    const bool has_sensitive = (i * 53 + 11) % workers_mod < sensitive_threshold;
    if (has_sensitive) {
      const auto& kit = kCategoryKits[i % kCategoryKits.size()];
      SensitiveVisitSpec visit;
      std::snprintf(buf, sizeof(buf), "v%03d", i);
      visit.venue_id = buf;
      visit.venue_point = city_point(ex + 250.0, ny - 250.0);
      const int total_days = options.weeks * 7;
      visit.day_indices = {std::min(20 + i % 50, total_days - 1),
                           std::min(80 + i % 40, total_days - 1)};
      visit.texts = kit.texts;

      Venue v;
      v.venue_id = visit.venue_id;
      v.name = kit.venue_name + " " + std::to_string(i);
      v.category_path = {"Venue", kit.venue_category};
      v.coords = visit.venue_point;
      corpus.venues.push_back(std::move(v));
      p.sensitive_visits.push_back(std::move(visit));
    }

    corpus.profiles.push_back(std::move(p));
  }

  // Address database: planted places, venue street addresses for every other
  // venue, and four street-grid distractors around each planted point.
  std::vector<std::pair<GeoPoint, std::string>> planted;
  for (const auto& p : corpus.profiles) {
    planted.emplace_back(p.home.point, p.home.address);
    if (p.work) planted.emplace_back(p.work->place.point, p.work->place.address);
    for (const auto& o : p.other_places) planted.emplace_back(o.place.point, o.place.address);
  }
  for (std::size_t vi = 0; vi < corpus.venues.size(); ++vi) {
    if (vi % 2 == 0)
      planted.emplace_back(corpus.venues[vi].coords,
                           corpus.venues[vi].venue_id + " sycamore ct");
  }

  std::size_t place_index = 0;
  for (const auto& [point, address] : planted) {
    FileGeocodeProvider::Entry e;
    e.address = address;
    // Every seventh workplace gets a parcel polygon instead of a seed point.
    if (place_index % 7 == 3 && address.find("commerce") != std::string::npos)
      e.polygon = square_polygon(point, 20.0);
    else
      e.seed = point;
    corpus.geocode_entries.push_back(std::move(e));

    int k = 0;
    for (auto [de, dn] :
         {std::pair{120.0, 0.0}, {-120.0, 0.0}, {0.0, 120.0}, {0.0, -120.0}}) {
      FileGeocodeProvider::Entry d;
      d.address = "grid " + std::to_string(place_index) + "-" + std::to_string(k++);
      d.seed = offset_meters(point, de, dn);
      corpus.geocode_entries.push_back(std::move(d));
    }
    ++place_index;
  }

  // Distractor venues: one non-sensitive venue near every tenth cafe and one
  // sensitive venue well away from any cluster midpoint.
  for (int i = 0; i < options.users; i += 10) {
    const auto& p = corpus.profiles[static_cast<std::size_t>(i)];
    Venue coffee;
    coffee.venue_id = "nv" + std::to_string(i);
    coffee.name = "corner coffee " + std::to_string(i);
    coffee.category_path = {"Venue", "Coffee Shop"};
    coffee.coords = offset_meters(p.other_places.front().place.point, 8.0, 0.0);
    corpus.venues.push_back(std::move(coffee));

    Venue far;
    far.venue_id = "fv" + std::to_string(i);
    far.name = "st mary hospital " + std::to_string(i);
    far.category_path = {"Venue", "Hospital"};
    far.coords = offset_meters(p.home.point, 90.0, 90.0);
    corpus.venues.push_back(std::move(far));
  }

  corpus.tz_boxes.push_back({kCityLon - 0.2, kCityLon + 0.4, kCityLat - 0.1, kCityLat + 0.3,
                             options.utc_offset_minutes});

  for (const auto& p : corpus.profiles) {
    auto user = generate_user(p);
    corpus.ground_truth[user.truth.user_id] = user.truth;
    corpus.dataset[user.timeline.user_id] = std::move(user.timeline);
  }
  return corpus;
}

// ---------------------------------------------------------------------------
// serialization

std::string profile_to_json_line(const UserProfile& p) {
  json j;
  j["user_id"] = p.user_id;
  j["seed"] = p.seed;
  j["weeks"] = p.weeks;
  j["sigma_m"] = p.gps_noise_sigma_m;
  j["posts_per_day"] = p.posts_per_day;
  j["utc_offset_minutes"] = p.utc_offset_minutes;
  j["start_date"] = date_to_string(p.start_date);
  j["source"] = to_string(p.source);
  j["home"] = {{"lat", p.home.point.lat}, {"lon", p.home.point.lon}, {"address", p.home.address}};
  if (p.work) {
    j["work"] = {{"lat", p.work->place.point.lat},
                 {"lon", p.work->place.point.lon},
                 {"address", p.work->place.address},
                 {"shift_start_minute", p.work->shift.start_minute},
                 {"shift_length_minutes", p.work->shift.length_minutes},
                 {"workdays", p.work->shift.workdays}};
  }
  j["other_places"] = json::array();
  for (const auto& o : p.other_places)
    j["other_places"].push_back({{"lat", o.place.point.lat},
                                 {"lon", o.place.point.lon},
                                 {"address", o.place.address},
                                 {"daily_rate", o.daily_rate},
                                 {"hour_lo", o.hour_lo},
                                 {"hour_hi", o.hour_hi}});
  j["sensitive_visits"] = json::array();
  for (const auto& v : p.sensitive_visits)
    j["sensitive_visits"].push_back({{"venue_id", v.venue_id},
                                     {"lat", v.venue_point.lat},
                                     {"lon", v.venue_point.lon},
                                     {"days", v.day_indices},
                                     {"texts", v.texts}});
  return j.dump();
}

UserProfile profile_from_json_line(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad profile json: ") + e.what());
  }
  UserProfile p;
  try {
    p.user_id = j.at("user_id").get<std::string>();
    p.seed = j.at("seed").get<std::uint64_t>();
    p.weeks = j.value("weeks", 26);
    p.gps_noise_sigma_m = j.value("sigma_m", 10.0);
    p.posts_per_day = j.value("posts_per_day", 3.0);
    p.utc_offset_minutes = j.value("utc_offset_minutes", -300);
    p.start_date = date_from_string(j.value("start_date", std::string("2015-01-05")));
    if (auto s = parse_source_app(j.value("source", std::string("ios")))) p.source = *s;
    p.home.point = {j.at("home").at("lat").get<double>(), j.at("home").at("lon").get<double>()};
    p.home.address = j.at("home").at("address").get<std::string>();
    if (j.contains("work")) {
      WorkSpec w;
      w.place.point = {j["work"].at("lat").get<double>(), j["work"].at("lon").get<double>()};
      w.place.address = j["work"].at("address").get<std::string>();
      w.shift.start_minute = j["work"].value("shift_start_minute", 540);
      w.shift.length_minutes = j["work"].value("shift_length_minutes", 480);
      if (j["work"].contains("workdays"))
        w.shift.workdays = j["work"]["workdays"].get<std::vector<int>>();
      p.work = std::move(w);
    }
    for (const auto& o : j.value("other_places", json::array())) {
      OtherPlaceSpec spec;
      spec.place.point = {o.at("lat").get<double>(), o.at("lon").get<double>()};
      spec.place.address = o.at("address").get<std::string>();
      spec.daily_rate = o.value("daily_rate", 0.15);
      spec.hour_lo = o.value("hour_lo", 17);
      spec.hour_hi = o.value("hour_hi", 22);
      p.other_places.push_back(std::move(spec));
    }
    for (const auto& v : j.value("sensitive_visits", json::array())) {
      SensitiveVisitSpec spec;
      spec.venue_id = v.at("venue_id").get<std::string>();
      spec.venue_point = {v.at("lat").get<double>(), v.at("lon").get<double>()};
      spec.day_indices = v.value("days", std::vector<int>{});
      spec.texts = v.value("texts", std::vector<std::string>{});
      p.sensitive_visits.push_back(std::move(spec));
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad profile field: ") + e.what());
  }
  return p;
}

std::vector<UserProfile> load_profiles(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open profiles: " + path.string());
  std::vector<UserProfile> out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(profile_from_json_line(line));
  return out;
}

void write_profiles(const std::filesystem::path& path, const std::vector<UserProfile>& profiles) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write profiles: " + path.string());
  for (const auto& p : profiles) out << profile_to_json_line(p) << '\n';
}

void write_geocode_db(const std::filesystem::path& path,
                      const std::vector<FileGeocodeProvider::Entry>& entries) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write geocode db: " + path.string());
  for (const auto& e : entries) {
    json j;
    j["address"] = e.address;
    if (!e.polygon.empty()) {
      json poly = json::array();
      for (const auto& p : e.polygon) poly.push_back({p.lat, p.lon});
      j["polygon"] = poly;
    } else if (e.seed) {
      j["lat"] = e.seed->lat;
      j["lon"] = e.seed->lon;
    }
    out << j.dump() << '\n';
  }
}

void write_venues(const std::filesystem::path& path, const std::vector<Venue>& venues) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write venues: " + path.string());
  out.precision(12);
  for (const auto& v : venues) {
    out << v.venue_id << ',' << v.name << ',';
    for (std::size_t i = 0; i < v.category_path.size(); ++i) {
      if (i) out << '|';
      out << v.category_path[i];
    }
    out << ',' << v.coords.lat << ',' << v.coords.lon << '\n';
  }
}

void write_tz_boxes(const std::filesystem::path& path,
                    const std::vector<BoxTimezoneProvider::Box>& boxes) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write timezone db: " + path.string());
  out.precision(12);
  for (const auto& b : boxes)
    out << b.min_lon << ',' << b.max_lon << ',' << b.min_lat << ',' << b.max_lat << ','
        << b.offset_minutes << '\n';
}

void write_corpus(const std::filesystem::path& dir, const Corpus& corpus) {
  std::filesystem::create_directories(dir);
  write_dataset(dir / "dataset.jsonl", corpus.dataset);
  write_geocode_db(dir / "geocode_db.jsonl", corpus.geocode_entries);
  write_venues(dir / "venues.csv", corpus.venues);
  write_tz_boxes(dir / "tz.csv", corpus.tz_boxes);
  write_ground_truth(dir / "ground_truth.csv", corpus.ground_truth);
  write_profiles(dir / "profiles.jsonl", corpus.profiles);
}

}  // namespace geoaudit
