#include "geoaudit/temporal.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace geoaudit {

// Howard Hinnant's public-domain civil date algorithms.
std::int64_t days_from_civil(const CivilDate& d) {
  const int y = d.year - (d.month <= 2);
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (d.month + (d.month > 2 ? -3 : 9)) + 2) / 5 + d.day - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned day = doy - (153 * mp + 2) / 5 + 1;
  const unsigned month = mp + (mp < 10 ? 3 : -9);
  return {static_cast<int>(y + (month <= 2)), static_cast<int>(month), static_cast<int>(day)};
}

int weekday_from_days(std::int64_t z) {
  // 1970-01-01 was a Thursday (index 3 with Monday = 0).
  return static_cast<int>(((z % 7) + 10) % 7);
}

IsoWeek iso_week_of(const CivilDate& d) {
  const std::int64_t z = days_from_civil(d);
  const std::int64_t thursday = z + (3 - weekday_from_days(z));
  const CivilDate td = civil_from_days(thursday);
  const std::int64_t jan1 = days_from_civil({td.year, 1, 1});
  return {td.year, static_cast<int>((thursday - jan1) / 7 + 1)};
}

BoxTimezoneProvider BoxTimezoneProvider::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open timezone db: " + path.string());
  std::vector<Box> boxes;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    Box b{};
    char comma;
    if (!(ss >> b.min_lon >> comma >> b.max_lon >> comma >> b.min_lat >> comma >> b.max_lat >>
          comma >> b.offset_minutes))
      throw FormatError("timezone db line " + std::to_string(lineno));
    boxes.push_back(b);
  }
  if (boxes.empty()) throw FormatError("timezone db is empty: " + path.string());
  return BoxTimezoneProvider(std::move(boxes));
}

std::optional<int> BoxTimezoneProvider::utc_offset_minutes(const GeoPoint& p) const {
  for (const auto& b : boxes_) {
    if (p.lon >= b.min_lon && p.lon <= b.max_lon && p.lat >= b.min_lat && p.lat <= b.max_lat)
      return b.offset_minutes;
  }
  return std::nullopt;
}

LocalizedPost localize_timestamp(std::size_t post_index, std::int64_t ts_utc, int offset_minutes) {
  LocalizedPost lp;
  lp.post_index = post_index;
  lp.ts_utc = ts_utc;
  const std::int64_t local = ts_utc + static_cast<std::int64_t>(offset_minutes) * 60;
  std::int64_t days = local / 86400;
  std::int64_t sec = local % 86400;
  if (sec < 0) {
    sec += 86400;
    --days;
  }
  lp.local_date = civil_from_days(days);
  lp.local_hour = static_cast<int>(sec / 3600);
  lp.local_minute = static_cast<int>((sec % 3600) / 60);
  lp.weekday = weekday_from_days(days);
  lp.week = iso_week_of(lp.local_date);
  return lp;
}

std::vector<LocalizedPost> localize_cluster(const Cluster& cluster,
                                            const std::vector<PostRecord>& posts,
                                            int offset_minutes) {
  std::vector<LocalizedPost> out;
  out.reserve(cluster.members.size());
  for (std::size_t i : cluster.members)
    out.push_back(localize_timestamp(i, posts[i].timestamp_utc, offset_minutes));
  std::sort(out.begin(), out.end(),
            [](const LocalizedPost& a, const LocalizedPost& b) { return a.ts_utc < b.ts_utc; });
  return out;
}

std::optional<DayFrame> day_frame(const std::vector<LocalizedPost>& posts_of_date) {
  if (posts_of_date.size() < 2) return std::nullopt;
  DayFrame f;
  f.date = posts_of_date.front().local_date;
  f.start_hour = 24;
  f.end_hour = -1;
  f.first_ts = posts_of_date.front().ts_utc;
  f.last_ts = f.first_ts;
  for (const auto& p : posts_of_date) {
    if (p.ts_utc < f.first_ts) {
      f.first_ts = p.ts_utc;
    }
    if (p.ts_utc >= f.last_ts) {
      f.last_ts = p.ts_utc;
      f.last_minute_of_day = p.local_hour * 60 + p.local_minute;
    }
    f.start_hour = std::min(f.start_hour, p.local_hour);
    f.end_hour = std::max(f.end_hour, p.local_hour);
  }
  return f;
}

std::vector<DayFrame> day_frames(const std::vector<LocalizedPost>& posts) {
  std::map<CivilDate, std::vector<LocalizedPost>> by_date;
  for (const auto& p : posts) by_date[p.local_date].push_back(p);
  std::vector<DayFrame> out;
  for (const auto& [date, group] : by_date)
    if (auto f = day_frame(group)) out.push_back(*f);
  return out;
}

namespace {

bool rest_after(std::int64_t end_ts, std::int64_t rest_seconds,
                const std::vector<LocalizedPost>& posts) {
  // No post from this cluster for the full rest period after the shift.
  for (const auto& p : posts)
    if (p.ts_utc > end_ts && p.ts_utc < end_ts + rest_seconds) return false;
  return true;
}

int minute_of_day(const LocalizedPost& p) { return p.local_hour * 60 + p.local_minute; }

ActiveFrame frame_from_group(const std::vector<LocalizedPost>& group) {
  ActiveFrame a;
  a.date = group.front().local_date;
  int lo = 24, hi = -1;
  for (const auto& p : group) {
    lo = std::min(lo, p.local_hour);
    hi = std::max(hi, p.local_hour);
  }
  for (int h = lo; h <= hi; ++h) a.hours.push_back(h);
  a.span_minutes = static_cast<double>(group.back().ts_utc - group.front().ts_utc) / 60.0;
  return a;
}

}  // namespace

std::vector<ActiveFrame> merge_night_shifts(const std::vector<LocalizedPost>& posts,
                                            const NightShiftRules& rules) {
  const auto shift_seconds = static_cast<std::int64_t>(rules.shift_hours * 3600.0);
  std::map<std::int64_t, std::vector<LocalizedPost>> remaining;  // day number -> sorted posts
  for (const auto& p : posts) remaining[days_from_civil(p.local_date)].push_back(p);
  for (auto& [day, group] : remaining)
    std::sort(group.begin(), group.end(),
              [](const LocalizedPost& a, const LocalizedPost& b) { return a.ts_utc < b.ts_utc; });

  std::vector<ActiveFrame> out;
  for (auto it = remaining.begin(); it != remaining.end(); ++it) {
    auto& today = it->second;
    const auto next_it = remaining.find(it->first + 1);

    if (next_it != remaining.end() && !today.empty()) {
      auto& tomorrow = next_it->second;
      // Early portion of D+1: posts terminating by the end-of-shift bound.
      std::size_t early_end = 0;
      while (early_end < tomorrow.size() && minute_of_day(tomorrow[early_end]) <= rules.end_minute)
        ++early_end;
      if (early_end > 0) {
        const std::int64_t shift_end = tomorrow[early_end - 1].ts_utc;
        // Trailing posts of D inside the shift window ending at shift_end.
        std::size_t late_begin = today.size();
        while (late_begin > 0 && shift_end - today[late_begin - 1].ts_utc <= shift_seconds)
          --late_begin;
        if (late_begin < today.size() && rest_after(shift_end, shift_seconds, posts)) {
          ActiveFrame a;
          a.date = today[late_begin].local_date;
          a.merged_night_shift = true;
          for (int h = today[late_begin].local_hour; h <= 23; ++h) a.hours.push_back(h);
          int early_max_hour = 0;
          for (std::size_t i = 0; i < early_end; ++i)
            early_max_hour = std::max(early_max_hour, tomorrow[i].local_hour);
          for (int h = 0; h <= early_max_hour; ++h) a.hours.push_back(h);
          a.span_minutes = static_cast<double>(shift_end - today[late_begin].ts_utc) / 60.0;
          out.push_back(std::move(a));
          today.resize(late_begin);
          tomorrow.erase(tomorrow.begin(), tomorrow.begin() + early_end);
        }
      }
    }
    if (today.size() >= 2) out.push_back(frame_from_group(today));
  }
  return out;
}

std::optional<std::set<int>> dominant_frame(const std::vector<ActiveFrame>& frames) {
  if (frames.empty()) return std::nullopt;
  int count[24] = {};
  for (const auto& f : frames)
    for (int h : f.hours) ++count[h];
  std::set<int> dominant;
  const int n = static_cast<int>(frames.size());
  for (int h = 0; h < 24; ++h)
    if (2 * count[h] > n) dominant.insert(h);
  return dominant;
}

int hour_breadth(const std::vector<LocalizedPost>& posts) {
  bool seen[24] = {};
  for (const auto& p : posts) seen[p.local_hour] = true;
  int n = 0;
  for (bool b : seen) n += b;
  return n;
}

TimeProfile build_time_profile(const std::vector<LocalizedPost>& posts,
                               const NightShiftRules& rules) {
  TimeProfile tp;
  std::set<IsoWeek> weeks, weekend_weeks;
  for (const auto& p : posts) {
    weeks.insert(p.week);
    if (p.weekday >= 5) weekend_weeks.insert(p.week);
  }
  tp.active_week_count = static_cast<int>(weeks.size());
  tp.active_weekend_count = static_cast<int>(weekend_weeks.size());
  tp.frames = day_frames(posts);
  tp.shifts = merge_night_shifts(posts, rules);
  if (auto dom = dominant_frame(tp.shifts)) {
    tp.dominant = *dom;
    tp.has_dominant = true;
  }
  tp.breadth = hour_breadth(posts);
  return tp;
}

}  // namespace geoaudit
