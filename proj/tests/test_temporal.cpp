#include <doctest.h>

#include "geoaudit/synthgen.hpp"
#include "geoaudit/temporal.hpp"

using namespace geoaudit;

namespace {

std::int64_t utc(int y, int m, int d, int hh, int mm) {
  return days_from_civil({y, m, d}) * 86400 + hh * 3600 + mm * 60;
}

LocalizedPost lp(std::size_t idx, int y, int m, int d, int hh, int mm, int offset_minutes) {
  return localize_timestamp(idx, utc(y, m, d, hh, mm), offset_minutes);
}

// posts all on one local date, minutes given as (hour, minute) pairs
std::vector<LocalizedPost> day_posts(int y, int m, int d,
                                     const std::vector<std::pair<int, int>>& times) {
  std::vector<LocalizedPost> out;
  std::size_t i = 0;
  for (auto [hh, mm] : times) out.push_back(lp(i++, y, m, d, hh, mm, 0));
  return out;
}

}  // namespace

TEST_CASE("civil date round trip and weekday anchors") {
  CHECK(days_from_civil({1970, 1, 1}) == 0);
  CHECK(weekday_from_days(0) == 3);  // Thursday
  for (std::int64_t z : {-1000L, 0L, 1L, 10000L, 20000L}) {
    CHECK(days_from_civil(civil_from_days(z)) == z);
  }
  CHECK(weekday_from_days(days_from_civil({2015, 1, 5})) == 0);  // Monday
  CHECK(weekday_from_days(days_from_civil({2016, 1, 4})) == 0);
}

TEST_CASE("iso week anchors") {
  CHECK(iso_week_of({2016, 1, 4}) == IsoWeek{2016, 1});
  CHECK(iso_week_of({2005, 1, 1}) == IsoWeek{2004, 53});  // Saturday of week 53/2004
  CHECK(iso_week_of({2015, 12, 31}) == IsoWeek{2015, 53});
  CHECK(iso_week_of({2014, 12, 29}) == IsoWeek{2015, 1});  // Monday of week 1/2015
}

TEST_CASE("localize shifts by the cluster offset") {
  // UTC 12:00 with offset -300 -> local 07:00
  const auto a = lp(0, 2015, 6, 10, 12, 0, -300);
  CHECK(a.local_hour == 7);
  CHECK(a.local_date == CivilDate{2015, 6, 10});

  // UTC Saturday 01:00 with offset +120 -> Saturday 03:00
  const auto b = lp(0, 2015, 6, 13, 1, 0, 120);
  CHECK(b.local_hour == 3);
  CHECK(b.weekday == 5);

  // UTC Sunday 23:30 with offset +60 -> Monday 00:30
  const auto c = lp(0, 2015, 6, 14, 23, 30, 60);
  CHECK(c.local_hour == 0);
  CHECK(c.local_minute == 30);
  CHECK(c.weekday == 0);
  CHECK(c.local_date == CivilDate{2015, 6, 15});
}

TEST_CASE("day frame spans earliest to latest hour") {
  auto posts = day_posts(2015, 3, 4, {{8, 5}, {15, 55}});
  const auto f = day_frame(posts);
  REQUIRE(f.has_value());
  CHECK(f->start_hour == 8);
  CHECK(f->end_hour == 15);

  auto same_hour = day_posts(2015, 3, 4, {{9, 0}, {9, 59}});
  const auto g = day_frame(same_hour);
  REQUIRE(g.has_value());
  CHECK(g->start_hour == 9);
  CHECK(g->end_hour == 9);

  auto single = day_posts(2015, 3, 4, {{9, 0}});
  CHECK_FALSE(day_frame(single).has_value());
}

TEST_CASE("night shift merges across midnight") {
  // 23:00-23:50 on D, 00:10-06:30 on D+1, next post 16:00 on D+1
  std::vector<LocalizedPost> posts;
  posts.push_back(lp(0, 2015, 3, 2, 23, 0, 0));
  posts.push_back(lp(1, 2015, 3, 2, 23, 50, 0));
  posts.push_back(lp(2, 2015, 3, 3, 0, 10, 0));
  posts.push_back(lp(3, 2015, 3, 3, 6, 30, 0));
  posts.push_back(lp(4, 2015, 3, 3, 16, 0, 0));

  const auto shifts = merge_night_shifts(posts);
  REQUIRE(shifts.size() == 1);  // 16:00 alone forms no frame
  const auto& s = shifts.front();
  CHECK(s.merged_night_shift);
  CHECK(s.hours == std::vector<int>{23, 0, 1, 2, 3, 4, 5, 6});
  CHECK(s.span_minutes == doctest::Approx(450.0));
}

TEST_CASE("no merge when the morning part runs past 07:00") {
  std::vector<LocalizedPost> posts;
  posts.push_back(lp(0, 2015, 3, 2, 22, 0, 0));
  posts.push_back(lp(1, 2015, 3, 2, 23, 0, 0));
  posts.push_back(lp(2, 2015, 3, 3, 6, 0, 0));
  posts.push_back(lp(3, 2015, 3, 3, 7, 30, 0));
  const auto shifts = merge_night_shifts(posts);
  // the 07:30 post sits within eight hours of the candidate end, so the rest
  // requirement fails and both days stay separate frames
  for (const auto& s : shifts) CHECK_FALSE(s.merged_night_shift);
}

TEST_CASE("no merge without an eight hour rest") {
  std::vector<LocalizedPost> posts;
  posts.push_back(lp(0, 2015, 3, 2, 23, 0, 0));
  posts.push_back(lp(1, 2015, 3, 2, 23, 30, 0));
  posts.push_back(lp(2, 2015, 3, 3, 6, 30, 0));
  posts.push_back(lp(3, 2015, 3, 3, 9, 0, 0));  // only 2.5 h after the merged end
  const auto shifts = merge_night_shifts(posts);
  for (const auto& s : shifts) CHECK_FALSE(s.merged_night_shift);
}

TEST_CASE("merged shifts never exceed eight hours") {
  SplitMix64 rng(777);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<LocalizedPost> posts;
    std::size_t idx = 0;
    for (int day = 1; day <= 12; ++day) {
      const int n = rng.uniform_int(0, 5);
      for (int i = 0; i < n; ++i)
        posts.push_back(lp(idx++, 2015, 4, day, rng.uniform_int(0, 23), rng.uniform_int(0, 59), 0));
    }
    for (const auto& s : merge_night_shifts(posts))
      if (s.merged_night_shift) CHECK(s.span_minutes <= 8 * 60.0);
  }
}

TEST_CASE("night shift rules are configurable") {
  std::vector<LocalizedPost> posts;
  posts.push_back(lp(0, 2015, 3, 2, 23, 0, 0));
  posts.push_back(lp(1, 2015, 3, 2, 23, 50, 0));
  posts.push_back(lp(2, 2015, 3, 3, 0, 10, 0));
  posts.push_back(lp(3, 2015, 3, 3, 6, 30, 0));

  // default eight hours merges this 7.5 h window
  bool merged = false;
  for (const auto& s : merge_night_shifts(posts)) merged |= s.merged_night_shift;
  CHECK(merged);

  // a six-hour bound rejects it
  merged = false;
  for (const auto& s : merge_night_shifts(posts, {6.0, 420})) merged |= s.merged_night_shift;
  CHECK_FALSE(merged);

  // an end bound before 06:30 rejects it too
  merged = false;
  for (const auto& s : merge_night_shifts(posts, {8.0, 6 * 60})) merged |= s.merged_night_shift;
  CHECK_FALSE(merged);
}

TEST_CASE("dominant frame is a strict majority of frames") {
  auto frame_with_hours = [](int day, std::vector<int> hours) {
    ActiveFrame f;
    f.date = {2015, 5, day};
    f.hours = std::move(hours);
    return f;
  };
  // hour 9 on 3 of 5 days -> included
  std::vector<ActiveFrame> frames = {
      frame_with_hours(1, {9, 10}), frame_with_hours(2, {9, 10}), frame_with_hours(3, {9}),
      frame_with_hours(4, {11}), frame_with_hours(5, {7, 11})};
  auto dom = dominant_frame(frames);
  REQUIRE(dom.has_value());
  CHECK(dom->contains(9));
  CHECK_FALSE(dom->contains(7));   // 1 of 5
  CHECK_FALSE(dom->contains(11));  // 2 of 5

  // exactly half is not a majority
  std::vector<ActiveFrame> four = {frame_with_hours(1, {12}), frame_with_hours(2, {12}),
                                   frame_with_hours(3, {13}), frame_with_hours(4, {13})};
  dom = dominant_frame(four);
  REQUIRE(dom.has_value());
  CHECK(dom->empty());

  CHECK_FALSE(dominant_frame({}).has_value());
}

TEST_CASE("hour breadth counts distinct hours") {
  std::vector<LocalizedPost> posts = day_posts(2015, 3, 4, {{8, 10}, {8, 50}, {21, 0}});
  CHECK(hour_breadth(posts) == 2);
  CHECK(hour_breadth({}) == 0);

  std::vector<LocalizedPost> all;
  std::size_t i = 0;
  for (int h = 0; h < 24; ++h) {
    all.push_back(lp(i++, 2015, 3, 4, h, 0, 0));
    all.push_back(lp(i++, 2015, 3, 4, h, 30, 0));
  }
  CHECK(hour_breadth(all) == 24);
}

TEST_CASE("hour breadth is monotone under adding posts") {
  SplitMix64 rng(888);
  std::vector<LocalizedPost> posts;
  int prev = 0;
  for (std::size_t i = 0; i < 200; ++i) {
    posts.push_back(lp(i, 2015, 3, 1 + static_cast<int>(i % 27) % 28, rng.uniform_int(0, 23),
                       rng.uniform_int(0, 59), 0));
    const int b = hour_breadth(posts);
    CHECK(b >= prev);
    prev = b;
  }
}

TEST_CASE("localize keeps one entry per member post") {
  std::vector<PostRecord> posts;
  for (int i = 0; i < 10; ++i) {
    PostRecord r;
    r.post_id = "p" + std::to_string(i);
    r.user_id = "u";
    r.timestamp_utc = utc(2015, 2, 1, 10, i);
    r.coords = GeoPoint{40, -86};
    r.geotag_kind = GeotagKind::PreciseGPS;
    posts.push_back(std::move(r));
  }
  Cluster c;
  c.members = {0, 2, 4, 6, 8};
  c.midpoint = {40, -86};
  const auto localized = localize_cluster(c, posts, -300);
  REQUIRE(localized.size() == 5);
  std::set<std::size_t> indices;
  for (const auto& p : localized) {
    indices.insert(p.post_index);
    CHECK(p.ts_utc == posts[p.post_index].timestamp_utc);
    CHECK(p.local_hour == 5);  // 10:xx UTC at -300
  }
  CHECK(indices == std::set<std::size_t>{0, 2, 4, 6, 8});
}

TEST_CASE("time profile counts weekend and active weeks") {
  std::vector<LocalizedPost> posts;
  std::size_t i = 0;
  // week of 2015-01-05 (Mon): posts Mon + Sat
  posts.push_back(lp(i++, 2015, 1, 5, 10, 0, 0));
  posts.push_back(lp(i++, 2015, 1, 10, 11, 0, 0));
  // week of 2015-01-12: Mon only
  posts.push_back(lp(i++, 2015, 1, 12, 9, 0, 0));
  // week of 2015-01-19: Sun only
  posts.push_back(lp(i++, 2015, 1, 25, 14, 0, 0));

  const auto tp = build_time_profile(posts);
  CHECK(tp.active_week_count == 3);
  CHECK(tp.active_weekend_count == 2);
  CHECK(tp.breadth == 4);
}

TEST_CASE("box timezone provider: first matching box wins") {
  BoxTimezoneProvider tz({{-90, -80, 35, 45, -300}, {-180, 180, -90, 90, 0}});
  CHECK(tz.utc_offset_minutes({40, -86}) == -300);
  CHECK(tz.utc_offset_minutes({0, 0}) == 0);
  BoxTimezoneProvider none({{-90, -80, 35, 45, -300}});
  CHECK_FALSE(tz.utc_offset_minutes({40, -86}) == std::nullopt);
  CHECK(none.utc_offset_minutes({0, 100}) == std::nullopt);
}
