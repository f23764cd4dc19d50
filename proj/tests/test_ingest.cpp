#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "geoaudit/ingest.hpp"
#include "geoaudit/synthgen.hpp"

using namespace geoaudit;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path;
}

std::string line(const std::string& post_id, const std::string& source,
                 bool with_coords = true) {
  std::string s = R"({"post_id":")" + post_id + R"(","user_id":"u1","ts":1400000000,)";
  if (with_coords) s += R"("lat":40.1,"lon":-86.2,)";
  s += R"("text":"hello","source":")" + source + R"(","geotag":")" +
       (with_coords ? "gps" : "none") + R"("})";
  return s;
}

}  // namespace

TEST_CASE("load_dataset filters by source app") {
  const auto path = temp_file("ga_ingest_filter.jsonl",
                              line("p1", "android") + "\n" + line("p2", "web") + "\n" +
                                  line("p3", "foursquare") + "\n");
  LoadStats stats;
  const auto data = load_dataset(path, kDefaultSourceFilter, &stats);
  REQUIRE(data.contains("u1"));
  CHECK(data.at("u1").posts.size() == 2);
  CHECK(stats.filtered_out == 1);
  CHECK(stats.parsed == 3);
}

TEST_CASE("load_dataset rejects an empty file") {
  const auto path = temp_file("ga_ingest_empty.jsonl", "");
  CHECK_THROWS_AS(load_dataset(path, kDefaultSourceFilter), FormatError);
}

TEST_CASE("load_dataset raises IoError for a missing file") {
  CHECK_THROWS_AS(load_dataset("/nonexistent/nope.jsonl", kDefaultSourceFilter), IoError);
}

TEST_CASE("duplicate post ids keep the first record") {
  const auto path =
      temp_file("ga_ingest_dup.jsonl", line("p1", "ios") + "\n" + line("p1", "ios") + "\n");
  LoadStats stats;
  const auto data = load_dataset(path, kDefaultSourceFilter, &stats);
  CHECK(data.at("u1").posts.size() == 1);
  CHECK(stats.duplicates == 1);
}

TEST_CASE("malformed lines are counted, strict mode aborts") {
  const auto path = temp_file("ga_ingest_bad.jsonl",
                              line("p1", "ios") + "\nnot json at all\n" + line("p2", "ios") + "\n");
  LoadStats stats;
  const auto data = load_dataset(path, kDefaultSourceFilter, &stats);
  CHECK(data.at("u1").posts.size() == 2);
  CHECK(stats.malformed == 1);
  CHECK_THROWS_AS(load_dataset(path, kDefaultSourceFilter, nullptr, true), FormatError);
}

TEST_CASE("record invariants are enforced at parse time") {
  // gps geotag without coordinates
  CHECK_THROWS_AS(parse_record_line(
                      R"({"post_id":"x","user_id":"u","ts":5,"text":"","source":"ios","geotag":"gps"})"),
                  FormatError);
  // untagged post with coordinates
  CHECK_THROWS_AS(
      parse_record_line(
          R"({"post_id":"x","user_id":"u","ts":5,"lat":1,"lon":2,"text":"","source":"ios","geotag":"none"})"),
      FormatError);
  // lat without lon
  CHECK_THROWS_AS(
      parse_record_line(
          R"({"post_id":"x","user_id":"u","ts":5,"lat":1,"text":"","source":"ios","geotag":"gps"})"),
      FormatError);
  // coarse geotags may carry coordinates (the historical leakage case)
  const auto r = parse_record_line(
      R"({"post_id":"x","user_id":"u","ts":5,"lat":1,"lon":2,"text":"","source":"ios","geotag":"coarse"})");
  CHECK(r.geotag_kind == GeotagKind::CoarsePlace);
  CHECK(r.coords.has_value());
}

TEST_CASE("round trip: serialize then load gives the records back") {
  SplitMix64 rng(7);
  Dataset original;
  for (int u = 0; u < 3; ++u) {
    UserTimeline tl;
    tl.user_id = "user" + std::to_string(u);
    for (int i = 0; i < 25; ++i) {
      PostRecord r;
      r.post_id = tl.user_id + "-" + std::to_string(i);
      r.user_id = tl.user_id;
      r.timestamp_utc = 1400000000 + i * 3600 + rng.uniform_int(0, 59);
      const bool coords = rng.chance(0.7);
      if (coords) r.coords = GeoPoint{rng.uniform(-80, 80), rng.uniform(-179, 179)};
      r.text = "text " + std::to_string(rng.uniform_int(0, 999));
      r.source_app = rng.chance(0.5) ? SourceApp::IOSOfficial : SourceApp::AndroidOfficial;
      r.geotag_kind = coords ? (rng.chance(0.3) ? GeotagKind::CoarsePlace : GeotagKind::PreciseGPS)
                             : GeotagKind::None;
      if (r.geotag_kind == GeotagKind::CoarsePlace) r.place_name = "some town";
      tl.posts.push_back(std::move(r));
    }
    original[tl.user_id] = std::move(tl);
  }
  const auto path = std::filesystem::temp_directory_path() / "ga_ingest_roundtrip.jsonl";
  write_dataset(path, original);
  const auto loaded = load_dataset(path, {SourceApp::IOSOfficial, SourceApp::AndroidOfficial});
  REQUIRE(loaded.size() == original.size());
  for (const auto& [user_id, tl] : original) {
    REQUIRE(loaded.contains(user_id));
    CHECK(loaded.at(user_id).posts == tl.posts);
  }
}

TEST_CASE("geotagged_subset keeps order and drops coordinate-free posts") {
  UserTimeline tl;
  tl.user_id = "u";
  for (int i = 0; i < 10; ++i) {
    PostRecord r;
    r.post_id = "p" + std::to_string(i);
    r.user_id = "u";
    r.timestamp_utc = 100 + i;
    if (i % 3 == 0) {
      r.coords = GeoPoint{1, 1};
      r.geotag_kind = GeotagKind::PreciseGPS;
    }
    tl.posts.push_back(std::move(r));
  }
  const auto g = geotagged_subset(tl);
  CHECK(g.posts.size() == 4);
  for (std::size_t i = 1; i < g.posts.size(); ++i)
    CHECK(g.posts[i - 1].timestamp_utc < g.posts[i].timestamp_utc);

  UserTimeline none;
  none.user_id = "u";
  CHECK(geotagged_subset(none).posts.empty());

  CHECK(geotagged_subset(g).posts.size() == g.posts.size());
}
