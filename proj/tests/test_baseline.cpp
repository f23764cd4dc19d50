#include <doctest.h>

#include <algorithm>
#include <map>

#include "geoaudit/baseline.hpp"
#include "geoaudit/synthgen.hpp"

using namespace geoaudit;

namespace {

std::int64_t utc(const CivilDate& d, int hh, int mm) {
  return days_from_civil(d) * 86400 + hh * 3600 + mm * 60;
}

CivilDate nth_day(int n) { return civil_from_days(days_from_civil({2015, 1, 5}) + n); }

struct Builder {
  std::vector<PostRecord> posts;
  std::map<int, ClusterAnalysis> clusters;

  void add(int cluster_id, const CivilDate& date, int hh, int mm, GeoPoint at = {40, -86}) {
    const std::size_t index = posts.size();
    PostRecord r;
    r.post_id = "p" + std::to_string(index);
    r.user_id = "u";
    r.timestamp_utc = utc(date, hh, mm);
    r.coords = at;
    r.geotag_kind = GeotagKind::PreciseGPS;
    posts.push_back(std::move(r));

    auto& ca = clusters[cluster_id];
    ca.cluster.id = cluster_id;
    ca.cluster.midpoint = at;
    ca.cluster.members.push_back(index);
    ca.posts.push_back(localize_timestamp(index, utc(date, hh, mm), 0));
  }

  std::vector<ClusterAnalysis> build() {
    std::vector<ClusterAnalysis> out;
    for (auto& [id, ca] : clusters) {
      std::sort(ca.posts.begin(), ca.posts.end(),
                [](const LocalizedPost& a, const LocalizedPost& b) { return a.ts_utc < b.ts_utc; });
      ca.profile = build_time_profile(ca.posts);
      out.push_back(ca);
    }
    return out;
  }
};

}  // namespace

TEST_CASE("H1 and H15 pick by cluster size") {
  Builder b;
  for (int i = 0; i < 40; ++i) b.add(0, nth_day(i % 20), 10, i % 60);
  for (int i = 0; i < 25; ++i) b.add(1, nth_day(i % 20), 11, i % 60);
  for (int i = 0; i < 3; ++i) b.add(2, nth_day(i), 12, 0);
  const auto clusters = b.build();

  CHECK(run_baseline(HeuristicId::H1_LargestCluster, clusters, b.posts) == 0);
  CHECK(run_baseline(HeuristicId::H15_SecondLargest, clusters, b.posts) == 1);

  // brute-force oracle for H1: argmax by member count
  const ClusterAnalysis* biggest = &clusters.front();
  for (const auto& ca : clusters)
    if (ca.cluster.members.size() > biggest->cluster.members.size()) biggest = &ca;
  CHECK(run_baseline(HeuristicId::H1_LargestCluster, clusters, b.posts) == biggest->cluster.id);
}

TEST_CASE("H2 counts posts in the wrapping 20:00-8:00 window") {
  Builder b;
  for (int i = 0; i < 10; ++i) b.add(0, nth_day(i), 21, 0);
  for (int i = 0; i < 12; ++i) {
    if (i % 2)
      b.add(1, nth_day(i), 23, 0);
    else
      b.add(1, nth_day(i), 6, 30);
  }
  const auto clusters = b.build();
  CHECK(run_baseline(HeuristicId::H2_Night20to8, clusters, b.posts) == 1);

  // oracle: naive filter count
  std::map<int, int> counts;
  for (const auto& ca : clusters)
    for (const auto& p : ca.posts)
      if (p.local_hour >= 20 || p.local_hour < 8) ++counts[ca.cluster.id];
  CHECK(counts[1] > counts[0]);
}

TEST_CASE("H3 uses the midnight-to-seven window") {
  Builder b;
  for (int i = 0; i < 6; ++i) b.add(0, nth_day(i), 22, 0);  // 22:00 outside 24:00-7:00
  for (int i = 0; i < 4; ++i) b.add(1, nth_day(i), 3, 0);
  const auto clusters = b.build();
  CHECK(run_baseline(HeuristicId::H3_Night24to7, clusters, b.posts) == 1);
}

TEST_CASE("H4 takes the last destination of shifted days, majority vote") {
  Builder b;
  // day 0: posts in A then B (last destination B, before 3am next day)
  b.add(0, nth_day(0), 10, 0);
  b.add(1, nth_day(0), 22, 0);
  // day 1: post at 01:30 belongs to day 1's shifted predecessor... build day 1
  // wholly: A at 9:00, A at 23:00 -> last is A
  b.add(0, nth_day(1), 9, 0);
  b.add(0, nth_day(1), 23, 0);
  // day 2: B at 11:00, then A at 02:40 on day 3 (early hours attach to day 2)
  b.add(1, nth_day(2), 11, 0);
  b.add(0, nth_day(3), 2, 40);
  const auto clusters = b.build();

  // majority-vote oracle over shifted-day last destinations: {B, A, A} -> A
  CHECK(run_baseline(HeuristicId::H4_LastDestBefore3am, clusters, b.posts) == 0);
}

TEST_CASE("H5 skips days with small-hour posts") {
  Builder b;
  // day 0 ends in B with no posts before 07:00
  b.add(0, nth_day(0), 10, 0);
  b.add(1, nth_day(0), 22, 0);
  // day 1 ends in A but has a 02:00 post (attached to day 0? no: 02:00 on day 1
  // attaches to day 0) -- so day 0 now has a night post and is skipped
  b.add(0, nth_day(1), 2, 0);
  b.add(0, nth_day(1), 9, 0);
  b.add(0, nth_day(1), 21, 0);
  const auto clusters = b.build();

  // H4 counts both days: {day0: last A(02:00), day1: last A} -> A
  CHECK(run_baseline(HeuristicId::H4_LastDestBefore3am, clusters, b.posts) == 0);
  // H5 drops day 0 (contains the 02:00 post) and keeps day 1 -> A
  CHECK(run_baseline(HeuristicId::H5_LastDestNoNightDays, clusters, b.posts) == 0);
}

TEST_CASE("pagerank: single edge ranks the sink first in destination mode") {
  TransitionGraph g;
  g.nodes = {0, 1};
  g.edges[{0, 1}] = 3.0;

  const auto dest = weighted_pagerank(g, PageRankMode::Destinations);
  CHECK(dest.front().first == 1);
  const auto orig = weighted_pagerank(g, PageRankMode::Origins);
  CHECK(orig.front().first == 0);

  double sum = 0;
  for (const auto& [id, score] : dest) sum += score;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("pagerank: symmetric graph ties break by id") {
  TransitionGraph g;
  g.nodes = {4, 7};
  g.edges[{4, 7}] = 2.0;
  g.edges[{7, 4}] = 2.0;
  const auto ranks = weighted_pagerank(g, PageRankMode::Destinations);
  CHECK(ranks[0].second == doctest::Approx(ranks[1].second).epsilon(1e-12));
  CHECK(ranks[0].first == 4);
}

TEST_CASE("pagerank scores sum to one and are a fixed point") {
  SplitMix64 rng(31);
  TransitionGraph g;
  for (int i = 0; i < 12; ++i) g.nodes.push_back(i);
  for (int i = 0; i < 30; ++i) {
    const int u = rng.uniform_int(0, 11), v = rng.uniform_int(0, 11);
    if (u != v) g.edges[{u, v}] += rng.uniform_int(1, 5);
  }
  const auto r100 = weighted_pagerank(g, PageRankMode::Destinations, 0.85, 100);
  const auto r101 = weighted_pagerank(g, PageRankMode::Destinations, 0.85, 101);

  double sum = 0;
  std::map<int, double> by_id;
  for (const auto& [id, score] : r100) {
    sum += score;
    by_id[id] = score;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  for (const auto& [id, score] : r101) CHECK(score == doctest::Approx(by_id[id]).epsilon(1e-8));
}

TEST_CASE("transition graph counts same-day consecutive moves") {
  Builder b;
  b.add(0, nth_day(0), 9, 0);
  b.add(1, nth_day(0), 12, 0);   // 0 -> 1
  b.add(1, nth_day(0), 13, 0);   // same cluster, no edge
  b.add(0, nth_day(0), 18, 0);   // 1 -> 0
  b.add(1, nth_day(1), 9, 0);    // new day: no overnight edge
  b.add(0, nth_day(1), 11, 0);   // 1 -> 0
  const auto clusters = b.build();
  const auto g = build_transition_graph(clusters);
  CHECK(g.edges.at({0, 1}) == doctest::Approx(1.0));
  CHECK(g.edges.at({1, 0}) == doctest::Approx(2.0));
  CHECK(g.edges.size() == 2);
}

TEST_CASE("H8 and H14 count unique days inside their windows") {
  Builder b;
  // rest/leisure activity for cluster 0 on 3 days, cluster 1 on 2 days
  b.add(0, nth_day(0), 3, 0);
  b.add(0, nth_day(1), 20, 0);
  b.add(0, nth_day(2), 1, 30);
  b.add(1, nth_day(0), 5, 0);
  b.add(1, nth_day(1), 23, 0);
  // active-hours activity: cluster 1 on 3 days, cluster 0 on 1
  b.add(1, nth_day(3), 9, 0);
  b.add(1, nth_day(4), 14, 0);
  b.add(1, nth_day(5), 18, 30);
  b.add(0, nth_day(3), 12, 0);
  const auto clusters = b.build();
  CHECK(run_baseline(HeuristicId::H8_RestLeisureDays, clusters, b.posts) == 0);
  CHECK(run_baseline(HeuristicId::H14_ActiveFrameWork, clusters, b.posts) == 1);
}

TEST_CASE("uniform weights reduce WMFV to a post count") {
  Builder b;
  for (int i = 0; i < 5; ++i) b.add(0, nth_day(i), 2, 0);
  for (int i = 0; i < 2; ++i) b.add(1, nth_day(i), 3, 0);
  const auto clusters = b.build();
  const auto w = HourWeights::uniform();
  CHECK(weighted_estimator(EstimatorMode::WMFV, clusters, b.posts, w, {0, 5}) == 0);
}

TEST_CASE("a single in-window post wins all three estimator modes") {
  Builder b;
  b.add(2, nth_day(0), 1, 30, {40.001, -86.001});
  b.add(3, nth_day(0), 12, 0, {40.1, -86.1});  // outside the window
  const auto clusters = b.build();
  const auto w = HourWeights::uniform();
  for (auto mode : {EstimatorMode::WMFV, EstimatorMode::WMean, EstimatorMode::WMedian})
    CHECK(weighted_estimator(mode, clusters, b.posts, w, {0, 5}) == 2);
}

TEST_CASE("weighted mean pulls toward the heavy cluster") {
  // two clusters ~1 km apart; weights concentrate on hour 2 (cluster 0)
  Builder b;
  const GeoPoint a{40.0, -86.0};
  const GeoPoint c{40.009, -86.0};  // about 1 km north
  b.add(0, nth_day(0), 2, 0, a);
  b.add(0, nth_day(1), 2, 10, a);
  b.add(1, nth_day(0), 4, 0, c);
  const auto clusters = b.build();

  HourWeights w;
  w.weight.fill(0.0);
  w.weight[2] = 0.9;
  w.weight[4] = 0.1;

  // hand-computed weighted mean latitude:
  // (0.9*40 + 0.9*40 + 0.1*40.009) / 1.9 = 40.000474
  const double expected_lat = (0.9 * 40.0 + 0.9 * 40.0 + 0.1 * 40.009) / 1.9;
  CHECK(expected_lat == doctest::Approx(40.000474).epsilon(1e-6));
  // that point is closer to cluster 0
  CHECK(weighted_estimator(EstimatorMode::WMean, clusters, b.posts, w, {0, 5}) == 0);
}

TEST_CASE("no posts in the window means no estimator answer") {
  Builder b;
  b.add(0, nth_day(0), 12, 0);
  const auto clusters = b.build();
  const auto w = HourWeights::uniform();
  CHECK_FALSE(weighted_estimator(EstimatorMode::WMFV, clusters, b.posts, w, {0, 5}).has_value());
}

TEST_CASE("hour weight training computes home fractions") {
  Builder home_heavy;
  for (int i = 0; i < 8; ++i) home_heavy.add(0, nth_day(i), 3, 0);
  for (int i = 0; i < 2; ++i) home_heavy.add(1, nth_day(i), 3, 30);
  for (int i = 0; i < 4; ++i) home_heavy.add(0, nth_day(i), 9, 0);
  const auto clusters = home_heavy.build();

  std::vector<TrainingUser> sample{{&clusters, 0}};
  const auto w = train_hour_weights(sample);
  CHECK(w.weight[3] == doctest::Approx(0.8));   // 8 of 10 posts at hour 3 from home
  CHECK(w.weight[9] == doctest::Approx(1.0));
  CHECK(w.weight[15] == 0.0);                   // no posts at that hour

  CHECK_THROWS_AS(train_hour_weights({}), std::invalid_argument);
}

TEST_CASE("weight tables survive a save/load round trip") {
  HourWeights w;
  for (int h = 0; h < 24; ++h) w.weight[h] = h / 23.0;
  const auto path = std::filesystem::temp_directory_path() / "ga_weights.csv";
  w.save(path);
  const auto loaded = HourWeights::load(path);
  for (int h = 0; h < 24; ++h) CHECK(loaded.weight[h] == doctest::Approx(w.weight[h]));
}

TEST_CASE("window heuristics match a naive per-post filter oracle") {
  SplitMix64 rng(909);
  const HourWindow windows[] = {{20, 7}, {0, 6}, {8, 18}};
  const HeuristicId heuristics[] = {HeuristicId::H2_Night20to8, HeuristicId::H3_Night24to7,
                                    HeuristicId::H14_ActiveFrameWork};
  for (int trial = 0; trial < 25; ++trial) {
    Builder b;
    const int n_clusters = rng.uniform_int(1, 6);
    for (int c = 0; c < n_clusters; ++c) {
      const int n = rng.uniform_int(1, 40);
      for (int i = 0; i < n; ++i)
        b.add(c, nth_day(rng.uniform_int(0, 30)), rng.uniform_int(0, 23), rng.uniform_int(0, 59));
    }
    const auto clusters = b.build();

    for (int w = 0; w < 3; ++w) {
      std::map<int, std::size_t> posts_in, days_in_window;
      std::map<int, std::set<std::int64_t>> days;
      for (const auto& ca : clusters)
        for (const auto& p : ca.posts)
          if (windows[w].contains(p.local_hour)) {
            ++posts_in[ca.cluster.id];
            days[ca.cluster.id].insert(days_from_civil(p.local_date));
          }
      std::optional<int> expected;
      if (heuristics[w] == HeuristicId::H14_ActiveFrameWork) {
        std::size_t best = 0;
        for (const auto& [id, d] : days)
          if (d.size() > best) {
            best = d.size();
            expected = id;
          }
      } else {
        std::size_t best = 0;
        for (const auto& [id, n] : posts_in)
          if (n > best) {
            best = n;
            expected = id;
          }
      }
      const auto got = run_baseline(heuristics[w], clusters, b.posts);
      if (expected)
        CHECK(got == expected);  // unique maxima must agree; ties are implementation order
      else
        CHECK_FALSE(got.has_value());
    }
  }
}

TEST_CASE("heuristic names parse both ways") {
  for (HeuristicId h : all_heuristics()) {
    const auto parsed = parse_heuristic(to_string(h));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == h);
  }
  CHECK_FALSE(parse_heuristic("H12").has_value());
  CHECK_FALSE(parse_heuristic("bogus").has_value());
}
