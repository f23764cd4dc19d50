#include "geoaudit/baseline.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

namespace geoaudit {

namespace {

// Table windows. Ranges ending at :59 keep their end hour; ":00" ends are
// exclusive of that hour.
constexpr HourWindow kWin20to8{20, 7};   // 20:00-8:00
constexpr HourWindow kWin24to7{0, 6};    // 24:00-7:00
constexpr HourWindow kRest{2, 7};        // 2:00-7:59
constexpr HourWindow kLeisure{19, 1};    // 19:00-01:59
constexpr HourWindow kWin24to6{0, 5};    // 24:00-5:59 (WMFV, W-MEAN)
constexpr HourWindow kWin23to6{23, 5};   // 23:00-5:59 (W-MEDIAN)
constexpr HourWindow kActive{8, 18};     // 08:00-18:59

struct FlatPost {
  std::int64_t ts;
  int cluster_id;
  const LocalizedPost* lp;
};

std::vector<FlatPost> flatten(const std::vector<ClusterAnalysis>& clusters) {
  std::vector<FlatPost> out;
  for (const auto& ca : clusters)
    for (const auto& p : ca.posts) out.push_back({p.ts_utc, ca.cluster.id, &p});
  std::sort(out.begin(), out.end(), [](const FlatPost& a, const FlatPost& b) {
    if (a.ts != b.ts) return a.ts < b.ts;
    return a.lp->post_index < b.lp->post_index;
  });
  return out;
}

std::optional<int> argmax_by_count(const std::map<int, double>& counts) {
  std::optional<int> best;
  double best_n = 0;
  for (const auto& [id, n] : counts) {
    if (n <= 0) continue;
    if (!best || n > best_n) {  // map iterates id-ascending, ties keep first
      best = id;
      best_n = n;
    }
  }
  return best;
}

std::optional<int> most_posts_in_window(const std::vector<ClusterAnalysis>& clusters,
                                        const HourWindow& win) {
  std::map<int, double> counts;
  for (const auto& ca : clusters)
    for (const auto& p : ca.posts)
      if (win.contains(p.local_hour)) ++counts[ca.cluster.id];
  return argmax_by_count(counts);
}

std::optional<int> most_unique_days_in_window(const std::vector<ClusterAnalysis>& clusters,
                                              const HourWindow& a,
                                              const HourWindow* b = nullptr) {
  std::map<int, std::set<CivilDate>> days;
  for (const auto& ca : clusters)
    for (const auto& p : ca.posts)
      if (a.contains(p.local_hour) || (b && b->contains(p.local_hour)))
        days[ca.cluster.id].insert(p.local_date);
  std::map<int, double> counts;
  for (const auto& [id, d] : days) counts[id] = static_cast<double>(d.size());
  return argmax_by_count(counts);
}

std::optional<int> by_size_rank(const std::vector<ClusterAnalysis>& clusters, std::size_t rank) {
  std::vector<const ClusterAnalysis*> order;
  for (const auto& c : clusters) order.push_back(&c);
  std::sort(order.begin(), order.end(), [](const ClusterAnalysis* a, const ClusterAnalysis* b) {
    if (a->cluster.members.size() != b->cluster.members.size())
      return a->cluster.members.size() > b->cluster.members.size();
    return a->cluster.id < b->cluster.id;
  });
  if (rank >= order.size()) return std::nullopt;
  return order[rank]->cluster.id;
}

// Day key with hours 00:00-02:59 attached to the previous day, so a night out
// still counts toward where it started.
std::int64_t shifted_day(const LocalizedPost& p) {
  std::int64_t d = days_from_civil(p.local_date);
  if (p.local_hour < 3) --d;
  return d;
}

std::optional<int> last_destination(const std::vector<ClusterAnalysis>& clusters,
                                    bool skip_night_days) {
  struct DayInfo {
    int last_cluster = 0;
    bool has_night_post = false;  // any post at 00:00-06:59
  };
  std::map<std::int64_t, DayInfo> days;
  for (const auto& fp : flatten(clusters)) {  // chronological, last write wins
    auto& d = days[shifted_day(*fp.lp)];
    d.last_cluster = fp.cluster_id;
    if (fp.lp->local_hour <= 6) d.has_night_post = true;
  }
  std::map<int, double> counts;
  for (const auto& [day, info] : days) {
    if (skip_night_days && info.has_night_post) continue;
    ++counts[info.last_cluster];
  }
  return argmax_by_count(counts);
}

double weighted_mean(const std::vector<std::pair<double, double>>& value_weight) {
  double sum = 0, wsum = 0;
  for (auto [v, w] : value_weight) {
    sum += v * w;
    wsum += w;
  }
  return sum / wsum;
}

// Smallest value whose cumulative weight reaches half the total.
double weighted_median(std::vector<std::pair<double, double>> value_weight) {
  std::sort(value_weight.begin(), value_weight.end());
  double total = 0;
  for (auto [v, w] : value_weight) total += w;
  double acc = 0;
  for (auto [v, w] : value_weight) {
    acc += w;
    if (acc >= total / 2.0) return v;
  }
  return value_weight.back().first;
}

std::optional<int> nearest_cluster(const std::vector<ClusterAnalysis>& clusters,
                                   const GeoPoint& p) {
  std::optional<int> best;
  double best_d = 0;
  for (const auto& ca : clusters) {
    const double d = haversine_m(ca.cluster.midpoint, p);
    if (!best || d < best_d) {
      best = ca.cluster.id;
      best_d = d;
    }
  }
  return best;
}

}  // namespace

std::optional<HeuristicId> parse_heuristic(std::string_view name) {
  for (HeuristicId h : all_heuristics())
    if (name == to_string(h)) return h;
  return std::nullopt;
}

std::string_view to_string(HeuristicId h) {
  switch (h) {
    case HeuristicId::H1_LargestCluster: return "H1";
    case HeuristicId::H2_Night20to8: return "H2";
    case HeuristicId::H3_Night24to7: return "H3";
    case HeuristicId::H4_LastDestBefore3am: return "H4";
    case HeuristicId::H5_LastDestNoNightDays: return "H5";
    case HeuristicId::H6_PageRankDest: return "H6";
    case HeuristicId::H7_PageRankOrig: return "H7";
    case HeuristicId::H8_RestLeisureDays: return "H8";
    case HeuristicId::H9_WMFV: return "H9";
    case HeuristicId::H10_WMean: return "H10";
    case HeuristicId::H11_WMedian: return "H11";
    case HeuristicId::H14_ActiveFrameWork: return "H14";
    case HeuristicId::H15_SecondLargest: return "H15";
  }
  return "?";
}

const std::vector<HeuristicId>& all_heuristics() {
  static const std::vector<HeuristicId> all = {
      HeuristicId::H1_LargestCluster,      HeuristicId::H2_Night20to8,
      HeuristicId::H3_Night24to7,          HeuristicId::H4_LastDestBefore3am,
      HeuristicId::H5_LastDestNoNightDays, HeuristicId::H6_PageRankDest,
      HeuristicId::H7_PageRankOrig,        HeuristicId::H8_RestLeisureDays,
      HeuristicId::H9_WMFV,                HeuristicId::H10_WMean,
      HeuristicId::H11_WMedian,            HeuristicId::H14_ActiveFrameWork,
      HeuristicId::H15_SecondLargest};
  return all;
}

bool is_work_heuristic(HeuristicId h) {
  return h == HeuristicId::H14_ActiveFrameWork || h == HeuristicId::H15_SecondLargest;
}

HourWeights HourWeights::uniform() {
  HourWeights w;
  w.weight.fill(1.0);
  return w;
}

HourWeights HourWeights::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open weight table: " + path.string());
  HourWeights w;
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    int hour;
    char comma;
    double value;
    if (!(ss >> hour >> comma >> value) || hour < 0 || hour > 23)
      throw FormatError("bad weight row: " + line);
    w.weight[hour] = value;
    ++rows;
  }
  if (rows != 24) throw FormatError("weight table must have 24 rows");
  return w;
}

void HourWeights::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write weight table: " + path.string());
  for (int h = 0; h < 24; ++h) out << h << ',' << weight[h] << '\n';
}

HourWeights train_hour_weights(const std::vector<TrainingUser>& sample) {
  if (sample.empty()) throw std::invalid_argument("train_hour_weights: empty sample");
  std::array<double, 24> total{}, home{};
  std::size_t posts = 0;
  for (const auto& user : sample) {
    for (const auto& ca : *user.clusters) {
      for (const auto& p : ca.posts) {
        ++total[p.local_hour];
        ++posts;
        if (ca.cluster.id == user.home_cluster_id) ++home[p.local_hour];
      }
    }
  }
  if (posts == 0) throw std::invalid_argument("train_hour_weights: sample has no posts");
  HourWeights w;
  for (int h = 0; h < 24; ++h) w.weight[h] = total[h] > 0 ? home[h] / total[h] : 0.0;
  return w;
}

TransitionGraph build_transition_graph(const std::vector<ClusterAnalysis>& clusters) {
  TransitionGraph g;
  for (const auto& ca : clusters) g.nodes.push_back(ca.cluster.id);
  std::sort(g.nodes.begin(), g.nodes.end());

  const auto flat = flatten(clusters);
  for (std::size_t i = 1; i < flat.size(); ++i) {
    const auto& a = flat[i - 1];
    const auto& b = flat[i];
    if (a.cluster_id == b.cluster_id) continue;
    if (a.lp->local_date != b.lp->local_date) continue;
    g.edges[{a.cluster_id, b.cluster_id}] += 1.0;
  }
  return g;
}

std::vector<std::pair<int, double>> weighted_pagerank(const TransitionGraph& graph,
                                                      PageRankMode mode, double damping,
                                                      int iterations) {
  const std::size_t n = graph.nodes.size();
  std::vector<std::pair<int, double>> result;
  if (n == 0) return result;

  std::map<int, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[graph.nodes[i]] = i;

  std::vector<std::vector<std::pair<std::size_t, double>>> out_edges(n);
  std::vector<double> out_weight(n, 0.0);
  for (const auto& [edge, w] : graph.edges) {
    auto [u, v] = edge;
    if (mode == PageRankMode::Origins) std::swap(u, v);
    const std::size_t ui = index.at(u), vi = index.at(v);
    out_edges[ui].emplace_back(vi, w);
    out_weight[ui] += w;
  }

  std::vector<double> rank(n, 1.0 / n), next(n);
  for (int it = 0; it < iterations; ++it) {
    double dangling = 0.0;
    for (std::size_t u = 0; u < n; ++u)
      if (out_weight[u] == 0.0) dangling += rank[u];
    std::fill(next.begin(), next.end(), (1.0 - damping) / n + damping * dangling / n);
    for (std::size_t u = 0; u < n; ++u) {
      if (out_weight[u] == 0.0) continue;
      const double share = damping * rank[u] / out_weight[u];
      for (const auto& [v, w] : out_edges[u]) next[v] += share * w;
    }
    rank.swap(next);
  }

  result.reserve(n);
  for (std::size_t i = 0; i < n; ++i) result.emplace_back(graph.nodes[i], rank[i]);
  std::sort(result.begin(), result.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return result;
}

std::optional<int> weighted_estimator(EstimatorMode mode,
                                      const std::vector<ClusterAnalysis>& clusters,
                                      const std::vector<PostRecord>& posts,
                                      const HourWeights& weights, const HourWindow& window) {
  double total_weight = 0.0;
  std::vector<std::tuple<GeoPoint, double, int>> pts;  // (coords, weight, cluster id)
  for (const auto& ca : clusters) {
    for (const auto& p : ca.posts) {
      if (!window.contains(p.local_hour)) continue;
      const double w = weights.weight[p.local_hour];
      total_weight += w;
      pts.emplace_back(*posts[p.post_index].coords, w, ca.cluster.id);
    }
  }
  if (pts.empty()) return std::nullopt;
  const bool uniform = total_weight == 0.0;

  if (mode == EstimatorMode::WMFV) {
    std::map<int, double> score;
    for (const auto& [g, w, id] : pts) score[id] += uniform ? 1.0 : w;
    return argmax_by_count(score);
  }

  std::vector<std::pair<double, double>> lat_w, lon_w;
  for (const auto& [g, w, id] : pts) {
    const double ww = uniform ? 1.0 : w;
    if (ww == 0.0) continue;
    lat_w.emplace_back(g.lat, ww);
    lon_w.emplace_back(g.lon, ww);
  }
  GeoPoint estimate;
  if (mode == EstimatorMode::WMean)
    estimate = {weighted_mean(lat_w), weighted_mean(lon_w)};
  else
    estimate = {weighted_median(lat_w), weighted_median(lon_w)};
  return nearest_cluster(clusters, estimate);
}

std::optional<int> run_baseline(HeuristicId h, const std::vector<ClusterAnalysis>& clusters,
                                const std::vector<PostRecord>& posts,
                                const HourWeights* weights) {
  static const HourWeights kUniform = HourWeights::uniform();
  const HourWeights& w = weights ? *weights : kUniform;
  switch (h) {
    case HeuristicId::H1_LargestCluster: return by_size_rank(clusters, 0);
    case HeuristicId::H2_Night20to8: return most_posts_in_window(clusters, kWin20to8);
    case HeuristicId::H3_Night24to7: return most_posts_in_window(clusters, kWin24to7);
    case HeuristicId::H4_LastDestBefore3am: return last_destination(clusters, false);
    case HeuristicId::H5_LastDestNoNightDays: return last_destination(clusters, true);
    case HeuristicId::H6_PageRankDest:
    case HeuristicId::H7_PageRankOrig: {
      const auto g = build_transition_graph(clusters);
      if (g.edges.empty()) return std::nullopt;
      const auto mode = h == HeuristicId::H6_PageRankDest ? PageRankMode::Destinations
                                                          : PageRankMode::Origins;
      const auto ranks = weighted_pagerank(g, mode);
      return ranks.front().first;
    }
    case HeuristicId::H8_RestLeisureDays:
      return most_unique_days_in_window(clusters, kRest, &kLeisure);
    case HeuristicId::H9_WMFV:
      return weighted_estimator(EstimatorMode::WMFV, clusters, posts, w, kWin24to6);
    case HeuristicId::H10_WMean:
      return weighted_estimator(EstimatorMode::WMean, clusters, posts, w, kWin24to6);
    case HeuristicId::H11_WMedian:
      return weighted_estimator(EstimatorMode::WMedian, clusters, posts, w, kWin23to6);
    case HeuristicId::H14_ActiveFrameWork:
      return most_unique_days_in_window(clusters, kActive);
    case HeuristicId::H15_SecondLargest: return by_size_rank(clusters, 1);
  }
  return std::nullopt;
}

}  // namespace geoaudit
