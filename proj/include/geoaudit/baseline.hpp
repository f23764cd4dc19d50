#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geoaudit/temporal.hpp"

namespace geoaudit {

// Prior-work location heuristics, evaluated over the same cluster model.
enum class HeuristicId {
  H1_LargestCluster,
  H2_Night20to8,
  H3_Night24to7,
  H4_LastDestBefore3am,
  H5_LastDestNoNightDays,
  H6_PageRankDest,
  H7_PageRankOrig,
  H8_RestLeisureDays,
  H9_WMFV,
  H10_WMean,
  H11_WMedian,
  H14_ActiveFrameWork,
  H15_SecondLargest,
};

std::optional<HeuristicId> parse_heuristic(std::string_view name);  // "H1".."H11","H14","H15"
std::string_view to_string(HeuristicId h);
const std::vector<HeuristicId>& all_heuristics();
bool is_work_heuristic(HeuristicId h);  // H14/H15 target workplaces

// Wrap-around hour window; contains() treats [start..end] inclusive and wraps
// past midnight when start > end (e.g. 19:00-01:59 -> {19..23,0,1}).
struct HourWindow {
  int start = 0;
  int end = 23;
  bool contains(int hour) const {
    return start <= end ? (hour >= start && hour <= end) : (hour >= start || hour <= end);
  }
};

// Per-hour weights for the WMFV/W-MEAN/W-MEDIAN estimators. File format:
// 24 lines of "hour,weight".
struct HourWeights {
  std::array<double, 24> weight{};

  static HourWeights uniform();
  static HourWeights load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
};

// weight(h) = fraction of sample posts at local hour h posted from the user's
// home cluster; hours without posts weigh zero. Throws std::invalid_argument
// on an empty sample.
struct TrainingUser {
  const std::vector<ClusterAnalysis>* clusters;
  int home_cluster_id;
};
HourWeights train_hour_weights(const std::vector<TrainingUser>& sample);

// Cluster-transition graph: one edge u->v per pair of same-local-day
// consecutive posts moving between distinct clusters, weighted by pair count.
struct TransitionGraph {
  std::vector<int> nodes;                       // all cluster ids
  std::map<std::pair<int, int>, double> edges;  // (from,to) -> weight
};
TransitionGraph build_transition_graph(const std::vector<ClusterAnalysis>& clusters);

enum class PageRankMode { Destinations, Origins };

// Damped iteration (0.85, 100 rounds, uniform teleport, dangling mass spread
// uniformly); Origins ranks the edge-reversed graph. Scores sum to one and
// come back sorted by (score desc, id asc).
std::vector<std::pair<int, double>> weighted_pagerank(const TransitionGraph& graph,
                                                      PageRankMode mode, double damping = 0.85,
                                                      int iterations = 100);

enum class EstimatorMode { WMFV, WMean, WMedian };

// WMFV: cluster with the largest sum of hour weights over in-window posts.
// W-MEAN / W-MEDIAN: weighted mean / coordinate-wise weighted median of the
// in-window coordinates, answered with the nearest cluster midpoint. An
// all-zero-weight window degenerates to uniform weights. `posts` is the
// vector the clusters' post indices refer to.
std::optional<int> weighted_estimator(EstimatorMode mode,
                                      const std::vector<ClusterAnalysis>& clusters,
                                      const std::vector<PostRecord>& posts,
                                      const HourWeights& weights, const HourWindow& window);

std::optional<int> run_baseline(HeuristicId h, const std::vector<ClusterAnalysis>& clusters,
                                const std::vector<PostRecord>& posts,
                                const HourWeights* weights = nullptr);

}  // namespace geoaudit
