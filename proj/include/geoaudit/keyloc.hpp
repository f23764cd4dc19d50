#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "geoaudit/temporal.hpp"

namespace geoaudit {

struct HomeCandidate {
  int cluster_id = 0;
  int active_weekends = 0;
  int breadth = 0;
  std::size_t members = 0;
};

struct WorkCandidate {
  int cluster_id = 0;
  int active_weeks = 0;
  int retained_weeks = 0;  // active weeks recomputed on dominant-frame posts
  std::set<int> dominant;
  std::size_t members = 0;
  bool dropped_no_dominant = false;
  bool dropped_overtime = false;
};

struct KeyLocationResult {
  std::optional<int> home;
  std::optional<int> work;
  std::vector<HomeCandidate> home_candidates;  // at most the window size, ranked
  std::vector<WorkCandidate> work_candidates;
  std::vector<std::string> diagnostics;
};

struct KeyLocRules {
  std::size_t candidate_window = 5;  // clusters considered for home and work
  double overtime_hours = 10.0;      // a frame longer than this is overtime
  double overtime_fraction = 0.2;    // tolerated share of overtime frames
};

// Home: of the most weekend-active clusters, the one with the broadest hour
// coverage. None when no cluster has weekend activity.
std::optional<int> infer_home(const std::vector<ClusterAnalysis>& clusters,
                              const KeyLocRules& rules = {});

// Work: of the most week-active non-home clusters, drop those without a
// dominant time frame and those whose daily frames exceed the overtime bound
// too often; keep only posts inside the dominant frame and pick the cluster
// with the most remaining active weeks.
std::optional<int> infer_work(const std::vector<ClusterAnalysis>& clusters,
                              std::optional<int> home_id, const KeyLocRules& rules = {});

KeyLocationResult infer_key_locations(const std::vector<ClusterAnalysis>& clusters,
                                      const KeyLocRules& rules = {});

}  // namespace geoaudit
