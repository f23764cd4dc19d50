#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "geoaudit/geocode.hpp"
#include "geoaudit/ingest.hpp"
#include "geoaudit/keyloc.hpp"
#include "geoaudit/sensitive.hpp"
#include "geoaudit/temporal.hpp"

namespace geoaudit {

// Every configurable distance/time threshold, with the pipeline defaults.
struct Thresholds {
  double cache_m = 2.0;   // proximity-cache hit radius
  double eps_m = 30.0;    // density clustering radius for unknown addresses
  double merge_m = 50.0;  // second-level merge radius
  double venue_m = 25.0;  // sensitive-venue detection radius
  std::size_t verify_top_k = 10;
  NightShiftRules night_shift;
  KeyLocRules keyloc;
  VisitParams visit;
};

// Dependencies of the core per-user inference chain. `cache` may be null, in
// which case each call uses a private cache.
struct AnalysisContext {
  GeocodeProvider* bulk = nullptr;
  GeocodeProvider* authoritative = nullptr;  // optional midpoint verification
  const TimezoneProvider* tz = nullptr;
  ProximityCache* cache = nullptr;
  Thresholds thresholds;
};

struct UserAnalysis {
  std::vector<PostRecord> geotagged;  // the posts cluster member indices refer to
  std::vector<ClusterAnalysis> clusters;
  KeyLocationResult keyloc;
  std::vector<std::string> diagnostics;
  std::map<std::string, double> phase_ms;  // geocode, cluster, temporal, keyloc
};

// Runs geocode -> two-level clustering -> midpoint verification -> temporal
// profiling -> home/work inference over the geotagged subset of a timeline.
UserAnalysis analyze_user(const UserTimeline& timeline, const AnalysisContext& ctx);

}  // namespace geoaudit
