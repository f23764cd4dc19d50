#include "geoaudit/analyze.hpp"

#include <chrono>
#include <unordered_map>

namespace geoaudit {

namespace {

class PhaseTimer {
 public:
  PhaseTimer(std::map<std::string, double>& sink, const char* phase)
      : sink_(sink), phase_(phase), start_(std::chrono::steady_clock::now()) {}
  ~PhaseTimer() {
    const auto end = std::chrono::steady_clock::now();
    sink_[phase_] += std::chrono::duration<double, std::milli>(end - start_).count();
  }

 private:
  std::map<std::string, double>& sink_;
  const char* phase_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

UserAnalysis analyze_user(const UserTimeline& timeline, const AnalysisContext& ctx) {
  if (!ctx.bulk || !ctx.tz) throw ConfigError("analyze_user: missing provider");

  UserAnalysis ua;
  ua.geotagged = geotagged_subset(timeline).posts;
  if (ua.geotagged.empty()) {
    ua.diagnostics.push_back("no geotagged posts");
    return ua;
  }

  ProximityCache local_cache(ctx.thresholds.cache_m);
  ProximityCache& cache = ctx.cache ? *ctx.cache : local_cache;

  std::unordered_map<std::string, AddressLabel> labels;
  labels.reserve(ua.geotagged.size());
  {
    PhaseTimer t(ua.phase_ms, "geocode");
    for (const auto& post : ua.geotagged)
      labels.emplace(post.post_id, cached_reverse_geocode(*post.coords, cache, *ctx.bulk));
  }
  if (!ctx.cache && local_cache.provider_errors() > 0)
    ua.diagnostics.push_back(std::to_string(local_cache.provider_errors()) +
                             " provider errors during labeling");

  std::vector<Cluster> clusters;
  {
    PhaseTimer t(ua.phase_ms, "cluster");
    const auto first = first_level_clusters(ua.geotagged, labels, ctx.thresholds.eps_m);
    clusters = second_level_merge(first, ua.geotagged, ctx.thresholds.merge_m);
    if (ctx.authoritative)
      clusters = verify_cluster_addresses(std::move(clusters), *ctx.authoritative,
                                          ctx.thresholds.verify_top_k, &ua.diagnostics);
  }

  {
    PhaseTimer t(ua.phase_ms, "temporal");
    ua.clusters.reserve(clusters.size());
    for (auto& c : clusters) {
      const auto offset = ctx.tz->utc_offset_minutes(c.midpoint);
      if (!offset) {
        ua.diagnostics.push_back("cluster " + std::to_string(c.id) +
                                 " excluded: no timezone for midpoint");
        continue;
      }
      ClusterAnalysis ca;
      ca.posts = localize_cluster(c, ua.geotagged, *offset);
      ca.profile = build_time_profile(ca.posts, ctx.thresholds.night_shift);
      ca.cluster = std::move(c);
      ua.clusters.push_back(std::move(ca));
    }
  }

  {
    PhaseTimer t(ua.phase_ms, "keyloc");
    ua.keyloc = infer_key_locations(ua.clusters, ctx.thresholds.keyloc);
  }
  return ua;
}

}  // namespace geoaudit
