#include "geoaudit/policy.hpp"

#include "geoaudit/temporal.hpp"

namespace geoaudit {

namespace {

std::int64_t utc_midnight(int year, int month, int day) {
  return days_from_civil({year, month, day}) * 86400;
}

const std::int64_t kPre2010Boundary = [] { return utc_midnight(2010, 8, 1); }();

}  // namespace

PolicyCutoffs PolicyCutoffs::defaults() {
  PolicyCutoffs c;
  c.ios = utc_midnight(2015, 4, 15);
  c.android = utc_midnight(2015, 4, 20);
  return c;
}

std::optional<std::int64_t> PolicyCutoffs::for_source(SourceApp s) const {
  switch (s) {
    case SourceApp::IOSOfficial: return ios;
    case SourceApp::AndroidOfficial: return android;
    default: return std::nullopt;
  }
}

LeakageStats leakage_stats(const UserTimeline& timeline, const PolicyCutoffs& cutoffs) {
  LeakageStats stats;
  for (const auto& post : timeline.posts) {
    const auto cutoff = cutoffs.for_source(post.source_app);
    const bool post_period = !cutoff || post.timestamp_utc >= *cutoff;
    PeriodCounts& bucket = post_period ? stats.post : stats.pre;

    ++bucket.total;
    const bool coarse = post.geotag_kind == GeotagKind::CoarsePlace;
    if (post.coords) ++bucket.with_coords;
    if (coarse) ++bucket.coarse;
    if (coarse && post.coords) ++bucket.coarse_with_coords;
    if (coarse && !post.coords && post.timestamp_utc < kPre2010Boundary)
      ++stats.coarse_no_gps_pre2010;
  }
  return stats;
}

UserAnalysis post_cutoff_inference(const UserTimeline& timeline, int offset_weeks,
                                   const AnalysisContext& ctx, const PolicyCutoffs& cutoffs) {
  const std::int64_t offset = static_cast<std::int64_t>(offset_weeks) * 7 * 86400;
  UserTimeline filtered;
  filtered.user_id = timeline.user_id;
  for (const auto& post : timeline.posts) {
    if (!post.coords) continue;
    const auto cutoff = cutoffs.for_source(post.source_app);
    if (!cutoff || post.timestamp_utc >= *cutoff + offset) filtered.posts.push_back(post);
  }
  auto ua = analyze_user(filtered, ctx);
  if (filtered.posts.empty())
    ua.diagnostics.push_back("no post-cutoff posts with coordinates");
  return ua;
}

}  // namespace geoaudit
