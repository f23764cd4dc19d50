#pragma once

#include <cstdint>
#include <optional>

#include "geoaudit/analyze.hpp"
#include "geoaudit/ingest.hpp"

namespace geoaudit {

// Per-platform release instants of the apps that made GPS inclusion opt-in.
// Posts from sources without a cutoff always count as post-period.
struct PolicyCutoffs {
  std::optional<std::int64_t> ios;      // default 2015-04-15T00:00:00Z
  std::optional<std::int64_t> android;  // default 2015-04-20T00:00:00Z

  static PolicyCutoffs defaults();
  std::optional<std::int64_t> for_source(SourceApp s) const;
};

struct PeriodCounts {
  std::int64_t total = 0;
  std::int64_t with_coords = 0;
  std::int64_t coarse = 0;
  std::int64_t coarse_with_coords = 0;

  bool operator==(const PeriodCounts&) const = default;
};

struct LeakageStats {
  PeriodCounts pre;   // before the source's cutoff
  PeriodCounts post;  // at/after the cutoff, or sources without one
  std::int64_t coarse_no_gps_pre2010 = 0;  // coarse, no GPS, before 2010-08-01

  bool operator==(const LeakageStats&) const = default;
};

LeakageStats leakage_stats(const UserTimeline& timeline,
                           const PolicyCutoffs& cutoffs = PolicyCutoffs::defaults());

// Re-runs the full cluster/temporal/keyloc chain on the posts with coordinates
// from the post-policy period (cutoffs shifted forward by offset_weeks).
UserAnalysis post_cutoff_inference(const UserTimeline& timeline, int offset_weeks,
                                   const AnalysisContext& ctx,
                                   const PolicyCutoffs& cutoffs = PolicyCutoffs::defaults());

}  // namespace geoaudit
