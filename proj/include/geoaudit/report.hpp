#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geoaudit/analyze.hpp"
#include "geoaudit/baseline.hpp"
#include "geoaudit/ground_truth.hpp"
#include "geoaudit/policy.hpp"
#include "geoaudit/sensitive.hpp"

namespace geoaudit {

struct LocationVerdict {
  int cluster_id = 0;
  std::string address;  // empty for unknown-address clusters
  GeoPoint midpoint;
  int rank = 0;
  double score = 0.0;  // hour breadth for homes, retained active weeks for work
};

struct PscReport {
  int cluster_id = 0;
  std::string primary_category;
  std::vector<PscVenue> venues;
  std::optional<ContentEvidence> content;
  std::optional<DurationEvidence> duration;
};

struct PostCutoffOutcome {
  int offset_weeks = 0;
  std::size_t posts_used = 0;
  std::optional<LocationVerdict> home;
};

struct BaselineVerdict {
  int cluster_id = 0;
  std::string address;
};

struct UserReport {
  std::string user_id;
  std::size_t n_posts = 0;
  std::size_t n_geotagged = 0;
  std::size_t n_clusters = 0;
  std::optional<LocationVerdict> home;
  std::optional<LocationVerdict> work;
  std::vector<HomeCandidate> home_candidates;
  std::vector<WorkCandidate> work_candidates;
  std::map<std::string, std::optional<BaselineVerdict>> baselines;  // by heuristic name
  std::vector<PscReport> pscs;
  std::optional<LeakageStats> leakage;
  std::vector<PostCutoffOutcome> post_cutoff;
  std::vector<std::string> diagnostics;
  std::map<std::string, double> phase_ms;
};

struct RunMeta {
  std::string dataset;
  std::uint64_t seed = 0;
  Thresholds thresholds;
  double geocode_fallback_m = 40.0;
  std::string tfidf_variant;
  std::string bulk_provider;
  std::string authoritative_provider;
  std::string tz_provider;
  std::string cache_scope = "per-user";
  std::vector<std::string> stages;
  std::vector<std::string> baselines;
  std::vector<std::string> notes;  // run-level diagnostics (skipped lines etc.)
};

struct AuditReport {
  RunMeta meta;
  std::vector<UserReport> users;  // sorted by user_id
  std::map<std::string, double> total_phase_ms;
};

// Line-oriented report: a meta object first, then one user object per line.
void write_report(const std::filesystem::path& path, const AuditReport& report);
AuditReport read_report(const std::filesystem::path& path);
std::string report_summary(const AuditReport& report);

struct Metrics {
  std::int64_t tp = 0, fp = 0, fn = 0;
  double precision() const { return tp + fp ? static_cast<double>(tp) / (tp + fp) : 0.0; }
  double recall() const { return tp + fn ? static_cast<double>(tp) / (tp + fn) : 0.0; }
  double f_score() const {
    const double p = precision(), r = recall();
    return p + r > 0 ? 2 * p * r / (p + r) : 0.0;
  }
};

struct LocationScore {
  std::size_t users = 0;     // users in the ground truth
  std::size_t inferred = 0;  // users with a verdict
  std::size_t correct = 0;   // verdicts matching the ground-truth address
  double precision() const { return inferred ? static_cast<double>(correct) / inferred : 0.0; }
  double coverage() const { return users ? static_cast<double>(inferred) / users : 0.0; }
};

struct ScoreTable {
  LocationScore home;
  LocationScore work;
  Metrics sensitive_cb;  // content-corroborated PSC venues vs planted visits
  std::map<std::string, LocationScore> baselines;
};

// Address comparison happens on normalized strings; users present in the
// ground truth but missing from the report count as not inferred. Throws
// std::invalid_argument when the ground truth is empty.
ScoreTable score(const AuditReport& report, const GroundTruth& gt);

std::string score_summary(const ScoreTable& table);

}  // namespace geoaudit
