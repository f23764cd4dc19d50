#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "geoaudit/report.hpp"

namespace geoaudit {

// Stage names accepted by --stages. The core chain (ingest through key
// location inference) always runs; the rest are opt-in.
inline const std::set<std::string> kKnownStages = {"keyloc", "baselines", "sensitive", "policy"};

struct AuditConfig {
  std::filesystem::path dataset;
  std::filesystem::path geocode_db;
  std::filesystem::path authoritative_db;  // empty -> reuse geocode_db
  std::filesystem::path tz_db;
  std::filesystem::path venue_db;
  std::filesystem::path wordlists_dir;
  std::filesystem::path stopwords;     // default <wordlists_dir>/stopwords.txt
  std::filesystem::path lemmas;        // default <wordlists_dir>/lemmas.csv
  std::filesystem::path category_map;  // default <wordlists_dir>/categories.csv
  std::filesystem::path weights;       // hour-weight table for H9-H11; empty -> uniform

  std::set<std::string> stages = {"keyloc"};
  std::vector<HeuristicId> heuristics;  // empty -> all, when the stage is on
  std::string cache_scope = "per-user";  // or "global"
  double geocode_fallback_m = 40.0;  // nearest-seed radius of the file providers
  Thresholds thresholds;
  PolicyCutoffs cutoffs = PolicyCutoffs::defaults();
  std::set<SourceApp> source_filter = kDefaultSourceFilter;
  std::uint64_t seed = 0;
  bool strict = false;
  int jobs = 1;  // worker threads; a global cache forces sequential processing
};

// Full batch run: ingest, per-user inference, optional stages, report
// assembly (users sorted by id). Throws ConfigError on inconsistent
// configuration and IoError/FormatError on unreadable inputs.
AuditReport run_audit(const AuditConfig& config);

}  // namespace geoaudit
