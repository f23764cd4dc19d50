#include "geoaudit/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <memory>
#include <mutex>
#include <thread>

#include "geoaudit/textproc.hpp"

namespace geoaudit {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct SensitiveResources {
  VenueIndex venues;
  Wordlists wordlists;
  TextPipeline text;
};

std::optional<LocationVerdict> make_verdict(const UserAnalysis& ua, std::optional<int> cluster_id,
                                            double score) {
  if (!cluster_id) return std::nullopt;
  for (const auto& ca : ua.clusters) {
    if (ca.cluster.id != *cluster_id) continue;
    LocationVerdict v;
    v.cluster_id = ca.cluster.id;
    v.address = ca.cluster.label.address;
    v.midpoint = ca.cluster.midpoint;
    v.rank = ca.cluster.rank;
    v.score = score;
    return v;
  }
  return std::nullopt;
}

std::string cluster_address(const UserAnalysis& ua, int cluster_id) {
  for (const auto& ca : ua.clusters)
    if (ca.cluster.id == cluster_id) return ca.cluster.label.address;
  return {};
}

UserReport process_user_inner(const UserTimeline& timeline, const AuditConfig& config,
                              const AnalysisContext& ctx, const SensitiveResources* sensitive,
                              const HourWeights* weights) {
  UserReport report;
  report.user_id = timeline.user_id;
  report.n_posts = timeline.posts.size();

  auto ua = analyze_user(timeline, ctx);
  report.n_geotagged = ua.geotagged.size();
  report.n_clusters = ua.clusters.size();
  report.diagnostics = ua.diagnostics;
  report.phase_ms = ua.phase_ms;

  double home_score = 0.0, work_score = 0.0;
  for (const auto& c : ua.keyloc.home_candidates)
    if (ua.keyloc.home && c.cluster_id == *ua.keyloc.home) home_score = c.breadth;
  for (const auto& c : ua.keyloc.work_candidates)
    if (ua.keyloc.work && c.cluster_id == *ua.keyloc.work) work_score = c.retained_weeks;
  report.home = make_verdict(ua, ua.keyloc.home, home_score);
  report.work = make_verdict(ua, ua.keyloc.work, work_score);
  report.home_candidates = ua.keyloc.home_candidates;
  report.work_candidates = ua.keyloc.work_candidates;

  if (config.stages.contains("baselines")) {
    const auto start = Clock::now();
    const auto& heuristics = config.heuristics.empty() ? all_heuristics() : config.heuristics;
    for (HeuristicId h : heuristics) {
      const auto id = run_baseline(h, ua.clusters, ua.geotagged, weights);
      if (id)
        report.baselines[std::string(to_string(h))] =
            BaselineVerdict{*id, cluster_address(ua, *id)};
      else
        report.baselines[std::string(to_string(h))] = std::nullopt;
    }
    report.phase_ms["baselines"] = ms_since(start);
  }

  if (sensitive) {
    const auto start = Clock::now();
    std::vector<std::vector<std::string>> docs(ua.clusters.size());
    for (std::size_t i = 0; i < ua.clusters.size(); ++i) {
      std::vector<std::string>& doc = docs[i];
      for (const auto& lp : ua.clusters[i].posts) {
        auto lemmas = sensitive->text.preprocess(ua.geotagged[lp.post_index].text);
        doc.insert(doc.end(), std::make_move_iterator(lemmas.begin()),
                   std::make_move_iterator(lemmas.end()));
      }
    }
    const auto pscs = find_pscs(ua.clusters, sensitive->venues, config.thresholds.venue_m);
    for (const auto& psc : pscs) {
      PscReport pr;
      pr.cluster_id = psc.cluster_id;
      pr.primary_category = std::string(to_string(psc.primary));
      pr.venues = psc.nearby;
      for (std::size_t i = 0; i < ua.clusters.size(); ++i) {
        if (ua.clusters[i].cluster.id != psc.cluster_id) continue;
        const auto top = tfidf_top_terms(docs, i);
        pr.content = content_corroborate(psc, top, sensitive->wordlists);
        pr.duration = duration_corroborate(ua.clusters[i].posts, config.thresholds.visit);
        break;
      }
      report.pscs.push_back(std::move(pr));
    }
    report.phase_ms["sensitive"] = ms_since(start);
  }

  if (config.stages.contains("policy")) {
    const auto start = Clock::now();
    report.leakage = leakage_stats(timeline, config.cutoffs);
    for (int offset : {0, 4}) {
      auto pca = post_cutoff_inference(timeline, offset, ctx, config.cutoffs);
      PostCutoffOutcome outcome;
      outcome.offset_weeks = offset;
      outcome.posts_used = pca.geotagged.size();
      double score = 0.0;
      for (const auto& c : pca.keyloc.home_candidates)
        if (pca.keyloc.home && c.cluster_id == *pca.keyloc.home) score = c.breadth;
      outcome.home = make_verdict(pca, pca.keyloc.home, score);
      report.post_cutoff.push_back(std::move(outcome));
    }
    report.phase_ms["policy"] = ms_since(start);
  }

  return report;
}

// One user failing must not take the batch down.
UserReport process_user(const UserTimeline& timeline, const AuditConfig& config,
                        const AnalysisContext& ctx, const SensitiveResources* sensitive,
                        const HourWeights* weights) {
  try {
    return process_user_inner(timeline, config, ctx, sensitive, weights);
  } catch (const std::exception& e) {
    UserReport report;
    report.user_id = timeline.user_id;
    report.n_posts = timeline.posts.size();
    report.diagnostics.push_back(std::string("processing failed: ") + e.what());
    return report;
  }
}

}  // namespace

AuditReport run_audit(const AuditConfig& config) {
  for (const auto& stage : config.stages)
    if (!kKnownStages.contains(stage)) throw ConfigError("unknown stage: " + stage);

  const bool want_sensitive = config.stages.contains("sensitive");
  if (want_sensitive && (config.venue_db.empty() || config.wordlists_dir.empty()))
    throw ConfigError("sensitive stage needs --venue-db and --wordlists-dir");
  if (config.dataset.empty() || config.geocode_db.empty() || config.tz_db.empty())
    throw ConfigError("audit needs --dataset, --geocode-db and --tz-db");
  if (config.cache_scope != "per-user" && config.cache_scope != "global")
    throw ConfigError("cache scope must be per-user or global");

  AuditReport report;
  report.meta.dataset = config.dataset.string();
  report.meta.seed = config.seed;
  report.meta.thresholds = config.thresholds;
  report.meta.geocode_fallback_m = config.geocode_fallback_m;
  report.meta.tfidf_variant = kTfidfVariant;
  report.meta.cache_scope = config.cache_scope;
  report.meta.stages.assign(config.stages.begin(), config.stages.end());
  if (config.stages.contains("baselines")) {
    const auto& hs = config.heuristics.empty() ? all_heuristics() : config.heuristics;
    for (HeuristicId h : hs) report.meta.baselines.emplace_back(to_string(h));
  }

  auto t_load = Clock::now();
  LoadStats stats;
  Dataset dataset = load_dataset(config.dataset, config.source_filter, &stats, config.strict);
  report.total_phase_ms["load"] = ms_since(t_load);

  auto bulk = FileGeocodeProvider::load(config.geocode_db, "file-bulk", config.geocode_fallback_m);
  std::unique_ptr<FileGeocodeProvider> authoritative;
  if (!config.authoritative_db.empty() && config.authoritative_db != config.geocode_db)
    authoritative = std::make_unique<FileGeocodeProvider>(FileGeocodeProvider::load(
        config.authoritative_db, "file-authoritative", config.geocode_fallback_m));
  auto tz = BoxTimezoneProvider::load(config.tz_db);
  report.meta.bulk_provider = bulk.provider_id();
  report.meta.authoritative_provider =
      authoritative ? authoritative->provider_id() : bulk.provider_id();
  report.meta.tz_provider = tz.provider_id();

  std::optional<SensitiveResources> sensitive;
  if (want_sensitive) {
    const auto stopwords =
        config.stopwords.empty() ? config.wordlists_dir / "stopwords.txt" : config.stopwords;
    const auto lemmas =
        config.lemmas.empty() ? config.wordlists_dir / "lemmas.csv" : config.lemmas;
    const auto category_map =
        config.category_map.empty() ? config.wordlists_dir / "categories.csv" : config.category_map;
    sensitive.emplace(SensitiveResources{
        VenueIndex(load_venues(config.venue_db), CategoryMap::load(category_map)),
        Wordlists::load(config.wordlists_dir), TextPipeline::load(stopwords, lemmas)});
  }

  std::optional<HourWeights> weights;
  if (!config.weights.empty()) weights = HourWeights::load(config.weights);

  ProximityCache global_cache(config.thresholds.cache_m);
  AnalysisContext ctx;
  ctx.bulk = &bulk;
  ctx.authoritative = authoritative ? authoritative.get() : &bulk;
  ctx.tz = &tz;
  ctx.cache = config.cache_scope == "global" ? &global_cache : nullptr;
  ctx.thresholds = config.thresholds;

  std::vector<const UserTimeline*> order;
  order.reserve(dataset.size());
  for (const auto& [_, tl] : dataset) order.push_back(&tl);

  report.users.resize(order.size());
  const auto t_users = Clock::now();
  // A shared cache makes labels depend on processing order, so it runs
  // sequentially to keep reports reproducible.
  const int jobs = config.cache_scope == "global" ? 1 : std::max(1, config.jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < order.size(); ++i)
      report.users[i] = process_user(*order[i], config, ctx,
                                     sensitive ? &*sensitive : nullptr,
                                     weights ? &*weights : nullptr);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < order.size(); i = next.fetch_add(1))
          report.users[i] = process_user(*order[i], config, ctx,
                                         sensitive ? &*sensitive : nullptr,
                                         weights ? &*weights : nullptr);
      });
    }
    for (auto& th : pool) th.join();
  }
  report.total_phase_ms["users"] = ms_since(t_users);

  for (const auto& u : report.users)
    for (const auto& [phase, ms] : u.phase_ms) report.total_phase_ms[phase] += ms;

  if (stats.malformed > 0)
    report.meta.notes.push_back(std::to_string(stats.malformed) +
                                " malformed dataset lines skipped");
  if (stats.duplicates > 0)
    report.meta.notes.push_back(std::to_string(stats.duplicates) + " duplicate post ids dropped");
  if (config.weights.empty() && config.stages.contains("baselines"))
    report.meta.notes.push_back("no weight table given; H9-H11 use uniform hour weights");
  return report;
}

}  // namespace geoaudit
