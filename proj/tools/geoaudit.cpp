#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "geoaudit/pipeline.hpp"
#include "geoaudit/synthgen.hpp"

namespace {

using namespace geoaudit;

std::int64_t parse_utc_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-')
    throw CLI::ValidationError("dates must be YYYY-MM-DD");
  const CivilDate d{std::stoi(s.substr(0, 4)), std::stoi(s.substr(5, 2)),
                    std::stoi(s.substr(8, 2))};
  return days_from_civil(d) * 86400;
}

int cmd_audit(const AuditConfig& config, const std::filesystem::path& out) {
  const auto report = run_audit(config);
  write_report(out, report);
  std::cout << report_summary(report);
  std::cout << "report written to " << out.string() << "\n";
  return 0;
}

int cmd_score(const std::filesystem::path& report_path, const std::filesystem::path& gt_path,
              const std::filesystem::path& out) {
  const auto report = read_report(report_path);
  const auto gt = load_ground_truth(gt_path);
  const auto table = score(report, gt);
  std::cout << score_summary(table);
  if (!out.empty()) {
    nlohmann::json j;
    j["home"] = {{"users", table.home.users},
                 {"inferred", table.home.inferred},
                 {"correct", table.home.correct},
                 {"precision", table.home.precision()},
                 {"coverage", table.home.coverage()}};
    j["work"] = {{"users", table.work.users},
                 {"inferred", table.work.inferred},
                 {"correct", table.work.correct},
                 {"precision", table.work.precision()},
                 {"coverage", table.work.coverage()}};
    j["sensitive_cb"] = {{"tp", table.sensitive_cb.tp},
                         {"fp", table.sensitive_cb.fp},
                         {"fn", table.sensitive_cb.fn},
                         {"precision", table.sensitive_cb.precision()},
                         {"recall", table.sensitive_cb.recall()},
                         {"f_score", table.sensitive_cb.f_score()}};
    for (const auto& [name, row] : table.baselines)
      j["baselines"][name] = {{"users", row.users},
                              {"inferred", row.inferred},
                              {"correct", row.correct},
                              {"precision", row.precision()},
                              {"coverage", row.coverage()}};
    std::ofstream f(out);
    if (!f) throw IoError("cannot write scores: " + out.string());
    f << j.dump(2) << '\n';
  }
  return 0;
}

int cmd_train_weights(const AuditConfig& config, const std::filesystem::path& gt_path,
                      const std::filesystem::path& out) {
  const auto gt = load_ground_truth(gt_path);
  LoadStats stats;
  Dataset dataset = load_dataset(config.dataset, config.source_filter, &stats, config.strict);
  auto bulk = FileGeocodeProvider::load(config.geocode_db, "file-bulk");
  auto tz = BoxTimezoneProvider::load(config.tz_db);

  AnalysisContext ctx;
  ctx.bulk = &bulk;
  ctx.authoritative = &bulk;
  ctx.tz = &tz;
  ctx.thresholds = config.thresholds;

  std::vector<std::vector<ClusterAnalysis>> holders;
  std::vector<int> home_ids;
  for (const auto& [user_id, timeline] : dataset) {
    const auto it = gt.find(user_id);
    if (it == gt.end()) continue;
    auto ua = analyze_user(timeline, ctx);
    // the home cluster is whichever cluster carries the labeled address
    int home_id = -1;
    for (const auto& ca : ua.clusters)
      if (ca.cluster.label.address == it->second.home_address) home_id = ca.cluster.id;
    if (home_id < 0) continue;
    holders.push_back(std::move(ua.clusters));
    home_ids.push_back(home_id);
  }
  std::vector<TrainingUser> sample;
  for (std::size_t i = 0; i < holders.size(); ++i)
    sample.push_back(TrainingUser{&holders[i], home_ids[i]});
  const auto weights = train_hour_weights(sample);
  weights.save(out);
  std::cout << "weight table written to " << out.string() << " (sample of " << sample.size()
            << " users)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"location-privacy audit over geotagged post metadata"};
  app.require_subcommand(1);

  AuditConfig config;
  std::filesystem::path out = "report.jsonl";
  std::string stages_csv = "keyloc";
  std::string baselines_csv;
  std::string cutoff_ios = "2015-04-15", cutoff_android = "2015-04-20";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--dataset", config.dataset, "line-delimited post records")->required();
    cmd->add_option("--geocode-db", config.geocode_db, "address database (bulk provider)")
        ->required();
    cmd->add_option("--tz-db", config.tz_db, "timezone bounding boxes")->required();
    cmd->add_option("--cache-m", config.thresholds.cache_m, "proximity cache radius (m)");
    cmd->add_option("--eps-m", config.thresholds.eps_m, "density clustering radius (m)");
    cmd->add_option("--merge-m", config.thresholds.merge_m, "second-level merge radius (m)");
    cmd->add_option("--geocode-fallback-m", config.geocode_fallback_m,
                    "nearest-seed radius of the file geocoder (m)");
    cmd->add_flag("--strict", config.strict, "abort on the first malformed dataset line");
  };

  CLI::App* audit = app.add_subcommand("audit", "run the audit pipeline");
  add_common(audit);
  audit->add_option("--authoritative-db", config.authoritative_db,
                    "address database for midpoint verification");
  audit->add_option("--venue-db", config.venue_db, "venue database (sensitive stage)");
  audit->add_option("--wordlists-dir", config.wordlists_dir,
                    "directory with wordlists, stopwords.txt, lemmas.csv, categories.csv");
  audit->add_option("--stopwords", config.stopwords, "stopword list override");
  audit->add_option("--lemmas", config.lemmas, "lemma table override");
  audit->add_option("--category-map", config.category_map, "venue category mapping override");
  audit->add_option("--weights", config.weights, "hour-weight table for H9-H11");
  audit->add_option("--stages", stages_csv, "comma list: keyloc,baselines,sensitive,policy,all");
  audit->add_option("--baselines", baselines_csv, "comma list of heuristics (default all)");
  audit->add_option("--cache-scope", config.cache_scope, "per-user or global")
      ->check(CLI::IsMember({"per-user", "global"}));
  audit->add_option("--venue-m", config.thresholds.venue_m, "sensitive venue radius (m)");
  audit->add_option("--candidates", config.thresholds.keyloc.candidate_window,
                    "home/work candidate window size");
  audit->add_option("--verify-k", config.thresholds.verify_top_k,
                    "clusters re-checked against the authoritative provider");
  audit->add_option("--shift-h", config.thresholds.night_shift.shift_hours,
                    "max night-shift span and required rest (h)");
  audit->add_option("--overtime-h", config.thresholds.keyloc.overtime_hours,
                    "day frames longer than this count as overtime (h)");
  audit->add_option("--overtime-frac", config.thresholds.keyloc.overtime_fraction,
                    "tolerated share of overtime frames");
  audit->add_option("--visit-gap-h", config.thresholds.visit.max_gap_hours,
                    "max gap between posts of one visit (h)");
  audit->add_option("--visit-span-min", config.thresholds.visit.min_span_minutes,
                    "min visit span (min)");
  audit->add_option("--passby-min", config.thresholds.visit.passby_minutes,
                    "pass-by exclusion bound (min)");
  audit->add_option("--cutoff-ios", cutoff_ios, "iOS policy cutoff (YYYY-MM-DD)");
  audit->add_option("--cutoff-android", cutoff_android, "Android policy cutoff (YYYY-MM-DD)");
  audit->add_option("--seed", config.seed, "seed echoed into the report");
  audit->add_option("--jobs", config.jobs, "worker threads");
  audit->add_option("--out", out, "report path");

  CorpusOptions gen_options;
  std::uint64_t gen_seed = 42;
  std::filesystem::path gen_dir = "corpus";
  std::filesystem::path gen_profiles;
  std::string gen_start = "2015-01-05";
  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic corpus with ground truth");
  gen->add_option("--profiles", gen_profiles,
                  "regenerate timelines and ground truth from an existing profile spec file "
                  "(address/venue/timezone databases are not re-derived)");
  gen->add_option("--users", gen_options.users, "number of users");
  gen->add_option("--weeks", gen_options.weeks, "simulated weeks");
  gen->add_option("--sigma", gen_options.sigma_m, "GPS noise sigma (m)");
  gen->add_option("--posts-per-day", gen_options.posts_per_day, "home posting rate");
  gen->add_option("--work-frac", gen_options.work_fraction, "fraction of users with a workplace");
  gen->add_option("--night-shift-frac", gen_options.night_shift_fraction,
                  "fraction of workers on night shifts");
  gen->add_option("--sensitive-frac", gen_options.sensitive_fraction,
                  "fraction of users with sensitive visits");
  gen->add_option("--utc-offset", gen_options.utc_offset_minutes, "city UTC offset (minutes)");
  gen->add_option("--start-date", gen_start, "first simulated Monday (YYYY-MM-DD)");
  gen->add_option("--seed", gen_seed, "master seed");
  gen->add_option("--out-dir", gen_dir, "output directory");

  std::filesystem::path score_report = "report.jsonl", score_gt, score_out;
  CLI::App* score_cmd = app.add_subcommand("score", "score a report against ground truth");
  score_cmd->add_option("--report", score_report, "audit report")->required();
  score_cmd->add_option("--ground-truth", score_gt, "ground truth file")->required();
  score_cmd->add_option("--out", score_out, "machine-readable scores (json)");

  std::filesystem::path train_gt, train_out = "weights.csv";
  CLI::App* train = app.add_subcommand("train-weights", "train hour weights from labeled users");
  add_common(train);
  train->add_option("--ground-truth", train_gt, "users with known home addresses")->required();
  train->add_option("--out", train_out, "weight table path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (audit->parsed()) {
      config.stages.clear();
      std::istringstream ss(stages_csv);
      std::string stage;
      while (std::getline(ss, stage, ',')) {
        if (stage == "all") {
          config.stages = kKnownStages;
        } else if (!stage.empty()) {
          config.stages.insert(stage);
        }
      }
      config.stages.insert("keyloc");
      if (!baselines_csv.empty()) {
        std::istringstream bs(baselines_csv);
        std::string name;
        while (std::getline(bs, name, ',')) {
          const auto h = parse_heuristic(name);
          if (!h) throw ConfigError("unknown heuristic: " + name);
          config.heuristics.push_back(*h);
        }
        config.stages.insert("baselines");
      }
      config.cutoffs.ios = parse_utc_date(cutoff_ios);
      config.cutoffs.android = parse_utc_date(cutoff_android);
      return cmd_audit(config, out);
    }
    if (gen->parsed()) {
      if (!gen_profiles.empty()) {
        const auto profiles = load_profiles(gen_profiles);
        Dataset dataset;
        GroundTruth gt;
        for (const auto& p : profiles) {
          auto user = generate_user(p);
          gt[user.truth.user_id] = user.truth;
          dataset[user.timeline.user_id] = std::move(user.timeline);
        }
        std::filesystem::create_directories(gen_dir);
        write_dataset(gen_dir / "dataset.jsonl", dataset);
        write_ground_truth(gen_dir / "ground_truth.csv", gt);
        write_profiles(gen_dir / "profiles.jsonl", profiles);
        std::cout << "regenerated " << profiles.size() << " users into " << gen_dir.string()
                  << "\n";
        return 0;
      }
      gen_options.start_date = {std::stoi(gen_start.substr(0, 4)),
                                std::stoi(gen_start.substr(5, 2)),
                                std::stoi(gen_start.substr(8, 2))};
      const auto corpus = generate_corpus(gen_seed, gen_options);
      write_corpus(gen_dir, corpus);
      std::cout << "corpus written to " << gen_dir.string() << " (" << corpus.profiles.size()
                << " users, " << corpus.night_shift_users << " night-shift)\n";
      return 0;
    }
    if (score_cmd->parsed()) return cmd_score(score_report, score_gt, score_out);
    if (train->parsed()) return cmd_train_weights(config, train_gt, train_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
