#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "geoaudit/pipeline.hpp"
#include "geoaudit/synthgen.hpp"

using namespace geoaudit;

namespace {

struct CorpusOnDisk {
  std::filesystem::path dir;
  Corpus corpus;
};

const CorpusOnDisk& small_corpus() {
  static const CorpusOnDisk fixture = [] {
    CorpusOnDisk f;
    CorpusOptions opts;
    opts.users = 10;
    opts.weeks = 10;
    f.corpus = generate_corpus(11, opts);
    f.dir = std::filesystem::temp_directory_path() / "ga_pipeline_corpus";
    write_corpus(f.dir, f.corpus);
    return f;
  }();
  return fixture;
}

AuditConfig base_config() {
  const auto& f = small_corpus();
  AuditConfig c;
  c.dataset = f.dir / "dataset.jsonl";
  c.geocode_db = f.dir / "geocode_db.jsonl";
  c.tz_db = f.dir / "tz.csv";
  return c;
}

}  // namespace

TEST_CASE("a ten-user corpus produces a ten-entry report") {
  const auto report = run_audit(base_config());
  CHECK(report.users.size() == 10);
  for (std::size_t i = 1; i < report.users.size(); ++i)
    CHECK(report.users[i - 1].user_id < report.users[i].user_id);
  for (const auto& u : report.users) {
    CHECK(u.n_geotagged > 0);
    CHECK(u.n_clusters > 0);
  }
}

TEST_CASE("the sensitive stage requires its inputs") {
  auto config = base_config();
  config.stages = {"keyloc", "sensitive"};
  CHECK_THROWS_AS(run_audit(config), ConfigError);

  config.venue_db = small_corpus().dir / "venues.csv";
  CHECK_THROWS_AS(run_audit(config), ConfigError);  // still no wordlists

  config.wordlists_dir = std::filesystem::path(GEOAUDIT_DATA_DIR) / "wordlists";
  const auto report = run_audit(config);
  CHECK(report.users.size() == 10);
}

TEST_CASE("unknown stages are rejected") {
  auto config = base_config();
  config.stages = {"keyloc", "frobnicate"};
  CHECK_THROWS_AS(run_audit(config), ConfigError);
}

TEST_CASE("requested baselines appear in the report, others do not") {
  auto config = base_config();
  config.stages = {"keyloc", "baselines"};
  config.heuristics = {HeuristicId::H1_LargestCluster, HeuristicId::H15_SecondLargest};
  const auto report = run_audit(config);
  for (const auto& u : report.users) {
    CHECK(u.baselines.size() == 2);
    CHECK(u.baselines.contains("H1"));
    CHECK(u.baselines.contains("H15"));
    CHECK_FALSE(u.baselines.contains("H2"));
  }
  CHECK(report.meta.baselines == std::vector<std::string>{"H1", "H15"});
}

TEST_CASE("reports are deterministic for a fixed corpus and config") {
  auto config = base_config();
  config.stages = {"keyloc", "baselines", "policy"};
  config.seed = 5;
  const auto a = run_audit(config);
  const auto b = run_audit(config);

  const auto strip = [](AuditReport r) {
    r.total_phase_ms.clear();
    for (auto& u : r.users) u.phase_ms.clear();
    return r;
  };
  const auto pa = std::filesystem::temp_directory_path() / "ga_det_a.jsonl";
  const auto pb = std::filesystem::temp_directory_path() / "ga_det_b.jsonl";
  write_report(pa, strip(a));
  write_report(pb, strip(b));
  std::ifstream fa(pa), fb(pb);
  const std::string ca((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
  const std::string cb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
  CHECK(ca == cb);
}

TEST_CASE("a worker pool yields the same report as sequential processing") {
  auto sequential = base_config();
  auto pooled = base_config();
  pooled.jobs = 3;
  const auto a = run_audit(sequential);
  const auto b = run_audit(pooled);
  REQUIRE(a.users.size() == b.users.size());
  for (std::size_t i = 0; i < a.users.size(); ++i) {
    CHECK(a.users[i].user_id == b.users[i].user_id);
    CHECK(a.users[i].home.has_value() == b.users[i].home.has_value());
    if (a.users[i].home && b.users[i].home) {
      CHECK(a.users[i].home->cluster_id == b.users[i].home->cluster_id);
      CHECK(a.users[i].home->address == b.users[i].home->address);
    }
    CHECK(a.users[i].n_clusters == b.users[i].n_clusters);
  }
}

TEST_CASE("global cache scope produces the same verdicts as per-user caches") {
  auto per_user = base_config();
  auto global = base_config();
  global.cache_scope = "global";
  const auto a = run_audit(per_user);
  const auto b = run_audit(global);
  REQUIRE(a.users.size() == b.users.size());
  for (std::size_t i = 0; i < a.users.size(); ++i) {
    CHECK(a.users[i].home.has_value() == b.users[i].home.has_value());
    if (a.users[i].home && b.users[i].home)
      CHECK(a.users[i].home->address == b.users[i].home->address);
  }
}

TEST_CASE("the meta line is self-describing") {
  auto config = base_config();
  config.thresholds.eps_m = 25.0;
  config.seed = 99;
  const auto report = run_audit(config);
  CHECK(report.meta.thresholds.eps_m == 25.0);
  CHECK(report.meta.seed == 99);
  CHECK(report.meta.bulk_provider == "file-bulk");
  CHECK_FALSE(report.meta.tfidf_variant.empty());

  const auto path = std::filesystem::temp_directory_path() / "ga_meta.jsonl";
  write_report(path, report);
  const auto loaded = read_report(path);
  CHECK(loaded.meta.thresholds.eps_m == 25.0);
  CHECK(loaded.meta.seed == 99);
}

TEST_CASE("end to end: planted homes come back out of the pipeline") {
  auto config = base_config();
  const auto report = run_audit(config);
  const auto gt = load_ground_truth(small_corpus().dir / "ground_truth.csv");
  const auto table = score(report, gt);
  CHECK(table.home.coverage() == doctest::Approx(1.0));
  CHECK(table.home.precision() >= 0.9);
}
