#include "geoaudit/report.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace geoaudit {

using nlohmann::json;

namespace {

json verdict_to_json(const LocationVerdict& v) {
  return {{"cluster_id", v.cluster_id}, {"address", v.address},
          {"lat", v.midpoint.lat},      {"lon", v.midpoint.lon},
          {"rank", v.rank},             {"score", v.score}};
}

LocationVerdict verdict_from_json(const json& j) {
  LocationVerdict v;
  v.cluster_id = j.at("cluster_id").get<int>();
  v.address = j.at("address").get<std::string>();
  v.midpoint = {j.at("lat").get<double>(), j.at("lon").get<double>()};
  v.rank = j.at("rank").get<int>();
  v.score = j.at("score").get<double>();
  return v;
}

json counts_to_json(const PeriodCounts& c) {
  return {{"total", c.total},
          {"with_coords", c.with_coords},
          {"coarse", c.coarse},
          {"coarse_with_coords", c.coarse_with_coords}};
}

PeriodCounts counts_from_json(const json& j) {
  PeriodCounts c;
  c.total = j.at("total").get<std::int64_t>();
  c.with_coords = j.at("with_coords").get<std::int64_t>();
  c.coarse = j.at("coarse").get<std::int64_t>();
  c.coarse_with_coords = j.at("coarse_with_coords").get<std::int64_t>();
  return c;
}

json user_to_json(const UserReport& u) {
  json j;
  j["type"] = "user";
  j["user_id"] = u.user_id;
  j["n_posts"] = u.n_posts;
  j["n_geotagged"] = u.n_geotagged;
  j["n_clusters"] = u.n_clusters;
  if (u.home) j["home"] = verdict_to_json(*u.home);
  if (u.work) j["work"] = verdict_to_json(*u.work);

  j["home_candidates"] = json::array();
  for (const auto& c : u.home_candidates)
    j["home_candidates"].push_back({{"cluster_id", c.cluster_id},
                                    {"active_weekends", c.active_weekends},
                                    {"breadth", c.breadth},
                                    {"members", c.members}});
  j["work_candidates"] = json::array();
  for (const auto& c : u.work_candidates)
    j["work_candidates"].push_back({{"cluster_id", c.cluster_id},
                                    {"active_weeks", c.active_weeks},
                                    {"retained_weeks", c.retained_weeks},
                                    {"dominant", std::vector<int>(c.dominant.begin(), c.dominant.end())},
                                    {"members", c.members},
                                    {"dropped_no_dominant", c.dropped_no_dominant},
                                    {"dropped_overtime", c.dropped_overtime}});

  if (!u.baselines.empty()) {
    json b = json::object();
    for (const auto& [name, verdict] : u.baselines)
      b[name] = verdict ? json{{"cluster_id", verdict->cluster_id}, {"address", verdict->address}}
                        : json(nullptr);
    j["baselines"] = std::move(b);
  }

  if (!u.pscs.empty()) {
    j["pscs"] = json::array();
    for (const auto& p : u.pscs) {
      json pj;
      pj["cluster_id"] = p.cluster_id;
      pj["primary"] = p.primary_category;
      pj["venues"] = json::array();
      for (const auto& v : p.venues)
        pj["venues"].push_back({{"venue_id", v.venue_id},
                                {"name", v.name},
                                {"distance_m", v.distance_m},
                                {"category", std::string(to_string(v.category))}});
      if (p.content)
        pj["content"] = {{"category", std::string(to_string(p.content->category))},
                         {"terms", p.content->terms}};
      if (p.duration)
        pj["duration"] = {{"kind", p.duration->kind == DurationEvidence::Kind::MultiDay
                                       ? "multi_day"
                                       : "visit"},
                          {"distinct_dates", p.duration->distinct_dates},
                          {"visit_start_ts", p.duration->visit_start_ts},
                          {"visit_end_ts", p.duration->visit_end_ts}};
      j["pscs"].push_back(std::move(pj));
    }
  }

  if (u.leakage) {
    j["policy"] = {{"pre", counts_to_json(u.leakage->pre)},
                   {"post", counts_to_json(u.leakage->post)},
                   {"coarse_no_gps_pre2010", u.leakage->coarse_no_gps_pre2010}};
  }
  if (!u.post_cutoff.empty()) {
    j["post_cutoff"] = json::array();
    for (const auto& pc : u.post_cutoff) {
      json cj = {{"offset_weeks", pc.offset_weeks}, {"posts_used", pc.posts_used}};
      if (pc.home) cj["home"] = verdict_to_json(*pc.home);
      j["post_cutoff"].push_back(std::move(cj));
    }
  }
  if (!u.diagnostics.empty()) j["diagnostics"] = u.diagnostics;
  if (!u.phase_ms.empty()) j["phase_ms"] = u.phase_ms;
  return j;
}

UserReport user_from_json(const json& j) {
  UserReport u;
  u.user_id = j.at("user_id").get<std::string>();
  u.n_posts = j.value("n_posts", 0u);
  u.n_geotagged = j.value("n_geotagged", 0u);
  u.n_clusters = j.value("n_clusters", 0u);
  if (j.contains("home")) u.home = verdict_from_json(j["home"]);
  if (j.contains("work")) u.work = verdict_from_json(j["work"]);
  if (j.contains("baselines"))
    for (const auto& [name, v] : j["baselines"].items())
      u.baselines[name] =
          v.is_null() ? std::optional<BaselineVerdict>{}
                      : std::optional<BaselineVerdict>(BaselineVerdict{
                            v.at("cluster_id").get<int>(), v.value("address", std::string{})});
  if (j.contains("pscs")) {
    for (const auto& pj : j["pscs"]) {
      PscReport p;
      p.cluster_id = pj.at("cluster_id").get<int>();
      p.primary_category = pj.at("primary").get<std::string>();
      for (const auto& vj : pj.value("venues", json::array())) {
        PscVenue v;
        v.venue_id = vj.at("venue_id").get<std::string>();
        v.name = vj.value("name", std::string{});
        v.distance_m = vj.at("distance_m").get<double>();
        v.category = parse_sensitive_category(vj.at("category").get<std::string>())
                         .value_or(SensitiveCategory::Health);
        p.venues.push_back(std::move(v));
      }
      if (pj.contains("content")) {
        ContentEvidence ce;
        ce.category = parse_sensitive_category(pj["content"].at("category").get<std::string>())
                          .value_or(SensitiveCategory::Health);
        ce.terms = pj["content"].value("terms", std::vector<std::string>{});
        p.content = std::move(ce);
      }
      if (pj.contains("duration")) {
        DurationEvidence de;
        de.kind = pj["duration"].at("kind").get<std::string>() == "multi_day"
                      ? DurationEvidence::Kind::MultiDay
                      : DurationEvidence::Kind::Visit;
        de.distinct_dates = pj["duration"].value("distinct_dates", 0);
        de.visit_start_ts = pj["duration"].value("visit_start_ts", std::int64_t{0});
        de.visit_end_ts = pj["duration"].value("visit_end_ts", std::int64_t{0});
        p.duration = de;
      }
      u.pscs.push_back(std::move(p));
    }
  }
  if (j.contains("policy")) {
    LeakageStats ls;
    ls.pre = counts_from_json(j["policy"].at("pre"));
    ls.post = counts_from_json(j["policy"].at("post"));
    ls.coarse_no_gps_pre2010 = j["policy"].value("coarse_no_gps_pre2010", std::int64_t{0});
    u.leakage = ls;
  }
  if (j.contains("post_cutoff")) {
    for (const auto& cj : j["post_cutoff"]) {
      PostCutoffOutcome pc;
      pc.offset_weeks = cj.at("offset_weeks").get<int>();
      pc.posts_used = cj.value("posts_used", 0u);
      if (cj.contains("home")) pc.home = verdict_from_json(cj["home"]);
      u.post_cutoff.push_back(std::move(pc));
    }
  }
  if (j.contains("diagnostics")) u.diagnostics = j["diagnostics"].get<std::vector<std::string>>();
  return u;
}

json meta_to_json(const RunMeta& m, const std::map<std::string, double>& total_phase_ms) {
  json j;
  j["type"] = "meta";
  j["dataset"] = m.dataset;
  j["seed"] = m.seed;
  j["thresholds"] = {{"cache_m", m.thresholds.cache_m},
                     {"eps_m", m.thresholds.eps_m},
                     {"merge_m", m.thresholds.merge_m},
                     {"venue_m", m.thresholds.venue_m},
                     {"verify_top_k", m.thresholds.verify_top_k},
                     {"candidate_window", m.thresholds.keyloc.candidate_window},
                     {"overtime_h", m.thresholds.keyloc.overtime_hours},
                     {"overtime_frac", m.thresholds.keyloc.overtime_fraction},
                     {"shift_h", m.thresholds.night_shift.shift_hours},
                     {"shift_end_minute", m.thresholds.night_shift.end_minute},
                     {"visit_gap_h", m.thresholds.visit.max_gap_hours},
                     {"visit_span_min", m.thresholds.visit.min_span_minutes},
                     {"passby_min", m.thresholds.visit.passby_minutes},
                     {"geocode_fallback_m", m.geocode_fallback_m}};
  j["tfidf_variant"] = m.tfidf_variant;
  j["providers"] = {{"bulk", m.bulk_provider},
                    {"authoritative", m.authoritative_provider},
                    {"timezone", m.tz_provider}};
  j["cache_scope"] = m.cache_scope;
  j["stages"] = m.stages;
  j["baselines"] = m.baselines;
  if (!m.notes.empty()) j["notes"] = m.notes;
  j["total_phase_ms"] = total_phase_ms;
  return j;
}

void meta_from_json(const json& j, AuditReport& report) {
  RunMeta& m = report.meta;
  m.dataset = j.value("dataset", std::string{});
  m.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("thresholds")) {
    const auto& t = j["thresholds"];
    m.thresholds.cache_m = t.value("cache_m", 2.0);
    m.thresholds.eps_m = t.value("eps_m", 30.0);
    m.thresholds.merge_m = t.value("merge_m", 50.0);
    m.thresholds.venue_m = t.value("venue_m", 25.0);
    m.thresholds.verify_top_k = t.value("verify_top_k", 10u);
    m.thresholds.keyloc.candidate_window = t.value("candidate_window", 5u);
    m.thresholds.keyloc.overtime_hours = t.value("overtime_h", 10.0);
    m.thresholds.keyloc.overtime_fraction = t.value("overtime_frac", 0.2);
    m.thresholds.night_shift.shift_hours = t.value("shift_h", 8.0);
    m.thresholds.night_shift.end_minute = t.value("shift_end_minute", 420);
    m.thresholds.visit.max_gap_hours = t.value("visit_gap_h", 3.0);
    m.thresholds.visit.min_span_minutes = t.value("visit_span_min", 30.0);
    m.thresholds.visit.passby_minutes = t.value("passby_min", 5.0);
    m.geocode_fallback_m = t.value("geocode_fallback_m", 40.0);
  }
  m.tfidf_variant = j.value("tfidf_variant", std::string{});
  if (j.contains("providers")) {
    m.bulk_provider = j["providers"].value("bulk", std::string{});
    m.authoritative_provider = j["providers"].value("authoritative", std::string{});
    m.tz_provider = j["providers"].value("timezone", std::string{});
  }
  m.cache_scope = j.value("cache_scope", std::string{"per-user"});
  m.stages = j.value("stages", std::vector<std::string>{});
  m.baselines = j.value("baselines", std::vector<std::string>{});
  m.notes = j.value("notes", std::vector<std::string>{});
  if (j.contains("total_phase_ms"))
    report.total_phase_ms = j["total_phase_ms"].get<std::map<std::string, double>>();
}

}  // namespace

void write_report(const std::filesystem::path& path, const AuditReport& report) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write report: " + path.string());
  out << meta_to_json(report.meta, report.total_phase_ms).dump() << '\n';
  for (const auto& u : report.users) out << user_to_json(u).dump() << '\n';
}

AuditReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open report: " + path.string());
  AuditReport report;
  std::string line;
  bool meta_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw FormatError(std::string("bad report line: ") + e.what());
    }
    const std::string type = j.value("type", std::string{});
    if (type == "meta") {
      meta_from_json(j, report);
      meta_seen = true;
    } else if (type == "user") {
      report.users.push_back(user_from_json(j));
    }
  }
  if (!meta_seen && report.users.empty()) throw FormatError("empty report: " + path.string());
  return report;
}

std::string report_summary(const AuditReport& report) {
  std::size_t homes = 0, works = 0, pscs = 0, cb = 0, db = 0, both = 0;
  for (const auto& u : report.users) {
    homes += u.home.has_value();
    works += u.work.has_value();
    pscs += u.pscs.size();
    for (const auto& p : u.pscs) {
      cb += p.content.has_value();
      db += p.duration.has_value();
      both += p.content.has_value() && p.duration.has_value();
    }
  }
  std::ostringstream os;
  os << "users: " << report.users.size() << "\n"
     << "homes inferred: " << homes << "\n"
     << "workplaces inferred: " << works << "\n"
     << "potentially sensitive clusters: " << pscs << " (content-corroborated " << cb
     << ", duration-corroborated " << db << ", common " << both << ")\n";
  for (const auto& [phase, ms] : report.total_phase_ms)
    os << "phase " << phase << ": " << ms << " ms\n";
  return os.str();
}

ScoreTable score(const AuditReport& report, const GroundTruth& gt) {
  if (gt.empty()) throw std::invalid_argument("score: empty ground truth");

  std::map<std::string, const UserReport*> by_id;
  for (const auto& u : report.users) by_id[u.user_id] = &u;

  ScoreTable table;
  for (const auto& [user_id, truth] : gt) {
    const auto it = by_id.find(user_id);
    const UserReport* u = it == by_id.end() ? nullptr : it->second;

    ++table.home.users;
    if (u && u->home) {
      ++table.home.inferred;
      if (normalize_address(u->home->address) == truth.home_address) ++table.home.correct;
    }
    if (!truth.work_address.empty()) {
      ++table.work.users;
      if (u && u->work) {
        ++table.work.inferred;
        if (normalize_address(u->work->address) == truth.work_address) ++table.work.correct;
      }
    }

    // Sensitive scoring: a content-corroborated PSC counts once; it is a true
    // positive when one of its venues was actually planted for this user.
    std::set<std::string> truth_venues(truth.sensitive_venue_ids.begin(),
                                       truth.sensitive_venue_ids.end());
    std::set<std::string> claimed;
    if (u) {
      for (const auto& p : u->pscs) {
        if (!p.content) continue;
        bool hit = false;
        for (const auto& v : p.venues)
          if (truth_venues.contains(v.venue_id)) {
            claimed.insert(v.venue_id);
            hit = true;
          }
        if (hit)
          ++table.sensitive_cb.tp;
        else
          ++table.sensitive_cb.fp;
      }
    }
    table.sensitive_cb.fn +=
        static_cast<std::int64_t>(truth_venues.size() - claimed.size());

    if (u) {
      for (const auto& [name, verdict] : u->baselines) {
        auto& row = table.baselines[name];
        const auto h = parse_heuristic(name);
        const bool work_target = h && is_work_heuristic(*h);
        const std::string& expect = work_target ? truth.work_address : truth.home_address;
        if (work_target && expect.empty()) continue;
        ++row.users;
        if (!verdict) continue;
        ++row.inferred;
        if (normalize_address(verdict->address) == expect) ++row.correct;
      }
    }
  }
  return table;
}

std::string score_summary(const ScoreTable& table) {
  std::ostringstream os;
  os.precision(4);
  os << "home: precision " << 100.0 * table.home.precision() << "% (" << table.home.correct << "/"
     << table.home.inferred << "), coverage " << 100.0 * table.home.coverage() << "% ("
     << table.home.inferred << "/" << table.home.users << ")\n";
  os << "work: precision " << 100.0 * table.work.precision() << "% (" << table.work.correct << "/"
     << table.work.inferred << "), coverage " << 100.0 * table.work.coverage() << "% ("
     << table.work.inferred << "/" << table.work.users << ")\n";
  os << "sensitive (CB): precision " << 100.0 * table.sensitive_cb.precision() << "%, recall "
     << 100.0 * table.sensitive_cb.recall() << "%, f-score " << 100.0 * table.sensitive_cb.f_score()
     << "% (tp " << table.sensitive_cb.tp << ", fp " << table.sensitive_cb.fp << ", fn "
     << table.sensitive_cb.fn << ")\n";
  for (const auto& [name, row] : table.baselines)
    os << "baseline " << name << ": precision " << 100.0 * row.precision() << "%, coverage "
       << 100.0 * row.coverage() << "%\n";
  return os.str();
}

}  // namespace geoaudit
