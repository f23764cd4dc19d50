#include "geoaudit/keyloc.hpp"

#include <algorithm>

namespace geoaudit {

namespace {

// Shared tie-break: more members first, then smaller id.
bool size_id_less(const ClusterAnalysis& a, const ClusterAnalysis& b) {
  if (a.cluster.members.size() != b.cluster.members.size())
    return a.cluster.members.size() > b.cluster.members.size();
  return a.cluster.id < b.cluster.id;
}

int retained_active_weeks(const ClusterAnalysis& ca, const std::set<int>& dominant) {
  std::set<IsoWeek> weeks;
  for (const auto& p : ca.posts)
    if (dominant.contains(p.local_hour)) weeks.insert(p.week);
  return static_cast<int>(weeks.size());
}

std::vector<HomeCandidate> home_candidates(const std::vector<ClusterAnalysis>& clusters,
                                           const KeyLocRules& rules) {
  std::vector<const ClusterAnalysis*> order;
  order.reserve(clusters.size());
  for (const auto& c : clusters) order.push_back(&c);
  std::sort(order.begin(), order.end(), [](const ClusterAnalysis* a, const ClusterAnalysis* b) {
    if (a->profile.active_weekend_count != b->profile.active_weekend_count)
      return a->profile.active_weekend_count > b->profile.active_weekend_count;
    return size_id_less(*a, *b);
  });

  std::vector<HomeCandidate> out;
  for (const auto* c : order) {
    if (out.size() == rules.candidate_window) break;
    if (c->profile.active_weekend_count == 0) break;  // sorted, rest are zero too
    out.push_back({c->cluster.id, c->profile.active_weekend_count, c->profile.breadth,
                   c->cluster.members.size()});
  }
  return out;
}

std::vector<WorkCandidate> work_candidates(const std::vector<ClusterAnalysis>& clusters,
                                           std::optional<int> home_id,
                                           const KeyLocRules& rules) {
  std::vector<const ClusterAnalysis*> order;
  for (const auto& c : clusters)
    if (!home_id || c.cluster.id != *home_id) order.push_back(&c);
  std::sort(order.begin(), order.end(), [](const ClusterAnalysis* a, const ClusterAnalysis* b) {
    if (a->profile.active_week_count != b->profile.active_week_count)
      return a->profile.active_week_count > b->profile.active_week_count;
    return size_id_less(*a, *b);
  });
  if (order.size() > rules.candidate_window) order.resize(rules.candidate_window);

  std::vector<WorkCandidate> out;
  for (const auto* c : order) {
    WorkCandidate w;
    w.cluster_id = c->cluster.id;
    w.active_weeks = c->profile.active_week_count;
    w.members = c->cluster.members.size();
    if (!c->profile.has_dominant || c->profile.dominant.empty()) {
      w.dropped_no_dominant = true;
      out.push_back(std::move(w));
      continue;
    }
    w.dominant = c->profile.dominant;

    const auto& shifts = c->profile.shifts;
    const double overtime_minutes = rules.overtime_hours * 60.0;
    const auto over = static_cast<double>(std::count_if(
        shifts.begin(), shifts.end(),
        [&](const ActiveFrame& f) { return f.span_minutes > overtime_minutes; }));
    // strictly more than the tolerated share of daily frames in overtime
    if (over > rules.overtime_fraction * static_cast<double>(shifts.size())) {
      w.dropped_overtime = true;
      out.push_back(std::move(w));
      continue;
    }
    w.retained_weeks = retained_active_weeks(*c, w.dominant);
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace

std::optional<int> infer_home(const std::vector<ClusterAnalysis>& clusters,
                              const KeyLocRules& rules) {
  const auto candidates = home_candidates(clusters, rules);
  if (candidates.empty()) return std::nullopt;
  const HomeCandidate* best = &candidates.front();
  for (const auto& c : candidates) {
    if (c.breadth > best->breadth ||
        (c.breadth == best->breadth &&
         (c.members > best->members ||
          (c.members == best->members && c.cluster_id < best->cluster_id))))
      best = &c;
  }
  return best->cluster_id;
}

std::optional<int> infer_work(const std::vector<ClusterAnalysis>& clusters,
                              std::optional<int> home_id, const KeyLocRules& rules) {
  const auto candidates = work_candidates(clusters, home_id, rules);
  const WorkCandidate* best = nullptr;
  for (const auto& c : candidates) {
    if (c.dropped_no_dominant || c.dropped_overtime) continue;
    if (!best || c.retained_weeks > best->retained_weeks ||
        (c.retained_weeks == best->retained_weeks &&
         (c.members > best->members ||
          (c.members == best->members && c.cluster_id < best->cluster_id))))
      best = &c;
  }
  if (!best) return std::nullopt;
  return best->cluster_id;
}

KeyLocationResult infer_key_locations(const std::vector<ClusterAnalysis>& clusters,
                                      const KeyLocRules& rules) {
  KeyLocationResult r;
  r.home_candidates = home_candidates(clusters, rules);
  r.home = infer_home(clusters, rules);
  r.work_candidates = work_candidates(clusters, r.home, rules);
  r.work = infer_work(clusters, r.home, rules);
  if (!r.home) r.diagnostics.push_back("home: no cluster with weekend activity");
  if (!r.work) r.diagnostics.push_back("work: no surviving candidate");
  return r;
}

}  // namespace geoaudit
