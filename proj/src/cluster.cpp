#include "geoaudit/cluster.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "geoaudit/geo.hpp"

namespace geoaudit {

std::vector<FirstLevelCluster> density_cluster_unknown(
    const std::vector<std::pair<std::size_t, GeoPoint>>& points, double eps_m) {
  std::vector<FirstLevelCluster> out;
  if (points.empty()) return out;

  GridIndex grid(eps_m);
  for (std::uint32_t i = 0; i < points.size(); ++i) grid.insert(points[i].second, i);

  std::vector<bool> assigned(points.size(), false);
  std::vector<GridIndex::Hit> hits;
  std::vector<std::uint32_t> frontier;

  for (std::uint32_t seed = 0; seed < points.size(); ++seed) {
    if (assigned[seed]) continue;
    FirstLevelCluster c;
    c.id = static_cast<int>(out.size());
    c.label = AddressLabel::unknown();

    frontier.assign(1, seed);
    assigned[seed] = true;
    std::vector<std::uint32_t> collected{seed};
    while (!frontier.empty()) {
      const std::uint32_t cur = frontier.back();
      frontier.pop_back();
      grid.query(points[cur].second, eps_m, hits);
      for (const auto& h : hits) {
        if (assigned[h.payload]) continue;
        assigned[h.payload] = true;
        collected.push_back(h.payload);
        frontier.push_back(h.payload);
      }
    }
    std::sort(collected.begin(), collected.end());
    std::vector<GeoPoint> coords;
    coords.reserve(collected.size());
    for (std::uint32_t i : collected) {
      c.members.push_back(points[i].first);
      coords.push_back(points[i].second);
    }
    c.midpoint = geometric_midpoint(coords);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<FirstLevelCluster> first_level_clusters(
    const std::vector<PostRecord>& posts,
    const std::unordered_map<std::string, AddressLabel>& labels_by_post_id, double eps_m) {
  std::map<std::string, std::vector<std::size_t>> by_address;  // sorted for id stability
  std::vector<std::pair<std::size_t, GeoPoint>> unknown_points;

  for (std::size_t i = 0; i < posts.size(); ++i) {
    const auto& post = posts[i];
    if (!post.coords) throw std::invalid_argument("first_level_clusters: post without coords");
    auto it = labels_by_post_id.find(post.post_id);
    if (it == labels_by_post_id.end())
      throw std::invalid_argument("first_level_clusters: unlabeled post " + post.post_id);
    if (it->second.is_resolved())
      by_address[it->second.address].push_back(i);
    else
      unknown_points.emplace_back(i, *post.coords);
  }

  std::vector<FirstLevelCluster> out;
  out.reserve(by_address.size());
  for (auto& [address, members] : by_address) {
    FirstLevelCluster c;
    c.id = static_cast<int>(out.size());
    c.label = AddressLabel::resolved(address);
    c.members = std::move(members);
    std::vector<GeoPoint> coords;
    coords.reserve(c.members.size());
    for (std::size_t i : c.members) coords.push_back(*posts[i].coords);
    c.midpoint = geometric_midpoint(coords);
    out.push_back(std::move(c));
  }

  auto unknown = density_cluster_unknown(unknown_points, eps_m);
  for (auto& c : unknown) {
    c.id = static_cast<int>(out.size());
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Cluster> second_level_merge(const std::vector<FirstLevelCluster>& first_level,
                                        const std::vector<PostRecord>& posts, double radius_m) {
  std::vector<std::size_t> order(first_level.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (first_level[a].members.size() != first_level[b].members.size())
      return first_level[a].members.size() > first_level[b].members.size();
    return first_level[a].id < first_level[b].id;
  });

  std::vector<bool> absorbed(first_level.size(), false);
  std::vector<Cluster> out;

  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const std::size_t di = order[oi];
    if (absorbed[di]) continue;
    const FirstLevelCluster& dom = first_level[di];

    Cluster c;
    c.id = dom.id;
    c.label = dom.label;
    c.dominant_midpoint = dom.midpoint;

    for (std::size_t oj = oi; oj < order.size(); ++oj) {
      const std::size_t j = order[oj];
      if (absorbed[j]) continue;
      if (haversine_m(first_level[j].midpoint, dom.midpoint) <= radius_m) {
        absorbed[j] = true;
        c.merged_from.push_back(
            {first_level[j].id, first_level[j].midpoint, first_level[j].members.size()});
        c.members.insert(c.members.end(), first_level[j].members.begin(),
                         first_level[j].members.end());
      }
    }
    std::sort(c.members.begin(), c.members.end());

    std::vector<GeoPoint> coords;
    coords.reserve(c.members.size());
    for (std::size_t i : c.members) coords.push_back(*posts[i].coords);
    c.midpoint = geometric_midpoint(coords);
    c.max_radius_m = 0.0;
    for (const auto& p : coords) c.max_radius_m = std::max(c.max_radius_m, haversine_m(c.midpoint, p));
    out.push_back(std::move(c));
  }

  std::sort(out.begin(), out.end(), [](const Cluster& a, const Cluster& b) {
    if (a.members.size() != b.members.size()) return a.members.size() > b.members.size();
    return a.id < b.id;
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = static_cast<int>(i) + 1;
  return out;
}

}  // namespace geoaudit
