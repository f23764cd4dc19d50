#pragma once

#include <unordered_map>
#include <vector>

#include "geoaudit/types.hpp"

namespace geoaudit {

// Posts grouped by identical postal address, or by 30 m density clustering
// when the address is unknown. Members index into the post vector the cluster
// functions were given.
struct FirstLevelCluster {
  int id = 0;
  AddressLabel label;
  std::vector<std::size_t> members;  // ascending post indices
  GeoPoint midpoint;
};

struct MergedSource {
  int fl_id = 0;
  GeoPoint fl_midpoint;  // first-level midpoint at merge time
  std::size_t fl_size = 0;
};

// Second-level cluster: a dominant first-level cluster plus every neighbor
// whose midpoint lies within the merge radius of the dominant's original
// midpoint.
struct Cluster {
  int id = 0;  // dominant first-level id
  AddressLabel label;
  std::vector<std::size_t> members;
  GeoPoint midpoint;  // recomputed over the union
  double max_radius_m = 0.0;
  int rank = 0;  // 1 = largest within the user
  GeoPoint dominant_midpoint;  // pre-merge midpoint the absorption test used
  std::vector<MergedSource> merged_from;
};

// Density clustering with neighborhood radius eps_m and minimum neighborhood
// size 1: every point is assigned, chains of <= eps_m hops join (the cascading
// case), no noise class. Input pairs are (post index, coordinates); all carry
// unknown addresses. Cluster ids are assigned in order of first member.
std::vector<FirstLevelCluster> density_cluster_unknown(
    const std::vector<std::pair<std::size_t, GeoPoint>>& points, double eps_m = 30.0);

// One cluster per distinct resolved address; unknown-labeled posts are density
// clustered. Every post lands in exactly one cluster. Posts must all carry
// coordinates and have a label.
std::vector<FirstLevelCluster> first_level_clusters(
    const std::vector<PostRecord>& posts,
    const std::unordered_map<std::string, AddressLabel>& labels_by_post_id,
    double eps_m = 30.0);

// Sweeps first-level clusters in descending size (ties by ascending id); each
// not-yet-absorbed cluster seeds a second-level cluster and absorbs every
// remaining cluster whose midpoint is within radius_m of the seed's original
// midpoint. The distance test always uses pre-merge midpoints, so absorption
// does not cascade. Result is ordered by rank.
std::vector<Cluster> second_level_merge(const std::vector<FirstLevelCluster>& first_level,
                                        const std::vector<PostRecord>& posts,
                                        double radius_m = 50.0);

}  // namespace geoaudit
