#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace geoaudit {

// Planted (or manually established) answers per user. Addresses are stored
// normalized; an empty work_address means the user has no workplace. File
// rows: user_id,home_address,work_address,sensitive_venue_ids(pipe-separated).
struct GroundTruthEntry {
  std::string user_id;
  std::string home_address;
  std::string work_address;
  std::vector<std::string> sensitive_venue_ids;
};

using GroundTruth = std::map<std::string, GroundTruthEntry>;

GroundTruth load_ground_truth(const std::filesystem::path& path);
void write_ground_truth(const std::filesystem::path& path, const GroundTruth& gt);

}  // namespace geoaudit
