#include "geoaudit/ground_truth.hpp"

#include <fstream>
#include <sstream>

#include "geoaudit/types.hpp"

namespace geoaudit {

GroundTruth load_ground_truth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open ground truth: " + path.string());
  GroundTruth gt;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    GroundTruthEntry e;
    std::string venues;
    if (!std::getline(ss, e.user_id, ',') || !std::getline(ss, e.home_address, ','))
      throw FormatError("bad ground truth row " + std::to_string(lineno));
    std::getline(ss, e.work_address, ',');
    std::getline(ss, venues);
    e.home_address = normalize_address(e.home_address);
    e.work_address = normalize_address(e.work_address);
    std::istringstream vs(venues);
    std::string v;
    while (std::getline(vs, v, '|'))
      if (!v.empty()) e.sensitive_venue_ids.push_back(v);
    gt[e.user_id] = std::move(e);
  }
  return gt;
}

void write_ground_truth(const std::filesystem::path& path, const GroundTruth& gt) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write ground truth: " + path.string());
  for (const auto& [_, e] : gt) {
    out << e.user_id << ',' << e.home_address << ',' << e.work_address << ',';
    for (std::size_t i = 0; i < e.sensitive_venue_ids.size(); ++i) {
      if (i) out << '|';
      out << e.sensitive_venue_ids[i];
    }
    out << '\n';
  }
}

}  // namespace geoaudit
