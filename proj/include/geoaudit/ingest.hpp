#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "geoaudit/types.hpp"

namespace geoaudit {

struct UserTimeline {
  std::string user_id;
  std::vector<PostRecord> posts;  // ascending by timestamp_utc, unique post_id
};

using Dataset = std::map<std::string, UserTimeline>;

struct LoadStats {
  std::size_t lines = 0;
  std::size_t parsed = 0;
  std::size_t malformed = 0;
  std::size_t filtered_out = 0;
  std::size_t duplicates = 0;
};

inline const std::set<SourceApp> kDefaultSourceFilter = {
    SourceApp::AndroidOfficial, SourceApp::IOSOfficial, SourceApp::Foursquare};

// One JSON object per line with fields: post_id, user_id, ts, lat/lon (both or
// neither), text, source, geotag, place (optional).
PostRecord parse_record_line(const std::string& line);  // throws FormatError
std::string serialize_record(const PostRecord& r);

// Drops records whose source_app is outside source_filter, de-duplicates by
// post_id (first occurrence wins), sorts per-user by timestamp (stable).
// Malformed lines are counted and skipped unless strict, in which case the
// first one aborts the load. Throws IoError on an unreadable file and
// FormatError when no line parses at all.
Dataset load_dataset(const std::filesystem::path& path, const std::set<SourceApp>& source_filter,
                     LoadStats* stats = nullptr, bool strict = false);

void write_dataset(const std::filesystem::path& path, const Dataset& dataset);

// Posts that carry coordinates, original order preserved.
UserTimeline geotagged_subset(const UserTimeline& t);

}  // namespace geoaudit
