#include "geoaudit/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

namespace geoaudit {

using nlohmann::json;

PostRecord parse_record_line(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad json: ") + e.what());
  }
  if (!j.is_object()) throw FormatError("record is not an object");

  PostRecord r;
  try {
    r.post_id = j.at("post_id").get<std::string>();
    r.user_id = j.at("user_id").get<std::string>();
    r.timestamp_utc = j.at("ts").get<std::int64_t>();
    r.text = j.value("text", std::string{});

    const auto source = parse_source_app(j.at("source").get<std::string>());
    if (!source) throw FormatError("unknown source");
    r.source_app = *source;

    const auto geotag = parse_geotag_kind(j.at("geotag").get<std::string>());
    if (!geotag) throw FormatError("unknown geotag");
    r.geotag_kind = *geotag;

    const bool has_lat = j.contains("lat"), has_lon = j.contains("lon");
    if (has_lat != has_lon) throw FormatError("lat/lon must both be present or both absent");
    if (has_lat) r.coords = GeoPoint{j.at("lat").get<double>(), j.at("lon").get<double>()};
    if (j.contains("place") && !j.at("place").is_null())
      r.place_name = j.at("place").get<std::string>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad record field: ") + e.what());
  }

  if (auto why = validate_record(r)) throw FormatError(*why);
  return r;
}

std::string serialize_record(const PostRecord& r) {
  json j;
  j["post_id"] = r.post_id;
  j["user_id"] = r.user_id;
  j["ts"] = r.timestamp_utc;
  if (r.coords) {
    j["lat"] = r.coords->lat;
    j["lon"] = r.coords->lon;
  }
  j["text"] = r.text;
  j["source"] = to_string(r.source_app);
  j["geotag"] = to_string(r.geotag_kind);
  if (r.place_name) j["place"] = *r.place_name;
  return j.dump();
}

Dataset load_dataset(const std::filesystem::path& path, const std::set<SourceApp>& source_filter,
                     LoadStats* stats, bool strict) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset: " + path.string());

  LoadStats local;
  Dataset dataset;
  std::unordered_set<std::string> seen_ids;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    ++local.lines;
    PostRecord r;
    try {
      r = parse_record_line(line);
    } catch (const FormatError& e) {
      if (strict)
        throw FormatError("line " + std::to_string(lineno) + ": " + e.what());
      ++local.malformed;
      continue;
    }
    ++local.parsed;
    if (!source_filter.contains(r.source_app)) {
      ++local.filtered_out;
      continue;
    }
    if (!seen_ids.insert(r.post_id).second) {
      ++local.duplicates;
      continue;
    }
    auto& tl = dataset[r.user_id];
    tl.user_id = r.user_id;
    tl.posts.push_back(std::move(r));
  }

  if (local.parsed == 0) throw FormatError("no parsable records in " + path.string());

  for (auto& [_, tl] : dataset) {
    std::stable_sort(tl.posts.begin(), tl.posts.end(),
                     [](const PostRecord& a, const PostRecord& b) {
                       return a.timestamp_utc < b.timestamp_utc;
                     });
  }
  if (stats) *stats = local;
  return dataset;
}

void write_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write dataset: " + path.string());
  for (const auto& [_, tl] : dataset)
    for (const auto& r : tl.posts) out << serialize_record(r) << '\n';
}

UserTimeline geotagged_subset(const UserTimeline& t) {
  UserTimeline out;
  out.user_id = t.user_id;
  for (const auto& r : t.posts)
    if (r.coords) out.posts.push_back(r);
  return out;
}

}  // namespace geoaudit
