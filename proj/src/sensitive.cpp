#include "geoaudit/sensitive.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace geoaudit {

std::string_view to_string(SensitiveCategory c) {
  switch (c) {
    case SensitiveCategory::Health: return "health";
    case SensitiveCategory::Religion: return "religion";
    case SensitiveCategory::SexNightlife: return "sex_nightlife";
  }
  return "?";
}

std::optional<SensitiveCategory> parse_sensitive_category(std::string_view s) {
  if (s == "health") return SensitiveCategory::Health;
  if (s == "religion") return SensitiveCategory::Religion;
  if (s == "sex_nightlife") return SensitiveCategory::SexNightlife;
  return std::nullopt;
}

std::vector<Venue> load_venues(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open venue db: " + path.string());
  std::vector<Venue> venues;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    // venue_id,name,category_path,lat,lon -- only the name may contain commas,
    // so extra fields fold back into it.
    std::vector<std::string> fields;
    std::istringstream ss(line);
    std::string part;
    while (std::getline(ss, part, ',')) fields.push_back(part);
    if (fields.size() < 5) throw FormatError("bad venue row " + std::to_string(lineno));

    Venue v;
    v.venue_id = fields.front();
    const std::size_t n = fields.size();
    v.name = fields[1];
    for (std::size_t i = 2; i + 3 < n; ++i) v.name += "," + fields[i];
    try {
      v.coords.lat = std::stod(fields[n - 2]);
      v.coords.lon = std::stod(fields[n - 1]);
    } catch (const std::exception&) {
      throw FormatError("bad venue coordinates on row " + std::to_string(lineno));
    }
    std::istringstream cats(fields[n - 3]);
    while (std::getline(cats, part, '|'))
      if (!part.empty()) v.category_path.push_back(part);
    if (v.venue_id.empty() || v.category_path.empty())
      throw FormatError("bad venue row " + std::to_string(lineno));
    venues.push_back(std::move(v));
  }
  return venues;
}

CategoryMap CategoryMap::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open category map: " + path.string());
  std::map<std::string, SensitiveCategory> mapping;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) throw FormatError("bad category row " + std::to_string(lineno));
    const auto cat = parse_sensitive_category(line.substr(comma + 1));
    if (!cat) throw FormatError("unknown sensitive category on row " + std::to_string(lineno));
    mapping[line.substr(0, comma)] = *cat;
  }
  return CategoryMap(std::move(mapping));
}

std::optional<SensitiveCategory> CategoryMap::classify(const Venue& v) const {
  for (auto it = v.category_path.rbegin(); it != v.category_path.rend(); ++it) {
    auto found = mapping_.find(*it);
    if (found != mapping_.end()) return found->second;
  }
  return std::nullopt;
}

VenueIndex::VenueIndex(std::vector<Venue> venues, const CategoryMap& categories) : grid_(25.0) {
  for (auto& v : venues) {
    if (auto cat = categories.classify(v)) {
      const auto idx = venues_.size();
      venues_.push_back(std::move(v));
      categories_.push_back(*cat);
      grid_.insert(venues_[idx].coords, static_cast<std::uint32_t>(idx));
    }
  }
}

std::vector<VenueIndex::Near> VenueIndex::within(const GeoPoint& p, double radius_m) const {
  std::vector<GridIndex::Hit> hits;
  grid_.query(p, radius_m, hits);
  std::vector<Near> out;
  out.reserve(hits.size());
  for (const auto& h : hits)
    out.push_back({&venues_[h.payload], h.distance_m, categories_[h.payload]});
  std::sort(out.begin(), out.end(), [](const Near& a, const Near& b) {
    if (a.distance_m != b.distance_m) return a.distance_m < b.distance_m;
    return a.venue->venue_id < b.venue->venue_id;
  });
  return out;
}

std::vector<Psc> find_pscs(const std::vector<ClusterAnalysis>& clusters, const VenueIndex& venues,
                           double radius_m) {
  std::vector<Psc> out;
  for (const auto& ca : clusters) {
    const auto near = venues.within(ca.cluster.midpoint, radius_m);
    if (near.empty()) continue;
    Psc psc;
    psc.cluster_id = ca.cluster.id;
    for (const auto& n : near) {
      psc.nearby.push_back({n.venue->venue_id, n.venue->name, n.distance_m, n.category});
      psc.attributed.insert(n.category);
    }
    psc.primary = psc.nearby.front().category;
    out.push_back(std::move(psc));
  }
  return out;
}

Wordlists::Wordlists(std::map<SensitiveCategory, std::set<std::string>> lists)
    : lists_(std::move(lists)) {
  std::map<std::string, SensitiveCategory> seen;
  for (const auto& [cat, words] : lists_)
    for (const auto& w : words) {
      auto [it, inserted] = seen.emplace(w, cat);
      if (!inserted && it->second != cat)
        throw FormatError("wordlist term in two categories: " + w);
    }
}

Wordlists Wordlists::load(const std::filesystem::path& dir) {
  std::map<SensitiveCategory, std::set<std::string>> lists;
  for (SensitiveCategory cat : {SensitiveCategory::Health, SensitiveCategory::Religion,
                                SensitiveCategory::SexNightlife}) {
    const auto path = dir / (std::string(to_string(cat)) + ".txt");
    std::ifstream in(path);
    if (!in) throw IoError("cannot open wordlist: " + path.string());
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty() && line[0] != '#') lists[cat].insert(line);
    }
  }
  return Wordlists(std::move(lists));
}

bool Wordlists::contains(SensitiveCategory c, const std::string& lemma) const {
  auto it = lists_.find(c);
  return it != lists_.end() && it->second.contains(lemma);
}

bool Wordlists::empty() const {
  for (const auto& [cat, words] : lists_)
    if (!words.empty()) return false;
  return true;
}

std::optional<ContentEvidence> content_corroborate(const Psc& psc,
                                                   const std::vector<ScoredTerm>& top_terms,
                                                   const Wordlists& wordlists) {
  std::map<SensitiveCategory, std::vector<std::string>> matches;
  for (const auto& st : top_terms)
    for (SensitiveCategory cat : psc.attributed)
      if (wordlists.contains(cat, st.term)) matches[cat].push_back(st.term);
  if (matches.empty()) return std::nullopt;

  SensitiveCategory winner;
  if (matches.contains(psc.primary)) {
    winner = psc.primary;
  } else {
    // nearest venue whose category matched; nearby is distance-sorted
    winner = matches.begin()->first;
    for (const auto& v : psc.nearby) {
      if (matches.contains(v.category)) {
        winner = v.category;
        break;
      }
    }
  }
  return ContentEvidence{winner, matches[winner]};
}

std::optional<DurationEvidence> duration_corroborate(const std::vector<LocalizedPost>& posts,
                                                     const VisitParams& params) {
  if (posts.size() < 2) return std::nullopt;

  std::set<CivilDate> dates;
  for (const auto& p : posts) dates.insert(p.local_date);
  if (dates.size() >= 2) {
    DurationEvidence e{DurationEvidence::Kind::MultiDay, static_cast<int>(dates.size()), 0, 0};
    return e;
  }

  std::vector<std::int64_t> ts;
  ts.reserve(posts.size());
  for (const auto& p : posts) ts.push_back(p.ts_utc);
  std::sort(ts.begin(), ts.end());

  const auto max_gap = static_cast<std::int64_t>(params.max_gap_hours * 3600.0);
  std::size_t visit_begin = 0;
  for (std::size_t i = 1; i <= ts.size(); ++i) {
    const bool breaks = i == ts.size() || ts[i] - ts[i - 1] > max_gap;
    if (!breaks) continue;
    const double span_min = static_cast<double>(ts[i - 1] - ts[visit_begin]) / 60.0;
    if (span_min >= params.min_span_minutes && span_min > params.passby_minutes) {
      DurationEvidence e{DurationEvidence::Kind::Visit, 1, ts[visit_begin], ts[i - 1]};
      return e;
    }
    visit_begin = i;
  }
  return std::nullopt;
}

}  // namespace geoaudit
