#include "geoaudit/textproc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>

#include "geoaudit/types.hpp"

namespace geoaudit {

namespace {

// Emoji and pictograph blocks plus joiners/variation selectors.
bool is_emoji_codepoint(char32_t c) {
  return (c >= 0x1F000 && c <= 0x1FFFF) || (c >= 0x2190 && c <= 0x2BFF) ||
         (c >= 0xFE00 && c <= 0xFE0F) || c == 0x200D || c == 0x20E3;
}

bool is_token_char(char32_t c) {
  if (c < 0x80) return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  return !is_emoji_codepoint(c);  // accented letters etc. stay
}

char32_t decode_utf8(std::string_view s, std::size_t& i) {
  const unsigned char c = s[i];
  if (c < 0x80) {
    ++i;
    return c;
  }
  int extra = 0;
  char32_t cp = 0;
  if ((c >> 5) == 0x6) {
    cp = c & 0x1F;
    extra = 1;
  } else if ((c >> 4) == 0xE) {
    cp = c & 0x0F;
    extra = 2;
  } else if ((c >> 3) == 0x1E) {
    cp = c & 0x07;
    extra = 3;
  } else {
    ++i;
    return 0xFFFD;
  }
  if (i + extra >= s.size()) {
    i = s.size();
    return 0xFFFD;
  }
  for (int k = 1; k <= extra; ++k) cp = (cp << 6) | (s[i + k] & 0x3F);
  i += extra + 1;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_url_chunk(std::string_view chunk) {
  // scheme-prefixed tokens only ("http://...", "ftp://...")
  const auto pos = chunk.find("://");
  if (pos == std::string_view::npos || pos == 0) return false;
  for (char c : chunk.substr(0, pos)) {
    const char l = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (!((l >= 'a' && l <= 'z') || (l >= '0' && l <= '9') || l == '+' || l == '.' || l == '-'))
      return false;
  }
  return true;
}

}  // namespace

TextPipeline::TextPipeline(std::unordered_set<std::string> stopwords,
                           std::unordered_map<std::string, std::string> lemmas)
    : stopwords_(std::move(stopwords)), lemmas_(std::move(lemmas)) {}

TextPipeline TextPipeline::load(const std::filesystem::path& stopwords_path,
                                const std::filesystem::path& lemmas_path) {
  std::ifstream stop_in(stopwords_path);
  if (!stop_in) throw IoError("cannot open stopword list: " + stopwords_path.string());
  std::unordered_set<std::string> stopwords;
  std::string line;
  while (std::getline(stop_in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line[0] != '#') stopwords.insert(line);
  }

  std::ifstream lem_in(lemmas_path);
  if (!lem_in) throw IoError("cannot open lemma table: " + lemmas_path.string());
  std::unordered_map<std::string, std::string> lemmas;
  while (std::getline(lem_in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw FormatError("bad lemma row: " + line);
    lemmas.emplace(line.substr(0, comma), line.substr(comma + 1));
  }
  return TextPipeline(std::move(stopwords), std::move(lemmas));
}

std::vector<std::string> TextPipeline::preprocess(std::string_view text) const {
  std::vector<std::string> out;

  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    std::size_t end = pos;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    if (end == pos) break;
    const std::string_view chunk = text.substr(pos, end - pos);
    pos = end;

    if (chunk.front() == '@' || is_url_chunk(chunk)) continue;

    // split the chunk into alphanumeric runs, lowercasing as we go
    std::string token;
    std::size_t i = 0;
    auto flush = [&] {
      if (token.empty()) return;
      if (!stopwords_.contains(token)) {
        auto it = lemmas_.find(token);
        out.push_back(it != lemmas_.end() ? it->second : token);
      }
      token.clear();
    };
    while (i < chunk.size()) {
      char32_t cp = decode_utf8(chunk, i);
      if (cp < 0x80) cp = static_cast<char32_t>(std::tolower(static_cast<int>(cp)));
      if (is_token_char(cp))
        append_utf8(token, cp);
      else
        flush();
    }
    flush();
  }
  return out;
}

std::vector<ScoredTerm> tfidf_top_terms(const std::vector<std::vector<std::string>>& documents,
                                        std::size_t target, std::size_t k) {
  if (target >= documents.size() || documents[target].empty()) return {};

  std::size_t n_docs = 0;
  std::unordered_map<std::string, std::size_t> df;
  for (const auto& doc : documents) {
    if (doc.empty()) continue;  // empty documents are not part of the collection
    ++n_docs;
    std::unordered_set<std::string> seen;
    for (const auto& t : doc)
      if (seen.insert(t).second) ++df[t];
  }

  std::unordered_map<std::string, std::size_t> tf;
  for (const auto& t : documents[target]) ++tf[t];

  std::vector<ScoredTerm> scored;
  scored.reserve(tf.size());
  for (const auto& [term, count] : tf) {
    const double idf =
        std::log((1.0 + static_cast<double>(n_docs)) / (1.0 + static_cast<double>(df[term]))) + 1.0;
    scored.push_back({term, static_cast<double>(count) * idf});
  }
  std::sort(scored.begin(), scored.end(), [](const ScoredTerm& a, const ScoredTerm& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.term < b.term;
  });
  if (scored.size() > k) scored.resize(k);
  return scored;
}

}  // namespace geoaudit
