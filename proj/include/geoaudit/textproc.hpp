#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace geoaudit {

// Tweet-text normalization: lowercase, drop URL and @-mention tokens, split on
// punctuation, strip emoji codepoints, remove stop-words, then look remaining
// tokens up in a dictionary of inflected form -> lemma (unknown tokens pass
// through unchanged).
class TextPipeline {
 public:
  TextPipeline(std::unordered_set<std::string> stopwords,
               std::unordered_map<std::string, std::string> lemmas);

  // stopwords: one word per line; lemmas: "inflected,lemma" per line.
  static TextPipeline load(const std::filesystem::path& stopwords_path,
                           const std::filesystem::path& lemmas_path);

  std::vector<std::string> preprocess(std::string_view text) const;

 private:
  std::unordered_set<std::string> stopwords_;
  std::unordered_map<std::string, std::string> lemmas_;
};

struct ScoredTerm {
  std::string term;
  double score;
};

// Each cluster's concatenated lemmas form one document; the user's clusters
// form the collection. score(t) = tf(t, target) * (ln((1+N)/(1+df(t))) + 1)
// with raw counts, N the number of non-empty documents and df counted over
// them. Top k by score, ties resolved lexicographically.
std::vector<ScoredTerm> tfidf_top_terms(const std::vector<std::vector<std::string>>& documents,
                                        std::size_t target, std::size_t k = 3);

inline constexpr const char* kTfidfVariant = "raw-tf,smoothed-idf-plus-one";

}  // namespace geoaudit
