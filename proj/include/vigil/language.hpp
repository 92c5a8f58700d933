#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace vigil {

// Ranked character n-gram profile for one language, built with the
// Cavnar-Trenkle text categorization method: count n-grams (n = 1..5) over
// word tokens padded with '_', keep the most frequent ones in rank order.
struct LanguageProfile {
  std::string code;
  std::vector<std::string> ngrams;  // rank = index, at most kProfileSize long

  static constexpr std::size_t kProfileSize = 400;
};

// Builds a ranked profile from raw text. Ties in frequency break
// lexicographically so profiles are reproducible.
LanguageProfile build_language_profile(const std::string& code,
                                       const std::string& text,
                                       std::size_t max_ngrams = LanguageProfile::kProfileSize);

// Removes URLs, @mentions and #hashtags; language decisions must not be
// influenced by them.
std::string strip_social_tokens(const std::string& text);

// Classifies text against a set of language profiles using the
// out-of-place rank distance with a fixed penalty for absent n-grams.
class LanguageClassifier {
 public:
  static constexpr std::size_t kMaxPenalty = LanguageProfile::kProfileSize;
  // Messages shorter than this (after stripping social tokens) come back
  // as "und"; they carry too little signal to classify.
  static constexpr std::size_t kMinTextLength = 20;

  LanguageClassifier() = default;
  explicit LanguageClassifier(std::vector<LanguageProfile> profiles);

  // Loads <code>.txt files from a corpus directory. A profile cache file is
  // kept inside the directory and regenerated whenever corpus contents
  // change. Empty corpus files are skipped with a warning on stderr.
  static LanguageClassifier from_corpus_dir(const std::string& dir);

  const std::vector<LanguageProfile>& profiles() const { return profiles_; }

  // Language code of the closest profile, or "und" for text below the
  // length floor (or when no profiles are loaded).
  std::string detect(const std::string& text) const;

 private:
  std::vector<LanguageProfile> profiles_;
  // code -> (ngram -> rank), for O(1) out-of-place lookups
  std::vector<std::unordered_map<std::string, std::size_t>> ranks_;

  void rebuild_rank_index();
};

// Counts UTF-8 code points (bytes that are not continuation bytes).
std::size_t utf8_length(const std::string& text);

std::uint64_t fnv1a64(const std::string& data);

}  // namespace vigil
