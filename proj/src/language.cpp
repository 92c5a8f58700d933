#include "vigil/language.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "vigil/json.hpp"

namespace vigil {

namespace {

constexpr int kCacheVersion = 1;

bool is_word_byte(unsigned char c) {
  // Letters plus anything beyond ASCII (UTF-8 continuation and lead bytes);
  // digits and punctuation separate tokens.
  return std::isalpha(c) || c >= 0x80;
}

std::string lower_ascii(std::string s) {
  for (auto& c : s)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// n-gram counts (n = 1..5 code points) over '_'-padded word tokens. Grams
// never split a multi-byte UTF-8 character.
void count_ngrams(const std::string& text,
                  std::unordered_map<std::string, std::uint64_t>& counts) {
  std::string lowered = lower_ascii(text);
  size_t i = 0;
  while (i < lowered.size()) {
    if (!is_word_byte(static_cast<unsigned char>(lowered[i]))) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < lowered.size() && is_word_byte(static_cast<unsigned char>(lowered[j])))
      ++j;
    std::string padded = "_" + lowered.substr(i, j - i) + "_";

    std::vector<size_t> bounds;  // code point start offsets, plus the end
    for (size_t k = 0; k < padded.size(); ++k)
      if ((static_cast<unsigned char>(padded[k]) & 0xC0) != 0x80)
        bounds.push_back(k);
    bounds.push_back(padded.size());

    const size_t points = bounds.size() - 1;
    for (size_t n = 1; n <= 5 && n <= points; ++n) {
      for (size_t k = 0; k + n <= points; ++k) {
        std::string gram =
            padded.substr(bounds[k], bounds[k + n] - bounds[k]);
        if (gram.find_first_not_of('_') == std::string::npos) continue;
        ++counts[std::move(gram)];
      }
    }
    i = j;
  }
}

std::vector<std::string> rank_ngrams(
    const std::unordered_map<std::string, std::uint64_t>& counts,
    std::size_t max_ngrams) {
  std::vector<std::pair<std::string, std::uint64_t>> items(counts.begin(),
                                                           counts.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (items.size() > max_ngrams) items.resize(max_ngrams);
  std::vector<std::string> ranked;
  ranked.reserve(items.size());
  for (auto& [gram, count] : items) ranked.push_back(std::move(gram));
  return ranked;
}

std::string cache_path_for(const std::string& dir) {
  return (std::filesystem::path(dir) / ".lang_profiles.cache.json").string();
}

}  // namespace

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::size_t utf8_length(const std::string& text) {
  std::size_t n = 0;
  for (unsigned char c : text)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

std::string strip_social_tokens(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '@' || text[i] == '#') {
      size_t j = i + 1;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      if (j > i + 1) {
        i = j;
        continue;
      }
    }
    if (text.compare(i, 7, "http://") == 0 ||
        text.compare(i, 8, "https://") == 0 ||
        text.compare(i, 4, "www.") == 0) {
      while (i < text.size() &&
             !std::isspace(static_cast<unsigned char>(text[i])))
        ++i;
      continue;
    }
    out.push_back(text[i]);
    ++i;
  }
  return out;
}

LanguageProfile build_language_profile(const std::string& code,
                                       const std::string& text,
                                       std::size_t max_ngrams) {
  std::unordered_map<std::string, std::uint64_t> counts;
  count_ngrams(text, counts);
  return LanguageProfile{code, rank_ngrams(counts, max_ngrams)};
}

LanguageClassifier::LanguageClassifier(std::vector<LanguageProfile> profiles)
    : profiles_(std::move(profiles)) {
  std::sort(profiles_.begin(), profiles_.end(),
            [](const auto& a, const auto& b) { return a.code < b.code; });
  rebuild_rank_index();
}

void LanguageClassifier::rebuild_rank_index() {
  ranks_.clear();
  ranks_.reserve(profiles_.size());
  for (const auto& p : profiles_) {
    std::unordered_map<std::string, std::size_t> idx;
    idx.reserve(p.ngrams.size() * 2);
    for (std::size_t r = 0; r < p.ngrams.size(); ++r) idx.emplace(p.ngrams[r], r);
    ranks_.push_back(std::move(idx));
  }
}

std::string LanguageClassifier::detect(const std::string& text) const {
  std::string cleaned = strip_social_tokens(text);
  if (profiles_.empty() || utf8_length(cleaned) < kMinTextLength) return "und";

  LanguageProfile doc = build_language_profile("", cleaned);
  std::string best = "und";
  std::uint64_t best_distance = UINT64_MAX;
  for (std::size_t p = 0; p < profiles_.size(); ++p) {
    std::uint64_t distance = 0;
    for (std::size_t r = 0; r < doc.ngrams.size(); ++r) {
      auto it = ranks_[p].find(doc.ngrams[r]);
      if (it == ranks_[p].end())
        distance += kMaxPenalty;
      else
        distance += (r > it->second) ? r - it->second : it->second - r;
    }
    if (distance < best_distance) {
      best_distance = distance;
      best = profiles_[p].code;
    }
  }
  return best;
}

LanguageClassifier LanguageClassifier::from_corpus_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir))
    throw std::runtime_error("language corpus directory not found: " + dir);

  // Hash the corpus contents so the cache regenerates when they change.
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt")
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::string digest_input = std::to_string(kCacheVersion);
  std::vector<std::pair<std::string, std::string>> corpora;  // code -> text
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    std::string code = f.stem().string();
    digest_input += code + "\x1f" + text + "\x1e";
    corpora.emplace_back(code, std::move(text));
  }
  const std::uint64_t digest = fnv1a64(digest_input);

  const std::string cache_file = cache_path_for(dir);
  try {
    std::ifstream in(cache_file);
    if (in) {
      json j = json::parse(in);
      if (j.value("version", 0) == kCacheVersion &&
          j.value("corpus_hash", std::string()) == std::to_string(digest)) {
        std::vector<LanguageProfile> profiles;
        for (const auto& pj : j.at("profiles")) {
          LanguageProfile p;
          p.code = pj.at("code").get<std::string>();
          p.ngrams = pj.at("ngrams").get<std::vector<std::string>>();
          profiles.push_back(std::move(p));
        }
        return LanguageClassifier(std::move(profiles));
      }
    }
  } catch (const std::exception&) {
    // Stale or unreadable cache; rebuild below.
  }

  std::vector<LanguageProfile> profiles;
  for (auto& [code, text] : corpora) {
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
      std::cerr << "warning: empty language corpus " << code << ".txt, skipped\n";
      continue;
    }
    profiles.push_back(build_language_profile(code, text));
  }

  json cache;
  cache["version"] = kCacheVersion;
  cache["corpus_hash"] = std::to_string(digest);
  cache["profiles"] = json::array();
  for (const auto& p : profiles)
    cache["profiles"].push_back({{"code", p.code}, {"ngrams", p.ngrams}});
  std::ofstream out(cache_file);
  if (out) out << cache.dump() << "\n";  // cache is best-effort

  return LanguageClassifier(std::move(profiles));
}

}  // namespace vigil
