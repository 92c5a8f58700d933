#include "vigil/clustering.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace vigil {

const char* similarity_kind_name(SimilarityKind kind) {
  return kind == SimilarityKind::Text ? "text" : "url";
}

std::vector<std::string> text_shingles(const std::string& text) {
  std::string lowered;
  lowered.reserve(text.size());
  for (unsigned char c : text)
    lowered.push_back(static_cast<char>(std::tolower(c)));

  std::vector<std::string> tokens;
  std::istringstream in(lowered);
  std::string token;
  while (in >> token) {
    if (token.rfind("http://", 0) == 0 || token.rfind("https://", 0) == 0 ||
        token.rfind("www.", 0) == 0)
      continue;
    tokens.push_back(token);
  }

  std::vector<std::string> shingles;
  if (tokens.size() < 4) return shingles;
  std::set<std::string> seen;
  for (std::size_t i = 0; i + 4 <= tokens.size(); ++i) {
    std::string s = tokens[i] + " " + tokens[i + 1] + " " + tokens[i + 2] +
                    " " + tokens[i + 3];
    if (seen.insert(s).second) shingles.push_back(std::move(s));
  }
  return shingles;
}

std::optional<std::string> normalize_url_for_similarity(const std::string& url) {
  auto parsed = parse_url(url);
  if (!parsed) return std::nullopt;
  const std::string& host = parsed->host;
  if (host == "youtube.com" || host == "www.youtube.com" ||
      host == "facebook.com" || host == "www.facebook.com")
    return std::nullopt;
  return parsed->scheme + "://" + host + parsed->path;
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Distinct unordered pairs connected by at least one key, counted over the
// posting lists of one component. Members of a posting list always belong
// to a single component, so no filtering is needed.
std::size_t count_connected_pairs(
    const std::vector<const std::vector<std::size_t>*>& postings) {
  std::unordered_set<std::uint64_t> pairs;
  for (const auto* members : postings) {
    for (std::size_t i = 0; i < members->size(); ++i)
      for (std::size_t j = i + 1; j < members->size(); ++j) {
        std::uint64_t a = (*members)[i];
        std::uint64_t b = (*members)[j];
        if (a > b) std::swap(a, b);
        pairs.insert((a << 32) | b);
      }
  }
  return pairs.size();
}

}  // namespace

std::vector<MessageGroup> cluster_window(const ObservationWindow& window,
                                         std::size_t min_group_size) {
  const std::size_t n = window.messages.size();

  // Inverted indices: key -> messages containing it.
  std::unordered_map<std::string, std::vector<std::size_t>> by_shingle;
  std::unordered_map<std::string, std::vector<std::size_t>> by_url;
  for (std::size_t i = 0; i < n; ++i) {
    const Message& m = window.messages[i];
    for (auto& s : text_shingles(m.text)) by_shingle[std::move(s)].push_back(i);
    std::set<std::string> urls;
    for (const auto& raw : m.urls)
      if (auto u = normalize_url_for_similarity(raw)) urls.insert(*u);
    for (const auto& u : urls) by_url[u].push_back(i);
  }

  UnionFind uf(n);
  for (const auto& [key, members] : by_shingle)
    for (std::size_t i = 1; i < members.size(); ++i)
      uf.unite(members[0], members[i]);
  for (const auto& [key, members] : by_url)
    for (std::size_t i = 1; i < members.size(); ++i)
      uf.unite(members[0], members[i]);

  struct Component {
    std::vector<std::size_t> members;
    // winning key per kind: (coverage desc, key asc)
    std::vector<const std::vector<std::size_t>*> text_postings;
    std::vector<const std::vector<std::size_t>*> url_postings;
    std::map<SimilarityKind, std::pair<std::size_t, std::string>> best_key;
  };
  std::unordered_map<std::size_t, Component> components;
  for (std::size_t i = 0; i < n; ++i)
    components[uf.find(i)].members.push_back(i);

  auto register_keys =
      [&](const std::unordered_map<std::string, std::vector<std::size_t>>& index,
          SimilarityKind kind) {
        for (const auto& [key, members] : index) {
          if (members.size() < 2) continue;
          Component& comp = components[uf.find(members[0])];
          (kind == SimilarityKind::Text ? comp.text_postings : comp.url_postings)
              .push_back(&members);
          auto it = comp.best_key.find(kind);
          std::pair<std::size_t, std::string> candidate{members.size(), key};
          if (it == comp.best_key.end())
            comp.best_key.emplace(kind, std::move(candidate));
          else if (candidate.first > it->second.first ||
                   (candidate.first == it->second.first &&
                    candidate.second < it->second.second))
            it->second = std::move(candidate);
        }
      };
  register_keys(by_shingle, SimilarityKind::Text);
  register_keys(by_url, SimilarityKind::Url);

  std::vector<MessageGroup> groups;
  for (auto& [root, comp] : components) {
    if (comp.members.size() < min_group_size) continue;
    if (comp.text_postings.empty() && comp.url_postings.empty()) continue;

    SimilarityKind kind;
    if (comp.url_postings.empty()) {
      kind = SimilarityKind::Text;
    } else if (comp.text_postings.empty()) {
      kind = SimilarityKind::Url;
    } else {
      // Mixed component: the kind connecting more member pairs wins,
      // ties go to Text.
      const std::size_t text_pairs = count_connected_pairs(comp.text_postings);
      const std::size_t url_pairs = count_connected_pairs(comp.url_postings);
      kind = url_pairs > text_pairs ? SimilarityKind::Url : SimilarityKind::Text;
    }

    MessageGroup g;
    g.kind = kind;
    g.key = comp.best_key.at(kind).second;
    g.members = std::move(comp.members);
    std::sort(g.members.begin(), g.members.end());
    groups.push_back(std::move(g));
  }

  std::sort(groups.begin(), groups.end(),
            [](const MessageGroup& a, const MessageGroup& b) {
              if (a.size() != b.size()) return a.size() > b.size();
              if (a.kind != b.kind) return a.kind == SimilarityKind::Text;
              return a.key < b.key;
            });
  for (std::size_t i = 0; i < groups.size(); ++i)
    groups[i].group_id = "g" + std::to_string(i);
  return groups;
}

}  // namespace vigil
