#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "fastmatch/aki.hpp"
#include "fastmatch/core.hpp"

namespace fastmatch {

// ---------------------------------------------------------------------------
// Ranked-keyword inverted list. Each query sits in exactly one posting list:
// the one of its least-frequent keyword at insert time. Search unions the
// posting lists of the probe keywords and verifies subset containment.

class Ril {
 public:
  // Live ranking: least-frequent chosen against the shared frequencies map
  // (callers keep it updated). This matches the no-prior-knowledge setting.
  explicit Ril(const FrequenciesMap* live_ranks);
  // Static ranking: the classic assumption of known keyword frequencies.
  explicit Ril(std::unordered_map<std::string, std::uint64_t> static_ranks);

  void insert(const QueryPtr& q);

  struct SearchResult {
    std::vector<QueryPtr> candidates;  // raw union, pre-verification
    std::vector<QueryId> results;      // verified: q.text subset of probe keywords
    std::uint64_t visited = 0;         // sum of visited posting-list lengths
  };
  SearchResult search(const KeywordList& keywords) const;

  std::size_t posting_len(const std::string& keyword) const;
  std::size_t size() const { return size_; }

 private:
  std::uint64_t rank_of(const std::string& keyword) const;
  std::string least_frequent(const KeywordList& text) const;

  const FrequenciesMap* live_ = nullptr;
  std::unordered_map<std::string, std::uint64_t> static_;
  std::unordered_map<std::string, std::vector<QueryPtr>> postings_;
  std::size_t size_ = 0;
};

// ---------------------------------------------------------------------------
// Ordered-keyword trie. Queries attach at the node whose root path equals
// their full sorted keyword list; the subset walk needs no verification.

class Okt {
 public:
  // (level, keyword, child-existed) — hook for empirical cost-model fitting.
  using ProbeHook = std::function<void(int, const std::string&, bool)>;

  Okt() = default;

  void insert(const QueryPtr& q);

  struct SearchResult {
    std::vector<QueryPtr> matches;
    std::vector<QueryId> results;
    std::uint64_t nodes_visited = 0;  // trie nodes entered
    std::uint64_t probes = 0;         // child hash lookups performed
  };
  SearchResult search(const KeywordList& keywords, const ProbeHook& hook = nullptr) const;

  std::size_t node_count() const { return node_count_; }
  std::size_t size() const { return size_; }
  int max_depth() const { return max_depth_; }

 private:
  struct Node {
    std::unordered_map<std::string, std::unique_ptr<Node>> children;
    std::vector<QueryPtr> queries;
  };

  void walk(const Node& node, const KeywordList& keywords, std::size_t index, int level,
            SearchResult& out, const ProbeHook& hook) const;

  Node root_;
  std::size_t node_count_ = 0;
  std::size_t size_ = 0;
  int max_depth_ = 0;
};

}  // namespace fastmatch
