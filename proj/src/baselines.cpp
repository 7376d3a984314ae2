#include "fastmatch/baselines.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_set>

namespace fastmatch {

// ---------------------------------------------------------------------------
// Ril

Ril::Ril(const FrequenciesMap* live_ranks) : live_(live_ranks) {}

Ril::Ril(std::unordered_map<std::string, std::uint64_t> static_ranks)
    : static_(std::move(static_ranks)) {}

std::uint64_t Ril::rank_of(const std::string& keyword) const {
  if (live_ != nullptr) {
    return live_->count(keyword);
  }
  auto it = static_.find(keyword);
  return it == static_.end() ? 0 : it->second;
}

std::string Ril::least_frequent(const KeywordList& text) const {
  assert(!text.empty());
  const std::string* best = &text.front();
  std::uint64_t best_rank = rank_of(text.front());
  for (std::size_t i = 1; i < text.size(); ++i) {
    std::uint64_t r = rank_of(text[i]);
    if (r < best_rank) {
      best = &text[i];
      best_rank = r;
    }
  }
  return *best;
}

void Ril::insert(const QueryPtr& q) {
  postings_[least_frequent(q->text)].push_back(q);
  ++size_;
}

Ril::SearchResult Ril::search(const KeywordList& keywords) const {
  SearchResult out;
  for (const std::string& k : keywords) {
    auto it = postings_.find(k);
    if (it == postings_.end()) {
      continue;
    }
    out.visited += it->second.size();
    out.candidates.insert(out.candidates.end(), it->second.begin(), it->second.end());
  }
  for (const QueryPtr& q : out.candidates) {
    if (text_subset(q->text, keywords)) {
      out.results.push_back(q->parent_qid.value_or(q->qid));
    }
  }
  std::sort(out.results.begin(), out.results.end());
  out.results.erase(std::unique(out.results.begin(), out.results.end()), out.results.end());
  return out;
}

std::size_t Ril::posting_len(const std::string& keyword) const {
  auto it = postings_.find(keyword);
  return it == postings_.end() ? 0 : it->second.size();
}

// ---------------------------------------------------------------------------
// Okt

void Okt::insert(const QueryPtr& q) {
  Node* node = &root_;
  for (const std::string& k : q->text) {
    auto it = node->children.find(k);
    if (it == node->children.end()) {
      it = node->children.emplace(k, std::make_unique<Node>()).first;
      ++node_count_;
    }
    node = it->second.get();
  }
  node->queries.push_back(q);
  ++size_;
  max_depth_ = std::max(max_depth_, static_cast<int>(q->text.size()));
}

Okt::SearchResult Okt::search(const KeywordList& keywords, const ProbeHook& hook) const {
  SearchResult out;
  walk(root_, keywords, 0, 1, out, hook);
  std::sort(out.results.begin(), out.results.end());
  out.results.erase(std::unique(out.results.begin(), out.results.end()), out.results.end());
  return out;
}

void Okt::walk(const Node& node, const KeywordList& keywords, std::size_t index, int level,
               SearchResult& out, const ProbeHook& hook) const {
  for (const QueryPtr& q : node.queries) {
    out.matches.push_back(q);
    out.results.push_back(q->parent_qid.value_or(q->qid));
  }
  for (std::size_t j = index; j < keywords.size(); ++j) {
    ++out.probes;
    auto it = node.children.find(keywords[j]);
    if (hook) {
      hook(level, keywords[j], it != node.children.end());
    }
    if (it != node.children.end()) {
      ++out.nodes_visited;
      walk(*it->second, keywords, j + 1, level + 1, out, hook);
    }
  }
}

}  // namespace fastmatch
