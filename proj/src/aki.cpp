#include "fastmatch/aki.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_set>

namespace fastmatch {

// ---------------------------------------------------------------------------
// FrequenciesMap

void FrequenciesMap::add(const KeywordList& text) {
  for (const std::string& k : text) {
    ++counts_[k];
  }
}

void FrequenciesMap::remove(const KeywordList& text) {
  for (const std::string& k : text) {
    auto it = counts_.find(k);
    if (it == counts_.end() || it->second == 0) {
      throw FrequencyUnderflowError{};
    }
    if (--it->second == 0) {
      counts_.erase(it);
    }
  }
}

std::uint64_t FrequenciesMap::count(const std::string& keyword) const {
  auto it = counts_.find(keyword);
  return it == counts_.end() ? 0 : it->second;
}

std::string FrequenciesMap::least_frequent(const KeywordList& text) const {
  assert(!text.empty());
  // text is sorted, so keeping the first strict minimum realizes the
  // lexicographically-smallest tie-break.
  const std::string* best = &text.front();
  std::uint64_t best_count = count(text.front());
  for (std::size_t i = 1; i < text.size(); ++i) {
    std::uint64_t c = count(text[i]);
    if (c < best_count) {
      best = &text[i];
      best_count = c;
    }
  }
  return *best;
}

// ---------------------------------------------------------------------------
// QueryList / TextualNode

bool QueryList::contains(QueryId qid) const {
  for (const QueryPtr& q : items) {
    if (q->qid == qid) {
      return true;
    }
  }
  return false;
}

bool QueryList::remove(QueryId qid) {
  for (auto it = items.begin(); it != items.end(); ++it) {
    if ((*it)->qid == qid) {
      items.erase(it);
      return true;
    }
  }
  return false;
}

TextualNode::TextualNode(std::string kw, int d) : keyword(std::move(kw)), depth(d) {
  qlist = std::make_shared<QueryList>();
  qlist->holders.push_back(this);
}

TextualNode::~TextualNode() {
  if (qlist) {
    auto& h = qlist->holders;
    h.erase(std::remove(h.begin(), h.end(), this), h.end());
  }
}

void set_query_list(TextualNode& node, QueryListPtr list) {
  if (node.qlist) {
    auto& h = node.qlist->holders;
    h.erase(std::remove(h.begin(), h.end(), &node), h.end());
  }
  node.qlist = std::move(list);
  node.qlist->holders.push_back(&node);
}

std::vector<QueryPtr> below_median_area(const std::vector<QueryPtr>& items) {
  if (items.empty()) {
    return {};
  }
  std::vector<QueryPtr> sorted = items;
  std::sort(sorted.begin(), sorted.end(), [](const QueryPtr& a, const QueryPtr& b) {
    double aa = a->mbr.area();
    double bb = b->mbr.area();
    if (aa != bb) {
      return aa < bb;
    }
    return a->qid < b->qid;
  });
  double median = sorted[sorted.size() / 2]->mbr.area();
  std::vector<QueryPtr> out;
  for (const QueryPtr& q : sorted) {
    if (q->mbr.area() < median) {
      out.push_back(q);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Aki

Aki::Aki(std::uint32_t theta) : theta_(theta) {
  if (theta == 0) {
    throw Error("frequent-keyword threshold must be at least 1");
  }
}

TextualNode* Aki::peek_top(const std::string& keyword) {
  auto it = top_.find(keyword);
  return it == top_.end() ? nullptr : it->second.get();
}

const TextualNode* Aki::peek_top(const std::string& keyword) const {
  auto it = top_.find(keyword);
  return it == top_.end() ? nullptr : it->second.get();
}

TextualNode* Aki::ensure_top(const std::string& keyword) {
  auto it = top_.find(keyword);
  if (it == top_.end()) {
    it = top_.emplace(keyword, std::make_unique<TextualNode>(keyword, 1)).first;
  }
  return it->second.get();
}

TextualNode* Aki::ensure_child(TextualNode& parent, const std::string& keyword) {
  auto it = parent.children.find(keyword);
  if (it == parent.children.end()) {
    it = parent.children.emplace(keyword, std::make_unique<TextualNode>(keyword, parent.depth + 1))
             .first;
  }
  return it->second.get();
}

void Aki::add_query(TextualNode& node, const QueryPtr& q) {
  assert(!node.qlist->contains(q->qid));
  node.qlist->items.push_back(q);
  if (track_out_ != nullptr && q->qid == track_qid_) {
    track_out_->attached = &node;
  }
}

void Aki::separate_if_needed(TextualNode& node, const SharedSeparator& separate) {
  if (!node.shared()) {
    return;
  }
  if (!separate) {
    throw Error("shared query list needs separation but no separator was provided");
  }
  separate(node);
}

AkiInsertOutcome Aki::insert(const QueryPtr& q, const FrequenciesMap& fm,
                             const SharedSeparator& separate, std::uint64_t descend_trigger) {
  assert(is_normalized(q->text));
  AkiInsertOutcome out;
  track_qid_ = q->qid;
  track_out_ = &out;

  const std::string key = fm.least_frequent(q->text);
  TextualNode* node = ensure_top(key);
  if (!node->frequent) {
    if (node->shared() && node->list_size() + 1 > theta_) {
      separate_if_needed(*node, separate);
    }
    add_query(*node, q);
    if (node->list_size() > theta_) {
      absorb_overflow(*node);
      if (node->list_size() > theta_) {
        mark_frequent_and_redistribute(*node, fm, separate, descend_trigger, out);
      }
    }
  } else {
    redistribute(q, fm, separate, descend_trigger, out);
  }

  track_out_ = nullptr;
  track_qid_ = 0;
  return out;
}

void Aki::absorb_overflow(TextualNode& node) {
  std::size_t i = 0;
  while (node.list_size() > theta_ && i < node.qlist->items.size()) {
    QueryPtr q = node.qlist->items[i];
    TextualNode* home = find_infrequent_home(q, &node);
    if (home != nullptr) {
      node.qlist->items.erase(node.qlist->items.begin() + static_cast<std::ptrdiff_t>(i));
      add_query(*home, q);
    } else {
      ++i;
    }
  }
}

TextualNode* Aki::find_infrequent_home(const QueryPtr& q, const TextualNode* exclude) {
  // Existing eligible node first; creating a node for a so-far-unattached
  // keyword is equally valid, so a single lexicographic pass covers both.
  for (const std::string& k : q->text) {
    TextualNode* candidate = peek_top(k);
    if (candidate == exclude && candidate != nullptr) {
      continue;
    }
    if (candidate == nullptr) {
      return ensure_top(k);
    }
    if (!candidate->frequent && candidate->list_size() < theta_) {
      return candidate;
    }
  }
  return nullptr;
}

void Aki::mark_frequent_and_redistribute(TextualNode& node, const FrequenciesMap& fm,
                                         const SharedSeparator& separate, std::uint64_t trigger,
                                         AkiInsertOutcome& out) {
  assert(node.depth == 1);
  separate_if_needed(node, separate);
  node.frequent = true;
  std::vector<QueryPtr> queue = std::move(node.qlist->items);
  set_query_list(node, std::make_shared<QueryList>());
  for (const QueryPtr& q : queue) {
    redistribute(q, fm, separate, trigger, out);
  }
  check_descent_trigger(node, trigger, out);
}

void Aki::redistribute(const QueryPtr& q, const FrequenciesMap& fm,
                       const SharedSeparator& separate, std::uint64_t trigger,
                       AkiInsertOutcome& out) {
  TextualNode* home = find_infrequent_home(q, nullptr);
  if (home != nullptr) {
    add_query(*home, q);
    return;
  }
  walk_down(ensure_top(q->text.front()), q, fm, separate, trigger, out);
}

void Aki::walk_down(TextualNode* node, const QueryPtr& q, const FrequenciesMap& fm,
                    const SharedSeparator& separate, std::uint64_t trigger,
                    AkiInsertOutcome& out) {
  const KeywordList& text = q->text;
  while (node->frequent && static_cast<std::size_t>(node->depth) < text.size()) {
    node = ensure_child(*node, text[static_cast<std::size_t>(node->depth)]);
  }
  if (node->frequent) {
    // Keywords exhausted: q carries exactly the path's keyword set.
    add_query(*node, q);
    check_descent_trigger(*node, trigger, out);
    return;
  }
  if (node->depth == 1 && node->shared() && node->list_size() + 1 > theta_) {
    separate_if_needed(*node, separate);
  }
  add_query(*node, q);
  if (node->list_size() > theta_) {
    if (node->depth == 1) {
      mark_frequent_and_redistribute(*node, fm, separate, trigger, out);
    } else {
      split_non_top(*node, fm, separate, trigger, out);
    }
  }
}

void Aki::split_non_top(TextualNode& node, const FrequenciesMap& fm,
                        const SharedSeparator& separate, std::uint64_t trigger,
                        AkiInsertOutcome& out) {
  assert(node.depth > 1);
  assert(!node.shared());
  node.frequent = true;
  std::vector<QueryPtr> queue = std::move(node.qlist->items);
  set_query_list(node, std::make_shared<QueryList>());
  for (const QueryPtr& q : queue) {
    walk_down(&node, q, fm, separate, trigger, out);
  }
  check_descent_trigger(node, trigger, out);
}

void Aki::check_descent_trigger(TextualNode& node, std::uint64_t trigger, AkiInsertOutcome& out) {
  if (trigger == kNoDescent || !node.frequent || node.list_size() <= trigger) {
    return;
  }
  DescentCandidates cand;
  cand.node = &node;
  cand.queries = below_median_area(node.qlist->items);
  for (DescentCandidates& existing : out.descents) {
    if (existing.node == &node) {
      existing = std::move(cand);
      return;
    }
  }
  out.descents.push_back(std::move(cand));
}

// ---------------------------------------------------------------------------
// Search

AkiSearchHits Aki::search(const KeywordList& keywords, AkiSearchStats* stats) const {
  assert(std::is_sorted(keywords.begin(), keywords.end()));
  AkiSearchHits hits;
  for (std::size_t i = 0; i < keywords.size(); ++i) {
    const TextualNode* node = peek_top(keywords[i]);
    if (node == nullptr) {
      continue;
    }
    if (stats != nullptr) {
      ++stats->textual_nodes_visited;
    }
    if (!node->frequent) {
      hits.needs_text_verify.insert(hits.needs_text_verify.end(), node->qlist->items.begin(),
                                    node->qlist->items.end());
    } else {
      hits.frequent_keywords.push_back(keywords[i]);
      hits.text_exact.insert(hits.text_exact.end(), node->qlist->items.begin(),
                             node->qlist->items.end());
      for (std::size_t j = i + 1; j < keywords.size(); ++j) {
        auto child = node->children.find(keywords[j]);
        if (child != node->children.end()) {
          search_expand(*child->second, keywords, j, hits, stats);
        }
      }
    }
  }
  return hits;
}

void Aki::search_expand(const TextualNode& node, const KeywordList& keywords, std::size_t index,
                        AkiSearchHits& hits, AkiSearchStats* stats) const {
  if (stats != nullptr) {
    ++stats->textual_nodes_visited;
  }
  if (!node.frequent) {
    hits.needs_text_verify.insert(hits.needs_text_verify.end(), node.qlist->items.begin(),
                                  node.qlist->items.end());
    return;
  }
  hits.text_exact.insert(hits.text_exact.end(), node.qlist->items.begin(),
                         node.qlist->items.end());
  for (std::size_t j = index + 1; j < keywords.size(); ++j) {
    auto child = node.children.find(keywords[j]);
    if (child != node.children.end()) {
      search_expand(*child->second, keywords, j, hits, stats);
    }
  }
}

// ---------------------------------------------------------------------------
// Removal, demotion, sweeping

namespace {

bool prune_empty(std::unordered_map<std::string, std::unique_ptr<TextualNode>>& nodes,
                 std::size_t& pruned) {
  for (auto it = nodes.begin(); it != nodes.end();) {
    TextualNode& n = *it->second;
    prune_empty(n.children, pruned);
    if (n.children.empty() && n.list_size() == 0) {
      it = nodes.erase(it);
      ++pruned;
    } else {
      ++it;
    }
  }
  return nodes.empty();
}

bool remove_rec(TextualNode& node, QueryId qid) {
  if (node.qlist->remove(qid)) {
    return true;
  }
  for (auto& [key, child] : node.children) {
    if (remove_rec(*child, qid)) {
      return true;
    }
  }
  return false;
}

std::size_t subtree_attachments(const TextualNode& node) {
  std::size_t total = node.list_size();
  for (const auto& [key, child] : node.children) {
    total += subtree_attachments(*child);
  }
  return total;
}

void collect_subtree(TextualNode& node, std::vector<QueryPtr>& out) {
  out.insert(out.end(), node.qlist->items.begin(), node.qlist->items.end());
  std::vector<std::string> keys;
  keys.reserve(node.children.size());
  for (const auto& [key, child] : node.children) {
    keys.push_back(key);
  }
  std::sort(keys.begin(), keys.end());
  for (const std::string& key : keys) {
    collect_subtree(*node.children.at(key), out);
  }
}

}  // namespace

bool Aki::remove(const QueryPtr& q) {
  for (const std::string& k : q->text) {
    auto it = top_.find(k);
    if (it == top_.end()) {
      continue;
    }
    if (remove_rec(*it->second, q->qid)) {
      std::size_t pruned = 0;
      TextualNode& n = *it->second;
      prune_empty(n.children, pruned);
      if (n.children.empty() && n.list_size() == 0) {
        top_.erase(it);
      }
      return true;
    }
  }
  return false;
}

bool Aki::demote_if_infrequent(TextualNode& node) {
  if (!node.frequent) {
    return false;
  }
  if (subtree_attachments(node) > theta_) {
    return false;
  }
  std::vector<QueryPtr> all;
  collect_subtree(node, all);
  node.children.clear();
  auto fresh = std::make_shared<QueryList>();
  fresh->items = std::move(all);
  set_query_list(node, std::move(fresh));
  node.frequent = false;
  return true;
}

AkiSweepResult Aki::sweep_expired(Timestamp now,
                                  const std::function<void(const QueryPtr&)>& on_expired) {
  AkiSweepResult res;

  std::unordered_set<const QueryList*> seen;
  for_each_node([&](TextualNode& node) {
    if (!seen.insert(node.qlist.get()).second) {
      return;  // shared list already swept through a sibling holder
    }
    auto& items = node.qlist->items;
    for (auto it = items.begin(); it != items.end();) {
      if ((*it)->expired(now)) {
        QueryPtr q = *it;
        it = items.erase(it);
        ++res.attachments_removed;
        if (on_expired) {
          on_expired(q);
        }
      } else {
        ++it;
      }
    }
  });

  std::function<void(TextualNode&)> offer_demotion = [&](TextualNode& node) {
    if (!node.frequent) {
      return;
    }
    if (demote_if_infrequent(node)) {
      ++res.demoted;
      return;
    }
    for (auto& [key, child] : node.children) {
      offer_demotion(*child);
    }
  };
  for (auto& [key, node] : top_) {
    offer_demotion(*node);
  }

  prune_empty(top_, res.nodes_pruned);
  return res;
}

// ---------------------------------------------------------------------------
// Sharing hooks

bool Aki::attach_shared(const std::string& keyword, const QueryListPtr& shared, int level) {
  TextualNode* node = peek_top(keyword);
  if (node != nullptr && node->frequent) {
    return false;
  }
  bool created = false;
  if (node == nullptr) {
    node = ensure_top(keyword);
    created = true;
  }
  if (node->qlist == shared) {
    return true;
  }
  std::vector<QueryPtr> missing;
  for (const QueryPtr& q : node->qlist->items) {
    if (!shared->contains(q->qid)) {
      missing.push_back(q);
    }
  }
  if (shared->size() + missing.size() > theta_) {
    if (created) {
      top_.erase(keyword);
    }
    return false;
  }
  shared->items.insert(shared->items.end(), missing.begin(), missing.end());
  if (shared->level < 0) {
    shared->level = level;
    shared->keyword = keyword;
  }
  set_query_list(*node, shared);
  return true;
}

// ---------------------------------------------------------------------------
// Introspection

std::size_t Aki::node_count() const {
  std::size_t n = 0;
  for_each_node([&](const TextualNode&) { ++n; });
  return n;
}

AkiStructure Aki::structure() const {
  AkiStructure s;
  std::unordered_set<const QueryList*> seen;
  for_each_node([&](const TextualNode& node) {
    ++s.nodes;
    s.attachments += node.list_size();
    if (seen.insert(node.qlist.get()).second) {
      s.list_entries += node.qlist->size();
      if (node.qlist->holders.size() > 1) {
        ++s.shared_lists;
      }
    }
  });
  return s;
}

namespace {

template <typename NodeT, typename Fn>
void visit_all(NodeT& node, const Fn& fn) {
  fn(node);
  for (auto& [key, child] : node.children) {
    visit_all(*child, fn);
  }
}

}  // namespace

void Aki::for_each_node(const std::function<void(const TextualNode&)>& fn) const {
  for (const auto& [key, node] : top_) {
    visit_all<const TextualNode>(*node, fn);
  }
}

void Aki::for_each_node(const std::function<void(TextualNode&)>& fn) {
  for (auto& [key, node] : top_) {
    visit_all<TextualNode>(*node, fn);
  }
}

}  // namespace fastmatch
