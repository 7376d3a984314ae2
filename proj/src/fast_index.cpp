#include "fastmatch/fast_index.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_set>

namespace fastmatch {

FastIndex::FastIndex(FastConfig config)
    : config_(config),
      store_(PyramidConfig(config.gran_max), config.theta),
      next_sub_qid_(QueryId{1} << 62) {
  if (config_.theta == 0) {
    throw Error("frequent-keyword threshold must be at least 1");
  }
  if (config_.clean_interval <= 0) {
    throw Error("cleaning interval must be positive");
  }
  store_.on_create = [this](PyramidNode& node) { clean_queue_.push_back(node.address); };
}

const ContinuousQuery* FastIndex::live_query(QueryId qid) const {
  auto it = live_.find(qid);
  return it == live_.end() ? nullptr : it->second.get();
}

QueryPtr FastIndex::register_query(const ContinuousQuery& q) {
  ContinuousQuery copy = q;
  copy.text = normalize_text(copy.text);
  copy.deleted = false;
  copy.result_flag = false;
  if (!copy.mbr.valid() || !copy.mbr.in_unit_space()) {
    throw OutOfSpaceError{};
  }
  if (copy.t_exp <= clock_) {
    throw ExpiredError{};
  }
  if (live_.count(copy.qid) != 0) {
    throw Error("duplicate query id: " + std::to_string(copy.qid));
  }
  QueryPtr ptr = std::make_shared<ContinuousQuery>(std::move(copy));
  live_.emplace(ptr->qid, ptr);
  return ptr;
}

void FastIndex::insert(const ContinuousQuery& q) {
  QueryPtr ptr = register_query(q);
  fm_.add(ptr->text);
  attach_at_level(ptr, pyramid().top_level(), ptr->mbr);
}

void FastIndex::insert_at_level(const ContinuousQuery& q, int level) {
  QueryPtr ptr = register_query(q);
  fm_.add(ptr->text);
  attach_at_level(ptr, level, ptr->mbr);
}

std::vector<ContinuousQuery> FastIndex::insert_dnf(const DnfQuery& d) {
  std::vector<ContinuousQuery> subs = dnf_expand(d, next_sub_qid_);
  next_sub_qid_ += subs.size();
  for (const ContinuousQuery& sub : subs) {
    insert(sub);
  }
  return subs;
}

std::uint64_t FastIndex::descend_trigger_for(int level) const {
  if (level == 0) {
    return Aki::kNoDescent;
  }
  return static_cast<std::uint64_t>(config_.descend_multiplier) * config_.theta;
}

void FastIndex::attach_at_level(const QueryPtr& q, int level, const Mbr& region) {
  std::vector<PyramidNode*> nodes = store_.relevant_nodes(region, level, /*create=*/true);
  const std::string key = fm_.least_frequent(q->text);

  struct PendingDescent {
    PyramidNode* pnode;
    TextualNode* tnode;
    std::vector<QueryPtr> queries;
  };
  std::vector<PendingDescent> pending;

  QueryListPtr shared;
  for (PyramidNode* pn : nodes) {
    if (shared && pn->aki.attach_shared(key, shared, level)) {
      continue;
    }
    Aki::SharedSeparator separator = [pn](TextualNode& t) {
      auto fresh = std::make_shared<QueryList>();
      for (const QueryPtr& member : t.qlist->items) {
        if (member->mbr.overlaps(pn->rect)) {
          fresh->items.push_back(member);
        }
      }
      set_query_list(t, std::move(fresh));
    };
    AkiInsertOutcome out = pn->aki.insert(q, fm_, separator, descend_trigger_for(level));
    assert(out.attached != nullptr);
    if (out.attached != nullptr && !out.attached->frequent && out.attached->depth == 1 &&
        out.attached->keyword == key && out.attached->list_size() <= config_.theta) {
      shared = out.attached->qlist;
    }
    for (DescentCandidates& d : out.descents) {
      pending.push_back(PendingDescent{pn, d.node, std::move(d.queries)});
    }
  }

  if (level > 0) {
    for (PendingDescent& p : pending) {
      descend(*p.pnode, *p.tnode, p.queries, level - 1);
    }
  }
}

bool FastIndex::all_keywords_frequent(const Aki& aki, const KeywordList& text) const {
  for (const std::string& k : text) {
    const TextualNode* node = aki.peek_top(k);
    if (node == nullptr || !node->frequent) {
      return false;
    }
  }
  return true;
}

void FastIndex::descend(PyramidNode& source, TextualNode& node,
                        const std::vector<QueryPtr>& candidates, int to_level) {
  for (const QueryPtr& q : candidates) {
    if (q->expired(clock_)) {
      continue;  // left in place for the vacuum
    }
    if (pyramid().min_level(*q) > to_level) {
      continue;  // never below the level bounding replication to 4 cells
    }
    // Only queries with no infrequent keyword at this node may descend;
    // this is what keeps upper-level keyword pruning sound.
    if (!all_keywords_frequent(source.aki, q->text)) {
      continue;
    }
    if (!node.qlist->remove(q->qid)) {
      continue;  // already moved by a cascading step
    }
    attach_at_level(q, to_level, q->mbr.intersection(source.rect));
  }
}

// ---------------------------------------------------------------------------
// Matching

MatchResult FastIndex::match(const SpatioTextualObject& o, MatchStats* stats) {
  if (o.loc.x < 0.0 || o.loc.x >= 1.0 || o.loc.y < 0.0 || o.loc.y >= 1.0) {
    throw OutOfSpaceError{};
  }
  if (o.rect && (!o.rect->valid() || !o.rect->in_unit_space())) {
    throw OutOfSpaceError{};
  }

  const SpatioTextualObject* obj = &o;
  SpatioTextualObject normalized;
  if (!is_normalized(o.text)) {
    normalized = o;
    normalized.text = normalize_text(o.text);
    obj = &normalized;
  }

  std::vector<QueryId> ids;
  std::vector<QueryPtr> flagged;
  match_cell(pyramid().top_level(), 0, 0, *obj, obj->text, ids, flagged, stats);
  for (const QueryPtr& q : flagged) {
    q->result_flag = false;
  }
  return make_match_result(std::move(ids));
}

void FastIndex::match_cell(int level, std::uint32_t xc, std::uint32_t yc,
                           const SpatioTextualObject& o, const KeywordList& keywords,
                           std::vector<QueryId>& ids, std::vector<QueryPtr>& flagged,
                           MatchStats* stats) {
  if (stats != nullptr) {
    std::size_t depth = static_cast<std::size_t>(pyramid().top_level() - level);
    if (stats->keywords_per_level.size() <= depth) {
      stats->keywords_per_level.resize(depth + 1);
    }
    stats->keywords_per_level[depth].push_back(keywords.size());
  }

  PyramidNode* node = store_.find(level, xc, yc);
  const KeywordList* next = &keywords;
  KeywordList narrowed;
  if (node != nullptr) {
    if (stats != nullptr) {
      ++stats->pyramid_nodes_visited;
    }
    AkiSearchStats search_stats;
    AkiSearchHits hits = node->aki.search(keywords, stats ? &search_stats : nullptr);
    if (stats != nullptr) {
      stats->textual_nodes_visited += search_stats.textual_nodes_visited;
    }
    verify_candidates(hits, o, ids, flagged, stats);
    narrowed = std::move(hits.frequent_keywords);
    next = &narrowed;
  }
  // An absent pyramid node carries the keyword set down unchanged: cleaning
  // may remove an upper node while descendants still hold live queries.

  if (level == 0 || next->empty()) {
    return;
  }
  int child_level = level - 1;
  if (o.rect.has_value()) {
    for (std::uint32_t dy = 0; dy < 2; ++dy) {
      for (std::uint32_t dx = 0; dx < 2; ++dx) {
        std::uint32_t cx = 2 * xc + dx;
        std::uint32_t cy = 2 * yc + dy;
        if (pyramid().cell_rect(child_level, cx, cy).overlaps(*o.rect)) {
          match_cell(child_level, cx, cy, o, *next, ids, flagged, stats);
        }
      }
    }
  } else {
    auto [cx, cy] = pyramid().cell_coords(o.loc, child_level);
    match_cell(child_level, cx, cy, o, *next, ids, flagged, stats);
  }
}

void FastIndex::verify_candidates(const AkiSearchHits& hits, const SpatioTextualObject& o,
                                  std::vector<QueryId>& ids, std::vector<QueryPtr>& flagged,
                                  MatchStats* stats) {
  if (stats != nullptr) {
    stats->candidates_scanned += hits.total();
  }
  auto spatial_ok = [&](const ContinuousQuery& q) {
    return o.rect.has_value() ? q.mbr.overlaps(*o.rect) : q.mbr.contains(o.loc);
  };
  auto accept = [&](const QueryPtr& q) {
    if (!q->result_flag) {
      q->result_flag = true;
      flagged.push_back(q);
      ids.push_back(q->parent_qid.value_or(q->qid));
    }
  };

  for (const QueryPtr& q : hits.needs_text_verify) {
    if (q->expired(clock_) || !spatial_ok(*q) || !text_subset(q->text, o.text)) {
      continue;
    }
    accept(q);
  }
  // Queries on frequent nodes carry exactly the path's keywords; no textual check.
  for (const QueryPtr& q : hits.text_exact) {
    if (q->expired(clock_) || !spatial_ok(*q)) {
      continue;
    }
    accept(q);
  }
}

// ---------------------------------------------------------------------------
// Cleaning

CleanReport FastIndex::clean_step() {
  CleanReport report;
  if (clean_queue_.empty()) {
    return report;
  }
  NodeAddress addr = clean_queue_.front();
  clean_queue_.pop_front();
  PyramidNode* node = store_.find(addr);
  if (node == nullptr) {
    return report;
  }

  AkiSweepResult sweep = node->aki.sweep_expired(clock_, [&](const QueryPtr& q) {
    if (!q->deleted) {
      q->deleted = true;
      fm_.remove(q->text);
      live_.erase(q->qid);
      ++report.removed;
    }
  });
  report.demoted = sweep.demoted;

  if (node->aki.empty()) {
    store_.erase(addr);
    report.nodes_deleted = 1;
  } else {
    clean_queue_.push_back(addr);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Introspection

IndexStructure FastIndex::structure() const {
  IndexStructure s;
  s.pyramid_nodes = store_.size();
  s.live_queries = live_.size();
  std::unordered_set<const QueryList*> seen;
  store_.for_each([&](const PyramidNode& pn) {
    pn.aki.for_each_node([&](const TextualNode& t) {
      ++s.textual_nodes;
      s.attachments += t.list_size();
      if (seen.insert(t.qlist.get()).second) {
        s.list_entries += t.qlist->size();
        if (t.qlist->holders.size() > 1) {
          ++s.shared_lists;
        }
      }
    });
  });
  return s;
}

double FastIndex::mean_replication() const {
  if (live_.empty()) {
    return 0.0;
  }
  std::unordered_map<QueryId, std::size_t> counts;
  store_.for_each([&](const PyramidNode& pn) {
    pn.aki.for_each_node([&](const TextualNode& t) {
      for (const QueryPtr& q : t.qlist->items) {
        ++counts[q->qid];
      }
    });
  });
  std::size_t total = 0;
  std::size_t live_seen = 0;
  for (const auto& [qid, q] : live_) {
    auto it = counts.find(qid);
    if (it != counts.end()) {
      total += it->second;
      ++live_seen;
    }
  }
  return live_seen == 0 ? 0.0 : static_cast<double>(total) / static_cast<double>(live_seen);
}

}  // namespace fastmatch
