#pragma once

#include <cstdint>
#include <deque>
#include <unordered_map>
#include <vector>

#include "fastmatch/aki.hpp"
#include "fastmatch/core.hpp"
#include "fastmatch/pyramid.hpp"

namespace fastmatch {

struct FastConfig {
  std::uint32_t gran_max = 512;
  std::uint32_t theta = 5;
  Timestamp clean_interval = 1000;   // time units between clean_step calls
  std::uint32_t descend_multiplier = 4;  // descent trigger: list length > m * theta
};

struct MatchStats {
  std::uint64_t pyramid_nodes_visited = 0;
  std::uint64_t textual_nodes_visited = 0;
  std::uint64_t candidates_scanned = 0;
  // Searched keyword-set size per visited pyramid node, outer index = level
  // distance from the top (monotonicity audits).
  std::vector<std::vector<std::size_t>> keywords_per_level;
};

struct CleanReport {
  std::size_t removed = 0;        // queries newly marked deleted
  std::size_t demoted = 0;        // frequent textual nodes collapsed
  std::size_t nodes_deleted = 0;  // pyramid nodes removed from the store
};

struct IndexStructure {
  std::size_t pyramid_nodes = 0;
  std::size_t textual_nodes = 0;
  std::size_t attachments = 0;
  std::size_t list_entries = 0;
  std::size_t shared_lists = 0;
  std::size_t live_queries = 0;
};

// The integrated index: a frequency-aware spatial pyramid whose cells each
// carry an adaptive keyword index. Queries enter at the top level; overfull
// lists of textually indistinguishable queries spill their smaller-area half
// one level down. Expired queries are vacuumed lazily, one pyramid node per
// cleaning step, while matching filters them out independently.
//
// Concurrency: one mutator at a time (insert/clean); matches may run
// concurrently only while no mutator is active.
class FastIndex {
 public:
  explicit FastIndex(FastConfig config = {});

  const FastConfig& config() const { return config_; }
  const PyramidConfig& pyramid() const { return store_.config(); }
  NodeStore& store() { return store_; }
  const FrequenciesMap& frequencies() const { return fm_; }

  Timestamp clock() const { return clock_; }
  void advance_clock(Timestamp dt = 1) { clock_ += dt; }

  // Normalizes text, validates the MBR and expiry, and attaches the query at
  // the top pyramid level. Throws EmptyTextError, OutOfSpaceError,
  // ExpiredError, or Error on duplicate qid.
  void insert(const ContinuousQuery& q);

  // Expands the DNF query into one sub-query per distinct clause and inserts
  // them all. Returns the sub-queries as registered (for oracle mirrors).
  std::vector<ContinuousQuery> insert_dnf(const DnfQuery& d);

  // Top-down match for a point (or rectangle, when o.rect is set) object.
  MatchResult match(const SpatioTextualObject& o, MatchStats* stats = nullptr);

  // One vacuum step: clean the pyramid node at the head of the queue.
  CleanReport clean_step();

  std::size_t live_count() const { return live_.size(); }
  const ContinuousQuery* live_query(QueryId qid) const;
  std::size_t clean_queue_size() const { return clean_queue_.size(); }

  IndexStructure structure() const;
  // Mean number of cells referencing a live query (its replication factor).
  double mean_replication() const;

  // Test hooks.
  void set_descend_multiplier(std::uint32_t m) { config_.descend_multiplier = m; }
  // Attach directly at a level, bypassing the top-level entry point.
  void insert_at_level(const ContinuousQuery& q, int level);

 private:
  QueryPtr register_query(const ContinuousQuery& q);
  void attach_at_level(const QueryPtr& q, int level, const Mbr& region);
  void descend(PyramidNode& source, TextualNode& node, const std::vector<QueryPtr>& candidates,
               int to_level);
  bool all_keywords_frequent(const Aki& aki, const KeywordList& text) const;
  std::uint64_t descend_trigger_for(int level) const;

  void match_cell(int level, std::uint32_t xc, std::uint32_t yc, const SpatioTextualObject& o,
                  const KeywordList& keywords, std::vector<QueryId>& ids,
                  std::vector<QueryPtr>& flagged, MatchStats* stats);
  void verify_candidates(const AkiSearchHits& hits, const SpatioTextualObject& o,
                         std::vector<QueryId>& ids, std::vector<QueryPtr>& flagged,
                         MatchStats* stats);

  FastConfig config_;
  NodeStore store_;
  FrequenciesMap fm_;
  Timestamp clock_ = 0;
  std::deque<NodeAddress> clean_queue_;
  std::unordered_map<QueryId, QueryPtr> live_;
  QueryId next_sub_qid_;
};

}  // namespace fastmatch
