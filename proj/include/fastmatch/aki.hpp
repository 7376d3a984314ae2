#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "fastmatch/core.hpp"

namespace fastmatch {

using QueryPtr = std::shared_ptr<ContinuousQuery>;

// ---------------------------------------------------------------------------
// Index-global count of live queries per keyword. Counts are exact: one per
// query per distinct keyword, independent of how many cells replicate it.

class FrequenciesMap {
 public:
  void add(const KeywordList& text);
  // Throws FrequencyUnderflowError if a count would drop below zero
  // (that means a query was removed twice).
  void remove(const KeywordList& text);

  std::uint64_t count(const std::string& keyword) const;

  // Keyword of `text` with the minimum count; ties break to the
  // lexicographically smallest. `text` must be sorted and non-empty.
  std::string least_frequent(const KeywordList& text) const;

  bool all_zero() const { return counts_.empty(); }
  std::size_t distinct_keywords() const { return counts_.size(); }

 private:
  std::unordered_map<std::string, std::uint64_t> counts_;
};

// ---------------------------------------------------------------------------
// Query lists. A list is normally private to one textual node; when a query
// spans sibling pyramid cells the same list object is referenced by the
// top-level textual nodes for the same keyword in each cell.

struct TextualNode;

struct QueryList {
  std::vector<QueryPtr> items;
  std::vector<TextualNode*> holders;  // textual nodes referencing this list

  // set when the list is first shared between cells
  int level = -1;
  std::string keyword;

  std::size_t size() const { return items.size(); }
  bool contains(QueryId qid) const;
  bool remove(QueryId qid);
};

using QueryListPtr = std::shared_ptr<QueryList>;

// A node of the adaptive keyword index. Top-level nodes (depth 1) are keyed
// by a single keyword; children of a frequent node extend the path by one
// keyword, and child keys are lexicographically greater than the node's own.
// Queries attached to a frequent node carry exactly the path's keyword set.
struct TextualNode {
  std::string keyword;
  int depth = 1;
  bool frequent = false;
  QueryListPtr qlist;
  std::unordered_map<std::string, std::unique_ptr<TextualNode>> children;

  TextualNode(std::string kw, int d);
  ~TextualNode();
  TextualNode(const TextualNode&) = delete;
  TextualNode& operator=(const TextualNode&) = delete;

  bool shared() const { return qlist && qlist->holders.size() > 1; }
  std::size_t list_size() const { return qlist ? qlist->items.size() : 0; }
};

// Repoints a node at another list, keeping holder back-references consistent.
void set_query_list(TextualNode& node, QueryListPtr list);

struct AkiSearchHits {
  // From infrequent nodes: need textual + spatial + expiry verification.
  std::vector<QueryPtr> needs_text_verify;
  // From frequent nodes: textually exact by construction, need spatial + expiry.
  std::vector<QueryPtr> text_exact;
  // Probe keywords whose top-level node is frequent.
  std::vector<std::string> frequent_keywords;

  std::size_t total() const { return needs_text_verify.size() + text_exact.size(); }
};

struct AkiSearchStats {
  std::uint64_t textual_nodes_visited = 0;
};

struct DescentCandidates {
  TextualNode* node = nullptr;    // frequent node whose list passed the trigger
  std::vector<QueryPtr> queries;  // members with area strictly below the median
};

struct AkiInsertOutcome {
  TextualNode* attached = nullptr;  // node the incoming query landed on
  std::vector<DescentCandidates> descents;
};

struct AkiSweepResult {
  std::size_t attachments_removed = 0;
  std::size_t nodes_pruned = 0;
  std::size_t demoted = 0;
};

struct AkiStructure {
  std::size_t nodes = 0;
  std::size_t attachments = 0;   // sum of list sizes per holding node
  std::size_t list_entries = 0;  // sum of list sizes per distinct list
  std::size_t shared_lists = 0;
};

// ---------------------------------------------------------------------------
// The adaptive keyword index for one pyramid node. Infrequent keywords keep
// short posting lists (at most theta distinct queries); keywords whose lists
// cannot stay short split into trie-like paths over the lexicographically
// sorted query keywords. Single-writer: callers serialize mutation.

class Aki {
 public:
  static constexpr std::uint64_t kNoDescent = ~0ULL;

  // Called when an infrequent node holding a shared list is about to exceed
  // theta or be marked frequent; must leave the node with a private list.
  using SharedSeparator = std::function<void(TextualNode&)>;

  explicit Aki(std::uint32_t theta);
  Aki(Aki&&) = default;
  Aki& operator=(Aki&&) = default;

  std::uint32_t theta() const { return theta_; }

  // Frequency counts in `fm` must already include q. descend_trigger is the
  // list length strictly above which a frequent node reports descent
  // candidates (kNoDescent disables the check).
  AkiInsertOutcome insert(const QueryPtr& q, const FrequenciesMap& fm,
                          const SharedSeparator& separate = nullptr,
                          std::uint64_t descend_trigger = kNoDescent);

  AkiSearchHits search(const KeywordList& keywords, AkiSearchStats* stats = nullptr) const;

  // Eager detach; prunes textual nodes left empty. Returns whether q was present.
  bool remove(const QueryPtr& q);

  // Collapses the subtree into a single infrequent node when it holds at most
  // theta queries. Returns whether demotion occurred (false on infrequent input).
  bool demote_if_infrequent(TextualNode& node);

  // Removes every query with t_exp <= now. on_expired fires once per expired
  // query encountered in this index (shared lists are visited once). Also
  // offers demotion to the remaining frequent nodes and prunes empty ones.
  AkiSweepResult sweep_expired(Timestamp now,
                               const std::function<void(const QueryPtr&)>& on_expired);

  // Sharing hooks used by the pyramid integration.
  TextualNode* peek_top(const std::string& keyword);
  const TextualNode* peek_top(const std::string& keyword) const;
  // Attach the (infrequent, same-keyword) shared list to this index's top
  // node for `keyword`, merging any private entries into it. Fails (returns
  // false) when the node is frequent or the union would exceed theta.
  bool attach_shared(const std::string& keyword, const QueryListPtr& shared, int level);

  bool empty() const { return top_.empty(); }
  std::size_t node_count() const;
  AkiStructure structure() const;

  // Visits every textual node (top-level and descendants).
  void for_each_node(const std::function<void(const TextualNode&)>& fn) const;
  void for_each_node(const std::function<void(TextualNode&)>& fn);

  const std::unordered_map<std::string, std::unique_ptr<TextualNode>>& top() const {
    return top_;
  }

 private:
  TextualNode* ensure_top(const std::string& keyword);
  TextualNode* ensure_child(TextualNode& parent, const std::string& keyword);
  void add_query(TextualNode& node, const QueryPtr& q);

  // Moves queries out of an overfull infrequent top node into other
  // infrequent top nodes (insertion order) until the node fits theta again.
  void absorb_overflow(TextualNode& node);
  void mark_frequent_and_redistribute(TextualNode& node, const FrequenciesMap& fm,
                                      const SharedSeparator& separate, std::uint64_t trigger,
                                      AkiInsertOutcome& out);
  void redistribute(const QueryPtr& q, const FrequenciesMap& fm, const SharedSeparator& separate,
                    std::uint64_t trigger, AkiInsertOutcome& out);
  // First keyword (lexicographic) whose top node is absent, or infrequent
  // with spare capacity; absent nodes are created. nullptr when none.
  TextualNode* find_infrequent_home(const QueryPtr& q, const TextualNode* exclude);
  // Descends frequent nodes consuming q's keywords; attaches at the first
  // infrequent node or at the frequent node whose path equals q's text.
  void walk_down(TextualNode* node, const QueryPtr& q, const FrequenciesMap& fm,
                 const SharedSeparator& separate, std::uint64_t trigger, AkiInsertOutcome& out);
  // Marks a non-top node frequent and pushes its queries one keyword deeper;
  // textually indistinguishable queries stay.
  void split_non_top(TextualNode& node, const FrequenciesMap& fm, const SharedSeparator& separate,
                     std::uint64_t trigger, AkiInsertOutcome& out);
  void check_descent_trigger(TextualNode& node, std::uint64_t trigger, AkiInsertOutcome& out);
  void separate_if_needed(TextualNode& node, const SharedSeparator& separate);

  void search_expand(const TextualNode& node, const KeywordList& keywords, std::size_t index,
                     AkiSearchHits& hits, AkiSearchStats* stats) const;

  std::uint32_t theta_;
  std::unordered_map<std::string, std::unique_ptr<TextualNode>> top_;

  // attach tracking for the query currently being inserted
  QueryId track_qid_ = 0;
  AkiInsertOutcome* track_out_ = nullptr;
};

// Members sorted by MBR area ascending; returns those with area strictly
// below the median area (the element at index floor(n/2)).
std::vector<QueryPtr> below_median_area(const std::vector<QueryPtr>& items);

}  // namespace fastmatch
