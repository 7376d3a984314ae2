#include "fastmatch/oracle.hpp"

#include <algorithm>

namespace fastmatch {

MatchResult oracle_match(std::span<const ContinuousQuery> corpus, const SpatioTextualObject& o,
                         Timestamp now) {
  std::vector<QueryId> ids;
  for (const ContinuousQuery& q : corpus) {
    if (q.expired(now)) {
      continue;
    }
    bool spatial = o.rect.has_value() ? q.mbr.overlaps(*o.rect) : q.mbr.contains(o.loc);
    if (!spatial) {
      continue;
    }
    if (!text_subset(q.text, o.text)) {
      continue;
    }
    ids.push_back(q.parent_qid.value_or(q.qid));
  }
  return make_match_result(std::move(ids));
}

std::vector<QueryId> oracle_text_match(std::span<const ContinuousQuery> corpus,
                                       const KeywordList& keywords) {
  std::vector<QueryId> ids;
  for (const ContinuousQuery& q : corpus) {
    if (text_subset(q.text, keywords)) {
      ids.push_back(q.parent_qid.value_or(q.qid));
    }
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

}  // namespace fastmatch
