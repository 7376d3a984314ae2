#pragma once

#include <span>

#include "fastmatch/core.hpp"

namespace fastmatch {

// Brute-force reference matcher; the ground truth for every property test.
// Deliberately shares only the core geometry/text predicates with the index.
//
// A query matches when it is live (t_exp > now), the spatial predicate holds
// (point containment, or overlap for rectangle objects), and its keywords are
// all contained in the object's. DNF sub-queries report their parent id.
MatchResult oracle_match(std::span<const ContinuousQuery> corpus, const SpatioTextualObject& o,
                         Timestamp now);

// Textual-only variant for the keyword indexes: q.text subset of `keywords`.
std::vector<QueryId> oracle_text_match(std::span<const ContinuousQuery> corpus,
                                       const KeywordList& keywords);

}  // namespace fastmatch
