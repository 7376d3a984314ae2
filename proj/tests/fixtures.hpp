#pragma once

// Shared test fixtures: the nine-query corpus used across the index,
// baseline and oracle tests, plus small random-workload helpers.

#include <memory>
#include <random>
#include <vector>

#include "fastmatch/core.hpp"

namespace fastmatch::testing {

inline ContinuousQuery make_query(QueryId qid, Mbr mbr, KeywordList text,
                                  Timestamp t_exp = 1'000'000) {
  ContinuousQuery q;
  q.qid = qid;
  q.mbr = mbr;
  q.text = std::move(text);
  q.t_exp = t_exp;
  return q;
}

// q1..q9 in insertion order. With theta = 2 the adaptive keyword index
// evolves to: [k1],[k2],[k3] frequent, [k1k2] frequent {q1,q2,q3},
// [k1k3] {q5}, [k1k2k3] {q6}, [k2k3] {q8}, [k3] {q9}, [k6] {q4}, [k7] {q7}.
inline std::vector<ContinuousQuery> nine_query_corpus() {
  return {
      make_query(1, {0.20, 0.20, 0.45, 0.45}, {"k1", "k2"}),
      make_query(2, {0.60, 0.60, 0.75, 0.70}, {"k1", "k2"}),
      make_query(3, {0.45, 0.10, 0.55, 0.20}, {"k1", "k2"}),
      make_query(4, {0.50, 0.10, 0.70, 0.30}, {"k3", "k6"}),
      make_query(5, {0.70, 0.20, 0.90, 0.40}, {"k1", "k3"}),
      make_query(6, {0.55, 0.50, 0.75, 0.70}, {"k1", "k2", "k3"}),
      make_query(7, {0.25, 0.25, 0.50, 0.50}, {"k6", "k7"}),
      make_query(8, {0.05, 0.05, 0.15, 0.20}, {"k2", "k3"}),
      make_query(9, {0.40, 0.70, 0.60, 0.95}, {"k3"}),
  };
}

inline SpatioTextualObject object_o1() {
  SpatioTextualObject o;
  o.oid = 1;
  o.loc = {0.30, 0.30};
  o.text = {"k1", "k2"};
  return o;
}

}  // namespace fastmatch::testing
