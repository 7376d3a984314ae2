#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>

#include "fastmatch/baselines.hpp"
#include "fastmatch/core.hpp"

namespace fastmatch {

// Analytical matching-performance model for the three keyword indexes plus
// the replication expectations of the spatial pyramid. All closed-form or
// bounded recursion; used for threshold estimation and acceptance checks.

struct CostParams {
  std::unordered_map<std::string, std::uint64_t> posting_lengths;
  // alpha[(level, keyword)]: probability that the keyword is indexed at that
  // trie level; absent entries read as 0.
  std::map<std::pair<int, std::string>, double> alpha;
  std::uint32_t theta = 5;
  int max_depth = 1;  // deepest |q.text| among indexed queries
  std::uint32_t gran_max = 512;

  double alpha_at(int level, const std::string& keyword) const;
};

// Visited textual items in the inverted list: sum of posting lengths.
double mp_ril(const KeywordList& s, const CostParams& params);

// Trie recursion: |S| + sum_j alpha(level, s_j) * mp(level+1, suffix after j).
// Terminates at max_depth or on an empty keyword set.
double mp_okt(int level, const KeywordList& s, const CostParams& params);

// Infrequent node: |S| * theta. Frequent node: the trie recursion.
double mp_aki(int level, const KeywordList& s, const CostParams& params, bool node_is_frequent);

// Upper bound on the frequent-keyword threshold.
double theta_bound(double mp_okt_value, std::size_t s_size);

// Worst case: keyword matching at every pyramid level.
double mp_fast(const KeywordList& s, const CostParams& params, bool node_is_frequent = false);

// Expected cells referencing a query indexed i levels above its minimum
// level, with its side drawn uniformly from the minimum level's (1/2, 1]
// band. Closed-form polynomial antiderivative. i=0 gives 37/12 = 3.083…
double expected_replication(int i);

// Mean replication across n levels for side lengths uniform over a cell:
// (1/n) * sum_{i<n} integral_0^1 (1 + r/2^i)^2 dr. n=9 gives 1.2712.
double expected_replication_uniform(int n_levels);

// Monte-Carlo counterparts (uniform placement; deterministic under seed).
double monte_carlo_replication_min_level(std::size_t samples, std::uint64_t seed);
double monte_carlo_replication_uniform(int n_levels, std::size_t samples, std::uint64_t seed);

// Empirical alpha fit: probe an ordered-keyword trie with sample keyword
// sets and record per-level child-hit frequencies.
struct AlphaEstimate {
  CostParams params;           // alpha + max_depth filled
  std::uint64_t probes = 0;
};
AlphaEstimate estimate_alpha(const Okt& okt, const std::vector<KeywordList>& probes);

}  // namespace fastmatch
