#include "fastmatch/cost_model.hpp"

#include <cmath>
#include <random>

namespace fastmatch {

double CostParams::alpha_at(int level, const std::string& keyword) const {
  auto it = alpha.find({level, keyword});
  return it == alpha.end() ? 0.0 : it->second;
}

double mp_ril(const KeywordList& s, const CostParams& params) {
  double total = 0.0;
  for (const std::string& k : s) {
    auto it = params.posting_lengths.find(k);
    if (it == params.posting_lengths.end()) {
      throw UnknownKeywordError(k);
    }
    total += static_cast<double>(it->second);
  }
  return total;
}

namespace {

double mp_okt_rec(int level, const KeywordList& s, std::size_t from, const CostParams& params) {
  double size = static_cast<double>(s.size() - from);
  if (from >= s.size() || level >= params.max_depth) {
    return size;
  }
  double total = size;
  for (std::size_t j = from; j < s.size(); ++j) {
    double a = params.alpha_at(level, s[j]);
    if (a > 0.0) {
      total += a * mp_okt_rec(level + 1, s, j + 1, params);
    }
  }
  return total;
}

}  // namespace

double mp_okt(int level, const KeywordList& s, const CostParams& params) {
  return mp_okt_rec(level, s, 0, params);
}

double mp_aki(int level, const KeywordList& s, const CostParams& params, bool node_is_frequent) {
  if (!node_is_frequent) {
    return static_cast<double>(s.size()) * static_cast<double>(params.theta);
  }
  return mp_okt(level, s, params);
}

double theta_bound(double mp_okt_value, std::size_t s_size) {
  if (s_size == 0) {
    throw DivideByZeroError{};
  }
  return mp_okt_value / static_cast<double>(s_size);
}

double mp_fast(const KeywordList& s, const CostParams& params, bool node_is_frequent) {
  double height = std::log2(static_cast<double>(params.gran_max));
  return height * mp_aki(0, s, params, node_is_frequent);
}

double expected_replication(int i) {
  // (2 / 2^{2i}) * [(2^i + r)^3 / 3] over r in (1/2, 1]
  double p = std::pow(2.0, i);
  double upper = (p + 1.0) * (p + 1.0) * (p + 1.0);
  double lower = (p + 0.5) * (p + 0.5) * (p + 0.5);
  return 2.0 / (p * p) * (upper - lower) / 3.0;
}

double expected_replication_uniform(int n_levels) {
  if (n_levels < 1) {
    throw Error("level count must be at least 1");
  }
  // integral_0^1 (1 + r/2^i)^2 dr = 1 + 2^{-i} + 4^{-i}/3
  double total = 0.0;
  for (int i = 0; i < n_levels; ++i) {
    double inv2 = std::pow(2.0, -i);
    total += 1.0 + inv2 + inv2 * inv2 / 3.0;
  }
  return total / n_levels;
}

double monte_carlo_replication_min_level(std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> side(0.5, 1.0);   // side in cell units
  std::uniform_real_distribution<double> offset(0.0, 1.0); // placement inside a cell
  std::uint64_t total = 0;
  for (std::size_t n = 0; n < samples; ++n) {
    double r = side(rng);
    int span_x = 1 + (offset(rng) + r > 1.0 ? 1 : 0);
    int span_y = 1 + (offset(rng) + r > 1.0 ? 1 : 0);
    total += static_cast<std::uint64_t>(span_x) * span_y;
  }
  return static_cast<double>(total) / static_cast<double>(samples);
}

double monte_carlo_replication_uniform(int n_levels, std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> level(0, n_levels - 1);
  std::uniform_real_distribution<double> side(0.0, 1.0);
  std::uniform_real_distribution<double> offset(0.0, 1.0);
  std::uint64_t total = 0;
  for (std::size_t n = 0; n < samples; ++n) {
    double r = side(rng) / std::pow(2.0, level(rng));
    int span_x = 1 + (offset(rng) + r > 1.0 ? 1 : 0);
    int span_y = 1 + (offset(rng) + r > 1.0 ? 1 : 0);
    total += static_cast<std::uint64_t>(span_x) * span_y;
  }
  return static_cast<double>(total) / static_cast<double>(samples);
}

AlphaEstimate estimate_alpha(const Okt& okt, const std::vector<KeywordList>& probes) {
  struct Tally {
    std::uint64_t hits = 0;
    std::uint64_t tries = 0;
  };
  std::map<std::pair<int, std::string>, Tally> tallies;
  AlphaEstimate est;
  for (const KeywordList& probe : probes) {
    Okt::SearchResult r =
        okt.search(probe, [&](int level, const std::string& k, bool child_exists) {
          Tally& t = tallies[{level, k}];
          ++t.tries;
          if (child_exists) {
            ++t.hits;
          }
          ++est.probes;
        });
    (void)r;
  }
  for (const auto& [key, tally] : tallies) {
    if (tally.tries > 0) {
      est.params.alpha[key] = static_cast<double>(tally.hits) / static_cast<double>(tally.tries);
    }
  }
  est.params.max_depth = okt.max_depth() == 0 ? 1 : okt.max_depth();
  return est;
}

}  // namespace fastmatch
