#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fastmatch/core.hpp"

namespace fastmatch {

enum class SpatialDist { kUniform, kGaussian };
enum class ObjectLocationMode {
  kSameAsQueries,  // objects follow the query spatial distribution
  kSkewedAway,     // objects drawn from a shifted Gaussian
};

struct GaussianSpec {
  double mu_x = 0.5;
  double mu_y = 0.5;
  double sigma = 0.1;
};

struct WorkloadSpec {
  std::size_t n_queries = 10'000;
  std::size_t n_objects = 1'000;

  double zipf_exponent = 1.0;
  std::size_t vocabulary_size = 10'000;
  std::size_t keywords_per_query = 3;
  std::size_t keywords_per_object = 5;

  SpatialDist spatial = SpatialDist::kUniform;
  GaussianSpec gaussian{};
  ObjectLocationMode object_mode = ObjectLocationMode::kSameAsQueries;

  // Query side drawn uniformly in (0, range_fraction] of the space.
  double range_fraction = 0.01;
  // Query MBRs cover the whole space (keyword-only workloads).
  bool full_space_queries = false;

  // t_exp drawn uniformly in [lifetime_min, lifetime_max].
  Timestamp lifetime_min = 1'000;
  Timestamp lifetime_max = 10'000;

  double dnf_fraction = 0.0;  // fraction of queries generated as DNF
  std::size_t dnf_clauses = 2;
  double rect_object_fraction = 0.0;

  std::uint64_t rng_seed = 42;

  void validate() const;
};

struct QueryWorkload {
  std::vector<ContinuousQuery> plain;
  std::vector<DnfQuery> dnf;
};

// Deterministic under rng_seed: the same spec yields byte-identical streams.
QueryWorkload gen_queries(const WorkloadSpec& spec);
std::vector<SpatioTextualObject> gen_objects(const WorkloadSpec& spec);

// Rank-frequency sampler: P(rank) proportional to 1 / rank^exponent.
class ZipfSampler {
 public:
  ZipfSampler(std::size_t n, double exponent);
  std::size_t operator()(std::mt19937_64& rng) const;  // 1-based rank

 private:
  std::vector<double> cumulative_;
};

// Vocabulary word for a rank; zero-padded so lexicographic order is rank order.
std::string vocab_word(std::size_t rank);

}  // namespace fastmatch
