#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fastmatch/core.hpp"
#include "fastmatch/fast_index.hpp"
#include "fastmatch/workload.hpp"

namespace fastmatch {

enum class IndexKind { kFast, kRil, kOkt, kAki };

std::string index_kind_name(IndexKind kind);
IndexKind parse_index_kind(const std::string& name);

struct BenchOptions {
  FastConfig fast{};
  // Fraction of streamed objects whose results are re-checked against the
  // brute-force oracle; a mismatch aborts the run.
  double verify_fraction = 0.01;
  std::string sweep_name = "none";
  double sweep_value = 0.0;
};

struct BenchRow {
  std::string index;
  std::string sweep;
  double sweep_value = 0.0;
  std::size_t n_queries = 0;
  std::size_t n_objects = 0;
  std::uint32_t theta = 0;
  std::uint32_t gran_max = 0;
  Timestamp clean_interval = 0;
  std::uint64_t seed = 0;

  double insert_us_mean = 0.0;
  double insert_us_total = 0.0;
  double match_us_mean = 0.0;
  double match_us_p99 = 0.0;
  double visited_pyramid_mean = 0.0;
  double visited_textual_mean = 0.0;
  double candidates_mean = 0.0;
  double results_mean = 0.0;

  std::size_t pyramid_nodes = 0;
  std::size_t textual_nodes = 0;
  std::size_t list_entries = 0;
  std::size_t shared_lists = 0;
  double replication_mean = 0.0;

  std::size_t clean_calls = 0;
  double clean_us_total = 0.0;
  std::size_t clean_removed = 0;

  std::size_t verified = 0;
  std::size_t mismatches = 0;

  static std::string csv_header();
  std::string to_csv() const;
};

// Builds the chosen index over the generated workload, streams the objects
// (advancing the logical clock by one per object, cleaning every
// clean_interval ticks for the integrated index), and verifies a sample of
// results against the oracle. Throws OracleMismatchError on any disagreement.
BenchRow run_bench(const WorkloadSpec& spec, IndexKind kind, const BenchOptions& options);

}  // namespace fastmatch
