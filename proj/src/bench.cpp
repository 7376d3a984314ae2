#include "fastmatch/bench.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "fastmatch/baselines.hpp"
#include "fastmatch/oracle.hpp"

namespace fastmatch {

namespace {

using Clock = std::chrono::steady_clock;

double micros_since(Clock::time_point start) {
  return std::chrono::duration<double, std::micro>(Clock::now() - start).count();
}

double mean(const std::vector<double>& v) {
  if (v.empty()) {
    return 0.0;
  }
  double total = 0.0;
  for (double x : v) {
    total += x;
  }
  return total / static_cast<double>(v.size());
}

double percentile(std::vector<double> v, double p) {
  if (v.empty()) {
    return 0.0;
  }
  std::sort(v.begin(), v.end());
  std::size_t idx = static_cast<std::size_t>(p * static_cast<double>(v.size() - 1));
  return v[idx];
}

}  // namespace

std::string index_kind_name(IndexKind kind) {
  switch (kind) {
    case IndexKind::kFast:
      return "fast";
    case IndexKind::kRil:
      return "ril";
    case IndexKind::kOkt:
      return "okt";
    case IndexKind::kAki:
      return "aki";
  }
  return "?";
}

IndexKind parse_index_kind(const std::string& name) {
  if (name == "fast") return IndexKind::kFast;
  if (name == "ril") return IndexKind::kRil;
  if (name == "okt") return IndexKind::kOkt;
  if (name == "aki") return IndexKind::kAki;
  throw Error("unknown index kind: " + name);
}

std::string BenchRow::csv_header() {
  return "index,sweep,sweep_value,n_queries,n_objects,theta,gran_max,clean_interval,seed,"
         "insert_us_mean,insert_us_total,match_us_mean,match_us_p99,visited_pyramid_mean,"
         "visited_textual_mean,candidates_mean,results_mean,pyramid_nodes,textual_nodes,"
         "list_entries,shared_lists,replication_mean,clean_calls,clean_us_total,clean_removed,"
         "verified,mismatches";
}

std::string BenchRow::to_csv() const {
  std::ostringstream out;
  out << index << ',' << sweep << ',' << sweep_value << ',' << n_queries << ',' << n_objects
      << ',' << theta << ',' << gran_max << ',' << clean_interval << ',' << seed << ','
      << insert_us_mean << ',' << insert_us_total << ',' << match_us_mean << ',' << match_us_p99
      << ',' << visited_pyramid_mean << ',' << visited_textual_mean << ',' << candidates_mean
      << ',' << results_mean << ',' << pyramid_nodes << ',' << textual_nodes << ','
      << list_entries << ',' << shared_lists << ',' << replication_mean << ',' << clean_calls
      << ',' << clean_us_total << ',' << clean_removed << ',' << verified << ',' << mismatches;
  return out.str();
}

namespace {

BenchRow bench_fast(const WorkloadSpec& spec, const BenchOptions& options, BenchRow row) {
  FastIndex index(options.fast);
  std::vector<ContinuousQuery> corpus;  // oracle mirror: plain + DNF sub-queries

  QueryWorkload queries = gen_queries(spec);
  std::vector<SpatioTextualObject> objects = gen_objects(spec);

  std::vector<double> insert_us;
  insert_us.reserve(spec.n_queries);
  for (const ContinuousQuery& q : queries.plain) {
    auto t0 = Clock::now();
    index.insert(q);
    insert_us.push_back(micros_since(t0));
    corpus.push_back(*index.live_query(q.qid));
  }
  for (const DnfQuery& d : queries.dnf) {
    auto t0 = Clock::now();
    std::vector<ContinuousQuery> subs = index.insert_dnf(d);
    insert_us.push_back(micros_since(t0));
    corpus.insert(corpus.end(), subs.begin(), subs.end());
  }

  std::vector<double> match_us;
  match_us.reserve(objects.size());
  double visited_pyramid = 0.0;
  double visited_textual = 0.0;
  double candidates = 0.0;
  double results = 0.0;
  std::size_t verify_stride =
      options.verify_fraction <= 0.0
          ? 0
          : std::max<std::size_t>(1, static_cast<std::size_t>(1.0 / options.verify_fraction));

  for (std::size_t i = 0; i < objects.size(); ++i) {
    index.advance_clock(1);
    MatchStats stats;
    auto t0 = Clock::now();
    MatchResult got = index.match(objects[i], &stats);
    match_us.push_back(micros_since(t0));
    visited_pyramid += static_cast<double>(stats.pyramid_nodes_visited);
    visited_textual += static_cast<double>(stats.textual_nodes_visited);
    candidates += static_cast<double>(stats.candidates_scanned);
    results += static_cast<double>(got.qids.size());

    if (verify_stride != 0 && i % verify_stride == 0) {
      ++row.verified;
      MatchResult expected = oracle_match(corpus, objects[i], index.clock());
      if (!(expected == got)) {
        ++row.mismatches;
        throw OracleMismatchError("bench: index result diverges from oracle at object " +
                                  std::to_string(objects[i].oid));
      }
    }

    if (index.clock() % options.fast.clean_interval == 0) {
      auto c0 = Clock::now();
      CleanReport r = index.clean_step();
      row.clean_us_total += micros_since(c0);
      ++row.clean_calls;
      row.clean_removed += r.removed;
    }
  }

  IndexStructure s = index.structure();
  row.insert_us_mean = mean(insert_us);
  row.insert_us_total = mean(insert_us) * static_cast<double>(insert_us.size());
  row.match_us_mean = mean(match_us);
  row.match_us_p99 = percentile(match_us, 0.99);
  double n = objects.empty() ? 1.0 : static_cast<double>(objects.size());
  row.visited_pyramid_mean = visited_pyramid / n;
  row.visited_textual_mean = visited_textual / n;
  row.candidates_mean = candidates / n;
  row.results_mean = results / n;
  row.pyramid_nodes = s.pyramid_nodes;
  row.textual_nodes = s.textual_nodes;
  row.list_entries = s.list_entries;
  row.shared_lists = s.shared_lists;
  row.replication_mean = index.mean_replication();
  return row;
}

BenchRow bench_textual(const WorkloadSpec& spec, IndexKind kind, const BenchOptions& options,
                       BenchRow row) {
  WorkloadSpec text_spec = spec;
  text_spec.dnf_fraction = 0.0;  // textual baselines take plain conjunctions
  QueryWorkload queries = gen_queries(text_spec);
  std::vector<SpatioTextualObject> objects = gen_objects(text_spec);

  FrequenciesMap fm;
  Ril ril(&fm);
  Okt okt;
  Aki aki(options.fast.theta);

  std::vector<ContinuousQuery> corpus;
  std::vector<double> insert_us;
  insert_us.reserve(queries.plain.size());
  for (const ContinuousQuery& raw : queries.plain) {
    auto q = std::make_shared<ContinuousQuery>(raw);
    q->text = normalize_text(q->text);
    corpus.push_back(*q);
    auto t0 = Clock::now();
    fm.add(q->text);
    switch (kind) {
      case IndexKind::kRil:
        ril.insert(q);
        break;
      case IndexKind::kOkt:
        okt.insert(q);
        break;
      default:
        aki.insert(q, fm);
        break;
    }
    insert_us.push_back(micros_since(t0));
  }

  std::vector<double> match_us;
  double candidates = 0.0;
  double visited_textual = 0.0;
  double results = 0.0;
  std::size_t verify_stride =
      options.verify_fraction <= 0.0
          ? 0
          : std::max<std::size_t>(1, static_cast<std::size_t>(1.0 / options.verify_fraction));

  for (std::size_t i = 0; i < objects.size(); ++i) {
    std::vector<QueryId> got;
    auto t0 = Clock::now();
    switch (kind) {
      case IndexKind::kRil: {
        Ril::SearchResult r = ril.search(objects[i].text);
        candidates += static_cast<double>(r.visited);
        got = std::move(r.results);
        break;
      }
      case IndexKind::kOkt: {
        Okt::SearchResult r = okt.search(objects[i].text);
        candidates += static_cast<double>(r.matches.size());
        visited_textual += static_cast<double>(r.nodes_visited);
        got = std::move(r.results);
        break;
      }
      default: {
        AkiSearchStats stats;
        AkiSearchHits hits = aki.search(objects[i].text, &stats);
        visited_textual += static_cast<double>(stats.textual_nodes_visited);
        candidates += static_cast<double>(hits.total());
        for (const QueryPtr& q : hits.needs_text_verify) {
          if (text_subset(q->text, objects[i].text)) {
            got.push_back(q->qid);
          }
        }
        for (const QueryPtr& q : hits.text_exact) {
          got.push_back(q->qid);
        }
        std::sort(got.begin(), got.end());
        got.erase(std::unique(got.begin(), got.end()), got.end());
        break;
      }
    }
    match_us.push_back(micros_since(t0));
    results += static_cast<double>(got.size());

    if (verify_stride != 0 && i % verify_stride == 0) {
      ++row.verified;
      std::vector<QueryId> expected = oracle_text_match(corpus, objects[i].text);
      if (expected != got) {
        ++row.mismatches;
        throw OracleMismatchError("bench: textual index diverges from oracle at object " +
                                  std::to_string(objects[i].oid));
      }
    }
  }

  row.insert_us_mean = mean(insert_us);
  row.insert_us_total = mean(insert_us) * static_cast<double>(insert_us.size());
  row.match_us_mean = mean(match_us);
  row.match_us_p99 = percentile(match_us, 0.99);
  double n = objects.empty() ? 1.0 : static_cast<double>(objects.size());
  row.candidates_mean = candidates / n;
  row.visited_textual_mean = visited_textual / n;
  row.results_mean = results / n;
  switch (kind) {
    case IndexKind::kRil:
      row.list_entries = ril.size();
      break;
    case IndexKind::kOkt:
      row.textual_nodes = okt.node_count();
      break;
    default: {
      AkiStructure s = aki.structure();
      row.textual_nodes = s.nodes;
      row.list_entries = s.list_entries;
      break;
    }
  }
  return row;
}

}  // namespace

BenchRow run_bench(const WorkloadSpec& spec, IndexKind kind, const BenchOptions& options) {
  spec.validate();
  BenchRow row;
  row.index = index_kind_name(kind);
  row.sweep = options.sweep_name;
  row.sweep_value = options.sweep_value;
  row.n_queries = spec.n_queries;
  row.n_objects = spec.n_objects;
  row.theta = options.fast.theta;
  row.gran_max = options.fast.gran_max;
  row.clean_interval = options.fast.clean_interval;
  row.seed = spec.rng_seed;

  if (kind == IndexKind::kFast) {
    return bench_fast(spec, options, std::move(row));
  }
  return bench_textual(spec, kind, options, std::move(row));
}

}  // namespace fastmatch
