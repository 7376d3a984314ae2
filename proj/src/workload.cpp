#include "fastmatch/workload.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace fastmatch {

void WorkloadSpec::validate() const {
  if (n_queries == 0 || vocabulary_size == 0 || keywords_per_query == 0 ||
      keywords_per_object == 0) {
    throw Error("workload counts must be positive");
  }
  if (range_fraction <= 0.0 || range_fraction > 1.0) {
    throw Error("range fraction must be in (0, 1]");
  }
  if (lifetime_min < 1 || lifetime_max < lifetime_min) {
    throw Error("invalid lifetime bounds");
  }
  if (dnf_fraction < 0.0 || dnf_fraction > 1.0 || rect_object_fraction < 0.0 ||
      rect_object_fraction > 1.0) {
    throw Error("fractions must be in [0, 1]");
  }
  if (keywords_per_query > vocabulary_size || keywords_per_object > vocabulary_size) {
    throw Error("keyword count exceeds vocabulary");
  }
}

ZipfSampler::ZipfSampler(std::size_t n, double exponent) {
  cumulative_.resize(n);
  double total = 0.0;
  for (std::size_t rank = 1; rank <= n; ++rank) {
    total += 1.0 / std::pow(static_cast<double>(rank), exponent);
    cumulative_[rank - 1] = total;
  }
  for (double& c : cumulative_) {
    c /= total;
  }
}

std::size_t ZipfSampler::operator()(std::mt19937_64& rng) const {
  double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) {
    return cumulative_.size();
  }
  return static_cast<std::size_t>(it - cumulative_.begin()) + 1;
}

std::string vocab_word(std::size_t rank) {
  std::string digits = std::to_string(rank);
  std::string out = "w";
  for (std::size_t i = digits.size(); i < 7; ++i) {
    out.push_back('0');
  }
  out += digits;
  return out;
}

namespace {

KeywordList draw_keywords(std::mt19937_64& rng, const ZipfSampler& zipf, std::size_t count) {
  std::set<std::size_t> ranks;
  while (ranks.size() < count) {
    ranks.insert(zipf(rng));
  }
  KeywordList text;
  text.reserve(count);
  for (std::size_t rank : ranks) {
    text.push_back(vocab_word(rank));
  }
  std::sort(text.begin(), text.end());
  return text;
}

Point draw_location(std::mt19937_64& rng, SpatialDist dist, const GaussianSpec& g) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  if (dist == SpatialDist::kUniform) {
    return Point{uniform(rng), uniform(rng)};
  }
  std::normal_distribution<double> nx(g.mu_x, g.sigma);
  std::normal_distribution<double> ny(g.mu_y, g.sigma);
  auto clamp01 = [](double v) { return std::min(std::max(v, 0.0), 0.999999); };
  return Point{clamp01(nx(rng)), clamp01(ny(rng))};
}

Mbr box_around(Point center, double side) {
  double half = side / 2.0;
  double x0 = center.x - half;
  double y0 = center.y - half;
  x0 = std::min(std::max(x0, 0.0), 1.0 - side);
  y0 = std::min(std::max(y0, 0.0), 1.0 - side);
  return Mbr{x0, y0, x0 + side, y0 + side};
}

}  // namespace

QueryWorkload gen_queries(const WorkloadSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.rng_seed * 0x9E3779B97F4A7C15ULL + 1);
  ZipfSampler zipf(spec.vocabulary_size, spec.zipf_exponent);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::uniform_int_distribution<Timestamp> lifetime(spec.lifetime_min, spec.lifetime_max);

  QueryWorkload out;
  for (std::size_t i = 0; i < spec.n_queries; ++i) {
    QueryId qid = static_cast<QueryId>(i + 1);
    Point center = draw_location(rng, spec.spatial, spec.gaussian);
    Mbr mbr;
    if (spec.full_space_queries) {
      mbr = Mbr{0.0, 0.0, 1.0, 1.0};
    } else {
      // side strictly positive, at most range_fraction of the space
      double side = uniform(rng) * spec.range_fraction;
      if (side <= 0.0) {
        side = spec.range_fraction * 1e-9;
      }
      mbr = box_around(center, side);
    }
    Timestamp t_exp = lifetime(rng);

    bool as_dnf = uniform(rng) < spec.dnf_fraction;
    if (as_dnf) {
      DnfQuery d;
      d.qid = qid;
      d.mbr = mbr;
      d.t_exp = t_exp;
      std::size_t clauses = std::max<std::size_t>(spec.dnf_clauses, 1);
      for (std::size_t c = 0; c < clauses; ++c) {
        d.clauses.push_back(draw_keywords(rng, zipf, spec.keywords_per_query));
      }
      out.dnf.push_back(std::move(d));
    } else {
      ContinuousQuery q;
      q.qid = qid;
      q.mbr = mbr;
      q.text = draw_keywords(rng, zipf, spec.keywords_per_query);
      q.t_exp = t_exp;
      out.plain.push_back(std::move(q));
    }
  }
  return out;
}

std::vector<SpatioTextualObject> gen_objects(const WorkloadSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.rng_seed * 0x9E3779B97F4A7C15ULL + 2);
  ZipfSampler zipf(spec.vocabulary_size, spec.zipf_exponent);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  GaussianSpec object_gaussian = spec.gaussian;
  if (spec.object_mode == ObjectLocationMode::kSkewedAway) {
    object_gaussian.mu_x = spec.gaussian.mu_x <= 0.5 ? spec.gaussian.mu_x + 0.3
                                                     : spec.gaussian.mu_x - 0.3;
    object_gaussian.mu_y = spec.gaussian.mu_y <= 0.5 ? spec.gaussian.mu_y + 0.3
                                                     : spec.gaussian.mu_y - 0.3;
  }

  std::vector<SpatioTextualObject> out;
  out.reserve(spec.n_objects);
  for (std::size_t i = 0; i < spec.n_objects; ++i) {
    SpatioTextualObject o;
    o.oid = static_cast<ObjectId>(i + 1);
    o.loc = draw_location(rng, spec.spatial, object_gaussian);
    o.text = draw_keywords(rng, zipf, spec.keywords_per_object);
    if (uniform(rng) < spec.rect_object_fraction) {
      double side = uniform(rng) * spec.range_fraction;
      if (side <= 0.0) {
        side = spec.range_fraction * 1e-9;
      }
      o.rect = box_around(o.loc, side);
    }
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace fastmatch
