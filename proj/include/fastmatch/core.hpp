#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fastmatch {

using QueryId = std::uint64_t;
using ObjectId = std::uint64_t;
using Timestamp = std::int64_t;  // logical time units

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyTextError : public Error {
 public:
  EmptyTextError() : Error("no keyword survives normalization") {}
};

class EmptyClauseError : public Error {
 public:
  EmptyClauseError() : Error("DNF clause normalizes to empty") {}
};

class OutOfSpaceError : public Error {
 public:
  OutOfSpaceError() : Error("location outside the indexed unit space") {}
};

class ExpiredError : public Error {
 public:
  ExpiredError() : Error("query expiry is not in the future") {}
};

class InvalidLevelError : public Error {
 public:
  InvalidLevelError() : Error("pyramid level out of range") {}
};

class InvalidCoordsError : public Error {
 public:
  InvalidCoordsError() : Error("cell coordinates out of range for level") {}
};

class FrequencyUnderflowError : public Error {
 public:
  FrequencyUnderflowError() : Error("keyword count decrement below zero") {}
};

class UnknownKeywordError : public Error {
 public:
  explicit UnknownKeywordError(const std::string& k) : Error("unknown keyword: " + k) {}
};

class DivideByZeroError : public Error {
 public:
  DivideByZeroError() : Error("division by zero") {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class OracleMismatchError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Geometry. The indexed space is the unit square; coordinates are normalized
// by the loaders. Containment and overlap are closed on all edges.

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Mbr {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  bool valid() const { return x_min <= x_max && y_min <= y_max; }

  // Inside [0,1]^2. The upper edge may touch 1.0; cell math clamps it.
  bool in_unit_space() const {
    return x_min >= 0.0 && y_min >= 0.0 && x_max <= 1.0 && y_max <= 1.0;
  }

  bool contains(Point p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }

  bool overlaps(const Mbr& o) const {
    return x_min <= o.x_max && o.x_min <= x_max && y_min <= o.y_max && o.y_min <= y_max;
  }

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double side_length() const { return width() > height() ? width() : height(); }
  double area() const { return width() * height(); }

  Mbr intersection(const Mbr& o) const {
    return Mbr{x_min > o.x_min ? x_min : o.x_min, y_min > o.y_min ? y_min : o.y_min,
               x_max < o.x_max ? x_max : o.x_max, y_max < o.y_max ? y_max : o.y_max};
  }

  static Mbr from_point(Point p) { return Mbr{p.x, p.y, p.x, p.y}; }

  bool operator==(const Mbr&) const = default;
};

// ---------------------------------------------------------------------------
// Text. Keyword lists are lowercased, deduplicated and lexicographically
// sorted at ingestion; every structure below relies on that order.

using KeywordList = std::vector<std::string>;

// Lowercase + dedup + sort. Throws EmptyTextError when nothing survives.
KeywordList normalize_text(const std::vector<std::string>& raw);

bool is_normalized(const KeywordList& text);

// needle and haystack sorted; true iff every keyword of needle is in haystack.
bool text_subset(const KeywordList& needle, const KeywordList& haystack);

// ---------------------------------------------------------------------------
// Domain records

struct SpatioTextualObject {
  ObjectId oid = 0;
  Point loc{};
  std::optional<Mbr> rect;  // present for rectangle-object matching
  KeywordList text;
};

struct ContinuousQuery {
  QueryId qid = 0;
  Mbr mbr{};
  KeywordList text;  // one conjunction
  Timestamp t_exp = 0;
  std::optional<QueryId> parent_qid;  // originating DNF query, if any

  bool deleted = false;       // tombstone set by the vacuum on first removal
  bool result_flag = false;   // transient dedup mark during a single match call

  bool expired(Timestamp now) const { return t_exp <= now; }
};

inline double query_side_length(const ContinuousQuery& q) { return q.mbr.side_length(); }

struct DnfQuery {
  QueryId qid = 0;
  Mbr mbr{};
  std::vector<KeywordList> clauses;  // non-empty list of conjunctions
  Timestamp t_exp = 0;
};

// One sub-query per distinct normalized clause; sub qids are sequential from
// first_sub_qid and every sub-query points back to d.qid.
std::vector<ContinuousQuery> dnf_expand(const DnfQuery& d, QueryId first_sub_qid);

struct MatchResult {
  std::vector<QueryId> qids;  // sorted, duplicate-free

  bool contains(QueryId id) const;
  bool operator==(const MatchResult&) const = default;
};

MatchResult make_match_result(std::vector<QueryId> ids);

}  // namespace fastmatch
