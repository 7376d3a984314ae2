#include "fastmatch/tsv_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace fastmatch {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) {
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == sep) {
    fields.emplace_back();
  }
  return fields;
}

double parse_coord(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) {
      throw ParseError(line, "malformed coordinate: " + s);
    }
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError(line, "malformed coordinate: " + s);
  }
}

std::uint64_t parse_u64(const std::string& s, std::size_t line, const char* what) {
  try {
    std::size_t used = 0;
    std::uint64_t v = std::stoull(s, &used);
    if (used != s.size()) {
      throw ParseError(line, std::string("malformed ") + what + ": " + s);
    }
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError(line, std::string("malformed ") + what + ": " + s);
  }
}

KeywordList parse_keywords(const std::string& field, std::size_t line) {
  std::vector<std::string> raw = split(field, ' ');
  raw.erase(std::remove_if(raw.begin(), raw.end(),
                           [](const std::string& s) { return s.empty(); }),
            raw.end());
  try {
    return normalize_text(raw);
  } catch (const EmptyTextError&) {
    throw ParseError(line, "empty keyword list");
  }
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open for reading: " + path);
  }
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot open for writing: " + path);
  }
  return out;
}

std::string join_keywords(const KeywordList& text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (i > 0) {
      out.push_back(' ');
    }
    out += text[i];
  }
  return out;
}

}  // namespace

std::vector<ContinuousQuery> load_queries_tsv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<ContinuousQuery> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> f = split(line, '\t');
    if (f.size() != 7) {
      throw ParseError(line_no, "expected 7 fields, got " + std::to_string(f.size()));
    }
    ContinuousQuery q;
    q.qid = parse_u64(f[0], line_no, "id");
    q.mbr = Mbr{parse_coord(f[1], line_no), parse_coord(f[2], line_no),
                parse_coord(f[3], line_no), parse_coord(f[4], line_no)};
    q.text = parse_keywords(f[5], line_no);
    q.t_exp = static_cast<Timestamp>(parse_u64(f[6], line_no, "expiry"));
    if (!q.mbr.valid()) {
      throw ParseError(line_no, "invalid MBR");
    }
    out.push_back(std::move(q));
  }
  return out;
}

void save_queries_tsv(const std::string& path, std::span<const ContinuousQuery> queries) {
  std::ofstream out = open_out(path);
  out.precision(17);
  for (const ContinuousQuery& q : queries) {
    out << q.qid << '\t' << q.mbr.x_min << '\t' << q.mbr.y_min << '\t' << q.mbr.x_max << '\t'
        << q.mbr.y_max << '\t' << join_keywords(q.text) << '\t' << q.t_exp << '\n';
  }
}

std::vector<SpatioTextualObject> load_objects_tsv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<SpatioTextualObject> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> f = split(line, '\t');
    if (f.size() != 4) {
      throw ParseError(line_no, "expected 4 fields, got " + std::to_string(f.size()));
    }
    SpatioTextualObject o;
    o.oid = parse_u64(f[0], line_no, "id");
    o.loc = Point{parse_coord(f[1], line_no), parse_coord(f[2], line_no)};
    o.text = parse_keywords(f[3], line_no);
    out.push_back(std::move(o));
  }
  return out;
}

void save_objects_tsv(const std::string& path, std::span<const SpatioTextualObject> objects) {
  std::ofstream out = open_out(path);
  out.precision(17);
  for (const SpatioTextualObject& o : objects) {
    out << o.oid << '\t' << o.loc.x << '\t' << o.loc.y << '\t' << join_keywords(o.text) << '\n';
  }
}

}  // namespace fastmatch
