#pragma once

#include <span>
#include <string>
#include <vector>

#include "fastmatch/core.hpp"

namespace fastmatch {

// Dataset files are UTF-8, LF-terminated, tab-separated.
//   queries: id <TAB> x <TAB> y <TAB> x2 <TAB> y2 <TAB> kw kw ... <TAB> t_exp
//   objects: id <TAB> x <TAB> y <TAB> kw kw ...
// Keywords are space-separated inside their field and normalized on load.
// Malformed lines raise ParseError carrying the 1-based line number.

std::vector<ContinuousQuery> load_queries_tsv(const std::string& path);
void save_queries_tsv(const std::string& path, std::span<const ContinuousQuery> queries);

std::vector<SpatioTextualObject> load_objects_tsv(const std::string& path);
void save_objects_tsv(const std::string& path, std::span<const SpatioTextualObject> objects);

}  // namespace fastmatch
