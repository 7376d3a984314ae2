#include "fastmatch/core.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace fastmatch {

KeywordList normalize_text(const std::vector<std::string>& raw) {
  KeywordList out;
  out.reserve(raw.size());
  for (const std::string& word : raw) {
    std::string lowered;
    lowered.reserve(word.size());
    for (char c : word) {
      lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (!lowered.empty()) {
      out.push_back(std::move(lowered));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) {
    throw EmptyTextError{};
  }
  return out;
}

bool is_normalized(const KeywordList& text) {
  if (text.empty()) {
    return false;
  }
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i].empty()) {
      return false;
    }
    if (i > 0 && text[i - 1] >= text[i]) {
      return false;
    }
    for (char c : text[i]) {
      if (std::isupper(static_cast<unsigned char>(c))) {
        return false;
      }
    }
  }
  return true;
}

bool text_subset(const KeywordList& needle, const KeywordList& haystack) {
  auto it = haystack.begin();
  for (const std::string& k : needle) {
    it = std::lower_bound(it, haystack.end(), k);
    if (it == haystack.end() || *it != k) {
      return false;
    }
    ++it;
  }
  return true;
}

std::vector<ContinuousQuery> dnf_expand(const DnfQuery& d, QueryId first_sub_qid) {
  if (d.clauses.empty()) {
    throw EmptyClauseError{};
  }
  std::set<KeywordList> distinct;
  for (const KeywordList& clause : d.clauses) {
    KeywordList normalized;
    try {
      normalized = normalize_text(clause);
    } catch (const EmptyTextError&) {
      throw EmptyClauseError{};
    }
    distinct.insert(std::move(normalized));
  }

  std::vector<ContinuousQuery> subs;
  subs.reserve(distinct.size());
  QueryId next = first_sub_qid;
  for (const KeywordList& clause : distinct) {
    ContinuousQuery sub;
    sub.qid = next++;
    sub.mbr = d.mbr;
    sub.text = clause;
    sub.t_exp = d.t_exp;
    sub.parent_qid = d.qid;
    subs.push_back(std::move(sub));
  }
  return subs;
}

bool MatchResult::contains(QueryId id) const {
  return std::binary_search(qids.begin(), qids.end(), id);
}

MatchResult make_match_result(std::vector<QueryId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return MatchResult{std::move(ids)};
}

}  // namespace fastmatch
