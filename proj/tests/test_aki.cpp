#include "doctest.h"

#include <algorithm>
#include <map>
#include <memory>
#include <random>
#include <set>

#include "fastmatch/aki.hpp"
#include "fastmatch/oracle.hpp"
#include "fixtures.hpp"

using namespace fastmatch;

namespace {

QueryPtr qp(QueryId qid, KeywordList text, Mbr mbr = {0, 0, 0.1, 0.1},
            Timestamp t_exp = 1'000'000) {
  auto q = std::make_shared<ContinuousQuery>();
  q->qid = qid;
  q->mbr = mbr;
  q->text = std::move(text);
  q->t_exp = t_exp;
  return q;
}

std::set<QueryId> ids_of(const std::vector<QueryPtr>& items) {
  std::set<QueryId> out;
  for (const auto& q : items) {
    out.insert(q->qid);
  }
  return out;
}

std::set<QueryId> ids_of(const QueryList& list) { return ids_of(list.items); }

struct FixtureAki {
  FrequenciesMap fm;
  Aki aki{2};
  std::vector<QueryPtr> queries;

  FixtureAki() {
    for (const ContinuousQuery& raw : testing::nine_query_corpus()) {
      auto q = std::make_shared<ContinuousQuery>(raw);
      queries.push_back(q);
      fm.add(q->text);
      aki.insert(q, fm);
    }
  }

  QueryPtr q(QueryId qid) const { return queries.at(qid - 1); }
};

// verified search result: textual semantics only
std::set<QueryId> verified_search(const Aki& aki, const KeywordList& s) {
  AkiSearchHits hits = aki.search(s);
  std::set<QueryId> out;
  for (const auto& q : hits.needs_text_verify) {
    if (text_subset(q->text, s)) {
      out.insert(q->qid);
    }
  }
  for (const auto& q : hits.text_exact) {
    out.insert(q->qid);
  }
  return out;
}

void audit_paths(const Aki& aki, std::uint32_t theta) {
  std::function<void(const TextualNode&, KeywordList)> visit = [&](const TextualNode& node,
                                                                   KeywordList path) {
    path.push_back(node.keyword);
    for (const QueryPtr& q : node.qlist->items) {
      CHECK(text_subset(path, q->text));  // path soundness
      if (node.frequent) {
        CHECK(q->text == path);  // textually indistinguishable
      }
    }
    if (!node.frequent) {
      CHECK(node.children.empty());
      CHECK(node.qlist->items.size() <= theta);  // theta bound
    }
    for (const auto& [key, child] : node.children) {
      CHECK(key > node.keyword);  // child keys extend the sorted path
      visit(*child, path);
    }
  };
  for (const auto& [key, node] : aki.top()) {
    visit(*node, {});
  }
}

}  // namespace

TEST_CASE("frequencies map add/remove") {
  FrequenciesMap fm;
  fm.add({"k1", "k2"});
  CHECK(fm.count("k1") == 1);
  CHECK(fm.count("k2") == 1);
  fm.remove({"k1", "k2"});
  CHECK(fm.all_zero());
  CHECK_THROWS_AS(fm.remove({"k1"}), FrequencyUnderflowError);
}

TEST_CASE("least frequent keyword with lexicographic tie-break") {
  FrequenciesMap fm;
  for (int i = 0; i < 5; ++i) fm.add({"k1"});
  for (int i = 0; i < 2; ++i) fm.add({"k3"});
  CHECK(fm.least_frequent({"k1", "k3"}) == "k3");

  FrequenciesMap tie;
  for (int i = 0; i < 4; ++i) tie.add({"k2", "k3"});
  CHECK(tie.least_frequent({"k2", "k3"}) == "k2");

  FrequenciesMap single;
  single.add({"k6"});
  CHECK(single.least_frequent({"k6"}) == "k6");
}

TEST_CASE("insert into empty index creates a single infrequent top node") {
  FrequenciesMap fm;
  Aki aki(2);
  auto q = qp(1, {"a", "b"});
  fm.add(q->text);
  AkiInsertOutcome out = aki.insert(q, fm);
  CHECK(out.attached != nullptr);
  CHECK(out.attached->depth == 1);
  CHECK_FALSE(out.attached->frequent);
  CHECK(aki.node_count() == 1);
  CHECK(out.descents.empty());
}

// The running-example evolution: after inserting q1..q9 at theta=2, the
// overflow of [k3] cascades [k1] and [k2] into frequent nodes.
TEST_CASE("nine-query evolution freezes the expected layout") {
  FixtureAki fx;

  CHECK(fx.fm.count("k1") == 5);  // q1,q2,q3,q5,q6

  const TextualNode* k1 = fx.aki.peek_top("k1");
  REQUIRE(k1 != nullptr);
  CHECK(k1->frequent);
  CHECK(k1->list_size() == 0);
  REQUIRE(k1->children.count("k2") == 1);
  REQUIRE(k1->children.count("k3") == 1);

  const TextualNode& k1k2 = *k1->children.at("k2");
  CHECK(k1k2.frequent);  // q1,q2,q3 are textually indistinguishable
  CHECK(ids_of(*k1k2.qlist) == std::set<QueryId>{1, 2, 3});

  const TextualNode& k1k3 = *k1->children.at("k3");
  CHECK_FALSE(k1k3.frequent);  // only q5
  CHECK(ids_of(*k1k3.qlist) == std::set<QueryId>{5});

  REQUIRE(k1k2.children.count("k3") == 1);
  const TextualNode& k1k2k3 = *k1k2.children.at("k3");
  CHECK_FALSE(k1k2k3.frequent);
  CHECK(ids_of(*k1k2k3.qlist) == std::set<QueryId>{6});

  const TextualNode* k2 = fx.aki.peek_top("k2");
  REQUIRE(k2 != nullptr);
  CHECK(k2->frequent);
  CHECK(k2->list_size() == 0);
  REQUIRE(k2->children.count("k3") == 1);
  CHECK(ids_of(*k2->children.at("k3")->qlist) == std::set<QueryId>{8});

  const TextualNode* k3 = fx.aki.peek_top("k3");
  REQUIRE(k3 != nullptr);
  CHECK(k3->frequent);
  CHECK(ids_of(*k3->qlist) == std::set<QueryId>{9});  // q9 attached to frequent [k3]
  CHECK(k3->children.empty());

  const TextualNode* k6 = fx.aki.peek_top("k6");
  REQUIRE(k6 != nullptr);
  CHECK_FALSE(k6->frequent);
  CHECK(ids_of(*k6->qlist) == std::set<QueryId>{4});

  const TextualNode* k7 = fx.aki.peek_top("k7");
  REQUIRE(k7 != nullptr);
  CHECK_FALSE(k7->frequent);
  CHECK(ids_of(*k7->qlist) == std::set<QueryId>{7});

  audit_paths(fx.aki, 2);
}

TEST_CASE("search over the nine-query layout") {
  FixtureAki fx;

  SUBCASE("three frequent keywords") {
    AkiSearchStats stats;
    AkiSearchHits hits = fx.aki.search({"k1", "k2", "k3"}, &stats);
    std::set<QueryId> all = ids_of(hits.needs_text_verify);
    for (QueryId id : ids_of(hits.text_exact)) {
      all.insert(id);
    }
    // brute-force superset containment over the fixture
    std::set<QueryId> expected;
    for (const auto& q : fx.queries) {
      if (text_subset(q->text, {"k1", "k2", "k3"})) {
        expected.insert(q->qid);
      }
    }
    CHECK(expected == std::set<QueryId>{1, 2, 3, 5, 6, 8, 9});
    CHECK(all == expected);
    CHECK(hits.frequent_keywords == KeywordList{"k1", "k2", "k3"});
    CHECK(stats.textual_nodes_visited > 0);
  }

  SUBCASE("absent keyword") {
    AkiSearchHits hits = fx.aki.search({"zz"});
    CHECK(hits.total() == 0);
    CHECK(hits.frequent_keywords.empty());
  }

  SUBCASE("infrequent keyword needs verification") {
    AkiSearchHits hits = fx.aki.search({"k6"});
    CHECK(ids_of(hits.needs_text_verify) == std::set<QueryId>{4});
    CHECK(hits.text_exact.empty());
    CHECK(hits.frequent_keywords.empty());
    // q4 = {k3,k6} does not survive verification against {k6} alone
    CHECK(verified_search(fx.aki, {"k6"}).empty());
  }
}

TEST_CASE("frequent node past the descent trigger reports the below-median half") {
  FrequenciesMap fm;
  Aki aki(5);
  std::vector<QueryPtr> inserted;
  AkiInsertOutcome last;
  for (int i = 1; i <= 26; ++i) {
    double side = 0.001 * i;
    auto q = qp(static_cast<QueryId>(i), {"a", "b"}, Mbr{0, 0, side, side});
    inserted.push_back(q);
    fm.add(q->text);
    last = aki.insert(q, fm, nullptr, 4 * 5);
  }
  // [b] absorbed five queries; the remaining 21 sit on the frequent [ab] node.
  const TextualNode* a = aki.peek_top("a");
  REQUIRE(a != nullptr);
  REQUIRE(a->children.count("b") == 1);
  const TextualNode& ab = *a->children.at("b");
  CHECK(ab.frequent);
  CHECK(ab.list_size() == 21);

  REQUIRE(last.descents.size() == 1);
  CHECK(last.descents[0].node == &ab);
  // 21 distinct areas: median is the 11th smallest; 10 fall strictly below.
  std::set<QueryId> expected;
  for (QueryId id = 6; id <= 15; ++id) {
    expected.insert(id);
  }
  CHECK(ids_of(last.descents[0].queries) == expected);
}

TEST_CASE("ties at the median area stay put") {
  std::vector<QueryPtr> items;
  items.push_back(qp(1, {"a"}, {0, 0, 0.1, 0.1}));
  items.push_back(qp(2, {"a"}, {0, 0, 0.2, 0.2}));
  items.push_back(qp(3, {"a"}, {0, 0, 0.2, 0.2}));
  // median (index 1 of sorted) has area 0.04; the tie at index 2 stays
  auto below = below_median_area(items);
  REQUIRE(below.size() == 1);
  CHECK(below[0]->qid == 1);

  std::vector<QueryPtr> twentyone;
  for (int i = 1; i <= 21; ++i) {
    double side = 0.01 * i;
    twentyone.push_back(qp(static_cast<QueryId>(i), {"a"}, {0, 0, side, side}));
  }
  CHECK(below_median_area(twentyone).size() == 10);
}

TEST_CASE("remove detaches and prunes") {
  FixtureAki fx;

  SUBCASE("remove present query") {
    std::size_t nodes_before = fx.aki.node_count();
    CHECK(fx.aki.remove(fx.q(5)));
    CHECK(verified_search(fx.aki, {"k1", "k3"}).count(5) == 0);
    CHECK(fx.aki.node_count() == nodes_before - 1);  // [k1k3] emptied and pruned
    CHECK_FALSE(fx.aki.remove(fx.q(5)));             // second removal is a no-op
  }

  SUBCASE("sole query under a keyword removes its top node") {
    fx.fm.remove(fx.q(7)->text);
    CHECK(fx.fm.count("k7") == 0);
    CHECK(fx.aki.remove(fx.q(7)));
    CHECK(fx.aki.peek_top("k7") == nullptr);
  }
}

TEST_CASE("demotion collapses small frequent subtrees") {
  FixtureAki fx;

  TextualNode* k3 = fx.aki.peek_top("k3");
  REQUIRE(k3 != nullptr);
  REQUIRE(k3->frequent);

  SUBCASE("subtree within theta demotes") {
    CHECK(fx.aki.demote_if_infrequent(*k3));  // holds only q9
    CHECK_FALSE(k3->frequent);
    CHECK(k3->children.empty());
    CHECK(ids_of(*k3->qlist) == std::set<QueryId>{9});
    // search results unchanged
    CHECK(verified_search(fx.aki, {"k3"}) == std::set<QueryId>{9});
  }

  SUBCASE("subtree above theta stays frequent") {
    TextualNode* k1 = fx.aki.peek_top("k1");
    REQUIRE(k1 != nullptr);
    CHECK_FALSE(fx.aki.demote_if_infrequent(*k1));  // subtree holds 5 queries
    CHECK(k1->frequent);
  }

  SUBCASE("infrequent node is a no-op") {
    TextualNode* k6 = fx.aki.peek_top("k6");
    REQUIRE(k6 != nullptr);
    CHECK_FALSE(fx.aki.demote_if_infrequent(*k6));
  }
}

TEST_CASE("random workload keeps invariants and matches brute force") {
  std::mt19937_64 rng(91);
  std::uniform_int_distribution<int> kw(1, 30);
  std::uniform_int_distribution<int> nkw(1, 4);

  for (std::uint32_t theta : {2u, 5u}) {
    FrequenciesMap fm;
    Aki aki(theta);
    std::vector<ContinuousQuery> corpus;
    std::vector<QueryPtr> live;

    for (int i = 1; i <= 2000; ++i) {
      std::vector<std::string> raw;
      int n = nkw(rng);
      for (int j = 0; j < n; ++j) {
        raw.push_back("w" + std::to_string(kw(rng)));
      }
      auto q = qp(static_cast<QueryId>(i), normalize_text(raw));
      corpus.push_back(*q);
      live.push_back(q);
      fm.add(q->text);
      aki.insert(q, fm);
    }

    audit_paths(aki, theta);

    for (int probe = 0; probe < 200; ++probe) {
      std::vector<std::string> raw;
      int n = 1 + nkw(rng);
      for (int j = 0; j < n; ++j) {
        raw.push_back("w" + std::to_string(kw(rng)));
      }
      KeywordList s = normalize_text(raw);
      std::set<QueryId> got = verified_search(aki, s);
      std::vector<QueryId> expected = oracle_text_match(corpus, s);
      CHECK(got == std::set<QueryId>(expected.begin(), expected.end()));
    }

    // frequencies map equals a recount over live queries
    std::map<std::string, std::uint64_t> recount;
    for (const auto& q : live) {
      for (const auto& k : q->text) {
        ++recount[k];
      }
    }
    for (const auto& [k, c] : recount) {
      CHECK(fm.count(k) == c);
    }
  }
}

TEST_CASE("frequencies map stays consistent under interleaved insert/remove") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> kw(1, 12);
  FrequenciesMap fm;
  Aki aki(3);
  std::vector<QueryPtr> live;
  QueryId next = 1;

  for (int step = 0; step < 1500; ++step) {
    bool do_remove = !live.empty() && (rng() % 3 == 0);
    if (do_remove) {
      std::size_t idx = rng() % live.size();
      QueryPtr q = live[idx];
      CHECK(aki.remove(q));
      fm.remove(q->text);
      live.erase(live.begin() + static_cast<std::ptrdiff_t>(idx));
    } else {
      std::vector<std::string> raw;
      int n = 1 + static_cast<int>(rng() % 3);
      for (int j = 0; j < n; ++j) {
        raw.push_back("w" + std::to_string(kw(rng)));
      }
      auto q = qp(next++, normalize_text(raw));
      fm.add(q->text);
      aki.insert(q, fm);
      live.push_back(q);
    }
  }

  std::map<std::string, std::uint64_t> recount;
  for (const auto& q : live) {
    for (const auto& k : q->text) {
      ++recount[k];
    }
  }
  std::size_t nonzero = 0;
  for (const auto& [k, c] : recount) {
    CHECK(fm.count(k) == c);
    if (c > 0) {
      ++nonzero;
    }
  }
  CHECK(fm.distinct_keywords() == nonzero);
}

TEST_CASE("a smaller threshold never produces fewer textual nodes") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> kw(1, 40);
  std::vector<QueryPtr> queries;
  for (int i = 1; i <= 3000; ++i) {
    std::vector<std::string> raw;
    int n = 1 + static_cast<int>(rng() % 3);
    for (int j = 0; j < n; ++j) {
      raw.push_back("w" + std::to_string(kw(rng)));
    }
    queries.push_back(qp(static_cast<QueryId>(i), normalize_text(raw)));
  }

  auto build = [&](std::uint32_t theta) {
    FrequenciesMap fm;
    Aki aki(theta);
    for (const auto& q : queries) {
      fm.add(q->text);
      aki.insert(q, fm);
    }
    return aki.node_count();
  };
  CHECK(build(3) >= build(10));
}

TEST_CASE("sweep removes expired queries and prunes") {
  FrequenciesMap fm;
  Aki aki(2);
  auto a = qp(1, {"a"}, {0, 0, .1, .1}, 10);
  auto b = qp(2, {"b"}, {0, 0, .1, .1}, 100);
  fm.add(a->text);
  aki.insert(a, fm);
  fm.add(b->text);
  aki.insert(b, fm);

  std::vector<QueryId> expired;
  AkiSweepResult r = aki.sweep_expired(50, [&](const QueryPtr& q) { expired.push_back(q->qid); });
  CHECK(r.attachments_removed == 1);
  CHECK(expired == std::vector<QueryId>{1});
  CHECK(aki.peek_top("a") == nullptr);  // pruned
  CHECK(aki.peek_top("b") != nullptr);

  r = aki.sweep_expired(100, [&](const QueryPtr& q) { expired.push_back(q->qid); });
  CHECK(r.attachments_removed == 1);  // t_exp == now counts as expired
  CHECK(aki.empty());
}
