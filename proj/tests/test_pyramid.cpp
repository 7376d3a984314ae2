#include "doctest.h"

#include <random>
#include <set>

#include "fastmatch/pyramid.hpp"

using namespace fastmatch;

TEST_CASE("granularity halves per level") {
  PyramidConfig cfg(512);
  CHECK(cfg.gran(0) == 512);
  CHECK(cfg.gran(9) == 1);
  CHECK(cfg.top_level() == 9);
  CHECK_THROWS_AS(cfg.gran(10), InvalidLevelError);
  CHECK_THROWS_AS(cfg.gran(-1), InvalidLevelError);

  PyramidConfig tiny(2);
  CHECK(tiny.top_level() == 1);
  CHECK(tiny.gran(1) == 1);
}

TEST_CASE("side length doubles per level and tiles the space") {
  PyramidConfig cfg(512);
  CHECK(cfg.side_len(0) == doctest::Approx(1.0 / 512));
  CHECK(cfg.side_len(9) == doctest::Approx(1.0));
  PyramidConfig four(4);
  CHECK(four.side_len(1) == doctest::Approx(0.5));
  for (int i = 0; i <= cfg.top_level(); ++i) {
    CHECK(cfg.side_len(i) * cfg.gran(i) == doctest::Approx(1.0));
    if (i > 0) {
      CHECK(cfg.side_len(i) == doctest::Approx(2 * cfg.side_len(i - 1)));
      CHECK(cfg.gran(i) == cfg.gran(i - 1) / 2);
    }
  }
}

TEST_CASE("config rejects non-power-of-two granularity") {
  CHECK_THROWS_AS(PyramidConfig(3), Error);
  CHECK_THROWS_AS(PyramidConfig(0), Error);
  CHECK_THROWS_AS(PyramidConfig(1), Error);
}

TEST_CASE("cell coordinates") {
  PyramidConfig four(4);
  CHECK(four.cell_coords({0.6, 0.2}, 0) == CellCoords{2, 0});  // cell side 0.25
  PyramidConfig cfg(512);
  CHECK(cfg.cell_coords({0.6, 0.2}, 7) == CellCoords{2, 0});  // cell side 0.25 at level 7
  CHECK(cfg.cell_coords({0.0, 0.0}, 3) == CellCoords{0, 0});
  CHECK(cfg.cell_coords({0.999, 0.999}, 0) == CellCoords{511, 511});
  CHECK_THROWS_AS(cfg.cell_coords({1.2, 0.0}, 0), OutOfSpaceError);
  CHECK_THROWS_AS(cfg.cell_coords({-0.1, 0.0}, 0), OutOfSpaceError);
  // exact upper boundary clamps to the last cell
  CHECK(cfg.cell_coords({1.0, 1.0}, 0) == CellCoords{511, 511});
}

TEST_CASE("node addresses") {
  PyramidConfig two(2);
  CHECK(two.node_address(0, 1, 0) == 1);  // worked example
  CHECK(two.node_address(0, 0, 0) == 0);
  CHECK(two.node_address(1, 0, 0) == 4);
  CHECK_THROWS_AS(two.node_address(0, 2, 0), InvalidCoordsError);
  CHECK_THROWS_AS(two.node_address(1, 1, 0), InvalidCoordsError);
}

TEST_CASE("addresses are injective and cells round-trip") {
  for (std::uint32_t gran : {2u, 4u, 8u}) {
    PyramidConfig cfg(gran);
    std::set<NodeAddress> seen;
    std::size_t total = 0;
    for (int level = 0; level <= cfg.top_level(); ++level) {
      std::uint32_t g = cfg.gran(level);
      for (std::uint32_t y = 0; y < g; ++y) {
        for (std::uint32_t x = 0; x < g; ++x) {
          NodeAddress addr = cfg.node_address(level, x, y);
          CHECK(seen.insert(addr).second);
          ++total;
          Mbr rect = cfg.cell_rect(level, x, y);
          Point center{(rect.x_min + rect.x_max) / 2, (rect.y_min + rect.y_max) / 2};
          CHECK(cfg.cell_coords(center, level) == CellCoords{x, y});
        }
      }
    }
    CHECK(seen.size() == total);
  }
}

TEST_CASE("min level scans for the first strictly larger cell side") {
  PyramidConfig cfg(512);
  const double unit = 1.0 / 512;

  auto scan = [&](double side) {
    for (int i = 0; i <= cfg.top_level(); ++i) {
      if (cfg.side_len(i) > side) {
        return i;
      }
    }
    return cfg.top_level();
  };

  CHECK(cfg.min_level(3 * unit) == 2);  // SideLen(2) = 4/512 > 3/512
  CHECK(cfg.min_level(3 * unit) == scan(3 * unit));
  CHECK(cfg.min_level(4 * unit) == 3);  // strict inequality
  CHECK(cfg.min_level(4 * unit) == scan(4 * unit));
  CHECK(cfg.min_level(0.0) == 0);  // point query

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    double side = u(rng);
    CHECK(cfg.min_level(side) == scan(side));
  }
}

TEST_CASE("a query overlaps at most 4 cells at its min level") {
  PyramidConfig cfg(512);
  NodeStore store(cfg, 5);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 3000; ++i) {
    double side = u(rng) * 0.9;
    double x0 = u(rng) * (1.0 - side);
    double y0 = u(rng) * (1.0 - side);
    Mbr mbr{x0, y0, x0 + side, y0 + side};
    int level = cfg.min_level(side);
    auto nodes = store.relevant_nodes(mbr, level, true);
    CHECK(nodes.size() <= 4);
    CHECK(nodes.size() >= 1);
  }
}

TEST_CASE("relevant nodes") {
  PyramidConfig cfg(8);
  NodeStore store(cfg, 5);

  SUBCASE("whole space at the top level is one node") {
    auto nodes = store.relevant_nodes({0, 0, 1, 1}, cfg.top_level(), true);
    CHECK(nodes.size() == 1);
  }

  SUBCASE("an mbr inside one cell yields one node") {
    auto nodes = store.relevant_nodes({0.01, 0.01, 0.05, 0.05}, 0, true);
    CHECK(nodes.size() == 1);
  }

  SUBCASE("without create, missing nodes are skipped") {
    auto nodes = store.relevant_nodes({0, 0, 1, 1}, 0, false);
    CHECK(nodes.empty());
  }
}

TEST_CASE("node store lookup and creation") {
  PyramidConfig cfg(4);
  NodeStore store(cfg, 5);
  CHECK(store.find(cfg.node_address(0, 1, 1)) == nullptr);

  int created = 0;
  store.on_create = [&](PyramidNode&) { ++created; };
  PyramidNode* n = store.get_or_create(0, 1, 1);
  REQUIRE(n != nullptr);
  CHECK(n->level == 0);
  CHECK(n->rect.x_min == doctest::Approx(0.25));
  CHECK(store.find(cfg.node_address(0, 1, 1)) == n);
  CHECK(store.get_or_create(0, 1, 1) == n);  // idempotent
  CHECK(created == 1);
  CHECK(store.size() == 1);

  store.erase(n->address);
  CHECK(store.find(cfg.node_address(0, 1, 1)) == nullptr);
}
