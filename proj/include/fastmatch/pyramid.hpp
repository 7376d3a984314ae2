#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fastmatch/aki.hpp"
#include "fastmatch/core.hpp"

namespace fastmatch {

using NodeAddress = std::uint64_t;
using CellCoords = std::pair<std::uint32_t, std::uint32_t>;

// Spatial pyramid geometry over the unit square. Level 0 is the finest grid
// (gran_max cells per dimension); the top level is a single cell covering the
// whole space. Cell side length doubles per level.
class PyramidConfig {
 public:
  explicit PyramidConfig(std::uint32_t gran_max = 512);

  std::uint32_t gran_max() const { return gran_max_; }
  int top_level() const { return top_level_; }
  double side_len_min() const { return side_len_min_; }

  // Cells per dimension at the level: gran_max / 2^level.
  std::uint32_t gran(int level) const;
  double side_len(int level) const;

  // Cell containing p. Coordinates exactly on the upper space boundary clamp
  // to the last cell.
  CellCoords cell_coords(Point p, int level) const;
  NodeAddress node_address(int level, std::uint32_t xc, std::uint32_t yc) const;
  Mbr cell_rect(int level, std::uint32_t xc, std::uint32_t yc) const;

  // Smallest level whose cell side strictly exceeds the query side, clamped
  // to [0, top_level]. Bounds per-level replication to at most 4 cells.
  int min_level(double query_side) const;
  int min_level(const ContinuousQuery& q) const { return min_level(query_side_length(q)); }

 private:
  void check_level(int level) const;

  std::uint32_t gran_max_;
  int top_level_;
  double side_len_min_;
};

struct PyramidNode {
  NodeAddress address = 0;
  int level = 0;
  std::uint32_t xc = 0;
  std::uint32_t yc = 0;
  Mbr rect{};
  Aki aki;

  PyramidNode(NodeAddress addr, int lvl, std::uint32_t x, std::uint32_t y, Mbr r,
              std::uint32_t theta)
      : address(addr), level(lvl), xc(x), yc(y), rect(r), aki(theta) {}
};

// Lazily instantiated pyramid nodes behind a hash table keyed by address.
// Only non-empty nodes are materialized. Single-writer.
class NodeStore {
 public:
  NodeStore(PyramidConfig config, std::uint32_t theta);

  const PyramidConfig& config() const { return config_; }

  PyramidNode* find(NodeAddress address);
  const PyramidNode* find(NodeAddress address) const;
  PyramidNode* find(int level, std::uint32_t xc, std::uint32_t yc);
  PyramidNode* get_or_create(int level, std::uint32_t xc, std::uint32_t yc);
  void erase(NodeAddress address);

  // Node containing the point at the level, or nullptr.
  PyramidNode* node_at(Point p, int level);

  // All nodes at the level whose cell rectangle overlaps mbr; missing nodes
  // are instantiated when create is set, otherwise skipped.
  std::vector<PyramidNode*> relevant_nodes(const Mbr& mbr, int level, bool create);

  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  void for_each(const std::function<void(const PyramidNode&)>& fn) const;
  void for_each(const std::function<void(PyramidNode&)>& fn);

  // Invoked whenever a node is instantiated (clean-queue seeding).
  std::function<void(PyramidNode&)> on_create;

 private:
  PyramidConfig config_;
  std::uint32_t theta_;
  std::unordered_map<NodeAddress, std::unique_ptr<PyramidNode>> nodes_;
};

}  // namespace fastmatch
