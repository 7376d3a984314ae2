#include "fastmatch/pyramid.hpp"

#include <algorithm>
#include <cassert>

namespace fastmatch {

namespace {

bool power_of_two(std::uint32_t v) { return v != 0 && (v & (v - 1)) == 0; }

int log2_u32(std::uint32_t v) {
  int l = 0;
  while (v > 1) {
    v >>= 1;
    ++l;
  }
  return l;
}

}  // namespace

PyramidConfig::PyramidConfig(std::uint32_t gran_max) : gran_max_(gran_max) {
  if (!power_of_two(gran_max) || gran_max < 2) {
    throw Error("maximum granularity must be a power of two >= 2");
  }
  top_level_ = log2_u32(gran_max);
  side_len_min_ = 1.0 / static_cast<double>(gran_max);
}

void PyramidConfig::check_level(int level) const {
  if (level < 0 || level > top_level_) {
    throw InvalidLevelError{};
  }
}

std::uint32_t PyramidConfig::gran(int level) const {
  check_level(level);
  return gran_max_ >> level;
}

double PyramidConfig::side_len(int level) const {
  check_level(level);
  return side_len_min_ * static_cast<double>(1u << level);
}

CellCoords PyramidConfig::cell_coords(Point p, int level) const {
  check_level(level);
  if (p.x < 0.0 || p.x > 1.0 || p.y < 0.0 || p.y > 1.0) {
    throw OutOfSpaceError{};
  }
  std::uint32_t g = gran(level);
  double len = side_len(level);
  auto clamp = [g](double v) {
    return std::min(static_cast<std::uint32_t>(v), g - 1);
  };
  return {clamp(p.x / len), clamp(p.y / len)};
}

NodeAddress PyramidConfig::node_address(int level, std::uint32_t xc, std::uint32_t yc) const {
  std::uint32_t g = gran(level);
  if (xc >= g || yc >= g) {
    throw InvalidCoordsError{};
  }
  NodeAddress base = static_cast<NodeAddress>(level) * gran_max_ * gran_max_;
  return base + static_cast<NodeAddress>(yc) * g + xc;
}

Mbr PyramidConfig::cell_rect(int level, std::uint32_t xc, std::uint32_t yc) const {
  std::uint32_t g = gran(level);
  if (xc >= g || yc >= g) {
    throw InvalidCoordsError{};
  }
  double len = side_len(level);
  return Mbr{xc * len, yc * len, (xc + 1) * len, (yc + 1) * len};
}

int PyramidConfig::min_level(double query_side) const {
  for (int i = 0; i <= top_level_; ++i) {
    if (side_len(i) > query_side) {
      return i;
    }
  }
  return top_level_;
}

// ---------------------------------------------------------------------------

NodeStore::NodeStore(PyramidConfig config, std::uint32_t theta)
    : config_(config), theta_(theta) {}

PyramidNode* NodeStore::find(NodeAddress address) {
  auto it = nodes_.find(address);
  return it == nodes_.end() ? nullptr : it->second.get();
}

const PyramidNode* NodeStore::find(NodeAddress address) const {
  auto it = nodes_.find(address);
  return it == nodes_.end() ? nullptr : it->second.get();
}

PyramidNode* NodeStore::find(int level, std::uint32_t xc, std::uint32_t yc) {
  return find(config_.node_address(level, xc, yc));
}

PyramidNode* NodeStore::get_or_create(int level, std::uint32_t xc, std::uint32_t yc) {
  NodeAddress addr = config_.node_address(level, xc, yc);
  auto it = nodes_.find(addr);
  if (it == nodes_.end()) {
    auto node = std::make_unique<PyramidNode>(addr, level, xc, yc,
                                              config_.cell_rect(level, xc, yc), theta_);
    it = nodes_.emplace(addr, std::move(node)).first;
    if (on_create) {
      on_create(*it->second);
    }
  }
  return it->second.get();
}

void NodeStore::erase(NodeAddress address) { nodes_.erase(address); }

PyramidNode* NodeStore::node_at(Point p, int level) {
  auto [xc, yc] = config_.cell_coords(p, level);
  return find(config_.node_address(level, xc, yc));
}

std::vector<PyramidNode*> NodeStore::relevant_nodes(const Mbr& mbr, int level, bool create) {
  assert(mbr.valid());
  auto [x0, y0] = config_.cell_coords(Point{mbr.x_min, mbr.y_min}, level);
  auto [x1, y1] = config_.cell_coords(Point{mbr.x_max, mbr.y_max}, level);
  std::vector<PyramidNode*> out;
  out.reserve(static_cast<std::size_t>(x1 - x0 + 1) * (y1 - y0 + 1));
  for (std::uint32_t yc = y0; yc <= y1; ++yc) {
    for (std::uint32_t xc = x0; xc <= x1; ++xc) {
      PyramidNode* node =
          create ? get_or_create(level, xc, yc) : find(config_.node_address(level, xc, yc));
      if (node != nullptr) {
        out.push_back(node);
      }
    }
  }
  return out;
}

void NodeStore::for_each(const std::function<void(const PyramidNode&)>& fn) const {
  for (const auto& [addr, node] : nodes_) {
    fn(*node);
  }
}

void NodeStore::for_each(const std::function<void(PyramidNode&)>& fn) {
  for (auto& [addr, node] : nodes_) {
    fn(*node);
  }
}

}  // namespace fastmatch
