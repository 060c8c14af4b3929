#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "wayref/geometry.hpp"

namespace wayref {

// Balanced 2-d binary search tree over a fixed point set. Built by recursive
// median splits on the axis of larger extent; nearest-neighbour queries break
// distance ties towards the lower point index, so the result equals a linear
// argmin scan exactly.
class KdTree2 {
 public:
  KdTree2() = default;
  explicit KdTree2(std::span<const Vec2> points);

  std::size_t size() const { return points_.size(); }

  struct Hit {
    std::size_t index;
    double dist2;
  };
  // Precondition: size() > 0.
  Hit nearest(Vec2 q) const;

  // Depth of the deepest leaf (root = 1); at most ceil(log2(n + 1)) for a balanced tree.
  std::size_t depth() const;

 private:
  struct Node {
    std::uint32_t point;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint8_t axis = 0;
  };
  std::int32_t build(std::vector<std::uint32_t>& ids, std::size_t lo, std::size_t hi);
  void search(std::int32_t node, Vec2 q, Hit& best) const;
  std::size_t depth(std::int32_t node) const;

  std::vector<Vec2> points_;
  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
};

}  // namespace wayref
