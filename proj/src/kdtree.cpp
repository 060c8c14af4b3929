#include "wayref/kdtree.hpp"

#include <algorithm>
#include <limits>

namespace wayref {

KdTree2::KdTree2(std::span<const Vec2> points) : points_(points.begin(), points.end()) {
  std::vector<std::uint32_t> ids(points_.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<std::uint32_t>(i);
  nodes_.reserve(points_.size());
  root_ = build(ids, 0, ids.size());
}

std::int32_t KdTree2::build(std::vector<std::uint32_t>& ids, std::size_t lo, std::size_t hi) {
  if (lo >= hi) return -1;
  double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
  double min_y = min_x, max_y = -min_x;
  for (std::size_t i = lo; i < hi; ++i) {
    const Vec2 p = points_[ids[i]];
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const std::uint8_t axis = (max_x - min_x) >= (max_y - min_y) ? 0 : 1;
  const std::size_t mid = lo + (hi - lo) / 2;
  auto key = [&](std::uint32_t id) { return axis == 0 ? points_[id].x : points_[id].y; };
  std::nth_element(ids.begin() + static_cast<std::ptrdiff_t>(lo),
                   ids.begin() + static_cast<std::ptrdiff_t>(mid),
                   ids.begin() + static_cast<std::ptrdiff_t>(hi),
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double ka = key(a), kb = key(b);
                     return ka < kb || (ka == kb && a < b);
                   });
  const auto self = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({ids[mid], -1, -1, axis});
  const std::int32_t left = build(ids, lo, mid);
  const std::int32_t right = build(ids, mid + 1, hi);
  nodes_[self].left = left;
  nodes_[self].right = right;
  return self;
}

KdTree2::Hit KdTree2::nearest(Vec2 q) const {
  Hit best{std::numeric_limits<std::size_t>::max(), std::numeric_limits<double>::infinity()};
  search(root_, q, best);
  return best;
}

void KdTree2::search(std::int32_t node_id, Vec2 q, Hit& best) const {
  if (node_id < 0) return;
  const Node& node = nodes_[node_id];
  const Vec2 p = points_[node.point];
  const double dx = q.x - p.x;
  const double dy = q.y - p.y;
  const double d2 = dx * dx + dy * dy;
  if (d2 < best.dist2 || (d2 == best.dist2 && node.point < best.index)) {
    best.dist2 = d2;
    best.index = node.point;
  }
  const double diff = node.axis == 0 ? dx : dy;
  const std::int32_t near = diff < 0.0 ? node.left : node.right;
  const std::int32_t far = diff < 0.0 ? node.right : node.left;
  search(near, q, best);
  // `<=` keeps equally distant candidates on the far side reachable for the tie-break.
  if (diff * diff <= best.dist2) search(far, q, best);
}

std::size_t KdTree2::depth() const { return depth(root_); }

std::size_t KdTree2::depth(std::int32_t node) const {
  if (node < 0) return 0;
  return 1 + std::max(depth(nodes_[node].left), depth(nodes_[node].right));
}

}  // namespace wayref
