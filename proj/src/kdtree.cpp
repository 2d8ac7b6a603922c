#include "advcol/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <stdexcept>

namespace advcol {

namespace {

// Squared distance accumulated in coordinate order; the tree and the brute
// force use this same routine so tie detection is exact.
double squared_distance(std::span<const double> coords, int dim, std::size_t a, std::size_t b) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double diff = coords[a * dim + i] - coords[b * dim + i];
    s += diff * diff;
  }
  return s;
}

struct Candidate {
  double dist2;
  std::size_t index;
  bool operator<(const Candidate& o) const {
    return dist2 < o.dist2 || (dist2 == o.dist2 && index < o.index);
  }
};

void check_k(std::size_t n, int k) {
  if (k < 1 || static_cast<std::size_t>(k) + 1 > n)
    throw std::out_of_range("knn_query: k must satisfy 1 <= k <= n - 1");
}

}  // namespace

KdTree::KdTree(std::span<const double> coords, int dim)
    : coords_(coords.begin(), coords.end()), dim_(dim) {
  if (dim < 1 || coords.size() % dim != 0)
    throw std::invalid_argument("KdTree: coordinate count is not a multiple of the dimension");
  count_ = coords.size() / dim;
  if (count_ == 0) throw std::invalid_argument("KdTree: needs at least one point");
  nodes_.reserve(count_);
  std::vector<std::size_t> idx(count_);
  for (std::size_t i = 0; i < count_; ++i) idx[i] = i;
  root_ = build(idx, 0, count_, 0);
}

std::int32_t KdTree::build(std::vector<std::size_t>& idx, std::size_t lo, std::size_t hi,
                           int depth) {
  if (lo >= hi) return -1;
  const int axis = depth % dim_;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::nth_element(idx.begin() + lo, idx.begin() + mid, idx.begin() + hi,
                   [&](std::size_t a, std::size_t b) {
                     const double ca = coord(a, axis);
                     const double cb = coord(b, axis);
                     return ca < cb || (ca == cb && a < b);
                   });
  const auto self = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{idx[mid], axis});
  const auto left = build(idx, lo, mid, depth + 1);
  const auto right = build(idx, mid + 1, hi, depth + 1);
  nodes_[self].left = left;
  nodes_[self].right = right;
  return self;
}

double KdTree::dist2(std::size_t a, std::size_t b) const {
  return squared_distance(coords_, dim_, a, b);
}

std::vector<Neighbor> KdTree::knn_query(std::size_t query, int k) const {
  if (query >= count_) throw std::out_of_range("knn_query: query index out of range");
  check_k(count_, k);
  const auto kk = static_cast<std::size_t>(k);
  std::priority_queue<Candidate> best;  // max-heap: worst candidate on top

  std::function<void(std::int32_t)> visit = [&](std::int32_t id) {
    if (id < 0) return;
    const Node& node = nodes_[id];
    if (node.point != query) {
      const Candidate c{dist2(query, node.point), node.point};
      if (best.size() < kk) {
        best.push(c);
      } else if (c < best.top()) {
        best.pop();
        best.push(c);
      }
    }
    const double diff = coord(query, node.axis) - coord(node.point, node.axis);
    const auto near = diff < 0.0 ? node.left : node.right;
    const auto far = diff < 0.0 ? node.right : node.left;
    visit(near);
    // Points at equal distance may still win on index, hence <=.
    if (best.size() < kk || diff * diff <= best.top().dist2) visit(far);
  };
  visit(root_);

  std::vector<Neighbor> out(best.size());
  for (std::size_t i = best.size(); i-- > 0;) {
    out[i] = Neighbor{best.top().index, std::sqrt(best.top().dist2)};
    best.pop();
  }
  return out;
}

std::vector<std::size_t> KdTree::in_order() const {
  std::vector<std::size_t> out;
  out.reserve(count_);
  std::function<void(std::int32_t)> walk = [&](std::int32_t id) {
    if (id < 0) return;
    walk(nodes_[id].left);
    out.push_back(nodes_[id].point);
    walk(nodes_[id].right);
  };
  walk(root_);
  return out;
}

int KdTree::depth() const {
  std::function<int(std::int32_t)> rec = [&](std::int32_t id) -> int {
    if (id < 0) return 0;
    return 1 + std::max(rec(nodes_[id].left), rec(nodes_[id].right));
  };
  return rec(root_);
}

}  // namespace advcol
