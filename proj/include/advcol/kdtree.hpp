#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace advcol {

struct Neighbor {
  std::size_t index;
  double distance;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Balanced kd-tree over n points of dimension d (row-major coordinates).
/// Each node holds one point; the split axis cycles with depth and the split
/// point is the median along that axis (upper median for even counts, ties
/// ordered by point index).
class KdTree {
 public:
  KdTree(std::span<const double> coords, int dim);

  std::size_t size() const { return count_; }
  int dim() const { return dim_; }

  /// The k nearest other points of point `query`, ascending by distance with
  /// ties broken by smaller index. Requires 1 <= k <= n - 1.
  std::vector<Neighbor> knn_query(std::size_t query, int k) const;

  /// Point index stored at the root, and the axis it splits on.
  std::size_t root_point() const { return nodes_.at(root_).point; }
  int root_axis() const { return nodes_.at(root_).axis; }

  /// Point indices in in-order traversal.
  std::vector<std::size_t> in_order() const;
  int depth() const;

 private:
  struct Node {
    std::size_t point;
    int axis;
    std::int32_t left = -1;
    std::int32_t right = -1;
  };

  std::int32_t build(std::vector<std::size_t>& idx, std::size_t lo, std::size_t hi, int depth);
  double coord(std::size_t point, int axis) const { return coords_[point * dim_ + axis]; }
  double dist2(std::size_t a, std::size_t b) const;

  std::vector<double> coords_;
  int dim_;
  std::size_t count_;
  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
};

}  // namespace advcol
