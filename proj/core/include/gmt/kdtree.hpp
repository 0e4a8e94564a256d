#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "gmt/geometry.hpp"

namespace gmt {

// Exact range search over a fixed point set. Queries are open balls with
// strict inequality |p - x| < r; no approximation anywhere, so coefficient
// sums are deterministic. Points are referenced by index into the flat
// row-major coordinate array owned by the caller (which must outlive the
// tree).
class KdTree {
 public:
  KdTree() = default;
  KdTree(const double* coords, std::size_t n, std::size_t d);

  std::size_t size() const { return n_; }

  // Indices of all points with |p_i - center| < radius, in deterministic
  // (tree traversal) order.
  void query_open_ball(VecView center, double radius,
                       std::vector<std::uint32_t>& out) const;

  // Visitor form; visit(i) is called once per in-ball index.
  void visit_open_ball(VecView center, double radius,
                       const std::function<void(std::uint32_t)>& visit) const;

  // Distance from x to the nearest point, excluding index `exclude`
  // (pass size() to exclude nothing). Returns +inf on an effectively
  // empty set.
  double nearest_dist(VecView x, std::size_t exclude) const;

  // Nearest point index with deterministic tie-break (smallest index among
  // points at exactly the minimal distance).
  std::pair<std::uint32_t, double> nearest(VecView x) const;

 private:
  struct Node {
    double split = 0.0;
    std::int32_t axis = -1;  // -1 marks a leaf
    std::uint32_t left = 0, right = 0;
    std::uint32_t begin = 0, end = 0;  // leaf payload range in order_
    std::vector<double> bbox_min, bbox_max;
  };

  std::uint32_t build(std::uint32_t begin, std::uint32_t end);
  void query_rec(std::uint32_t node, VecView c, double r,
                 const std::function<void(std::uint32_t)>& visit) const;
  void nearest_rec(std::uint32_t node, VecView x, std::size_t exclude,
                   double& best) const;
  void nearest_idx_rec(std::uint32_t node, VecView x, void* state) const;

  const double* coords_ = nullptr;
  std::size_t n_ = 0, d_ = 0;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
  std::uint32_t root_ = 0;

  VecView point(std::uint32_t i) const { return {coords_ + i * d_, d_}; }

  static constexpr std::uint32_t kLeafSize = 16;
};

}  // namespace gmt
