#include "gmt/kdtree.hpp"

#include <algorithm>
#include <cmath>

namespace gmt {

KdTree::KdTree(const double* coords, std::size_t n, std::size_t d)
    : coords_(coords), n_(n), d_(d) {
  order_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) order_[i] = static_cast<std::uint32_t>(i);
  nodes_.reserve(2 * n_ / kLeafSize + 2);
  if (n_ > 0) root_ = build(0, static_cast<std::uint32_t>(n_));
}

std::uint32_t KdTree::build(std::uint32_t begin, std::uint32_t end) {
  Node node;
  node.begin = begin;
  node.end = end;
  node.bbox_min.assign(d_, std::numeric_limits<double>::infinity());
  node.bbox_max.assign(d_, -std::numeric_limits<double>::infinity());
  for (std::uint32_t k = begin; k < end; ++k) {
    VecView p = point(order_[k]);
    for (std::size_t a = 0; a < d_; ++a) {
      node.bbox_min[a] = std::min(node.bbox_min[a], p[a]);
      node.bbox_max[a] = std::max(node.bbox_max[a], p[a]);
    }
  }
  if (end - begin <= kLeafSize) {
    // Keep leaf payload in index order so traversal order is reproducible.
    std::sort(order_.begin() + begin, order_.begin() + end);
    nodes_.push_back(node);
    return static_cast<std::uint32_t>(nodes_.size() - 1);
  }
  std::size_t axis = 0;
  double extent = -1.0;
  for (std::size_t a = 0; a < d_; ++a) {
    const double e = node.bbox_max[a] - node.bbox_min[a];
    if (e > extent) {
      extent = e;
      axis = a;
    }
  }
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end,
                   [this, axis](std::uint32_t i, std::uint32_t j) {
                     const double vi = coords_[i * d_ + axis];
                     const double vj = coords_[j * d_ + axis];
                     if (vi != vj) return vi < vj;
                     return i < j;  // deterministic tie-break
                   });
  node.axis = static_cast<std::int32_t>(axis);
  node.split = coords_[order_[mid] * d_ + axis];
  const std::uint32_t self = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(node);
  const std::uint32_t l = build(begin, mid);
  const std::uint32_t r = build(mid, end);
  nodes_[self].left = l;
  nodes_[self].right = r;
  return self;
}

namespace {

double bbox_dist_sq(VecView c, const std::vector<double>& lo,
                    const std::vector<double>& hi) {
  double s = 0.0;
  for (std::size_t a = 0; a < c.size(); ++a) {
    double t = 0.0;
    if (c[a] < lo[a]) t = lo[a] - c[a];
    else if (c[a] > hi[a]) t = c[a] - hi[a];
    s += t * t;
  }
  return s;
}

}  // namespace

void KdTree::query_rec(std::uint32_t ni, VecView c, double r,
                       const std::function<void(std::uint32_t)>& visit) const {
  const Node& node = nodes_[ni];
  if (bbox_dist_sq(c, node.bbox_min, node.bbox_max) >= r * r) return;
  if (node.axis < 0) {
    const double rr = r * r;
    for (std::uint32_t k = node.begin; k < node.end; ++k) {
      const std::uint32_t i = order_[k];
      if (dist_sq(point(i), c) < rr) visit(i);
    }
    return;
  }
  query_rec(node.left, c, r, visit);
  query_rec(node.right, c, r, visit);
}

void KdTree::visit_open_ball(
    VecView center, double radius,
    const std::function<void(std::uint32_t)>& visit) const {
  if (n_ == 0 || radius <= 0.0) return;
  query_rec(root_, center, radius, visit);
}

void KdTree::query_open_ball(VecView center, double radius,
                             std::vector<std::uint32_t>& out) const {
  out.clear();
  visit_open_ball(center, radius,
                  [&out](std::uint32_t i) { out.push_back(i); });
}

void KdTree::nearest_rec(std::uint32_t ni, VecView x, std::size_t exclude,
                         double& best) const {
  const Node& node = nodes_[ni];
  if (bbox_dist_sq(x, node.bbox_min, node.bbox_max) >= best * best) return;
  if (node.axis < 0) {
    for (std::uint32_t k = node.begin; k < node.end; ++k) {
      const std::uint32_t i = order_[k];
      if (i == exclude) continue;
      best = std::min(best, dist(point(i), x));
    }
    return;
  }
  // Descend toward x first.
  const std::uint32_t a = static_cast<std::uint32_t>(node.axis);
  const bool left_first = x[a] <= node.split;
  nearest_rec(left_first ? node.left : node.right, x, exclude, best);
  nearest_rec(left_first ? node.right : node.left, x, exclude, best);
}

double KdTree::nearest_dist(VecView x, std::size_t exclude) const {
  double best = std::numeric_limits<double>::infinity();
  if (n_ == 0 || (n_ == 1 && exclude == 0)) return best;
  nearest_rec(root_, x, exclude, best);
  return best;
}

namespace {

struct NearestState {
  double best_sq = std::numeric_limits<double>::infinity();
  std::uint32_t best_i = 0;
  bool found = false;
};

}  // namespace

void KdTree::nearest_idx_rec(std::uint32_t ni, VecView x, void* state) const {
  NearestState& st = *static_cast<NearestState*>(state);
  const Node& node = nodes_[ni];
  // Strict > keeps equal-distance ties reachable for the index tie-break.
  if (st.found && bbox_dist_sq(x, node.bbox_min, node.bbox_max) > st.best_sq)
    return;
  if (node.axis < 0) {
    for (std::uint32_t k = node.begin; k < node.end; ++k) {
      const std::uint32_t i = order_[k];
      const double d2 = dist_sq(point(i), x);
      if (!st.found || d2 < st.best_sq ||
          (d2 == st.best_sq && i < st.best_i)) {
        st.best_sq = d2;
        st.best_i = i;
        st.found = true;
      }
    }
    return;
  }
  const std::uint32_t a = static_cast<std::uint32_t>(node.axis);
  const bool left_first = x[a] <= node.split;
  nearest_idx_rec(left_first ? node.left : node.right, x, state);
  nearest_idx_rec(left_first ? node.right : node.left, x, state);
}

std::pair<std::uint32_t, double> KdTree::nearest(VecView x) const {
  NearestState st;
  if (n_ == 0)
    return {0, std::numeric_limits<double>::infinity()};
  nearest_idx_rec(root_, x, &st);
  return {st.best_i, std::sqrt(st.best_sq)};
}

}  // namespace gmt
