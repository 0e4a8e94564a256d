#include "gmt/cubes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace gmt {

const Cube& CubeTree::root() const {
  if (levels_.empty() || levels_.front().size() != 1)
    throw std::logic_error("CubeTree: no unique root at j_min");
  return levels_.front().front();
}

std::vector<std::pair<int, std::uint32_t>> CubeTree::descendants(
    int j, std::uint32_t k) const {
  std::vector<std::pair<int, std::uint32_t>> out;
  std::vector<std::pair<int, std::uint32_t>> stack{{j, k}};
  while (!stack.empty()) {
    auto [lvl, idx] = stack.back();
    stack.pop_back();
    out.emplace_back(lvl, idx);
    const Cube& q = cube(lvl, idx);
    for (std::uint32_t c : q.children) stack.emplace_back(lvl + 1, c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Greedy farthest-point traversal. Returns the visit order and each
// point's insertion radius (distance to the already-selected set); the
// radii are non-increasing, so every r-net is a prefix.
void farthest_point_traversal(const DiscreteMeasure& mu,
                              std::vector<std::uint32_t>& order,
                              std::vector<double>& radius) {
  const std::size_t n = mu.size();
  order.resize(n);
  radius.resize(n);
  std::vector<double> d2_to_set(n, std::numeric_limits<double>::infinity());
  std::vector<char> taken(n, 0);
  std::uint32_t current = 0;  // lowest-index seed
  for (std::size_t step = 0; step < n; ++step) {
    order[step] = current;
    radius[step] = std::sqrt(d2_to_set[current]);
    taken[current] = 1;
    VecView c = mu.point(current);
    double best = -1.0;
    std::uint32_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      const double di = dist_sq(mu.point(i), c);
      if (di < d2_to_set[i]) d2_to_set[i] = di;
      if (d2_to_set[i] > best) {
        best = d2_to_set[i];
        next = static_cast<std::uint32_t>(i);
      }
    }
    current = next;
  }
}

}  // namespace

CubeTree build_christ_cubes(const DiscreteMeasure& mu, int j_min, int j_max,
                            double scale_unit) {
  if (mu.size() == 0) throw std::invalid_argument("build_christ_cubes: empty measure");
  if (j_min > j_max)
    throw std::invalid_argument("build_christ_cubes: j_min > j_max");
  if (scale_unit <= 0.0) scale_unit = mu.diameter();
  if (scale_unit <= 0.0) scale_unit = 1.0;  // single-point support

  std::vector<std::uint32_t> order;
  std::vector<double> radius;
  farthest_point_traversal(mu, order, radius);
  radius[0] = std::numeric_limits<double>::infinity();

  CubeTree tree;
  tree.j_min_ = j_min;
  tree.j_max_ = j_max;
  tree.scale_unit_ = scale_unit;

  const int n_levels = j_max - j_min + 1;

  // Per-level net = prefix of the traversal with insertion radius
  // strictly above the level scale; nets are nested across levels.
  std::vector<std::vector<std::uint32_t>> net(n_levels);
  for (int lj = 0; lj < n_levels; ++lj) {
    const double r = scale_unit * std::pow(2.0, -(j_min + lj));
    std::size_t len = 0;
    while (len < order.size() && radius[len] > r) ++len;
    if (len == 0) len = 1;
    net[lj].assign(order.begin(), order.begin() + len);
    std::sort(net[lj].begin(), net[lj].end());
  }

  // Top-down constrained splitting: the root level is the global Voronoi
  // partition of net(j_min); each finer level re-assigns the points of a
  // cell among the finer net centers that fall inside that cell. This
  // keeps partition/nesting exact (a finer center belongs to exactly one
  // coarse cell, and every cell contains its own center, so cells never
  // empty out) while the global nets keep same-level centers separated.
  const std::size_t n = mu.size();
  const std::size_t d = mu.dim_ambient();

  auto make_cube = [&](int lj, std::uint32_t center_index) {
    Cube q;
    q.level = j_min + lj;
    q.center_index = center_index;
    q.side = scale_unit * std::pow(2.0, -q.level);
    return q;
  };

  std::vector<std::vector<Cube>> levels(n_levels);
  std::vector<std::uint32_t> cell_of(n);  // current-level cube index
  {
    const auto& centers = net[0];
    std::vector<double> ccoords(centers.size() * d);
    for (std::size_t k = 0; k < centers.size(); ++k)
      for (std::size_t a = 0; a < d; ++a)
        ccoords[k * d + a] = mu.point(centers[k])[a];
    KdTree ctree(ccoords.data(), centers.size(), d);
    std::vector<std::int64_t> slot(centers.size(), -1);
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t pos = ctree.nearest(mu.point(i)).first;
      if (slot[pos] < 0) {
        slot[pos] = static_cast<std::int64_t>(levels[0].size());
        levels[0].push_back(make_cube(0, centers[pos]));
      }
      cell_of[i] = static_cast<std::uint32_t>(slot[pos]);
      levels[0][slot[pos]].members.push_back(static_cast<std::uint32_t>(i));
    }
  }
  for (int lj = 1; lj < n_levels; ++lj) {
    const std::size_t parent_count = levels[lj - 1].size();
    // Finer centers grouped by the coarse cell that contains them; the
    // net list is index-sorted, so each candidate list is too.
    std::vector<std::vector<std::uint32_t>> cand(parent_count);
    for (std::uint32_t c : net[lj]) cand[cell_of[c]].push_back(c);
    // Cube slot per (parent, candidate position).
    std::vector<std::vector<std::int64_t>> slot(parent_count);
    for (std::size_t p = 0; p < parent_count; ++p)
      slot[p].assign(cand[p].size(), -1);
    std::vector<std::uint32_t> next_cell(n);
    for (std::size_t p = 0; p < parent_count; ++p) {
      for (std::uint32_t i : levels[lj - 1][p].members) {
        const auto& cs = cand[p];
        std::size_t best = 0;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < cs.size(); ++k) {
          const double d2 = dist_sq(mu.point(i), mu.point(cs[k]));
          if (d2 < best_d2) {
            best_d2 = d2;
            best = k;
          }
        }
        if (slot[p][best] < 0) {
          slot[p][best] = static_cast<std::int64_t>(levels[lj].size());
          levels[lj].push_back(make_cube(lj, cs[best]));
          levels[lj].back().parent = static_cast<std::int32_t>(p);
        }
        next_cell[i] = static_cast<std::uint32_t>(slot[p][best]);
        levels[lj][slot[p][best]].members.push_back(i);
      }
    }
    cell_of = next_cell;
  }

  // Deterministic ordering by center index at every level, then fix links.
  for (int lj = 0; lj < n_levels; ++lj) {
    std::vector<std::size_t> perm(levels[lj].size());
    for (std::size_t k = 0; k < perm.size(); ++k) perm[k] = k;
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
      return levels[lj][a].center_index < levels[lj][b].center_index;
    });
    std::vector<std::uint32_t> where(perm.size());
    for (std::size_t k = 0; k < perm.size(); ++k)
      where[perm[k]] = static_cast<std::uint32_t>(k);
    std::vector<Cube> sorted;
    sorted.reserve(levels[lj].size());
    for (std::size_t k = 0; k < perm.size(); ++k)
      sorted.push_back(std::move(levels[lj][perm[k]]));
    levels[lj] = std::move(sorted);
    if (lj + 1 < n_levels)
      for (Cube& cq : levels[lj + 1])
        cq.parent = static_cast<std::int32_t>(where[cq.parent]);
  }
  // Children lists from parent links.
  for (int lj = 1; lj < n_levels; ++lj)
    for (std::size_t k = 0; k < levels[lj].size(); ++k)
      levels[lj - 1][levels[lj][k].parent].children.push_back(
          static_cast<std::uint32_t>(k));

  // Final per-cube metrics.
  for (int lj = 0; lj < n_levels; ++lj) {
    for (Cube& q : levels[lj]) {
      std::sort(q.members.begin(), q.members.end());
      q.mass = 0.0;
      for (std::uint32_t i : q.members) q.mass += mu.weight(i);
      double r2 = 0.0;
      VecView zc = mu.point(q.center_index);
      for (std::uint32_t i : q.members)
        r2 = std::max(r2, dist_sq(mu.point(i), zc));
      q.radius = std::sqrt(r2);
      double d2 = 0.0;
      for (std::size_t a = 0; a < q.members.size(); ++a)
        for (std::size_t b = a + 1; b < q.members.size(); ++b)
          d2 = std::max(d2, dist_sq(mu.point(q.members[a]),
                                    mu.point(q.members[b])));
      q.diam = std::sqrt(d2);
      q.degenerate = q.members.size() < 2;
    }
  }

  tree.levels_ = std::move(levels);
  return tree;
}

double small_boundary_ratio(const DiscreteMeasure& mu, const CubeTree& tree,
                            const Cube& q, double tau) {
  (void)tree;
  if (!(tau > 0.0) || !(tau < 1.0))
    throw std::invalid_argument("small_boundary_ratio: need 0 < tau < 1");
  if (q.mass <= 0.0) return 0.0;
  std::vector<char> member(mu.size(), 0);
  for (std::uint32_t i : q.members) member[i] = 1;
  const double r = tau * q.side * (1.0 + 1e-12);
  double collar = 0.0;
  for (std::uint32_t i : q.members) {
    bool near_complement = false;
    mu.index().visit_open_ball(mu.point(i), r, [&](std::uint32_t j) {
      if (!member[j]) near_complement = true;
    });
    if (near_complement) collar += mu.weight(i);
  }
  return collar / q.mass;
}

namespace {

// Exact set distance with early exit once <= cutoff.
double set_distance(const DiscreteMeasure& mu, const Cube& a, const Cube& b,
                    double cutoff) {
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t i : a.members) {
    VecView pi = mu.point(i);
    for (std::uint32_t j : b.members) {
      best = std::min(best, dist(pi, mu.point(j)));
      if (best <= cutoff) return best;
    }
  }
  return best;
}

}  // namespace

std::vector<std::uint32_t> neighbors(const DiscreteMeasure& mu,
                                     const CubeTree& tree, const Cube& q) {
  const auto& level = tree.level(q.level);
  std::vector<std::uint32_t> out;
  for (std::size_t k = 0; k < level.size(); ++k) {
    const Cube& p = level[k];
    if (p.center_index == q.center_index) {
      out.push_back(static_cast<std::uint32_t>(k));
      continue;
    }
    const double center_gap =
        dist(mu.point(p.center_index), mu.point(q.center_index));
    if (center_gap - p.radius - q.radius > q.side) continue;
    if (set_distance(mu, p, q, q.side) <= q.side)
      out.push_back(static_cast<std::uint32_t>(k));
  }
  return out;
}

std::vector<std::uint32_t> neighborhood_indices(const DiscreteMeasure& mu,
                                                const CubeTree& tree,
                                                const Cube& q) {
  std::vector<std::uint32_t> idx;
  for (std::uint32_t k : neighbors(mu, tree, q)) {
    const Cube& p = tree.level(q.level)[k];
    idx.insert(idx.end(), p.members.begin(), p.members.end());
  }
  std::sort(idx.begin(), idx.end());
  return idx;
}

namespace {

nlohmann::json cube_to_json(const DiscreteMeasure& mu, const CubeTree& tree,
                            const Cube& q) {
  nlohmann::json j;
  j["level"] = q.level;
  nlohmann::json center = nlohmann::json::array();
  for (double c : mu.point(q.center_index)) center.push_back(c);
  j["center"] = std::move(center);
  j["side"] = q.side;
  j["mass"] = q.mass;
  nlohmann::json children = nlohmann::json::array();
  for (std::uint32_t k : q.children)
    children.push_back(cube_to_json(mu, tree, tree.level(q.level + 1)[k]));
  j["children"] = std::move(children);
  return j;
}

}  // namespace

void write_cube_tree_json(std::ostream& out, const DiscreteMeasure& mu,
                          const CubeTree& tree) {
  nlohmann::json roots = nlohmann::json::array();
  for (const Cube& q : tree.level(tree.j_min()))
    roots.push_back(cube_to_json(mu, tree, q));
  nlohmann::json j;
  j["scale_unit"] = tree.scale_unit();
  j["j_min"] = tree.j_min();
  j["j_max"] = tree.j_max();
  j["roots"] = std::move(roots);
  out << j.dump(1) << "\n";
}

Vec GridCube::corner_point() const {
  Vec p(corner.size());
  const double s = side();
  for (std::size_t a = 0; a < corner.size(); ++a)
    p[a] = static_cast<double>(corner[a]) * s;
  return p;
}

Vec GridCube::center() const {
  Vec p(corner.size());
  const double s = side();
  for (std::size_t a = 0; a < corner.size(); ++a)
    p[a] = (static_cast<double>(corner[a]) + 0.5) * s;
  return p;
}

bool GridCube::contains(VecView x) const {
  const double s = side();
  for (std::size_t a = 0; a < corner.size(); ++a) {
    const double lo = static_cast<double>(corner[a]) * s;
    if (!(x[a] >= lo && x[a] < lo + s)) return false;
  }
  return true;
}

bool GridCube::dilated_contains(VecView x, double eta) const {
  const double s = side();
  const double half = 0.5 * eta * s;
  for (std::size_t a = 0; a < corner.size(); ++a) {
    const double c = (static_cast<double>(corner[a]) + 0.5) * s;
    if (!(x[a] >= c - half && x[a] < c + half)) return false;
  }
  return true;
}

std::vector<GridCube> grid_cubes_touching(const std::vector<double>& coords,
                                          std::size_t d, int level) {
  if (d == 0) throw std::invalid_argument("grid_cubes_touching: d >= 1");
  const double scale = std::pow(2.0, level);
  std::vector<GridCube> cubes;
  const std::size_t n = coords.size() / d;
  for (std::size_t i = 0; i < n; ++i) {
    GridCube g;
    g.level = level;
    g.corner.resize(d);
    for (std::size_t a = 0; a < d; ++a)
      g.corner[a] = static_cast<std::int64_t>(std::floor(coords[i * d + a] * scale));
    cubes.push_back(std::move(g));
  }
  std::sort(cubes.begin(), cubes.end());
  cubes.erase(std::unique(cubes.begin(), cubes.end()), cubes.end());
  return cubes;
}

}  // namespace gmt
