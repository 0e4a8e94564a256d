#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "gmt/measure.hpp"

namespace gmt {

// Intrinsic dyadic decomposition of spt(mu): nested partitions of the
// point indices, one per level j, with cell side l(Q) = scale_unit * 2^-j.
//
// Construction: a single greedy farthest-point traversal of the support
// yields nested nets (the level-j net is the prefix of points whose
// insertion radius exceeds scale_unit * 2^-j). Each point is assigned to
// its nearest net center at the finest level; coarser cells are unions of
// the finer cells whose centers they capture, which makes partition,
// nesting and mass additivity exact at every level. Diameter and mass
// comparability are reported empirically, not assumed.
struct Cube {
  int level = 0;                       // j
  std::uint32_t center_index = 0;      // z_Q, an element of spt(mu)
  std::vector<std::uint32_t> members;  // sorted point indices
  double mass = 0.0;                   // exact sum of member weights
  double diam = 0.0;                   // exact max pairwise member distance
  double side = 0.0;                   // l(Q) = scale_unit * 2^-j
  double radius = 0.0;                 // max member distance from center
  std::int32_t parent = -1;            // index into the level above, -1 at root level
  std::vector<std::uint32_t> children; // indices into the level below
  bool degenerate = false;             // singleton / under-resolved cell
};

class CubeTree {
 public:
  int j_min() const { return j_min_; }
  int j_max() const { return j_max_; }
  double scale_unit() const { return scale_unit_; }
  double side(int level) const { return scale_unit_ * std::pow(2.0, -level); }

  const std::vector<Cube>& level(int j) const { return levels_.at(j - j_min_); }
  std::size_t level_count() const { return levels_.size(); }

  const Cube& cube(int j, std::size_t k) const { return levels_.at(j - j_min_)[k]; }
  const Cube& root() const;  // unique cube at j_min (throws if not unique)

  // All (level, index) pairs of the subtree rooted at (j, k), inclusive.
  std::vector<std::pair<int, std::uint32_t>> descendants(int j,
                                                         std::uint32_t k) const;

 private:
  friend CubeTree build_christ_cubes(const DiscreteMeasure&, int, int,
                                     double);
  int j_min_ = 0, j_max_ = 0;
  double scale_unit_ = 1.0;
  std::vector<std::vector<Cube>> levels_;
};

// Builds levels j_min..j_max. scale_unit <= 0 means "use the support
// diameter", which makes j = 0 a single root cube.
CubeTree build_christ_cubes(const DiscreteMeasure& mu, int j_min, int j_max,
                            double scale_unit = 0.0);

// mu{x in Q : dist(x, spt(mu) \ Q) <= tau*l(Q)} / mu(Q). Diagnostic only.
double small_boundary_ratio(const DiscreteMeasure& mu, const CubeTree& tree,
                            const Cube& q, double tau);

// Same-level cubes P with set distance dist(P, Q) <= l(Q), Q included.
// Returns indices into tree.level(q.level).
std::vector<std::uint32_t> neighbors(const DiscreteMeasure& mu,
                                     const CubeTree& tree, const Cube& q);

// Union of member indices over neighbors(Q), sorted.
std::vector<std::uint32_t> neighborhood_indices(const DiscreteMeasure& mu,
                                                const CubeTree& tree,
                                                const Cube& q);

// Nested JSON export {level, center, side, mass, children: [...]}.
void write_cube_tree_json(std::ostream& out, const DiscreteMeasure& mu,
                          const CubeTree& tree);

// ---- standard dyadic grid of R^d ----

// Half-open standard dyadic cube [k*2^-level, (k+1)*2^-level)^d described
// by its lattice corner.
struct GridCube {
  int level = 0;
  std::vector<std::int64_t> corner;

  double side() const { return std::pow(2.0, -level); }
  Vec corner_point() const;
  Vec center() const;
  bool contains(VecView x) const;
  // Containment in the concentric dilation eta * cube.
  bool dilated_contains(VecView x, double eta) const;
  bool operator==(const GridCube& o) const {
    return level == o.level && corner == o.corner;
  }
  bool operator<(const GridCube& o) const {
    if (level != o.level) return level < o.level;
    return corner < o.corner;
  }
};

// The distinct standard dyadic cubes of side 2^-level containing at least
// one input point (flat row-major coords).
std::vector<GridCube> grid_cubes_touching(const std::vector<double>& coords,
                                          std::size_t d, int level);

}  // namespace gmt
