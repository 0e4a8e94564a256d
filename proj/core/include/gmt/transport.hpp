#pragma once

#include "gmt/measure.hpp"

namespace gmt {

// Bounded-Lipschitz test-function problem over an open ball:
//   maximize sum_i f_i u_i  over  |f_i - f_j| <= |z_i - z_j|,
//                                 |f_i| <= dist(z_i, boundary).
// Its LP dual is an uncapacitated min-cost transshipment on the support
// points plus one boundary node that absorbs or emits mass at cost
// b_i = dist(z_i, boundary); any feasible f extends to a 1-Lipschitz
// function vanishing outside the ball (McShane extension truncated by
// +-dist to the complement), so the optimum is exactly dist_B.
struct BLProblem {
  std::size_t d = 0;
  std::vector<double> coords;         // merged support, flat row-major
  std::vector<double> supply;         // u_i (mu weight minus nu weight)
  std::vector<double> boundary_cost;  // b_i > 0
};

// Exact optimum via a primal-dual min-cost flow (multi-source Dijkstra
// phases over reduced costs + augmentation along the shortest-path
// forest). Throws on internal failure; infeasibility cannot occur.
double solve_bl(const BLProblem& problem);

// sup{ |int f dmu - int f dnu| : Lip(f) <= 1, spt(f) in ball }.
// Points on or outside the ball boundary are dropped (f vanishes there).
double bl_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                   const Ball& ball);

// Assembles the merged in-ball problem for measures given as explicit
// (point, weight) arrays; exact coordinate duplicates are combined.
BLProblem make_bl_problem(std::size_t d, const std::vector<double>& coords_mu,
                          const std::vector<double>& weights_mu,
                          const std::vector<double>& coords_nu,
                          const std::vector<double>& weights_nu,
                          const Ball& ball);

}  // namespace gmt
