#pragma once

#include "gmt/coefficients.hpp"
#include "gmt/cubes.hpp"
#include "gmt/transport.hpp"

namespace gmt {

// Search configuration for the alpha coefficient. The plane search is
// local: PCA seed, +-grid_steps around it per rotation/offset parameter,
// one Nelder-Mead polish, and a convex line search in the density c.
// Lattice sizes are capped so large cubes stay tractable; the implied
// transport error (spacing times compared mass) is reported on the
// returned sample as discretization_floor.
struct AlphaOptions {
  int grid_steps = 5;
  double angle_step = 0.02;        // radians per rotation parameter
  double offset_step = 0.05;       // fraction of l(Q) per normal direction
  std::size_t coarse_nodes = 220;  // lattice cap during the grid search
  std::size_t medium_nodes = 450;  // lattice cap during the polish
  std::size_t final_nodes = 1500;  // lattice cap for the final evaluation
  int nm_iterations = 60;
  int c_iterations = 10;           // ternary steps per plane
};

// alpha_mu(Q) = l(Q)^{-n-1} inf_{c >= 0, L} dist_{B_Q}(mu, c H^n|_L)
// over B_Q = B(z_Q, 3 diam Q), the infimum searched locally. The sample
// carries the minimizing plane, the constant c and the lattice floor.
CoefficientSample alpha_number(const DiscreteMeasure& mu, const Cube& q,
                               const AlphaOptions& opts = {});

// Unnormalized objective dist_{B_Q}(mu, c sigma_L) at a fixed plane and
// constant, with the lattice capped at max_nodes. Exposed for the
// convexity checks and the brute-force c-grid oracle.
double alpha_objective(const DiscreteMeasure& mu, const Cube& q,
                       const AffinePlane& plane, double c,
                       std::size_t max_nodes);

// The flat-measure lattice underlying the objective: mid-offset lattice
// on L with spacing max(h(mu)/2, cap-derived), restricted to the open
// ball; weights are spacing^n (multiply by c at use sites).
struct PlaneLattice {
  std::vector<double> coords;  // flat row-major
  std::vector<double> weights; // spacing^n each
  double spacing = 0.0;
};
PlaneLattice make_plane_lattice(const AffinePlane& plane, const Ball& ball,
                                double target_spacing,
                                std::size_t max_nodes);

}  // namespace gmt
