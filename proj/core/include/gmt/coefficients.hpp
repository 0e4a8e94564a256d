#pragma once

#include <optional>

#include "gmt/measure.hpp"
#include "gmt/plane.hpp"
#include "gmt/sphere_map.hpp"

namespace gmt {

// One multiscale coefficient evaluation. `vector` is filled for the
// C-type coefficients (value = |vector|); `plane` for beta/alpha; `c` for
// the alpha companion constant.
struct CoefficientSample {
  Vec x;
  double t = 0.0;
  double value = 0.0;
  std::optional<Vec> vector;
  std::optional<AffinePlane> plane;
  std::optional<double> c;
  bool degenerate = false;       // not enough points for a nondegenerate fit
  bool upper_bound_only = false; // beta_1 IRLS result, alpha local search
  double discretization_floor = 0.0;  // alpha lattice error bound
};

// C^n_mu(x,t): normalized displacement of the center of mass of mu in
// B(x,t) from x. vector = t^{-n-1} * sum_{|p-x|<t} w (x - p).
CoefficientSample c_number(const DiscreteMeasure& mu, VecView x, double t);

// Smooth variant: the hard ball cutoff is replaced by the weight
// exp(-|x-p|^{2N}/t^{2N}); the sum is truncated at the radius where the
// weight underflows below machine precision, so the result is exact to
// machine accuracy.
CoefficientSample smooth_c_number(const DiscreteMeasure& mu, VecView x,
                                  double t, int moment_n);

// Perturbed kernel |x-p| * Omega((x-p)/|x-p|) / t (d = 2 only). The term
// with p = x contributes zero.
CoefficientSample omega_c_number(const DiscreteMeasure& mu, VecView x,
                                 double t, const SphereMap& omega);

// Jones-type beta number over an open ball: the normalized L^p distance
// from mu to the best affine n-plane. p = 2 is exact (weighted PCA);
// p = 1 is an iteratively reweighted upper bound, flagged as such.
CoefficientSample beta_number(const DiscreteMeasure& mu, const Ball& ball,
                              int p);

// Circular projection onto the plane L through x: preserves the distance
// to x exactly instead of collapsing it like the orthogonal projection.
// Degenerate direction (x - y orthogonal to L) resolves to the first
// frame direction with positive sign.
Vec circular_projection(VecView x, const AffinePlane& plane_through_x,
                        VecView y);

}  // namespace gmt
