#pragma once

#include <vector>

#include "gmt/geometry.hpp"
#include "gmt/measure.hpp"

namespace gmt {

// n-dimensional affine plane in R^d: base point + orthonormal frame.
class AffinePlane {
 public:
  AffinePlane() = default;
  // Orthonormalizes the frame (modified Gram-Schmidt) and validates it to
  // 1e-10. Throws on a rank-deficient frame.
  AffinePlane(Vec base, std::vector<Vec> frame);

  std::size_t dim_ambient() const { return base_.size(); }
  std::size_t dim_plane() const { return frame_.size(); }
  const Vec& base() const { return base_; }
  const std::vector<Vec>& frame() const { return frame_; }

  // |(y-base) - sum <y-base, f_i> f_i|.
  double distance(VecView y) const;
  // Orthogonal projection onto the plane.
  Vec project(VecView y) const;
  // Tangential coordinates <y-base, f_i>.
  Vec coordinates(VecView y) const;
  // base + sum t_i f_i.
  Vec point_at(VecView t) const;

  AffinePlane translated_to(VecView new_base) const;
  // Rotate the frame inside the (f_i, axis)-plane; used by the alpha
  // searches. `normal` must be a unit vector orthogonal to the frame.
  AffinePlane rotated(std::size_t frame_axis, VecView normal,
                      double angle) const;
  AffinePlane offset_along(VecView normal, double amount) const;

  // Orthonormal basis of the orthogonal complement (d - n vectors).
  std::vector<Vec> normal_frame() const;

 private:
  Vec base_;
  std::vector<Vec> frame_;
};

// Weighted least-squares n-plane through the weighted mean of the given
// points: the affine plane minimizing sum w_i dist(p_i, L)^2 (principal
// component analysis of the weighted scatter).
// residual (if non-null) receives sum w_i dist(p_i, L)^2.
// Points are (index into mu) pairs so no copy of coordinates is made.
AffinePlane fit_plane_pca(const DiscreteMeasure& mu,
                          const std::vector<std::uint32_t>& idx,
                          const std::vector<double>& weights_override,
                          std::size_t n_plane, double* residual = nullptr);

inline AffinePlane fit_plane_pca(const DiscreteMeasure& mu,
                                 const std::vector<std::uint32_t>& idx,
                                 std::size_t n_plane,
                                 double* residual = nullptr) {
  return fit_plane_pca(mu, idx, {}, n_plane, residual);
}

}  // namespace gmt
