#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "gmt/geometry.hpp"
#include "gmt/kdtree.hpp"

namespace gmt {

struct Ball {
  Vec center;
  double radius = 0.0;

  Ball(Vec c, double r) : center(std::move(c)), radius(r) {
    if (!(radius > 0.0)) throw std::invalid_argument("Ball: radius must be > 0");
  }
};

// A weighted point cloud standing in for a Radon measure on R^d with
// intrinsic dimension tag n. Immutable after construction; all queries are
// read-only and thread-safe. Ball semantics are open with strict
// inequality |p - x| < t throughout the library, and every integral
// over a ball is the weighted sum over the points strictly inside it.
class DiscreteMeasure {
 public:
  DiscreteMeasure(std::vector<double> coords, std::vector<double> weights,
                  std::size_t dim_ambient, std::size_t dim_intrinsic,
                  bool allow_signed = false);

  std::size_t size() const { return weights_.size(); }
  std::size_t dim_ambient() const { return d_; }
  std::size_t dim_intrinsic() const { return n_; }
  bool is_signed() const { return signed_; }

  VecView point(std::size_t i) const { return {coords_.data() + i * d_, d_}; }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& coords() const { return coords_; }

  double total_mass() const { return total_mass_; }
  // Sum of |w_i|; equals total_mass() for nonnegative measures.
  double total_variation() const { return total_variation_; }

  // Resolution scale h(mu): median nearest-neighbor distance. Scales below
  // it are untrustworthy for densities and coefficients but not rejected.
  double resolution_scale() const { return resolution_; }
  // Exact diameter of the support (max pairwise distance), computed on
  // first use.
  double diameter() const;

  const KdTree& index() const { return *index_; }

  // Bounding box of the support.
  const Vec& bbox_min() const { return bbox_min_; }
  const Vec& bbox_max() const { return bbox_max_; }

 private:
  std::size_t d_ = 0, n_ = 0;
  std::vector<double> coords_;   // flat row-major, frozen
  std::vector<double> weights_;
  bool signed_ = false;
  double total_mass_ = 0.0;
  double total_variation_ = 0.0;
  double resolution_ = 0.0;
  Vec bbox_min_, bbox_max_;
  std::shared_ptr<const KdTree> index_;
  struct DiameterCache {
    std::once_flag once;
    double value = 0.0;
  };
  std::shared_ptr<DiameterCache> diameter_cache_;
};

// ---- module operations ----

// points: flat row-major list (count*d). Validates weights >= 0 (unless
// allow_signed), uniform dimension, non-empty input.
DiscreteMeasure build_measure(const std::vector<std::vector<double>>& points,
                              const std::vector<double>& weights,
                              std::size_t n);
DiscreteMeasure build_measure_flat(std::vector<double> coords,
                                   std::vector<double> weights, std::size_t d,
                                   std::size_t n, bool allow_signed = false);

// mu(B): sum of weights over points strictly inside the ball.
double ball_mass(const DiscreteMeasure& mu, const Ball& ball);

// mu(B(x,r))/r^n per radius; radii must be decreasing and positive.
std::vector<double> upper_density(const DiscreteMeasure& mu, VecView x,
                                  const std::vector<double>& radii);

struct RegularityEstimate {
  double c_lower = 0.0;  // min of mu(B(x,r))/r^n over the sample
  double c_upper = 0.0;  // max over the sample
  std::vector<double> ratios;  // every sampled ratio, for bracket checks
};

// Empirical Ahlfors regularity constants: x drawn from spt(mu), r
// log-uniform in [scale_min, scale_max], deterministic seeded sampling.
RegularityEstimate ad_regularity(const DiscreteMeasure& mu, double scale_min,
                                 double scale_max, std::size_t sample_count,
                                 std::uint64_t seed = 1);

// New measure with weights w_i * f_i. A negative product marks the result
// as signed; signed measures are rejected by operations that require
// nonnegativity (densities, regularity).
DiscreteMeasure multiply_density(const DiscreteMeasure& mu,
                                 const std::vector<double>& f);

}  // namespace gmt
