#include "gmt/measure.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gmt {

DiscreteMeasure::DiscreteMeasure(std::vector<double> coords,
                                 std::vector<double> weights,
                                 std::size_t dim_ambient,
                                 std::size_t dim_intrinsic, bool allow_signed)
    : d_(dim_ambient),
      n_(dim_intrinsic),
      coords_(std::move(coords)),
      weights_(std::move(weights)) {
  if (weights_.empty()) throw std::invalid_argument("measure: empty point list");
  if (d_ == 0) throw std::invalid_argument("measure: ambient dimension must be >= 1");
  if (n_ < 1 || n_ > d_)
    throw std::invalid_argument("measure: need 1 <= n <= d");
  if (coords_.size() != weights_.size() * d_)
    throw std::invalid_argument("measure: coordinate/weight length mismatch");
  for (double c : coords_)
    if (!std::isfinite(c))
      throw std::invalid_argument("measure: non-finite coordinate");
  for (double w : weights_) {
    if (!std::isfinite(w))
      throw std::invalid_argument("measure: non-finite weight");
    if (w < 0.0) {
      if (!allow_signed)
        throw std::invalid_argument("measure: negative weight");
      signed_ = true;
    }
  }
  for (double w : weights_) {
    total_mass_ += w;
    total_variation_ += std::abs(w);
  }
  bbox_min_.assign(d_, std::numeric_limits<double>::infinity());
  bbox_max_.assign(d_, -std::numeric_limits<double>::infinity());
  const std::size_t n_pts = weights_.size();
  for (std::size_t i = 0; i < n_pts; ++i) {
    VecView p = point(i);
    for (std::size_t a = 0; a < d_; ++a) {
      bbox_min_[a] = std::min(bbox_min_[a], p[a]);
      bbox_max_[a] = std::max(bbox_max_[a], p[a]);
    }
  }
  index_ = std::make_shared<KdTree>(coords_.data(), n_pts, d_);

  // h(mu): median nearest-neighbor distance.
  if (n_pts > 1) {
    std::vector<double> nn(n_pts);
    for (std::size_t i = 0; i < n_pts; ++i)
      nn[i] = index_->nearest_dist(point(i), i);
    std::nth_element(nn.begin(), nn.begin() + nn.size() / 2, nn.end());
    resolution_ = nn[nn.size() / 2];
  }
  diameter_cache_ = std::make_shared<DiameterCache>();
}

double DiscreteMeasure::diameter() const {
  DiameterCache& cache = *diameter_cache_;
  std::call_once(cache.once, [this, &cache] {
    // Exact O(N^2) max pairwise distance; computed once, on demand.
    double dsq = 0.0;
    const std::size_t n_pts = weights_.size();
    for (std::size_t i = 0; i < n_pts; ++i)
      for (std::size_t j = i + 1; j < n_pts; ++j)
        dsq = std::max(dsq, dist_sq(point(i), point(j)));
    cache.value = std::sqrt(dsq);
  });
  return cache.value;
}

DiscreteMeasure build_measure(const std::vector<std::vector<double>>& points,
                              const std::vector<double>& weights,
                              std::size_t n) {
  if (points.empty()) throw std::invalid_argument("build_measure: empty point list");
  if (points.size() != weights.size())
    throw std::invalid_argument("build_measure: point/weight count mismatch");
  const std::size_t d = points.front().size();
  std::vector<double> coords;
  coords.reserve(points.size() * d);
  for (const auto& p : points) {
    if (p.size() != d)
      throw std::invalid_argument("build_measure: inconsistent point dimension");
    coords.insert(coords.end(), p.begin(), p.end());
  }
  return DiscreteMeasure(std::move(coords), weights, d, n);
}

DiscreteMeasure build_measure_flat(std::vector<double> coords,
                                   std::vector<double> weights, std::size_t d,
                                   std::size_t n, bool allow_signed) {
  return DiscreteMeasure(std::move(coords), std::move(weights), d, n,
                         allow_signed);
}

double ball_mass(const DiscreteMeasure& mu, const Ball& ball) {
  if (mu.is_signed())
    throw std::invalid_argument("ball_mass: signed measure");
  double m = 0.0;
  mu.index().visit_open_ball(ball.center, ball.radius,
                             [&](std::uint32_t i) { m += mu.weight(i); });
  return m;
}

std::vector<double> upper_density(const DiscreteMeasure& mu, VecView x,
                                  const std::vector<double>& radii) {
  if (mu.is_signed())
    throw std::invalid_argument("upper_density: signed measure");
  for (std::size_t k = 0; k + 1 < radii.size(); ++k)
    if (!(radii[k] > radii[k + 1]))
      throw std::invalid_argument("upper_density: radii must decrease");
  std::vector<double> out;
  out.reserve(radii.size());
  const double n = static_cast<double>(mu.dim_intrinsic());
  for (double r : radii) {
    if (!(r > 0.0)) throw std::invalid_argument("upper_density: radius <= 0");
    double m = 0.0;
    mu.index().visit_open_ball(x, r, [&](std::uint32_t i) { m += mu.weight(i); });
    out.push_back(m / std::pow(r, n));
  }
  return out;
}

RegularityEstimate ad_regularity(const DiscreteMeasure& mu, double scale_min,
                                 double scale_max, std::size_t sample_count,
                                 std::uint64_t seed) {
  if (mu.is_signed())
    throw std::invalid_argument("ad_regularity: signed measure");
  if (!(scale_min > 0.0) || !(scale_min < scale_max))
    throw std::invalid_argument("ad_regularity: empty scale range");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, mu.size() - 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double log_lo = std::log(scale_min), log_hi = std::log(scale_max);
  const double n = static_cast<double>(mu.dim_intrinsic());
  RegularityEstimate est;
  est.c_lower = std::numeric_limits<double>::infinity();
  est.c_upper = 0.0;
  est.ratios.reserve(sample_count);
  for (std::size_t k = 0; k < sample_count; ++k) {
    const std::size_t i = pick(rng);
    const double r = std::exp(log_lo + (log_hi - log_lo) * unif(rng));
    double m = 0.0;
    mu.index().visit_open_ball(mu.point(i), r,
                               [&](std::uint32_t j) { m += mu.weight(j); });
    const double ratio = m / std::pow(r, n);
    est.ratios.push_back(ratio);
    est.c_lower = std::min(est.c_lower, ratio);
    est.c_upper = std::max(est.c_upper, ratio);
  }
  return est;
}

DiscreteMeasure multiply_density(const DiscreteMeasure& mu,
                                 const std::vector<double>& f) {
  if (f.size() != mu.size())
    throw std::invalid_argument("multiply_density: length mismatch");
  for (double v : f)
    if (!std::isfinite(v))
      throw std::invalid_argument("multiply_density: non-finite density");
  std::vector<double> w(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) w[i] = mu.weight(i) * f[i];
  return DiscreteMeasure(mu.coords(), std::move(w), mu.dim_ambient(),
                         mu.dim_intrinsic(), /*allow_signed=*/true);
}

}  // namespace gmt
