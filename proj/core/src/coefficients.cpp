#include "gmt/coefficients.hpp"

#include <cmath>
#include <stdexcept>

namespace gmt {

CoefficientSample c_number(const DiscreteMeasure& mu, VecView x, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("c_number: t must be > 0");
  const std::size_t d = mu.dim_ambient();
  CoefficientSample s;
  s.x.assign(x.begin(), x.end());
  s.t = t;
  Vec acc(d, 0.0);
  mu.index().visit_open_ball(x, t, [&](std::uint32_t i) {
    const double w = mu.weight(i);
    VecView p = mu.point(i);
    for (std::size_t a = 0; a < d; ++a) acc[a] += w * (x[a] - p[a]);
  });
  const double scale =
      std::pow(t, -static_cast<double>(mu.dim_intrinsic()) - 1.0);
  for (double& v : acc) v *= scale;
  s.value = norm2(acc);
  s.vector = std::move(acc);
  return s;
}

CoefficientSample smooth_c_number(const DiscreteMeasure& mu, VecView x,
                                  double t, int moment_n) {
  if (!(t > 0.0)) throw std::invalid_argument("smooth_c_number: t must be > 0");
  if (moment_n < 1) throw std::invalid_argument("smooth_c_number: N >= 1");
  const std::size_t d = mu.dim_ambient();
  const double twoN = 2.0 * moment_n;
  // exp(-u^{2N}) < eps_mach for u > (ln 1/eps)^{1/2N}: everything beyond
  // contributes nothing at double precision.
  const double cutoff =
      t * std::pow(-std::log(std::numeric_limits<double>::epsilon()), 1.0 / twoN);
  CoefficientSample s;
  s.x.assign(x.begin(), x.end());
  s.t = t;
  Vec acc(d, 0.0);
  mu.index().visit_open_ball(x, cutoff, [&](std::uint32_t i) {
    const double w = mu.weight(i);
    VecView p = mu.point(i);
    const double u = dist(p, x) / t;
    const double phi = std::exp(-std::pow(u, twoN));
    for (std::size_t a = 0; a < d; ++a) acc[a] += w * (x[a] - p[a]) * phi;
  });
  const double scale =
      std::pow(t, -static_cast<double>(mu.dim_intrinsic()) - 1.0);
  for (double& v : acc) v *= scale;
  s.value = norm2(acc);
  s.vector = std::move(acc);
  return s;
}

CoefficientSample omega_c_number(const DiscreteMeasure& mu, VecView x,
                                 double t, const SphereMap& omega) {
  if (mu.dim_ambient() != 2)
    throw std::invalid_argument("omega_c_number: ambient dimension must be 2");
  if (!(t > 0.0)) throw std::invalid_argument("omega_c_number: t must be > 0");
  CoefficientSample s;
  s.x.assign(x.begin(), x.end());
  s.t = t;
  Vec acc(2, 0.0);
  mu.index().visit_open_ball(x, t, [&](std::uint32_t i) {
    VecView p = mu.point(i);
    const double vx = x[0] - p[0], vy = x[1] - p[1];
    const double r = std::hypot(vx, vy);
    if (r == 0.0) return;  // K(0) = 0 by continuity
    const double w = mu.weight(i);
    const auto u = omega.map_unit(vx / r, vy / r);
    acc[0] += w * r * u[0];
    acc[1] += w * r * u[1];
  });
  const double scale =
      std::pow(t, -static_cast<double>(mu.dim_intrinsic()) - 1.0);
  for (double& v : acc) v *= scale;
  s.value = norm2(acc);
  s.vector = std::move(acc);
  return s;
}

namespace {

double beta_value_at_plane(const DiscreteMeasure& mu,
                           const std::vector<std::uint32_t>& idx,
                           const AffinePlane& plane, double t, int p,
                           double n_intrinsic) {
  double s = 0.0;
  for (std::uint32_t i : idx) {
    const double q = plane.distance(mu.point(i)) / t;
    s += mu.weight(i) * (p == 2 ? q * q : q);
  }
  s /= std::pow(t, n_intrinsic);
  return p == 2 ? std::sqrt(s) : s;
}

}  // namespace

CoefficientSample beta_number(const DiscreteMeasure& mu, const Ball& ball,
                              int p) {
  if (p != 1 && p != 2) throw std::invalid_argument("beta_number: p in {1,2}");
  const std::size_t n = mu.dim_intrinsic();
  const double t = ball.radius;
  CoefficientSample s;
  s.x = ball.center;
  s.t = t;
  std::vector<std::uint32_t> idx;
  mu.index().query_open_ball(ball.center, t, idx);
  if (idx.size() < n + 1) {
    s.degenerate = true;
    s.value = 0.0;
    return s;
  }
  double residual = 0.0;
  AffinePlane plane = fit_plane_pca(mu, idx, n, &residual);
  if (p == 2) {
    // PCA is the exact minimizer for the weighted squared distance.
    s.value = std::sqrt(std::max(0.0, residual) /
                        std::pow(t, static_cast<double>(n) + 2.0));
    s.plane = std::move(plane);
    return s;
  }
  // p = 1: iteratively reweighted least squares seeded at the p = 2 plane;
  // an upper bound for the true infimum.
  const double nn = static_cast<double>(n);
  double best = beta_value_at_plane(mu, idx, plane, t, 1, nn);
  AffinePlane best_plane = plane;
  const double eps = 1e-9 * t;
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<double> w(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const double dk = best_plane.distance(mu.point(idx[k]));
      w[k] = mu.weight(idx[k]) / std::max(dk, eps);
    }
    AffinePlane next = fit_plane_pca(mu, idx, w, n);
    const double val = beta_value_at_plane(mu, idx, next, t, 1, nn);
    if (val < best * (1.0 - 1e-8)) {
      best = val;
      best_plane = std::move(next);
    } else {
      if (val < best) {
        best = val;
        best_plane = std::move(next);
      }
      break;
    }
  }
  s.value = best;
  s.plane = std::move(best_plane);
  s.upper_bound_only = true;
  return s;
}

Vec circular_projection(VecView x, const AffinePlane& plane_through_x,
                        VecView y) {
  const AffinePlane L = plane_through_x.translated_to(x);
  const std::size_t d = x.size();
  Vec v = sub(x, y);
  const double r = norm2(v);
  Vec result(x.begin(), x.end());
  if (r == 0.0) return result;
  // Tangential part of v in the frame of L.
  Vec tang(L.dim_plane());
  double tang_norm_sq = 0.0;
  for (std::size_t i = 0; i < L.dim_plane(); ++i) {
    tang[i] = dot(v, L.frame()[i]);
    tang_norm_sq += tang[i] * tang[i];
  }
  const double tang_norm = std::sqrt(tang_norm_sq);
  Vec w(d, 0.0);
  if (tang_norm < 1e-300 * r || tang_norm == 0.0) {
    // Degenerate direction: send it to the first frame direction.
    axpy(r, L.frame()[0], w);
  } else {
    const double scale = r / tang_norm;
    for (std::size_t i = 0; i < L.dim_plane(); ++i)
      axpy(scale * tang[i], L.frame()[i], w);
  }
  // Orientation convention: the projected difference is flipped back
  // through x, so points already on L are fixed.
  for (std::size_t a = 0; a < d; ++a) result[a] = x[a] - w[a];
  return result;
}

}  // namespace gmt
