#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace gmt {

// Points live in flat row-major storage (n_points x d). A Vec is a small
// owning vector for intermediate arithmetic; views into storage are spans.
using Vec = std::vector<double>;
using VecView = std::span<const double>;

inline double dot(VecView a, VecView b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2_sq(VecView a) { return dot(a, a); }

inline double norm2(VecView a) { return std::sqrt(norm2_sq(a)); }

inline double dist_sq(VecView a, VecView b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

inline double dist(VecView a, VecView b) { return std::sqrt(dist_sq(a, b)); }

inline Vec sub(VecView a, VecView b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec add(VecView a, VecView b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec scaled(VecView a, double s) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

inline void axpy(double s, VecView x, Vec& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

}  // namespace gmt
