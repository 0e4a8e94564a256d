#include "gmt/sphere_map.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gmt {

namespace {
constexpr int kGridSize = 4096;
}

double SphereMap::psi(double theta) const {
  double s = 0.0;
  for (const Mode& m : modes_)
    s += m.a * std::cos(2.0 * m.k * theta) + m.b * std::sin(2.0 * m.k * theta);
  return s;
}

double SphereMap::psi_prime(double theta) const {
  double s = 0.0;
  for (const Mode& m : modes_) {
    const double w = 2.0 * m.k;
    s += -m.a * w * std::sin(w * theta) + m.b * w * std::cos(w * theta);
  }
  return s;
}

std::array<double, 2> SphereMap::map_unit(double ux, double uy) const {
  if (is_identity()) return {ux, uy};
  const double theta = std::atan2(uy, ux);
  const double phi = angle(theta);
  return {std::cos(phi), std::sin(phi)};
}

double max_psi_derivative(const SphereMap& omega) {
  double m = 0.0;
  for (int i = 0; i < kGridSize; ++i) {
    const double theta = std::numbers::pi * i / kGridSize;
    m = std::max(m, std::abs(omega.psi_prime(theta)));
  }
  return m;
}

SphereMap::SphereMap(std::vector<Mode> modes) : modes_(std::move(modes)) {
  for (const Mode& m : modes_)
    if (m.k < 1) throw std::invalid_argument("SphereMap: mode index k must be >= 1");
  delta_ = max_psi_derivative(*this);
  if (delta_ >= 0.1)
    throw std::invalid_argument("SphereMap: max|psi'| must stay below 1/10");
}

}  // namespace gmt
