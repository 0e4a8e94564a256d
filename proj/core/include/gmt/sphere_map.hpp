#pragma once

#include <array>
#include <vector>

#include "gmt/geometry.hpp"

namespace gmt {

// Odd bi-Lipschitz self-map of the unit circle (d = 2 only), written as
// Omega(theta) = theta + psi(theta) with a pi-periodic trigonometric
// perturbation psi(theta) = sum_k a_k cos(2 k theta) + b_k sin(2 k theta).
// Pi-periodicity of psi makes Omega(theta + pi) = Omega(theta) + pi, which
// is the oddness of the induced kernel K(v) = |v| Omega(v/|v|).
class SphereMap {
 public:
  struct Mode {
    int k = 1;
    double a = 0.0;  // cos(2 k theta) coefficient
    double b = 0.0;  // sin(2 k theta) coefficient
  };

  // Identity map (psi == 0).
  SphereMap() = default;

  // Throws if the numerically measured max |psi'| exceeds 1/10 (the
  // bi-Lipschitz budget) on a 4096-point grid.
  explicit SphereMap(std::vector<Mode> modes);

  bool is_identity() const { return modes_.empty() || delta_ == 0.0; }
  double delta() const { return delta_; }
  const std::vector<Mode>& modes() const { return modes_; }

  double psi(double theta) const;
  double psi_prime(double theta) const;
  double angle(double theta) const { return theta + psi(theta); }

  // Omega applied to the unit vector (cos theta, sin theta).
  std::array<double, 2> map_unit(double ux, double uy) const;

 private:
  std::vector<Mode> modes_;
  double delta_ = 0.0;  // measured max |psi'|
};

// Max |psi'| over a uniform 4096-point grid on [0, pi).
double max_psi_derivative(const SphereMap& omega);

}  // namespace gmt
