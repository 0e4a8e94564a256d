#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

namespace gmt {

// Compactly supported orthonormal wavelets with three vanishing moments
// (the minimal-length filter, 6 taps, mother support of length 5). The
// scaling function and wavelet are tabulated by the exact dyadic
// refinement of the integer values, so the only quadrature error in any
// downstream integral is the Riemann-sum error at resolution
// 2^-cascade_depth; the filter itself is Newton-polished to machine
// precision against the orthonormality and moment equations.
//
// Both generators are stored recentered on [-2, 3], so the element
// indexed by the dyadic cube I is supported on the concentric dilation
// 5I. For n = 2 the family is the usual tensor construction with the
// three mixed wavelet/scaling types per cube.
class WaveletBasis {
 public:
  enum class Type : std::uint8_t {
    wavelet = 0,        // n = 1, and (w x w) for n = 2
    wavelet_scaling = 1, // n = 2: w(x1) s(x2)
    scaling_wavelet = 2, // n = 2: s(x1) w(x2)
  };

  static const std::array<double, 6>& filter();

  int cascade_depth() const { return depth_; }
  std::size_t dim() const { return n_; }
  double grid_step() const { return step_; }

  // Midpoint samples over [-2, 3], spacing 2^-depth, 5*2^depth values.
  const std::vector<double>& wavelet_mid() const { return wavelet_mid_; }
  const std::vector<double>& scaling_mid() const { return scaling_mid_; }

  // Pointwise values by linear interpolation of the table (u in [-2,3]).
  double wavelet_at(double u) const;
  double scaling_at(double u) const;

 private:
  friend WaveletBasis build_basis(int, int, std::size_t);
  std::size_t n_ = 1;
  int depth_ = 12;
  double step_ = 0.0;
  std::vector<double> wavelet_nodes_, scaling_nodes_;  // 5*2^depth + 1 values
  std::vector<double> wavelet_mid_, scaling_mid_;
};

// vanishing_moments must be 3 (the only family built here);
// cascade_depth >= 8; n in {1, 2}.
WaveletBasis build_basis(int vanishing_moments, int cascade_depth,
                         std::size_t n);

// Coefficients a_I = <g_i, phi_I> of g_i(y) = y_i 1_{unit ball}(y).
// Only cubes whose 5I meets the closed unit ball are stored; all others
// vanish identically.
struct WaveletCube {
  int level = 0;                 // side 2^-level
  std::vector<std::int64_t> k;   // lattice offset
  WaveletBasis::Type type = WaveletBasis::Type::wavelet;
  bool operator<(const WaveletCube& o) const {
    if (level != o.level) return level < o.level;
    if (k != o.k) return k < o.k;
    return type < o.type;
  }
};
using CoefficientTable = std::map<WaveletCube, double>;

// integration_depth <= cascade_depth bounds the Riemann resolution for
// n = 2 (tensor grids grow quadratically); <= 0 means cascade_depth for
// n = 1 and min(cascade_depth, 8) for n = 2.
CoefficientTable coefficients_of_g(const WaveletBasis& basis,
                                   std::size_t coord_index, int level_lo,
                                   int level_hi, int integration_depth = 0);

// Partial-sum evaluation of sum a_I phi_I at the given points (flat
// row-major, dimension = basis.dim()).
std::vector<double> reconstruct_g(const CoefficientTable& table,
                                  const WaveletBasis& basis,
                                  const std::vector<double>& points);

// Riemann moments of the tabulated wavelet: int u^m w(u) du, m = 0,1,2.
std::array<double, 3> wavelet_moments(const WaveletBasis& basis);
// Riemann L2 norm of the tabulated wavelet.
double wavelet_l2_norm(const WaveletBasis& basis);

}  // namespace gmt
