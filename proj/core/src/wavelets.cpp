#include "gmt/wavelets.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace gmt {

namespace {

// Newton-polish the 6-tap filter against the defining equations:
// sum h = sqrt(2), orthonormality of even shifts, and the two moment
// conditions that give the wavelet its second and third vanishing moment
// (the first is implied). Converges from the tabulated start in a few
// steps to machine precision.
std::array<double, 6> refine_filter(std::array<double, 6> h) {
  for (int iter = 0; iter < 24; ++iter) {
    Eigen::Matrix<double, 6, 1> F;
    F(0) = h[0] + h[1] + h[2] + h[3] + h[4] + h[5] - std::sqrt(2.0);
    F(1) = -1.0;
    for (double v : h) F(1) += v * v;
    F(2) = h[0] * h[2] + h[1] * h[3] + h[2] * h[4] + h[3] * h[5];
    F(3) = h[0] * h[4] + h[1] * h[5];
    F(4) = F(5) = 0.0;
    for (int j = 0; j < 6; ++j) {
      const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
      F(4) += sgn * j * h[j];
      F(5) += sgn * j * j * h[j];
    }
    if (F.cwiseAbs().maxCoeff() < 1e-15) break;
    Eigen::Matrix<double, 6, 6> J = Eigen::Matrix<double, 6, 6>::Zero();
    for (int j = 0; j < 6; ++j) {
      J(0, j) = 1.0;
      J(1, j) = 2.0 * h[j];
      const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
      J(4, j) = sgn * j;
      J(5, j) = sgn * j * j;
    }
    J(2, 0) = h[2]; J(2, 1) = h[3]; J(2, 2) = h[0] + h[4];
    J(2, 3) = h[1] + h[5]; J(2, 4) = h[2]; J(2, 5) = h[3];
    J(3, 0) = h[4]; J(3, 1) = h[5]; J(3, 4) = h[0]; J(3, 5) = h[1];
    Eigen::Matrix<double, 6, 1> step = J.fullPivLu().solve(F);
    for (int j = 0; j < 6; ++j) h[j] -= step(j);
  }
  return h;
}

const std::array<double, 6>& db3_filter() {
  static const std::array<double, 6> h = refine_filter({
      0.33267055295008261,
      0.80689150931109257,
      0.45987750211849157,
      -0.13501102001025458,
      -0.08544127388202666,
      0.03522629188570953,
  });
  return h;
}

}  // namespace

const std::array<double, 6>& WaveletBasis::filter() { return db3_filter(); }

double WaveletBasis::wavelet_at(double u) const {
  if (u <= -2.0 || u >= 3.0) return 0.0;
  const double s = (u + 2.0) / step_;
  const std::size_t i = static_cast<std::size_t>(s);
  const double frac = s - static_cast<double>(i);
  if (i + 1 >= wavelet_nodes_.size()) return 0.0;
  return wavelet_nodes_[i] * (1.0 - frac) + wavelet_nodes_[i + 1] * frac;
}

double WaveletBasis::scaling_at(double u) const {
  if (u <= -2.0 || u >= 3.0) return 0.0;
  const double s = (u + 2.0) / step_;
  const std::size_t i = static_cast<std::size_t>(s);
  const double frac = s - static_cast<double>(i);
  if (i + 1 >= scaling_nodes_.size()) return 0.0;
  return scaling_nodes_[i] * (1.0 - frac) + scaling_nodes_[i + 1] * frac;
}

WaveletBasis build_basis(int vanishing_moments, int cascade_depth,
                         std::size_t n) {
  if (vanishing_moments != 3)
    throw std::invalid_argument("build_basis: only the 3-moment family is built");
  if (cascade_depth < 8)
    throw std::invalid_argument("build_basis: cascade_depth >= 8");
  if (n != 1 && n != 2)
    throw std::invalid_argument("build_basis: n must be 1 or 2");
  const auto& h = db3_filter();

  // Integer values of the scaling function on its support [0,5]:
  // phi(k) = sqrt(2) sum_j h_j phi(2k - j) restricted to k = 1..4, with
  // sum_k phi(k) = 1 appended for uniqueness.
  Eigen::Matrix<double, 5, 4> A = Eigen::Matrix<double, 5, 4>::Zero();
  const double r2 = std::sqrt(2.0);
  for (int k = 1; k <= 4; ++k)
    for (int m = 1; m <= 4; ++m) {
      const int j = 2 * k - m;
      if (j >= 0 && j <= 5) A(k - 1, m - 1) = r2 * h[j];
      if (k == m) A(k - 1, m - 1) -= 1.0;
    }
  for (int m = 0; m < 4; ++m) A(4, m) = 1.0;
  Eigen::Matrix<double, 5, 1> b = Eigen::Matrix<double, 5, 1>::Zero();
  b(4) = 1.0;
  Eigen::Matrix<double, 4, 1> phi_int =
      A.colPivHouseholderQr().solve(b);

  // Exact dyadic refinement phi(x) = sqrt(2) sum h_j phi(2x - j) on
  // [0,5], densified one level at a time.
  const int K = cascade_depth;
  std::vector<double> phi{0.0, phi_int(0), phi_int(1), phi_int(2), phi_int(3),
                          0.0};
  long res = 1;  // current grid spacing = 1/res
  for (int level = 0; level < K; ++level) {
    const long new_res = res * 2;
    std::vector<double> next(5 * new_res + 1, 0.0);
    for (long m = 0; m <= 5 * new_res; ++m) {
      // x = m / new_res; 2x - j = (m - j*new_res) * (2/new_res) = index
      // (2m - j*2*res_old... ) on the old grid: 2x = m/res.
      double v = 0.0;
      for (int j = 0; j < 6; ++j) {
        const long idx = m - j * res;  // (2x - j) in units of 1/res
        if (idx >= 0 && idx <= 5 * res) v += h[j] * phi[idx];
      }
      next[m] = r2 * v;
    }
    phi = std::move(next);
    res = new_res;
  }

  // Wavelet from the quadrature mirror filter, same grid:
  // psi(x) = sqrt(2) sum g_j phi(2x - j), g_j = (-1)^j h_{5-j}.
  std::vector<double> psi(5 * res + 1, 0.0);
  for (long m = 0; m <= 5 * res; ++m) {
    double v = 0.0;
    for (int j = 0; j < 6; ++j) {
      const double g = ((j % 2 == 0) ? 1.0 : -1.0) * h[5 - j];
      const long idx = 2 * m - j * res;
      if (idx >= 0 && idx <= 5 * res) v += g * phi[idx];
    }
    psi[m] = r2 * v;
  }

  WaveletBasis basis;
  basis.n_ = n;
  basis.depth_ = K;
  basis.step_ = 1.0 / static_cast<double>(res);
  basis.scaling_nodes_ = std::move(phi);
  basis.wavelet_nodes_ = std::move(psi);
  basis.scaling_mid_.resize(5 * res);
  basis.wavelet_mid_.resize(5 * res);
  for (long m = 0; m < 5 * res; ++m) {
    basis.scaling_mid_[m] =
        0.5 * (basis.scaling_nodes_[m] + basis.scaling_nodes_[m + 1]);
    basis.wavelet_mid_[m] =
        0.5 * (basis.wavelet_nodes_[m] + basis.wavelet_nodes_[m + 1]);
  }
  return basis;
}

std::array<double, 3> wavelet_moments(const WaveletBasis& basis) {
  std::array<double, 3> m{0.0, 0.0, 0.0};
  const double step = basis.grid_step();
  const auto& mid = basis.wavelet_mid();
  for (std::size_t i = 0; i < mid.size(); ++i) {
    const double u = -2.0 + (static_cast<double>(i) + 0.5) * step;
    m[0] += mid[i] * step;
    m[1] += u * mid[i] * step;
    m[2] += u * u * mid[i] * step;
  }
  return m;
}

double wavelet_l2_norm(const WaveletBasis& basis) {
  double s = 0.0;
  const double step = basis.grid_step();
  for (double v : basis.wavelet_mid()) s += v * v * step;
  return std::sqrt(s);
}

namespace {

// Midpoint value of the tensor factor for `type` along axis `axis`.
double factor_mid(const WaveletBasis& basis, WaveletBasis::Type type,
                  std::size_t axis, std::size_t mid_index) {
  const bool use_wavelet =
      (type == WaveletBasis::Type::wavelet) ||
      (type == WaveletBasis::Type::wavelet_scaling && axis == 0) ||
      (type == WaveletBasis::Type::scaling_wavelet && axis == 1);
  return use_wavelet ? basis.wavelet_mid()[mid_index]
                     : basis.scaling_mid()[mid_index];
}

double factor_at(const WaveletBasis& basis, WaveletBasis::Type type,
                 std::size_t axis, double u) {
  const bool use_wavelet =
      (type == WaveletBasis::Type::wavelet) ||
      (type == WaveletBasis::Type::wavelet_scaling && axis == 0) ||
      (type == WaveletBasis::Type::scaling_wavelet && axis == 1);
  return use_wavelet ? basis.wavelet_at(u) : basis.scaling_at(u);
}

}  // namespace

CoefficientTable coefficients_of_g(const WaveletBasis& basis,
                                   std::size_t coord_index, int level_lo,
                                   int level_hi, int integration_depth) {
  const std::size_t n = basis.dim();
  if (coord_index < 1 || coord_index > n)
    throw std::invalid_argument("coefficients_of_g: coordinate out of range");
  if (integration_depth <= 0)
    integration_depth = (n == 1) ? basis.cascade_depth()
                                 : std::min(basis.cascade_depth(), 8);
  integration_depth = std::min(integration_depth, basis.cascade_depth());
  const long res = 1L << integration_depth;
  const long stride = 1L << (basis.cascade_depth() - integration_depth);
  const double du = 1.0 / static_cast<double>(res);

  CoefficientTable table;
  const std::vector<WaveletBasis::Type> types =
      n == 1 ? std::vector<WaveletBasis::Type>{WaveletBasis::Type::wavelet}
             : std::vector<WaveletBasis::Type>{
                   WaveletBasis::Type::wavelet,
                   WaveletBasis::Type::wavelet_scaling,
                   WaveletBasis::Type::scaling_wavelet};

  for (int level = level_lo; level <= level_hi; ++level) {
    const double side = std::pow(2.0, -level);
    // 5I touches the closed unit ball iff every axis window
    // [(k-2)*side, (k+3)*side] meets [-1,1]; in 2D also a corner check.
    const long k_hi = static_cast<long>(std::floor(1.0 / side)) + 2;
    const long k_lo = -k_hi - 1;
    std::vector<long> k(n, k_lo);
    while (true) {
      // Reject cubes whose 5I box misses the ball.
      double closest_sq = 0.0;
      for (std::size_t a = 0; a < n; ++a) {
        const double lo = (static_cast<double>(k[a]) - 2.0) * side;
        const double hi = (static_cast<double>(k[a]) + 3.0) * side;
        double c = 0.0;
        if (lo > 0.0) c = lo;
        else if (hi < 0.0) c = hi;
        closest_sq += c * c;
      }
      if (closest_sq <= 1.0) {
        for (WaveletBasis::Type type : types) {
          // a_I = 2^{-level n / 2} int g((u+k) side) W(u) du over [-2,3]^n.
          double sum = 0.0;
          if (n == 1) {
            for (long m = 0; m < 5 * res; ++m) {
              const double u = -2.0 + (static_cast<double>(m) + 0.5) * du;
              const double y = (u + static_cast<double>(k[0])) * side;
              if (y <= -1.0 || y >= 1.0) continue;
              const double wv =
                  stride == 1
                      ? basis.wavelet_mid()[static_cast<std::size_t>(m)]
                      : basis.wavelet_at(u);
              sum += y * wv * du;
            }
          } else {
            for (long m1 = 0; m1 < 5 * res; ++m1) {
              const double u1 = -2.0 + (static_cast<double>(m1) + 0.5) * du;
              const double y1 = (u1 + static_cast<double>(k[0])) * side;
              const double f1 =
                  stride == 1
                      ? factor_mid(basis, type, 0, static_cast<std::size_t>(m1))
                      : factor_at(basis, type, 0, u1);
              if (f1 == 0.0) continue;
              for (long m2 = 0; m2 < 5 * res; ++m2) {
                const double u2 = -2.0 + (static_cast<double>(m2) + 0.5) * du;
                const double y2 = (u2 + static_cast<double>(k[1])) * side;
                if (y1 * y1 + y2 * y2 >= 1.0) continue;
                const double f2 =
                    stride == 1 ? factor_mid(basis, type, 1,
                                             static_cast<std::size_t>(m2))
                                : factor_at(basis, type, 1, u2);
                const double g = (coord_index == 1 ? y1 : y2);
                sum += g * f1 * f2 * du * du;
              }
            }
          }
          const double a_I = std::pow(side, static_cast<double>(n) / 2.0) * sum;
          WaveletCube cube;
          cube.level = level;
          cube.k.assign(k.begin(), k.end());
          cube.type = type;
          table[cube] = a_I;
        }
      }
      std::size_t a = 0;
      while (a < n && ++k[a] > k_hi) {
        k[a] = k_lo;
        ++a;
      }
      if (a == n) break;
    }
  }
  return table;
}

std::vector<double> reconstruct_g(const CoefficientTable& table,
                                  const WaveletBasis& basis,
                                  const std::vector<double>& points) {
  const std::size_t n = basis.dim();
  const std::size_t count = points.size() / n;
  std::vector<double> out(count, 0.0);
  for (const auto& [cube, a] : table) {
    if (a == 0.0) continue;
    const double side = std::pow(2.0, -cube.level);
    const double scale = std::pow(side, -static_cast<double>(n) / 2.0);
    for (std::size_t p = 0; p < count; ++p) {
      double v = 1.0;
      for (std::size_t axis = 0; axis < n && v != 0.0; ++axis) {
        const double u =
            points[p * n + axis] / side - static_cast<double>(cube.k[axis]);
        v *= factor_at(basis, cube.type, axis, u);
      }
      out[p] += a * scale * v;
    }
  }
  return out;
}

}  // namespace gmt
