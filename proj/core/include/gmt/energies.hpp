#pragma once

#include <functional>
#include <map>

#include "gmt/coefficients.hpp"
#include "gmt/cubes.hpp"

namespace gmt {

// Geometric quadrature grid for integrals against dt/t: nodes
// t_k = t_max * 2^{-k/m}, trapezoid rule in log t (exact when the
// integrand is constant per octave).
struct ScaleGrid {
  double t_min = 0.0, t_max = 0.0;
  int samples_per_octave = 8;
  std::vector<double> nodes;  // strictly decreasing, bracketing [t_min, t_max]

  static ScaleGrid make(double t_min, double t_max, int samples_per_octave);
};

// Which coefficient feeds a scale integral.
struct CoefKind {
  enum class Tag { c, csmooth, comega } tag = Tag::c;
  int smooth_n = 1;                 // csmooth only
  const SphereMap* omega = nullptr; // comega only

  static CoefKind plain() { return {}; }
  static CoefKind smooth(int n) { return {Tag::csmooth, n, nullptr}; }
  static CoefKind with_omega(const SphereMap& o) {
    return {Tag::comega, 1, &o};
  }
};

double coefficient_value(const DiscreteMeasure& mu, VecView x, double t,
                         const CoefKind& kind);

// Truncated Dini integral int_{t_min}^{t_max} |coef(x,t)|^2 dt/t.
double dini_integral(const DiscreteMeasure& mu, VecView x,
                     const ScaleGrid& grid, const CoefKind& kind = {});

// Least-squares slope of ln E(t_min) against ln t_min, where E is the
// truncated Dini integral with fixed t_max. Bounded energies flatten
// (slope near 0), log-divergent ones keep a definite negative slope; the
// sign is flipped so "growing toward small scales" is positive.
double dini_divergence_slope(const DiscreteMeasure& mu, VecView x,
                             double t_floor, double t_max,
                             int samples_per_octave, const CoefKind& kind = {});

struct EnergyReport {
  // (cube id "level:index", energy) per cube of the summed family.
  std::vector<std::tuple<int, std::uint32_t, double>> per_cube;
  std::vector<std::pair<std::uint32_t, double>> per_point;  // point index, energy
  double total = 0.0;
  double normalization = 1.0;  // mu(R) or l(R)^n
  double ratio() const { return total / normalization; }
};

// sum_{Q subset R} int_Q int_{l(Q)}^{2l(Q)} |coef(x,t)|^2 dt/t dmu(x),
// normalized by mu(R).
EnergyReport carleson_energy(const DiscreteMeasure& mu, const CubeTree& tree,
                             int r_level, std::uint32_t r_index,
                             const CoefKind& kind, int samples_per_octave);

// sum_{Q subset R} alpha(Q)^2 mu(Q), normalized by mu(R). Cubes whose
// alpha is degenerate (too few points) are skipped.
struct AlphaOptions;
EnergyReport alpha_energy(const DiscreteMeasure& mu, const CubeTree& tree,
                          int r_level, std::uint32_t r_index);

// sum_{Q subset R} sum_{x in Q} w_x (dist(x, L_Q)/l(Q))^2, normalized by
// l(R)^n. plane_of returns the plane used for Q (alpha plane when
// available, beta_2 plane otherwise).
EnergyReport beta_energy(
    const DiscreteMeasure& mu, const CubeTree& tree, int r_level,
    std::uint32_t r_index,
    const std::function<AffinePlane(const Cube&)>& plane_of);
EnergyReport beta_energy(const DiscreteMeasure& mu, const CubeTree& tree,
                         int r_level, std::uint32_t r_index);

// Martingale decomposition of f over the subtree of R: for every
// non-leaf P the per-member values of Delta_P f, plus the root average.
struct MartingaleDecomposition {
  // key: (level, cube index) -> values aligned with that cube's members
  std::map<std::pair<int, std::uint32_t>, std::vector<double>> deltas;
  double root_average = 0.0;
  std::vector<std::uint32_t> root_members;
};
MartingaleDecomposition martingale_decompose(const DiscreteMeasure& mu,
                                             const CubeTree& tree, int r_level,
                                             std::uint32_t r_index,
                                             const std::vector<double>& f);

// Distribution check for the square function of a finite measure nu
// against the weak-(1,1) bound ||nu||/lambda, evaluated over spt(mu).
struct Weak11Row {
  double lambda = 0.0;
  double mu_level_set = 0.0;  // mu{ x : C_nu(x) > lambda }
  double bound = 0.0;         // ||nu|| / lambda
};
struct Weak11Report {
  std::vector<Weak11Row> rows;
  double k_emp = 0.0;  // sup_lambda lambda * mu{C_nu > lambda} / ||nu||
};
Weak11Report weak11_check(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                          const std::vector<double>& lambdas,
                          const ScaleGrid& grid);

// ||C_mu(f)||_{L^2(mu, R)} / ||f||_{L^2(mu)} with scales truncated to
// [finest cube side, l(R)].
double operator_l2_ratio(const DiscreteMeasure& mu, const CubeTree& tree,
                         int r_level, std::uint32_t r_index,
                         const std::vector<double>& f,
                         int samples_per_octave = 8);

}  // namespace gmt
