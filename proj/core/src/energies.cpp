#include "gmt/energies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gmt/alpha.hpp"

namespace gmt {

ScaleGrid ScaleGrid::make(double t_min, double t_max, int samples_per_octave) {
  if (!(t_min > 0.0) || !(t_min < t_max))
    throw std::invalid_argument("ScaleGrid: need 0 < t_min < t_max");
  if (samples_per_octave < 4)
    throw std::invalid_argument("ScaleGrid: samples_per_octave >= 4");
  ScaleGrid g;
  g.t_min = t_min;
  g.t_max = t_max;
  g.samples_per_octave = samples_per_octave;
  const double step = std::log(2.0) / samples_per_octave;
  const int count = static_cast<int>(
      std::ceil(std::log(t_max / t_min) / step - 1e-12));
  g.nodes.reserve(count + 1);
  for (int k = 0; k < count; ++k) g.nodes.push_back(t_max * std::exp(-step * k));
  g.nodes.push_back(t_min);
  return g;
}

double coefficient_value(const DiscreteMeasure& mu, VecView x, double t,
                         const CoefKind& kind) {
  switch (kind.tag) {
    case CoefKind::Tag::c:
      return c_number(mu, x, t).value;
    case CoefKind::Tag::csmooth:
      return smooth_c_number(mu, x, t, kind.smooth_n).value;
    case CoefKind::Tag::comega:
      return omega_c_number(mu, x, t, *kind.omega).value;
  }
  return 0.0;
}

namespace {

// Trapezoid rule in log t over a decreasing node list.
double log_trapezoid(const std::vector<double>& nodes,
                     const std::vector<double>& values) {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    const double dx = std::log(nodes[k] / nodes[k + 1]);
    total += 0.5 * (values[k] + values[k + 1]) * dx;
  }
  return total;
}

}  // namespace

double dini_integral(const DiscreteMeasure& mu, VecView x,
                     const ScaleGrid& grid, const CoefKind& kind) {
  std::vector<double> vals(grid.nodes.size());
  for (std::size_t k = 0; k < grid.nodes.size(); ++k) {
    const double v = coefficient_value(mu, x, grid.nodes[k], kind);
    vals[k] = v * v;
  }
  return log_trapezoid(grid.nodes, vals);
}

double dini_divergence_slope(const DiscreteMeasure& mu, VecView x,
                             double t_floor, double t_max,
                             int samples_per_octave, const CoefKind& kind) {
  if (!(t_floor > 0.0) || !(t_floor < t_max))
    throw std::invalid_argument("dini_divergence_slope: bad scale range");
  // One evaluation sweep over the full grid, then cumulative truncated
  // energies E(t_min) for every suffix t_min.
  const ScaleGrid grid = ScaleGrid::make(t_floor, t_max, samples_per_octave);
  std::vector<double> vals(grid.nodes.size());
  for (std::size_t k = 0; k < grid.nodes.size(); ++k) {
    const double v = coefficient_value(mu, x, grid.nodes[k], kind);
    vals[k] = v * v;
  }
  std::vector<double> xs, ys;
  double cum = 0.0;
  for (std::size_t k = 0; k + 1 < grid.nodes.size(); ++k) {
    const double dx = std::log(grid.nodes[k] / grid.nodes[k + 1]);
    cum += 0.5 * (vals[k] + vals[k + 1]) * dx;
    if (cum > 0.0) {
      xs.push_back(std::log(grid.nodes[k + 1]));
      ys.push_back(std::log(cum));
    }
  }
  if (xs.size() < 2) return 0.0;  // identically vanishing coefficient
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= ys.size();
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) return 0.0;
  return -(sxy / sxx);
}

EnergyReport carleson_energy(const DiscreteMeasure& mu, const CubeTree& tree,
                             int r_level, std::uint32_t r_index,
                             const CoefKind& kind, int samples_per_octave) {
  const Cube& root = tree.cube(r_level, r_index);
  EnergyReport rep;
  rep.normalization = root.mass;
  std::map<std::uint32_t, double> per_point;
  for (auto [lvl, idx] : tree.descendants(r_level, r_index)) {
    const Cube& q = tree.cube(lvl, idx);
    // Octave [l(Q), 2l(Q)] with m intervals in log t.
    std::vector<double> nodes(samples_per_octave + 1);
    const double step = std::log(2.0) / samples_per_octave;
    for (int k = 0; k <= samples_per_octave; ++k)
      nodes[k] = 2.0 * q.side * std::exp(-step * k);
    double cube_energy = 0.0;
    for (std::uint32_t i : q.members) {
      std::vector<double> vals(nodes.size());
      for (std::size_t k = 0; k < nodes.size(); ++k) {
        const double v = coefficient_value(mu, mu.point(i), nodes[k], kind);
        vals[k] = v * v;
      }
      const double e = mu.weight(i) * log_trapezoid(nodes, vals);
      cube_energy += e;
      per_point[i] += e;
    }
    rep.per_cube.emplace_back(lvl, idx, cube_energy);
    rep.total += cube_energy;
  }
  rep.per_point.assign(per_point.begin(), per_point.end());
  return rep;
}

EnergyReport alpha_energy(const DiscreteMeasure& mu, const CubeTree& tree,
                          int r_level, std::uint32_t r_index) {
  const Cube& root = tree.cube(r_level, r_index);
  EnergyReport rep;
  rep.normalization = root.mass;
  for (auto [lvl, idx] : tree.descendants(r_level, r_index)) {
    const Cube& q = tree.cube(lvl, idx);
    if (q.degenerate || q.members.size() < mu.dim_intrinsic() + 1) continue;
    const double a = alpha_number(mu, q).value;
    const double e = a * a * q.mass;
    rep.per_cube.emplace_back(lvl, idx, e);
    rep.total += e;
  }
  return rep;
}

EnergyReport beta_energy(
    const DiscreteMeasure& mu, const CubeTree& tree, int r_level,
    std::uint32_t r_index,
    const std::function<AffinePlane(const Cube&)>& plane_of) {
  const Cube& root = tree.cube(r_level, r_index);
  EnergyReport rep;
  rep.normalization =
      std::pow(root.side, static_cast<double>(mu.dim_intrinsic()));
  for (auto [lvl, idx] : tree.descendants(r_level, r_index)) {
    const Cube& q = tree.cube(lvl, idx);
    if (q.degenerate || q.members.size() < mu.dim_intrinsic() + 1) continue;
    const AffinePlane plane = plane_of(q);
    double e = 0.0;
    for (std::uint32_t i : q.members) {
      const double r = plane.distance(mu.point(i)) / q.side;
      e += mu.weight(i) * r * r;
    }
    rep.per_cube.emplace_back(lvl, idx, e);
    rep.total += e;
  }
  return rep;
}

EnergyReport beta_energy(const DiscreteMeasure& mu, const CubeTree& tree,
                         int r_level, std::uint32_t r_index) {
  return beta_energy(mu, tree, r_level, r_index, [&](const Cube& q) {
    const Ball b(Vec(mu.point(q.center_index).begin(),
                     mu.point(q.center_index).end()),
                 std::max(3.0 * q.diam, q.side * 1e-9));
    const CoefficientSample s = beta_number(mu, b, 2);
    if (s.plane) return *s.plane;
    // Degenerate fit: fall back to the PCA plane of the members.
    return fit_plane_pca(mu, q.members, mu.dim_intrinsic());
  });
}

MartingaleDecomposition martingale_decompose(const DiscreteMeasure& mu,
                                             const CubeTree& tree, int r_level,
                                             std::uint32_t r_index,
                                             const std::vector<double>& f) {
  if (f.size() != mu.size())
    throw std::invalid_argument("martingale_decompose: f length mismatch");
  MartingaleDecomposition out;
  const Cube& root = tree.cube(r_level, r_index);
  auto average = [&](const Cube& q) {
    double s = 0.0;
    for (std::uint32_t i : q.members) s += mu.weight(i) * f[i];
    return q.mass > 0.0 ? s / q.mass : 0.0;
  };
  out.root_average = average(root);
  out.root_members = root.members;
  for (auto [lvl, idx] : tree.descendants(r_level, r_index)) {
    if (lvl == tree.j_max()) continue;
    const Cube& p = tree.cube(lvl, idx);
    if (p.children.empty()) continue;
    const double fp = average(p);
    std::vector<double> delta(p.members.size(), 0.0);
    // Members are sorted; children partition them.
    for (std::uint32_t ci : p.children) {
      const Cube& s = tree.cube(lvl + 1, ci);
      const double fs = average(s);
      for (std::uint32_t i : s.members) {
        const auto it =
            std::lower_bound(p.members.begin(), p.members.end(), i);
        delta[static_cast<std::size_t>(it - p.members.begin())] = fs - fp;
      }
    }
    out.deltas[{lvl, idx}] = std::move(delta);
  }
  return out;
}

Weak11Report weak11_check(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                          const std::vector<double>& lambdas,
                          const ScaleGrid& grid) {
  Weak11Report rep;
  std::vector<double> sq(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i)
    sq[i] = std::sqrt(dini_integral(nu, mu.point(i), grid, CoefKind::plain()));
  const double nu_norm = nu.total_variation();
  for (double lambda : lambdas) {
    if (!(lambda > 0.0))
      throw std::invalid_argument("weak11_check: lambda must be > 0");
    Weak11Row row;
    row.lambda = lambda;
    for (std::size_t i = 0; i < mu.size(); ++i)
      if (sq[i] > lambda) row.mu_level_set += mu.weight(i);
    row.bound = nu_norm / lambda;
    rep.rows.push_back(row);
    if (nu_norm > 0.0)
      rep.k_emp = std::max(rep.k_emp, lambda * row.mu_level_set / nu_norm);
  }
  return rep;
}

double operator_l2_ratio(const DiscreteMeasure& mu, const CubeTree& tree,
                         int r_level, std::uint32_t r_index,
                         const std::vector<double>& f,
                         int samples_per_octave) {
  if (f.size() != mu.size())
    throw std::invalid_argument("operator_l2_ratio: f length mismatch");
  double f_norm_sq = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i)
    f_norm_sq += mu.weight(i) * f[i] * f[i];
  if (f_norm_sq <= 0.0)
    throw std::invalid_argument("operator_l2_ratio: zero f");
  const DiscreteMeasure fmu = multiply_density(mu, f);
  const Cube& root = tree.cube(r_level, r_index);
  const double t_min = tree.side(tree.j_max());
  const double t_max = root.side;
  if (!(t_min < t_max))
    throw std::invalid_argument("operator_l2_ratio: degenerate scale range");
  const ScaleGrid grid = ScaleGrid::make(t_min, t_max, samples_per_octave);
  double num_sq = 0.0;
  for (std::uint32_t i : root.members)
    num_sq += mu.weight(i) * dini_integral(fmu, mu.point(i), grid);
  return std::sqrt(num_sq / f_norm_sq);
}

}  // namespace gmt
