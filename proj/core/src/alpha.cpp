#include "gmt/alpha.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gmt {

namespace {

double ball_section_radius(const AffinePlane& plane, const Ball& ball) {
  const double gap = plane.distance(ball.center);
  if (gap >= ball.radius) return 0.0;
  return std::sqrt(ball.radius * ball.radius - gap * gap);
}

}  // namespace

PlaneLattice make_plane_lattice(const AffinePlane& plane, const Ball& ball,
                                double target_spacing,
                                std::size_t max_nodes) {
  const std::size_t n = plane.dim_plane();
  const std::size_t d = plane.dim_ambient();
  PlaneLattice lat;
  const double rho = ball_section_radius(plane, ball);
  if (rho <= 0.0) {
    lat.spacing = target_spacing;
    return lat;
  }
  double sp = target_spacing;
  if (n == 1) {
    sp = std::max(sp, 2.0 * rho / static_cast<double>(max_nodes));
  } else {
    const double area = std::pow(rho, static_cast<double>(n)) *
                        (n == 2 ? 3.14159265358979323846 : std::pow(2.0, n));
    sp = std::max(sp, std::pow(area / static_cast<double>(max_nodes),
                               1.0 / static_cast<double>(n)));
  }
  lat.spacing = sp;
  // Mid-offset lattice in plane coordinates centered at the projection of
  // the ball center; keeps nodes off exact spheres.
  Vec t_center = plane.coordinates(ball.center);
  const long reach = static_cast<long>(std::ceil(rho / sp)) + 1;
  const double w = std::pow(sp, static_cast<double>(n));
  std::vector<long> k(n, -reach);
  Vec t(n);
  while (true) {
    for (std::size_t a = 0; a < n; ++a)
      t[a] = t_center[a] + (static_cast<double>(k[a]) + 0.5) * sp;
    Vec pt = plane.point_at(t);
    if (dist(pt, ball.center) < ball.radius) {
      lat.coords.insert(lat.coords.end(), pt.begin(), pt.end());
      lat.weights.push_back(w);
    }
    std::size_t a = 0;
    while (a < n && ++k[a] > reach) {
      k[a] = -reach;
      ++a;
    }
    if (a == n) break;
  }
  (void)d;
  return lat;
}

namespace {

// The objective for one plane, reusable across c values: the merged
// support and distances are fixed, only the supplies rescale.
class PlaneObjective {
 public:
  PlaneObjective(const DiscreteMeasure& mu,
                 const std::vector<std::uint32_t>& in_ball,
                 const AffinePlane& plane, const Ball& ball,
                 double target_spacing, std::size_t max_nodes)
      : d_(mu.dim_ambient()) {
    lattice_ = make_plane_lattice(plane, ball, target_spacing, max_nodes);
    problem_.d = d_;
    for (std::uint32_t i : in_ball) {
      VecView p = mu.point(i);
      problem_.coords.insert(problem_.coords.end(), p.begin(), p.end());
      problem_.supply.push_back(mu.weight(i));
      mu_mass_ += mu.weight(i);
    }
    mu_count_ = problem_.supply.size();
    problem_.coords.insert(problem_.coords.end(), lattice_.coords.begin(),
                           lattice_.coords.end());
    for (double w : lattice_.weights) {
      problem_.supply.push_back(0.0);
      sigma_unit_mass_ += w;
    }
    const std::size_t total = problem_.supply.size();
    problem_.boundary_cost.resize(total);
    for (std::size_t i = 0; i < total; ++i)
      problem_.boundary_cost[i] =
          ball.radius - dist(VecView{problem_.coords.data() + i * d_, d_},
                             ball.center);
  }

  double sigma_unit_mass() const { return sigma_unit_mass_; }
  double mu_mass() const { return mu_mass_; }
  double spacing() const { return lattice_.spacing; }

  double eval(double c) const {
    BLProblem p = problem_;
    for (std::size_t k = 0; k < lattice_.weights.size(); ++k)
      p.supply[mu_count_ + k] = -c * lattice_.weights[k];
    return solve_bl(p);
  }

  // Convex minimization over c in [0, c_hi] by ternary search.
  std::pair<double, double> minimize_c(double c_hi, int iterations) const {
    double lo = 0.0, hi = c_hi;
    double f_best = std::numeric_limits<double>::infinity(), c_best = 0.0;
    for (int it = 0; it < iterations; ++it) {
      const double c1 = lo + (hi - lo) / 3.0;
      const double c2 = hi - (hi - lo) / 3.0;
      const double f1 = eval(c1), f2 = eval(c2);
      if (f1 < f_best) {
        f_best = f1;
        c_best = c1;
      }
      if (f2 < f_best) {
        f_best = f2;
        c_best = c2;
      }
      if (f1 <= f2) hi = c2;
      else lo = c1;
    }
    return {c_best, f_best};
  }

 private:
  std::size_t d_;
  BLProblem problem_;
  PlaneLattice lattice_;
  std::size_t mu_count_ = 0;
  double sigma_unit_mass_ = 0.0;
  double mu_mass_ = 0.0;
};

// Plane from search parameters: rotations of each frame axis toward each
// seed normal direction, then offsets along the seed normals.
AffinePlane plane_at(const AffinePlane& seed, const std::vector<Vec>& normals,
                     const std::vector<double>& params, double side) {
  const std::size_t n = seed.dim_plane();
  const std::size_t m = normals.size();
  AffinePlane plane = seed;
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const double a = params[idx++];
      if (a != 0.0) plane = plane.rotated(i, normals[j], a);
    }
  for (std::size_t j = 0; j < m; ++j) {
    const double o = params[idx++] * side;
    if (o != 0.0) plane = plane.offset_along(normals[j], o);
  }
  return plane;
}

}  // namespace

double alpha_objective(const DiscreteMeasure& mu, const Cube& q,
                       const AffinePlane& plane, double c,
                       std::size_t max_nodes) {
  const Ball ball(Vec(mu.point(q.center_index).begin(),
                      mu.point(q.center_index).end()),
                  3.0 * q.diam);
  std::vector<std::uint32_t> in_ball;
  mu.index().query_open_ball(ball.center, ball.radius, in_ball);
  PlaneObjective obj(mu, in_ball, plane, ball, mu.resolution_scale() * 0.5,
                     max_nodes);
  return obj.eval(c);
}

CoefficientSample alpha_number(const DiscreteMeasure& mu, const Cube& q,
                               const AlphaOptions& opts) {
  const std::size_t n = mu.dim_intrinsic();
  const std::size_t d = mu.dim_ambient();
  if (q.degenerate || q.diam <= 0.0)
    throw std::invalid_argument("alpha_number: degenerate cube");
  const Ball ball(Vec(mu.point(q.center_index).begin(),
                      mu.point(q.center_index).end()),
                  3.0 * q.diam);
  std::vector<std::uint32_t> in_ball;
  mu.index().query_open_ball(ball.center, ball.radius, in_ball);
  if (in_ball.size() < n + 1)
    throw std::invalid_argument("alpha_number: degenerate cube");

  const double target_spacing = mu.resolution_scale() * 0.5;
  const AffinePlane seed = fit_plane_pca(mu, in_ball, n);
  const std::vector<Vec> normals = seed.normal_frame();
  const std::size_t n_rot = n * normals.size();
  const std::size_t n_par = n_rot + normals.size();

  auto objective_at = [&](const std::vector<double>& params,
                          std::size_t max_nodes,
                          int c_iters) -> std::tuple<double, double> {
    const AffinePlane plane = plane_at(seed, normals, params, q.side);
    PlaneObjective obj(mu, in_ball, plane, ball, target_spacing, max_nodes);
    if (obj.sigma_unit_mass() <= 0.0)
      return {std::numeric_limits<double>::infinity(), 0.0};
    const double c_nat = obj.mu_mass() / obj.sigma_unit_mass();
    auto [c_best, f_best] = obj.minimize_c(4.0 * c_nat, c_iters);
    return {f_best, c_best};
  };

  // Stage 1: grid around the PCA seed at coarse resolution.
  std::vector<double> best_params(n_par, 0.0);
  double best_f = std::numeric_limits<double>::infinity();
  {
    std::vector<int> steps(n_par, -opts.grid_steps);
    while (true) {
      std::vector<double> params(n_par);
      for (std::size_t i = 0; i < n_par; ++i)
        params[i] = (i < n_rot ? opts.angle_step : opts.offset_step) *
                    static_cast<double>(steps[i]);
      auto [f, c] = objective_at(params, opts.coarse_nodes, opts.c_iterations);
      (void)c;
      if (f < best_f) {
        best_f = f;
        best_params = params;
      }
      std::size_t a = 0;
      while (a < n_par && ++steps[a] > opts.grid_steps) {
        steps[a] = -opts.grid_steps;
        ++a;
      }
      if (a == n_par) break;
    }
  }

  // Stage 2: Nelder-Mead polish at medium resolution.
  {
    const std::size_t dim = n_par;
    std::vector<std::vector<double>> simplex(dim + 1, best_params);
    std::vector<double> fvals(dim + 1);
    for (std::size_t i = 0; i < dim; ++i)
      simplex[i + 1][i] += (i < n_rot ? opts.angle_step : opts.offset_step) * 0.5;
    for (std::size_t i = 0; i <= dim; ++i)
      fvals[i] = std::get<0>(
          objective_at(simplex[i], opts.medium_nodes, opts.c_iterations));
    for (int iter = 0; iter < opts.nm_iterations; ++iter) {
      // Order simplex.
      std::vector<std::size_t> ord(dim + 1);
      for (std::size_t i = 0; i <= dim; ++i) ord[i] = i;
      std::sort(ord.begin(), ord.end(),
                [&](std::size_t a, std::size_t b) { return fvals[a] < fvals[b]; });
      std::vector<std::vector<double>> sx(dim + 1);
      std::vector<double> fv(dim + 1);
      for (std::size_t i = 0; i <= dim; ++i) {
        sx[i] = simplex[ord[i]];
        fv[i] = fvals[ord[i]];
      }
      simplex = sx;
      fvals = fv;
      std::vector<double> centroid(dim, 0.0);
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t a = 0; a < dim; ++a) centroid[a] += simplex[i][a] / dim;
      auto eval_params = [&](const std::vector<double>& p) {
        return std::get<0>(objective_at(p, opts.medium_nodes, opts.c_iterations));
      };
      std::vector<double> refl(dim);
      for (std::size_t a = 0; a < dim; ++a)
        refl[a] = centroid[a] + (centroid[a] - simplex[dim][a]);
      const double f_refl = eval_params(refl);
      if (f_refl < fvals[0]) {
        std::vector<double> expd(dim);
        for (std::size_t a = 0; a < dim; ++a)
          expd[a] = centroid[a] + 2.0 * (centroid[a] - simplex[dim][a]);
        const double f_exp = eval_params(expd);
        if (f_exp < f_refl) {
          simplex[dim] = expd;
          fvals[dim] = f_exp;
        } else {
          simplex[dim] = refl;
          fvals[dim] = f_refl;
        }
      } else if (f_refl < fvals[dim - 1]) {
        simplex[dim] = refl;
        fvals[dim] = f_refl;
      } else {
        std::vector<double> ctr(dim);
        for (std::size_t a = 0; a < dim; ++a)
          ctr[a] = centroid[a] + 0.5 * (simplex[dim][a] - centroid[a]);
        const double f_ctr = eval_params(ctr);
        if (f_ctr < fvals[dim]) {
          simplex[dim] = ctr;
          fvals[dim] = f_ctr;
        } else {
          for (std::size_t i = 1; i <= dim; ++i) {
            for (std::size_t a = 0; a < dim; ++a)
              simplex[i][a] = simplex[0][a] + 0.5 * (simplex[i][a] - simplex[0][a]);
            fvals[i] = eval_params(simplex[i]);
          }
        }
      }
    }
    std::size_t best_i = 0;
    for (std::size_t i = 1; i <= dim; ++i)
      if (fvals[i] < fvals[best_i]) best_i = i;
    if (fvals[best_i] < best_f) {
      best_f = fvals[best_i];
      best_params = simplex[best_i];
    }
  }

  // Stage 3: final evaluation at full resolution.
  const AffinePlane plane = plane_at(seed, normals, best_params, q.side);
  PlaneObjective obj(mu, in_ball, plane, ball, target_spacing,
                     opts.final_nodes);
  const double c_nat = obj.mu_mass() / obj.sigma_unit_mass();
  auto [c_best, f_best] = obj.minimize_c(4.0 * c_nat, opts.c_iterations + 4);

  CoefficientSample s;
  s.x.assign(ball.center.begin(), ball.center.end());
  s.t = q.side;
  const double norm = std::pow(q.side, static_cast<double>(n) + 1.0);
  s.value = f_best / norm;
  s.plane = plane;
  s.c = c_best;
  s.upper_bound_only = true;
  s.discretization_floor =
      obj.spacing() * (obj.mu_mass() + c_best * obj.sigma_unit_mass()) / norm;
  (void)d;
  return s;
}

}  // namespace gmt
