#include <doctest.h>

#include <cmath>
#include <random>

#include "gmt/coefficients.hpp"
#include "gmt/generators.hpp"

using namespace gmt;

namespace {

// Centered segment on [-half, half] x {0} built from signed integer
// multiples, so mirrored points have exactly opposite coordinates.
DiscreteMeasure centered_segment(long half_count, double spacing,
                                 double weight) {
  std::vector<double> coords, w;
  for (long i = -half_count; i <= half_count; ++i) {
    coords.push_back(static_cast<double>(i) * spacing);
    coords.push_back(0.0);
    w.push_back(weight);
  }
  return build_measure_flat(std::move(coords), std::move(w), 2, 1);
}

// Brute-force beta_2 oracle for d=2, n=1: iteratively refined grid over
// (angle, offset) planes through the ball. Never looks at the PCA plane.
double beta2_grid_oracle(const DiscreteMeasure& mu, const Ball& ball) {
  std::vector<std::uint32_t> idx;
  mu.index().query_open_ball(ball.center, ball.radius, idx);
  REQUIRE(!idx.empty());
  const double t = ball.radius;
  auto value_at = [&](double angle, double offset) {
    const double nx = -std::sin(angle), ny = std::cos(angle);
    double s = 0.0;
    for (std::uint32_t i : idx) {
      VecView p = mu.point(i);
      const double d = std::abs((p[0] - ball.center[0]) * nx +
                                (p[1] - ball.center[1]) * ny - offset);
      s += mu.weight(i) * d * d;
    }
    return std::sqrt(s / std::pow(t, 3.0));
  };
  double a_lo = 0.0, a_hi = 3.14159265358979323846;
  double o_lo = -t, o_hi = t;
  double best = 1e300, best_a = 0.0, best_o = 0.0;
  for (int round = 0; round < 7; ++round) {
    const int steps = 60;
    for (int ia = 0; ia <= steps; ++ia)
      for (int io = 0; io <= steps; ++io) {
        const double a = a_lo + (a_hi - a_lo) * ia / steps;
        const double o = o_lo + (o_hi - o_lo) * io / steps;
        const double v = value_at(a, o);
        if (v < best) {
          best = v;
          best_a = a;
          best_o = o;
        }
      }
    const double a_span = (a_hi - a_lo) / steps * 4.0;
    const double o_span = (o_hi - o_lo) / steps * 4.0;
    a_lo = best_a - a_span;
    a_hi = best_a + a_span;
    o_lo = best_o - o_span;
    o_hi = best_o + o_span;
  }
  return best;
}

}  // namespace

TEST_CASE("c_number symmetric cancellation") {
  const auto mu = centered_segment(1000, 1e-3, 1e-3);
  const auto s = c_number(mu, Vec{0.0, 0.0}, 0.5);
  CHECK(s.value <= 1e-12);
}

TEST_CASE("c_number single atom") {
  const auto mu = build_measure({{0.5, 0.0}}, {1.0}, 1);
  const auto s = c_number(mu, Vec{0.0, 0.0}, 1.0);
  REQUIRE(s.vector.has_value());
  CHECK((*s.vector)[0] == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK((*s.vector)[1] == 0.0);
  CHECK(s.value == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("c_number half-line matches the continuum integral") {
  const auto mu = gen_segment(2.0, 1e-4);
  const auto s = c_number(mu, Vec{0.0, 0.0}, 1.0);
  // continuum: |int_0^1 s ds| = 1/2; Riemann oracle at 10x resolution.
  const double h = 1e-5;
  double riemann = 0.0;
  for (long i = 0; static_cast<double>(i) * h < 1.0; ++i)
    riemann += (static_cast<double>(i) * h) * h;
  CHECK(s.value == doctest::Approx(riemann).epsilon(1e-3));
  CHECK(s.value == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("c_number empty ball gives zero") {
  const auto mu = build_measure({{5.0, 5.0}}, {1.0}, 1);
  CHECK(c_number(mu, Vec{0.0, 0.0}, 1.0).value == 0.0);
}

TEST_CASE("smooth_c_number") {
  SUBCASE("symmetric cancellation") {
    const auto mu = centered_segment(1000, 1e-3, 1e-3);
    CHECK(smooth_c_number(mu, Vec{0.0, 0.0}, 0.5, 1).value <= 1e-12);
  }
  SUBCASE("single atom closed form") {
    const auto mu = build_measure({{0.5, 0.0}}, {1.0}, 1);
    const auto s = smooth_c_number(mu, Vec{0.0, 0.0}, 1.0, 1);
    CHECK(s.value ==
          doctest::Approx(0.5 * std::exp(-0.25)).epsilon(1e-12));
  }
  SUBCASE("value bounded uniformly over scales on an AD-regular measure") {
    const auto mu = gen_segment(2.0, 1e-3);
    const double gamma_n = std::tgamma(1.5);
    for (int n_smooth : {1, 2, 4}) {
      double worst = 0.0;
      for (double t = 2e-3; t <= 2.0; t *= 2.0) {
        for (double x : {0.0, 0.3, 1.0, 1.7, 2.0}) {
          worst = std::max(
              worst, smooth_c_number(mu, Vec{x, 0.0}, t, n_smooth).value);
        }
      }
      // c_0 ~ 2 for the two-sided unit-density segment.
      CHECK(worst <= 2.0 * gamma_n * 3.0);
    }
  }
}

TEST_CASE("omega_c_number") {
  const auto omega = gen_omega({{1, 0.7, 0.4}, {2, -0.3, 0.2}}, 0.08);
  SUBCASE("identity map reduces to c_number") {
    const SphereMap id;
    const auto mu = gen_lipschitz_graph(0.3, 1.0, 1.0, 0.01);
    for (double t : {0.1, 0.45, 1.3}) {
      const auto a = c_number(mu, Vec{0.2, 0.0}, t);
      const auto b = omega_c_number(mu, Vec{0.2, 0.0}, t, id);
      CHECK(b.value == doctest::Approx(a.value).epsilon(1e-14));
    }
  }
  SUBCASE("single atom formula") {
    const double theta0 = 0.7, r = 0.6, w = 2.0;
    const auto mu = build_measure(
        {{r * std::cos(theta0), r * std::sin(theta0)}}, {w}, 1);
    const auto s = omega_c_number(mu, Vec{0.0, 0.0}, 1.0, omega);
    CHECK(s.value == doctest::Approx(w * r).epsilon(1e-12));
    REQUIRE(s.vector.has_value());
    const double phi = omega.angle(theta0 + 3.141592653589793);
    CHECK((*s.vector)[0] == doctest::Approx(w * r * std::cos(phi)).epsilon(1e-10));
    CHECK((*s.vector)[1] == doctest::Approx(w * r * std::sin(phi)).epsilon(1e-10));
  }
  SUBCASE("odd kernel kills symmetric atom pairs") {
    const auto mu =
        build_measure({{0.3, 0.4}, {-0.3, -0.4}}, {1.0, 1.0}, 1);
    const auto s = omega_c_number(mu, Vec{0.0, 0.0}, 1.0, omega);
    CHECK(s.value <= 1e-12);
  }
  SUBCASE("center atom contributes zero") {
    const auto mu = build_measure({{0.0, 0.0}, {0.2, 0.0}}, {5.0, 1.0}, 1);
    const auto s = omega_c_number(mu, Vec{0.0, 0.0}, 1.0, omega);
    CHECK(s.value == doctest::Approx(0.2).epsilon(1e-12));
  }
  SUBCASE("dimension guard") {
    const auto mu3 = gen_kplane(2, 1.0, 0.5);
    CHECK_THROWS_AS(omega_c_number(mu3, Vec{0.0, 0.0, 0.0}, 1.0, omega),
                    std::invalid_argument);
  }
}

TEST_CASE("beta_number exact flatness") {
  const auto mu = gen_segment(1.0, 0.01);
  const auto s = beta_number(mu, Ball({0.5, 0.0}, 0.3), 2);
  CHECK(s.value <= 1e-12);
  REQUIRE(s.plane.has_value());
  CHECK(s.plane->distance(Vec{0.8, 0.0}) <= 1e-9);
}

TEST_CASE("beta_number two parallel lines") {
  const double h = 0.01, t = 1.0;
  std::vector<double> coords, w;
  for (long i = -200; i <= 200; ++i) {
    for (double y : {-h, h}) {
      coords.push_back(static_cast<double>(i) * 5e-3);
      coords.push_back(y);
      w.push_back(5e-3);
    }
  }
  const auto mu = build_measure_flat(std::move(coords), std::move(w), 2, 1);
  const Ball ball({0.0, 0.0}, t);
  const auto s = beta_number(mu, ball, 2);
  const double mass = ball_mass(mu, ball);
  CHECK(s.value ==
        doctest::Approx(std::sqrt(mass / t) * (h / t)).epsilon(1e-6));
  REQUIRE(s.plane.has_value());
  CHECK(std::abs(s.plane->frame()[0][1]) <= 1e-9);  // optimal plane is y = 0
}

TEST_CASE("beta_number circle vs brute-force plane search") {
  std::vector<double> coords, w;
  const int m = 1500;
  for (int i = 0; i < m; ++i) {
    const double th = 2.0 * 3.141592653589793 * i / m;
    coords.push_back(std::cos(th));
    coords.push_back(std::sin(th));
    w.push_back(2.0 * 3.141592653589793 / m);
  }
  const auto mu = build_measure_flat(std::move(coords), std::move(w), 2, 1);
  const Ball ball({1.0, 0.0}, 0.25);
  const auto s = beta_number(mu, ball, 2);
  const double oracle = beta2_grid_oracle(mu, ball);
  CHECK(s.value == doctest::Approx(oracle).epsilon(0.2));
}

TEST_CASE("beta_number p=2 equals the grid oracle on random clouds") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int inst = 0; inst < 12; ++inst) {
    std::vector<double> coords, w;
    const int m = 40 + inst * 13;
    for (int i = 0; i < m; ++i) {
      coords.push_back(u(rng));
      coords.push_back(0.4 * u(rng));
      w.push_back(0.5 + 0.5 * std::abs(u(rng)));
    }
    const auto mu = build_measure_flat(std::move(coords), std::move(w), 2, 1);
    const Ball ball({0.0, 0.0}, 1.4);
    const auto s = beta_number(mu, ball, 2);
    const double oracle = beta2_grid_oracle(mu, ball);
    CHECK(s.value == doctest::Approx(oracle).epsilon(1e-6));
  }
}

TEST_CASE("beta_number degenerate ball") {
  const auto mu = build_measure({{0.0, 0.0}}, {1.0}, 1);
  const auto s = beta_number(mu, Ball({0.0, 0.0}, 0.5), 2);
  CHECK(s.degenerate);
  CHECK(s.value == 0.0);
}

TEST_CASE("beta_1 is a flagged upper bound consistent with beta_2") {
  const auto mu = gen_lipschitz_graph(0.25, 2.0, 1.0, 5e-3);
  const Ball ball({0.0, 0.0}, 0.8);
  const auto b1 = beta_number(mu, ball, 1);
  const auto b2 = beta_number(mu, ball, 2);
  CHECK(b1.upper_bound_only);
  // Jensen: beta_1 at the best plane <= beta_2 * (mu(B)/t^n)^{1/2}.
  const double mass = ball_mass(mu, ball);
  CHECK(b1.value <= b2.value * std::sqrt(mass / ball.radius) + 1e-9);
}

TEST_CASE("circular_projection") {
  SUBCASE("pinned 2d example") {
    const AffinePlane axis({0.0, 0.0}, {{1.0, 0.0}});
    const Vec r = circular_projection(Vec{0.0, 0.0}, axis, Vec{3.0, 4.0});
    CHECK(r[0] == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(r[1] == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("points on the plane are fixed") {
    const AffinePlane axis({0.0, 0.0}, {{1.0, 0.0}});
    for (double a : {-2.0, -0.5, 0.7, 3.0}) {
      const Vec r = circular_projection(Vec{0.0, 0.0}, axis, Vec{a, 0.0});
      CHECK(r[0] == doctest::Approx(a).epsilon(1e-12));
      CHECK(std::abs(r[1]) <= 1e-12);
    }
  }
  SUBCASE("isometry and membership on random triples") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int d : {2, 3, 4}) {
      for (int k = 0; k < 2500; ++k) {
        Vec x(d), y(d), f1(d), f2(d);
        for (int a = 0; a < d; ++a) {
          x[a] = u(rng);
          y[a] = u(rng);
          f1[a] = u(rng);
          f2[a] = u(rng);
        }
        const std::size_t n_plane = (d == 2) ? 1 : 2;
        std::vector<Vec> frame{f1};
        if (n_plane == 2) frame.push_back(f2);
        AffinePlane plane(x, frame);
        const Vec r = circular_projection(x, plane, y);
        CHECK(std::abs(dist(r, x) - dist(x, y)) <= 1e-10);
        CHECK(plane.translated_to(x).distance(r) <= 1e-10);
      }
    }
  }
  SUBCASE("degenerate direction uses the plane's first frame vector") {
    const AffinePlane axis({0.0, 0.0}, {{1.0, 0.0}});
    const Vec r = circular_projection(Vec{0.0, 0.0}, axis, Vec{0.0, 2.0});
    CHECK(std::abs(std::abs(r[0]) - 2.0) <= 1e-12);
    CHECK(std::abs(r[1]) <= 1e-12);
  }
}

TEST_CASE("c_number transformation covariance") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int inst = 0; inst < 20; ++inst) {
    std::vector<double> coords, w;
    const int m = 30;
    for (int i = 0; i < m; ++i) {
      coords.push_back(u(rng));
      coords.push_back(u(rng));
      w.push_back(0.3 + std::abs(u(rng)));
    }
    const Vec x{0.2 * u(rng), 0.2 * u(rng)};
    const double t = 0.8 + 0.4 * std::abs(u(rng));
    const auto mu = build_measure_flat(std::vector<double>(coords),
                                       std::vector<double>(w), 2, 1);
    const auto base = c_number(mu, x, t);

    {  // scaling: C_{mu_s}(sx, st) = s^{-n} C_mu(x, t)
      const double s = 1.0 + std::abs(u(rng)) * 2.0;
      std::vector<double> sc(coords.size());
      for (std::size_t k = 0; k < coords.size(); ++k) sc[k] = coords[k] * s;
      const auto mus = build_measure_flat(std::move(sc),
                                          std::vector<double>(w), 2, 1);
      const auto scaled = c_number(mus, Vec{x[0] * s, x[1] * s}, t * s);
      CHECK(scaled.value ==
            doctest::Approx(base.value / s).epsilon(1e-10));
    }
    {  // translation invariance
      const Vec shift{u(rng) * 5.0, u(rng) * 5.0};
      std::vector<double> tc(coords.size());
      for (std::size_t k = 0; k + 1 < coords.size(); k += 2) {
        tc[k] = coords[k] + shift[0];
        tc[k + 1] = coords[k + 1] + shift[1];
      }
      const auto mut = build_measure_flat(std::move(tc),
                                          std::vector<double>(w), 2, 1);
      const auto moved =
          c_number(mut, Vec{x[0] + shift[0], x[1] + shift[1]}, t);
      CHECK(moved.value == doctest::Approx(base.value).epsilon(1e-10));
    }
    {  // rotation equivariance
      const double th = u(rng) * 3.0;
      const double c = std::cos(th), s = std::sin(th);
      std::vector<double> rc(coords.size());
      for (std::size_t k = 0; k + 1 < coords.size(); k += 2) {
        rc[k] = c * coords[k] - s * coords[k + 1];
        rc[k + 1] = s * coords[k] + c * coords[k + 1];
      }
      const auto mur = build_measure_flat(std::move(rc),
                                          std::vector<double>(w), 2, 1);
      const Vec xr{c * x[0] - s * x[1], s * x[0] + c * x[1]};
      const auto rot = c_number(mur, xr, t);
      CHECK(rot.value == doctest::Approx(base.value).epsilon(1e-10));
      REQUIRE(base.vector.has_value());
      REQUIRE(rot.vector.has_value());
      CHECK((*rot.vector)[0] ==
            doctest::Approx(c * (*base.vector)[0] - s * (*base.vector)[1])
                .epsilon(1e-9));
    }
  }
}
