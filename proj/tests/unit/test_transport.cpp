#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "gmt/generators.hpp"
#include "gmt/transport.hpp"

using namespace gmt;

namespace {

// Independent LP oracle by exhaustive vertex enumeration: every basic
// feasible point of { |f_i - f_j| <= d_ij, |f_i| <= b_i } solves some
// V x V subsystem of active constraints; enumerate all subsets, keep the
// feasible ones, take the best objective. Exponential, fine for V <= 5.
double bl_vertex_enumeration(const BLProblem& p) {
  const std::size_t v = p.supply.size();
  if (v == 0) return 0.0;
  struct Row {
    std::vector<double> a;
    double rhs;
  };
  std::vector<Row> rows;
  auto point = [&](std::size_t i) {
    return VecView{p.coords.data() + i * p.d, p.d};
  };
  for (std::size_t i = 0; i < v; ++i)
    for (std::size_t j = 0; j < v; ++j) {
      if (i == j) continue;
      Row r{std::vector<double>(v, 0.0), dist(point(i), point(j))};
      r.a[i] = 1.0;
      r.a[j] = -1.0;
      rows.push_back(std::move(r));
    }
  for (std::size_t i = 0; i < v; ++i) {
    Row r1{std::vector<double>(v, 0.0), p.boundary_cost[i]};
    r1.a[i] = 1.0;
    rows.push_back(r1);
    Row r2{std::vector<double>(v, 0.0), p.boundary_cost[i]};
    r2.a[i] = -1.0;
    rows.push_back(r2);
  }
  double best = 0.0;  // f = 0 is feasible
  std::vector<std::size_t> pick(v, 0);
  std::vector<std::size_t> comb;
  // Enumerate all v-subsets of rows.
  std::vector<std::size_t> idx(v);
  for (std::size_t i = 0; i < v; ++i) idx[i] = i;
  auto feasible_value = [&](const std::vector<std::size_t>& subset) {
    // Solve subset as equalities by Gaussian elimination.
    std::vector<std::vector<double>> m(v, std::vector<double>(v + 1, 0.0));
    for (std::size_t r = 0; r < v; ++r) {
      for (std::size_t c = 0; c < v; ++c) m[r][c] = rows[subset[r]].a[c];
      m[r][v] = rows[subset[r]].rhs;
    }
    for (std::size_t col = 0; col < v; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col; r < v; ++r)
        if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
      if (std::abs(m[piv][col]) < 1e-12) return;  // singular subset
      std::swap(m[col], m[piv]);
      for (std::size_t r = 0; r < v; ++r) {
        if (r == col) continue;
        const double fac = m[r][col] / m[col][col];
        for (std::size_t c = col; c <= v; ++c) m[r][c] -= fac * m[col][c];
      }
    }
    std::vector<double> f(v);
    for (std::size_t r = 0; r < v; ++r) f[r] = m[r][v] / m[r][r];
    for (const Row& row : rows) {
      double lhs = 0.0;
      for (std::size_t c = 0; c < v; ++c) lhs += row.a[c] * f[c];
      if (lhs > row.rhs + 1e-9) return;
    }
    double obj = 0.0;
    for (std::size_t c = 0; c < v; ++c) obj += f[c] * p.supply[c];
    best = std::max(best, obj);
  };
  const std::size_t n_rows = rows.size();
  std::vector<std::size_t> subset(v);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start,
                                                          std::size_t depth) {
    if (depth == v) {
      feasible_value(subset);
      return;
    }
    for (std::size_t r = start; r < n_rows; ++r) {
      subset[depth] = r;
      rec(r + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

BLProblem random_problem(std::mt19937_64& rng, std::size_t v) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  BLProblem p;
  p.d = 2;
  const Ball ball({0.0, 0.0}, 2.0);
  for (std::size_t i = 0; i < v; ++i) {
    const double x = u(rng), y = u(rng);
    p.coords.push_back(x);
    p.coords.push_back(y);
    p.supply.push_back(u(rng));
    p.boundary_cost.push_back(ball.radius - std::hypot(x, y));
  }
  return p;
}

}  // namespace

TEST_CASE("bl_distance on identical measures is zero") {
  const auto mu = gen_cantor4(3);
  CHECK(bl_distance(mu, mu, Ball({0.5, 0.5}, 2.0)) == doctest::Approx(0.0));
}

TEST_CASE("bl_distance pinned two-atom examples") {
  const auto a = build_measure({{1.0, 0.0}}, {1.0}, 1);
  const auto b = build_measure({{-1.0, 0.0}}, {1.0}, 1);
  // f(a)=1, f(b)=-1 is feasible and optimal inside the big ball.
  CHECK(bl_distance(a, b, Ball({0.0, 0.0}, 10.0)) == doctest::Approx(2.0));

  const auto c = build_measure({{0.0, 0.0}}, {1.0}, 1);
  const auto e = build_measure({{0.5, 0.0}}, {1.0}, 1);
  CHECK(bl_distance(c, e, Ball({0.0, 0.0}, 1.0)) == doctest::Approx(0.5));
}

TEST_CASE("boundary constraint activates when transport must exit") {
  // One atom against nothing: the only option is shipping to the
  // boundary at cost b = r - |z|.
  const auto a = build_measure({{0.25, 0.0}}, {3.0}, 1);
  const auto zero = multiply_density(a, {0.0});
  CHECK(bl_distance(a, zero, Ball({0.0, 0.0}, 1.0)) ==
        doctest::Approx(3.0 * 0.75));
}

TEST_CASE("points outside the ball are dropped") {
  const auto a = build_measure({{0.1, 0.0}, {5.0, 0.0}}, {1.0, 7.0}, 1);
  const auto b = build_measure({{-0.1, 0.0}, {-5.0, 0.0}}, {1.0, 9.0}, 1);
  CHECK(bl_distance(a, b, Ball({0.0, 0.0}, 1.0)) == doctest::Approx(0.2));
}

TEST_CASE("bl_distance equals vertex enumeration on random instances") {
  std::mt19937_64 rng(41);
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t v = 2 + inst % 4;  // 2..5 points
    const BLProblem p = random_problem(rng, v);
    const double got = solve_bl(p);
    const double want = bl_vertex_enumeration(p);
    CHECK(got == doctest::Approx(want).epsilon(1e-8));
  }
}

TEST_CASE("bl metric properties on ball restrictions") {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  const Ball ball({0.0, 0.0}, 1.0);
  auto rand_measure = [&](std::size_t m) {
    std::vector<double> coords, w;
    for (std::size_t i = 0; i < m; ++i) {
      coords.push_back(u(rng));
      coords.push_back(u(rng));
      w.push_back(0.2 + std::abs(u(rng)));
    }
    return build_measure_flat(std::move(coords), std::move(w), 2, 1);
  };
  for (int inst = 0; inst < 20; ++inst) {
    const auto a = rand_measure(6);
    const auto b = rand_measure(5);
    const auto c = rand_measure(4);
    const double ab = bl_distance(a, b, ball);
    const double ba = bl_distance(b, a, ball);
    const double ac = bl_distance(a, c, ball);
    const double cb = bl_distance(c, b, ball);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-10));
    CHECK(ab <= ac + cb + 1e-9);
    CHECK(bl_distance(a, a, ball) <= 1e-12);
    CHECK(ab > 0.0);
  }
}

TEST_CASE("solver scales to mid-size problems against a sanity bound") {
  // Unit-density segment vs its own shifted copy: the optimal plan moves
  // every unit of mass by exactly the shift (boundary detours are
  // costlier), so dist = mass * shift up to edge effects.
  const double shift = 1e-3;
  std::vector<double> ca, cb, wa, wb;
  for (long i = 0; i <= 2000; ++i) {
    const double x = static_cast<double>(i) * 1e-3;
    ca.push_back(x);
    ca.push_back(0.0);
    wa.push_back(1e-3);
    cb.push_back(x + shift);
    cb.push_back(0.0);
    wb.push_back(1e-3);
  }
  const auto a = build_measure_flat(std::move(ca), std::move(wa), 2, 1);
  const auto b = build_measure_flat(std::move(cb), std::move(wb), 2, 1);
  const double v = bl_distance(a, b, Ball({1.0, 0.0}, 4.0));
  CHECK(v == doctest::Approx(2.001 * shift).epsilon(0.01));
}
