#include "gmt/czdecomp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace gmt {

namespace {

Vec shifted(VecView x, const Vec& origin) {
  Vec s(x.size());
  for (std::size_t a = 0; a < x.size(); ++a) s[a] = x[a] - origin[a];
  return s;
}

}  // namespace

bool CZResult::in_cube(VecView x, std::size_t j) const {
  return cubes[j].contains(shifted(x, origin));
}

bool CZResult::in_dilated(VecView x, std::size_t j, double eta) const {
  return cubes[j].dilated_contains(shifted(x, origin), eta);
}

bool CZResult::in_bad_set(VecView x) const {
  for (std::size_t j = 0; j < cubes.size(); ++j)
    if (in_cube(x, j)) return true;
  return false;
}

namespace {

struct Frame {
  Vec origin;
  int root_level = 0;  // side 2^{-root_level} (negative level = big cube)
};

Frame joint_frame(const DiscreteMeasure& nu, const DiscreteMeasure& mu) {
  const std::size_t d = mu.dim_ambient();
  Frame fr;
  fr.origin.assign(d, 0.0);
  double extent = 0.0;
  for (std::size_t a = 0; a < d; ++a) {
    const double lo = std::min(nu.bbox_min()[a], mu.bbox_min()[a]);
    const double hi = std::max(nu.bbox_max()[a], mu.bbox_max()[a]);
    fr.origin[a] = lo;
    extent = std::max(extent, hi - lo);
  }
  int k = 0;
  double side = 1.0;
  while (side <= extent * (1.0 + 1e-9)) {
    side *= 2.0;
    --k;
  }
  // Tighten the root for small supports so levels stay near the data scale.
  while (extent > 0.0 && side * 0.5 > extent * (1.0 + 1e-9)) {
    side *= 0.5;
    ++k;
  }
  fr.root_level = k;
  return fr;
}

// Sum of weights (resp. absolute weights) of points inside the cube /
// its dilation, in the shifted frame.
struct MassScan {
  const DiscreteMeasure* m = nullptr;
  const Vec* origin = nullptr;

  double in_cube(const GridCube& c) const {
    double s = 0.0;
    for (std::size_t i = 0; i < m->size(); ++i)
      if (c.contains(shifted(m->point(i), *origin))) s += m->weight(i);
    return s;
  }
  double abs_in_cube(const GridCube& c) const {
    double s = 0.0;
    for (std::size_t i = 0; i < m->size(); ++i)
      if (c.contains(shifted(m->point(i), *origin))) s += std::abs(m->weight(i));
    return s;
  }
  double in_dilated(const GridCube& c, double eta) const {
    double s = 0.0;
    for (std::size_t i = 0; i < m->size(); ++i)
      if (c.dilated_contains(shifted(m->point(i), *origin), eta))
        s += m->weight(i);
    return s;
  }
  double abs_in_dilated(const GridCube& c, double eta) const {
    double s = 0.0;
    for (std::size_t i = 0; i < m->size(); ++i)
      if (c.dilated_contains(shifted(m->point(i), *origin), eta))
        s += std::abs(m->weight(i));
    return s;
  }
};

}  // namespace

CZResult cz_decompose(const DiscreteMeasure& nu, const DiscreteMeasure& mu,
                      double lambda) {
  const std::size_t d = mu.dim_ambient();
  if (nu.dim_ambient() != d)
    throw std::invalid_argument("cz_decompose: ambient dimension mismatch");
  const double two_d1 = std::pow(2.0, static_cast<double>(d) + 1.0);
  const double threshold = two_d1 * nu.total_variation() / mu.total_mass();
  if (!(lambda > threshold))
    throw std::invalid_argument(
        "cz_decompose: lambda must exceed 2^{d+1} ||nu|| / ||mu||");

  CZResult res;
  res.lambda = lambda;
  const Frame fr = joint_frame(nu, mu);
  res.origin = fr.origin;
  MassScan nu_scan{&nu, &res.origin};
  MassScan mu_scan{&mu, &res.origin};

  GridCube root;
  root.level = fr.root_level;
  root.corner.assign(d, 0);

  // Top-down maximal selection: a cube is selected the first time
  // mu(2D) < (2^{d+1}/lambda) |nu|(D); otherwise split, pruning cubes
  // without nu mass. Descents that pin a single shared location stop.
  std::vector<GridCube> stack{root};
  const int max_level = fr.root_level + 80;
  while (!stack.empty()) {
    GridCube cube = std::move(stack.back());
    stack.pop_back();
    const double nu_abs = nu_scan.abs_in_cube(cube);
    if (nu_abs <= 0.0) continue;
    const double mu_2 = mu_scan.in_dilated(cube, 2.0);
    if (mu_2 < (two_d1 / lambda) * nu_abs) {
      res.cubes.push_back(cube);
      continue;
    }
    // Isolation: every nu point in D and every mu point in 2D sit at one
    // common location; the selection test can never fire below here.
    {
      bool isolated = true;
      Vec loc;
      for (std::size_t i = 0; i < nu.size() && isolated; ++i) {
        Vec s = shifted(nu.point(i), res.origin);
        if (!cube.contains(s)) continue;
        if (loc.empty()) loc = s;
        else if (!std::equal(loc.begin(), loc.end(), s.begin())) isolated = false;
      }
      for (std::size_t i = 0; i < mu.size() && isolated; ++i) {
        Vec s = shifted(mu.point(i), res.origin);
        if (!cube.dilated_contains(s, 2.0)) continue;
        if (!std::equal(loc.begin(), loc.end(), s.begin())) isolated = false;
      }
      if (isolated) continue;
    }
    if (cube.level >= max_level)
      throw std::runtime_error("cz_decompose: descent failed to isolate");
    for (std::size_t child = 0; child < (1ull << d); ++child) {
      GridCube c;
      c.level = cube.level + 1;
      c.corner.resize(d);
      for (std::size_t a = 0; a < d; ++a)
        c.corner[a] = 2 * cube.corner[a] +
                      static_cast<std::int64_t>((child >> a) & 1ull);
      stack.push_back(std::move(c));
    }
  }
  std::sort(res.cubes.begin(), res.cubes.end());

  // f = dnu/dmu outside the bad set, matched by exact location.
  std::map<std::vector<double>, double> mu_at;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    VecView p = mu.point(i);
    mu_at[std::vector<double>(p.begin(), p.end())] += mu.weight(i);
  }
  std::map<std::vector<double>, double> nu_at;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    VecView p = nu.point(i);
    if (res.in_bad_set(p)) continue;
    nu_at[std::vector<double>(p.begin(), p.end())] += nu.weight(i);
  }
  for (std::size_t i = 0; i < nu.size(); ++i) {
    VecView p = nu.point(i);
    if (res.in_bad_set(p)) continue;
    const std::vector<double> key(p.begin(), p.end());
    const auto it = mu_at.find(key);
    if (it == mu_at.end() || it->second == 0.0)
      throw std::runtime_error(
          "cz_decompose: nu point outside the bad set has no mu mass at its "
          "location; refine the discretizations");
    res.f.emplace_back(static_cast<std::uint32_t>(i),
                       nu_at.at(key) / it->second);
  }

  // w_j = 1 on D_j (the selected cubes are disjoint) and the constant
  // bump b_j = (int w_j dnu / mu(R_j)) 1_{R_j}.
  res.w.resize(res.cubes.size());
  res.b.resize(res.cubes.size());
  for (std::size_t j = 0; j < res.cubes.size(); ++j) {
    double integral = 0.0;
    for (std::size_t i = 0; i < nu.size(); ++i)
      if (res.in_cube(nu.point(i), j)) {
        res.w[j].emplace_back(static_cast<std::uint32_t>(i), 1.0);
        integral += nu.weight(i);
      }
    double mu_r = 0.0;
    std::vector<std::uint32_t> support;
    for (std::size_t i = 0; i < mu.size(); ++i)
      if (res.in_dilated(mu.point(i), j, 6.0)) {
        support.push_back(static_cast<std::uint32_t>(i));
        mu_r += mu.weight(i);
      }
    if (mu_r <= 0.0)
      throw std::runtime_error(
          "cz_decompose: mu(R_j) = 0 for selected cube " + std::to_string(j) +
          "; refine mu's sampling");
    const double density = integral / mu_r;
    for (std::uint32_t i : support) res.b[j].emplace_back(i, density);
  }
  return res;
}

std::vector<CZCheck> verify_cz(const CZResult& res, const DiscreteMeasure& nu,
                               const DiscreteMeasure& mu) {
  const std::size_t d = mu.dim_ambient();
  const double two_d1 = std::pow(2.0, static_cast<double>(d) + 1.0);
  const double lambda = res.lambda;
  MassScan nu_scan{&nu, &res.origin};
  MassScan mu_scan{&mu, &res.origin};
  std::vector<CZCheck> checks;

  {  // 1: bounded overlap of {D_j} (disjoint by construction: expect 1)
    CZCheck c{1, "overlap of D_j bounded", true, 0.0, ""};
    for (std::size_t i = 0; i < nu.size(); ++i) {
      int count = 0;
      for (std::size_t j = 0; j < res.cubes.size(); ++j)
        if (res.in_cube(nu.point(i), j)) ++count;
      c.constant = std::max(c.constant, static_cast<double>(count));
    }
    for (std::size_t i = 0; i < mu.size(); ++i) {
      int count = 0;
      for (std::size_t j = 0; j < res.cubes.size(); ++j)
        if (res.in_cube(mu.point(i), j)) ++count;
      c.constant = std::max(c.constant, static_cast<double>(count));
    }
    c.pass = c.constant <= 8.0;
    checks.push_back(std::move(c));
  }
  {  // 2: selection inequality on every D_j
    CZCheck c{2, "mu(2D_j) < (2^{d+1}/lambda)|nu|(D_j)", true, 0.0, ""};
    for (std::size_t j = 0; j < res.cubes.size(); ++j) {
      const double lhs = mu_scan.in_dilated(res.cubes[j], 2.0);
      const double rhs = (two_d1 / lambda) * nu_scan.abs_in_cube(res.cubes[j]);
      if (!(lhs < rhs)) {
        c.pass = false;
        if (c.witness.empty()) c.witness = "j=" + std::to_string(j);
      }
    }
    checks.push_back(std::move(c));
  }
  {  // 3: eta-inequality for eta in {3,4,8}
    CZCheck c{3, "(2^{d+1}/lambda)|nu|(eta D_j) <= mu(2 eta D_j)", true, 0.0,
              ""};
    for (double eta : {3.0, 4.0, 8.0}) {
      for (std::size_t j = 0; j < res.cubes.size(); ++j) {
        const double lhs =
            (two_d1 / lambda) * nu_scan.abs_in_dilated(res.cubes[j], eta);
        const double rhs = mu_scan.in_dilated(res.cubes[j], 2.0 * eta);
        if (lhs > rhs * (1.0 + 1e-12)) {
          c.pass = false;
          if (c.witness.empty())
            c.witness = "j=" + std::to_string(j) + ", eta=" +
                        std::to_string(static_cast<int>(eta));
        }
      }
    }
    checks.push_back(std::move(c));
  }
  {  // 4: nu = f mu off the bad set with |f| <= lambda
    CZCheck c{4, "nu = f mu off U D_j with |f| <= lambda", true, 0.0, ""};
    std::map<std::vector<double>, double> f_at;
    for (const auto& [i, v] : res.f) {
      VecView p = nu.point(i);
      f_at[std::vector<double>(p.begin(), p.end())] = v;
      if (std::abs(v) > lambda) {
        c.pass = false;
        if (c.witness.empty()) c.witness = "nu point " + std::to_string(i);
      }
      c.constant = std::max(c.constant, std::abs(v) / lambda);
    }
    // Every off-set nu location must be covered and reproduce nu = f mu.
    std::map<std::vector<double>, double> nu_loc, mu_loc;
    for (std::size_t i = 0; i < nu.size(); ++i)
      if (!res.in_bad_set(nu.point(i))) {
        VecView p = nu.point(i);
        nu_loc[std::vector<double>(p.begin(), p.end())] += nu.weight(i);
      }
    for (std::size_t i = 0; i < mu.size(); ++i) {
      VecView p = mu.point(i);
      mu_loc[std::vector<double>(p.begin(), p.end())] += mu.weight(i);
    }
    for (const auto& [loc, nw] : nu_loc) {
      const auto fit = f_at.find(loc);
      const auto mit = mu_loc.find(loc);
      if (fit == f_at.end() || mit == mu_loc.end()) {
        c.pass = false;
        if (c.witness.empty()) c.witness = "unmatched location";
        continue;
      }
      if (std::abs(nw - fit->second * mit->second) >
          1e-9 * (std::abs(nw) + 1e-300)) {
        c.pass = false;
        if (c.witness.empty()) c.witness = "density mismatch";
      }
    }
    checks.push_back(std::move(c));
  }
  {  // 5: spt(b_j) inside R_j
    CZCheck c{5, "spt(b_j) in R_j = 6 D_j", true, 0.0, ""};
    for (std::size_t j = 0; j < res.b.size(); ++j)
      for (const auto& [i, v] : res.b[j])
        if (v != 0.0 && !res.in_dilated(mu.point(i), j, 6.0)) {
          c.pass = false;
          if (c.witness.empty())
            c.witness = "j=" + std::to_string(j) + ", mu point " +
                        std::to_string(i);
        }
    checks.push_back(std::move(c));
  }
  {  // 6: constant sign of each b_j
    CZCheck c{6, "each b_j has constant sign", true, 0.0, ""};
    for (std::size_t j = 0; j < res.b.size(); ++j) {
      bool pos = false, neg = false;
      for (const auto& [i, v] : res.b[j]) {
        (void)i;
        pos = pos || v > 0.0;
        neg = neg || v < 0.0;
      }
      if (pos && neg) {
        c.pass = false;
        if (c.witness.empty()) c.witness = "j=" + std::to_string(j);
      }
    }
    checks.push_back(std::move(c));
  }
  {  // 7: int b_j dmu = int w_j dnu
    CZCheck c{7, "int b_j dmu = int w_j dnu", true, 0.0, ""};
    for (std::size_t j = 0; j < res.b.size(); ++j) {
      double lhs = 0.0, rhs = 0.0;
      for (const auto& [i, v] : res.b[j]) lhs += v * mu.weight(i);
      for (const auto& [i, v] : res.w[j]) rhs += v * nu.weight(i);
      const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
      const double err = std::abs(lhs - rhs) / scale;
      c.constant = std::max(c.constant, err);
      if (err > 1e-9) {
        c.pass = false;
        if (c.witness.empty()) c.witness = "j=" + std::to_string(j);
      }
    }
    checks.push_back(std::move(c));
  }
  {  // 8: ||b_j||_inf mu(R_j) <= c |nu|(D_j)
    CZCheck c{8, "||b_j||_inf mu(R_j) <= c |nu|(D_j)", true, 0.0, ""};
    for (std::size_t j = 0; j < res.b.size(); ++j) {
      double binf = 0.0, mu_r = 0.0;
      for (const auto& [i, v] : res.b[j]) {
        binf = std::max(binf, std::abs(v));
        mu_r += mu.weight(i);
      }
      const double nu_abs = nu_scan.abs_in_cube(res.cubes[j]);
      if (nu_abs <= 0.0) continue;
      c.constant = std::max(c.constant, binf * mu_r / nu_abs);
    }
    c.pass = c.constant <= 2.0;
    checks.push_back(std::move(c));
  }
  {  // 9: sum_j |b_j| <= c lambda
    CZCheck c{9, "sum_j |b_j| <= c lambda", true, 0.0, ""};
    std::vector<double> acc(mu.size(), 0.0);
    for (const auto& bj : res.b)
      for (const auto& [i, v] : bj) acc[i] += std::abs(v);
    double worst = 0.0;
    for (double v : acc) worst = std::max(worst, v);
    c.constant = worst / lambda;
    c.pass = c.constant <= 4.0;
    checks.push_back(std::move(c));
  }
  {  // 10: w_j is a [0,1] partition of unity on U D_j
    CZCheck c{10, "0 <= w_j <= 1 and sum_j w_j = 1 on U D_j", true, 0.0, ""};
    std::vector<double> acc(nu.size(), 0.0);
    for (const auto& wj : res.w)
      for (const auto& [i, v] : wj) {
        if (v < -1e-12 || v > 1.0 + 1e-12) c.pass = false;
        acc[i] += v;
      }
    for (std::size_t i = 0; i < nu.size(); ++i) {
      const bool bad = res.in_bad_set(nu.point(i));
      if (bad && std::abs(acc[i] - 1.0) > 1e-12) {
        c.pass = false;
        if (c.witness.empty()) c.witness = "nu point " + std::to_string(i);
      }
      if (!bad && acc[i] != 0.0) {
        c.pass = false;
        if (c.witness.empty()) c.witness = "nu point " + std::to_string(i);
      }
    }
    checks.push_back(std::move(c));
  }
  return checks;
}

void write_cz_json(std::ostream& out, const CZResult& res) {
  nlohmann::json j;
  j["lambda"] = res.lambda;
  j["origin"] = res.origin;
  nlohmann::json cubes = nlohmann::json::array();
  for (const auto& c : res.cubes) {
    nlohmann::json cj;
    cj["level"] = c.level;
    cj["corner"] = c.corner;
    cubes.push_back(std::move(cj));
  }
  j["cubes"] = std::move(cubes);
  auto dump_lists =
      [](const std::vector<std::vector<std::pair<std::uint32_t, double>>>&
             lists) {
        nlohmann::json out_lists = nlohmann::json::array();
        for (const auto& lst : lists) {
          nlohmann::json lj = nlohmann::json::array();
          for (const auto& [i, v] : lst)
            lj.push_back(nlohmann::json::array({i, v}));
          out_lists.push_back(std::move(lj));
        }
        return out_lists;
      };
  j["b"] = dump_lists(res.b);
  j["w"] = dump_lists(res.w);
  nlohmann::json fj = nlohmann::json::array();
  for (const auto& [i, v] : res.f) fj.push_back(nlohmann::json::array({i, v}));
  j["f"] = std::move(fj);
  out << j.dump(1) << "\n";
}

}  // namespace gmt
