#include "gmt/transport.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace gmt {

namespace {

// Sparse net flows keyed by ordered (from, to); values stay positive
// because pushes cancel opposing flow first.
using FlowMap = std::map<std::pair<std::uint32_t, std::uint32_t>, double>;

class BLSolver {
 public:
  explicit BLSolver(const BLProblem& p)
      : p_(p), v_(p.supply.size()), boundary_(static_cast<std::uint32_t>(v_)) {
    excess_ = p_.supply;
    double net = 0.0, scale = 0.0;
    for (double u : excess_) {
      net += u;
      scale = std::max(scale, std::abs(u));
    }
    excess_.push_back(-net);  // boundary balances the system
    scale = std::max(scale, std::abs(net));
    tol_ = scale * 1e-13 + 1e-300;
    potential_.assign(v_ + 1, 0.0);
    parent_.assign(v_ + 1, kNone);
    parent_residual_.assign(v_ + 1, 0);
    dist_.assign(v_ + 1, 0.0);
    done_.assign(v_ + 1, 0);
  }

  double solve() {
    if (v_ == 0) return 0.0;
    const std::size_t max_phases = 10 * (v_ + 1) + 100;
    std::size_t phase = 0;
    while (has_imbalance()) {
      if (++phase > max_phases)
        throw std::runtime_error("bl_distance: flow solver did not converge");
      run_phase();
    }
    double cost = 0.0;
    for (const auto& [arc, f] : flow_) cost += f * arc_cost(arc.first, arc.second);
    return cost;
  }

 private:
  static constexpr std::uint32_t kNone = 0xffffffffu;

  double arc_cost(std::uint32_t a, std::uint32_t b) const {
    if (a == boundary_) return p_.boundary_cost[b];
    if (b == boundary_) return p_.boundary_cost[a];
    return dist(point(a), point(b));
  }

  VecView point(std::uint32_t i) const {
    return {p_.coords.data() + static_cast<std::size_t>(i) * p_.d, p_.d};
  }

  bool has_imbalance() const {
    for (double e : excess_)
      if (std::abs(e) > tol_) return true;
    return false;
  }

  // Multi-source Dijkstra over reduced costs from all excess nodes, then
  // augmentation along the shortest-path forest. Flow moves only on
  // reduced-cost-zero arcs, which preserves complementary slackness.
  void run_phase() {
    const std::uint32_t n = static_cast<std::uint32_t>(v_ + 1);
    std::fill(done_.begin(), done_.end(), 0);
    std::fill(parent_.begin(), parent_.end(), kNone);
    std::fill(parent_residual_.begin(), parent_residual_.end(), 0);
    const double inf = std::numeric_limits<double>::infinity();
    std::fill(dist_.begin(), dist_.end(), inf);
    for (std::uint32_t i = 0; i < n; ++i)
      if (excess_[i] > tol_) dist_[i] = 0.0;

    // Residual reverse arcs (capacity = current flow, exact cost
    // -c(forward), reduced cost 0 by the invariant).
    std::vector<std::vector<std::pair<std::uint32_t, double>>> rev(n);
    for (const auto& [arc, f] : flow_)
      if (f > 0.0)
        rev[arc.second].push_back({arc.first, -arc_cost(arc.first, arc.second)});

    for (std::uint32_t round = 0; round < n; ++round) {
      std::uint32_t u = kNone;
      double best = inf;
      for (std::uint32_t i = 0; i < n; ++i)
        if (!done_[i] && dist_[i] < best) {
          best = dist_[i];
          u = i;
        }
      if (u == kNone) break;
      done_[u] = 1;
      const double pu = potential_[u];
      // Reduced cost c(u,w) + pi_u - pi_w stays >= 0 under pi += D.
      for (std::uint32_t w = 0; w < n; ++w) {
        if (done_[w] || w == u) continue;
        const double rc = std::max(0.0, arc_cost(u, w) + pu - potential_[w]);
        if (best + rc < dist_[w]) {
          dist_[w] = best + rc;
          parent_[w] = u;
          parent_residual_[w] = 0;
        }
      }
      for (const auto& [w, c] : rev[u]) {
        if (done_[w]) continue;
        const double rc = std::max(0.0, c + pu - potential_[w]);
        if (best + rc < dist_[w]) {
          dist_[w] = best + rc;
          parent_[w] = u;
          parent_residual_[w] = 1;
        }
      }
    }

    for (std::uint32_t i = 0; i < n; ++i)
      if (dist_[i] < inf) potential_[i] += dist_[i];

    // Deficits in increasing distance order.
    std::vector<std::uint32_t> deficits;
    for (std::uint32_t i = 0; i < n; ++i)
      if (excess_[i] < -tol_ && dist_[i] < inf) deficits.push_back(i);
    std::sort(deficits.begin(), deficits.end(),
              [this](std::uint32_t a, std::uint32_t b) {
                if (dist_[a] != dist_[b]) return dist_[a] < dist_[b];
                return a < b;
              });

    bool pushed = false;
    for (std::uint32_t t : deficits) {
      while (excess_[t] < -tol_) {
        // Walk to the forest root; a residual tree arc u->w can only
        // carry up to the flow it cancels (flow on w->u).
        std::uint32_t s = t;
        double cap = -excess_[t];
        while (parent_[s] != kNone) {
          const std::uint32_t u = parent_[s];
          if (parent_residual_[s]) {
            auto it = flow_.find({s, u});
            cap = std::min(cap, it == flow_.end() ? 0.0 : it->second);
          }
          s = u;
        }
        cap = std::min(cap, excess_[s]);
        if (!(cap > 0.0)) break;
        // Push cap along the path root->t.
        std::uint32_t w = t;
        while (parent_[w] != kNone) {
          const std::uint32_t u = parent_[w];
          push_flow(u, w, cap);
          w = u;
        }
        excess_[s] -= cap;
        excess_[t] += cap;
        pushed = true;
        if (std::abs(excess_[s]) <= tol_) break;  // source exhausted; retry next phase
      }
    }
    if (!pushed) {
      // No progress is possible only if no source or no deficit remains.
      bool src = false, snk = false;
      for (std::uint32_t i = 0; i < n; ++i) {
        src = src || excess_[i] > tol_;
        snk = snk || excess_[i] < -tol_;
      }
      if (src && snk)
        throw std::runtime_error("bl_distance: stalled flow phase");
      // Residual dust below tolerance: clear it.
      std::fill(excess_.begin(), excess_.end(), 0.0);
    }
  }

  void push_flow(std::uint32_t a, std::uint32_t b, double amount) {
    auto rit = flow_.find({b, a});
    if (rit != flow_.end()) {
      const double cancel = std::min(rit->second, amount);
      rit->second -= cancel;
      amount -= cancel;
      if (rit->second <= 0.0) flow_.erase(rit);
    }
    if (amount > 0.0) flow_[{a, b}] += amount;
  }

  const BLProblem& p_;
  std::size_t v_;
  std::uint32_t boundary_;
  double tol_ = 0.0;
  std::vector<double> excess_;
  std::vector<double> potential_;
  std::vector<double> dist_;
  std::vector<std::uint32_t> parent_;
  std::vector<char> parent_residual_;
  std::vector<char> done_;
  FlowMap flow_;
};

}  // namespace

double solve_bl(const BLProblem& problem) {
  if (problem.supply.size() != problem.boundary_cost.size() ||
      problem.coords.size() != problem.supply.size() * problem.d)
    throw std::invalid_argument("solve_bl: inconsistent problem arrays");
  BLSolver solver(problem);
  return solver.solve();
}

BLProblem make_bl_problem(std::size_t d, const std::vector<double>& coords_mu,
                          const std::vector<double>& weights_mu,
                          const std::vector<double>& coords_nu,
                          const std::vector<double>& weights_nu,
                          const Ball& ball) {
  BLProblem p;
  p.d = d;
  std::map<std::vector<double>, double> merged;
  auto add = [&](const std::vector<double>& coords,
                 const std::vector<double>& weights, double sign) {
    const std::size_t n = weights.size();
    for (std::size_t i = 0; i < n; ++i) {
      VecView pt{coords.data() + i * d, d};
      if (!(dist(pt, ball.center) < ball.radius)) continue;
      merged[std::vector<double>(pt.begin(), pt.end())] += sign * weights[i];
    }
  };
  add(coords_mu, weights_mu, +1.0);
  add(coords_nu, weights_nu, -1.0);
  for (const auto& [pt, u] : merged) {
    p.coords.insert(p.coords.end(), pt.begin(), pt.end());
    p.supply.push_back(u);
    p.boundary_cost.push_back(ball.radius -
                              dist(VecView{pt.data(), d}, ball.center));
  }
  return p;
}

double bl_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                   const Ball& ball) {
  if (mu.dim_ambient() != nu.dim_ambient())
    throw std::invalid_argument("bl_distance: dimension mismatch");
  BLProblem p = make_bl_problem(mu.dim_ambient(), mu.coords(), mu.weights(),
                                nu.coords(), nu.weights(), ball);
  return solve_bl(p);
}

}  // namespace gmt
