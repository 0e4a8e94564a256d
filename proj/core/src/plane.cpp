#include "gmt/plane.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace gmt {

AffinePlane::AffinePlane(Vec base, std::vector<Vec> frame)
    : base_(std::move(base)), frame_(std::move(frame)) {
  const std::size_t d = base_.size();
  if (frame_.empty() || frame_.size() > d)
    throw std::invalid_argument("AffinePlane: need 1 <= n <= d frame vectors");
  for (auto& f : frame_)
    if (f.size() != d)
      throw std::invalid_argument("AffinePlane: frame dimension mismatch");
  // Modified Gram-Schmidt.
  for (std::size_t i = 0; i < frame_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j)
      axpy(-dot(frame_[i], frame_[j]), frame_[j], frame_[i]);
    const double nrm = norm2(frame_[i]);
    if (nrm < 1e-12)
      throw std::invalid_argument("AffinePlane: rank-deficient frame");
    for (double& v : frame_[i]) v /= nrm;
  }
  for (std::size_t i = 0; i < frame_.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double g = dot(frame_[i], frame_[j]) - (i == j ? 1.0 : 0.0);
      if (std::abs(g) > 1e-10)
        throw std::logic_error("AffinePlane: orthonormalization failed");
    }
}

Vec AffinePlane::coordinates(VecView y) const {
  Vec rel = sub(y, base_);
  Vec t(frame_.size());
  for (std::size_t i = 0; i < frame_.size(); ++i) t[i] = dot(rel, frame_[i]);
  return t;
}

Vec AffinePlane::project(VecView y) const {
  Vec rel = sub(y, base_);
  Vec p = base_;
  for (const Vec& f : frame_) axpy(dot(rel, f), f, p);
  return p;
}

double AffinePlane::distance(VecView y) const {
  Vec rel = sub(y, base_);
  for (const Vec& f : frame_) axpy(-dot(rel, f), f, rel);
  return norm2(rel);
}

Vec AffinePlane::point_at(VecView t) const {
  Vec p = base_;
  for (std::size_t i = 0; i < frame_.size(); ++i) axpy(t[i], frame_[i], p);
  return p;
}

AffinePlane AffinePlane::translated_to(VecView new_base) const {
  AffinePlane out = *this;
  out.base_.assign(new_base.begin(), new_base.end());
  return out;
}

AffinePlane AffinePlane::rotated(std::size_t frame_axis, VecView normal,
                                 double angle) const {
  AffinePlane out = *this;
  Vec& f = out.frame_[frame_axis];
  const double c = std::cos(angle), s = std::sin(angle);
  Vec nf(normal.begin(), normal.end());
  for (std::size_t a = 0; a < f.size(); ++a) {
    const double fa = f[a];
    f[a] = c * fa + s * nf[a];
  }
  return AffinePlane(out.base_, out.frame_);  // re-orthonormalize
}

AffinePlane AffinePlane::offset_along(VecView normal, double amount) const {
  AffinePlane out = *this;
  axpy(amount, normal, out.base_);
  return out;
}

std::vector<Vec> AffinePlane::normal_frame() const {
  const std::size_t d = base_.size();
  std::vector<Vec> basis = frame_;
  std::vector<Vec> normals;
  // Extend to a full orthonormal basis with standard axes.
  for (std::size_t a = 0; a < d && basis.size() < d; ++a) {
    Vec e(d, 0.0);
    e[a] = 1.0;
    for (const Vec& b : basis) axpy(-dot(e, b), b, e);
    const double nrm = norm2(e);
    if (nrm > 1e-8) {
      for (double& v : e) v /= nrm;
      basis.push_back(e);
      normals.push_back(std::move(e));
    }
  }
  if (basis.size() != d)
    throw std::logic_error("AffinePlane: failed to complete normal frame");
  return normals;
}

AffinePlane fit_plane_pca(const DiscreteMeasure& mu,
                          const std::vector<std::uint32_t>& idx,
                          const std::vector<double>& weights_override,
                          std::size_t n_plane, double* residual) {
  const std::size_t d = mu.dim_ambient();
  if (idx.empty())
    throw std::invalid_argument("fit_plane_pca: empty index set");
  if (n_plane < 1 || n_plane >= d + 1)
    throw std::invalid_argument("fit_plane_pca: bad plane dimension");
  auto w_of = [&](std::size_t k) {
    return weights_override.empty() ? mu.weight(idx[k]) : weights_override[k];
  };
  double wsum = 0.0;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const double w = w_of(k);
    wsum += w;
    VecView p = mu.point(idx[k]);
    for (std::size_t a = 0; a < d; ++a) mean[a] += w * p[a];
  }
  if (wsum <= 0.0)
    throw std::invalid_argument("fit_plane_pca: nonpositive total weight");
  mean /= wsum;
  Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const double w = w_of(k);
    VecView p = mu.point(idx[k]);
    Eigen::VectorXd rel(d);
    for (std::size_t a = 0; a < d; ++a) rel[a] = p[a] - mean[a];
    scatter.noalias() += w * rel * rel.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scatter);
  // Eigenvalues ascending; take the top n_plane directions.
  std::vector<Vec> frame;
  for (std::size_t i = 0; i < n_plane; ++i) {
    Eigen::VectorXd v = es.eigenvectors().col(d - 1 - i);
    // Deterministic sign: first nonzero component positive.
    for (std::size_t a = 0; a < d; ++a) {
      if (std::abs(v[a]) > 1e-14) {
        if (v[a] < 0) v = -v;
        break;
      }
    }
    frame.emplace_back(v.data(), v.data() + d);
  }
  if (residual) {
    double r = 0.0;
    for (std::size_t i = 0; i + n_plane < d; ++i) r += std::max(0.0, es.eigenvalues()[i]);
    *residual = r;
  }
  Vec base(mean.data(), mean.data() + d);
  return AffinePlane(std::move(base), std::move(frame));
}

}  // namespace gmt
