#include "qnttnn/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "qnttnn/errors.hpp"

namespace qnttnn {

namespace {

constexpr double kSvdResidualTol = 1e-12;

void require_finite(const Eigen::Ref<const Eigen::MatrixXd>& a) {
  if (!a.allFinite()) {
    throw InvalidArgument("svd: input contains non-finite entries");
  }
}

}  // namespace

SvdResult svd(const Eigen::Ref<const Eigen::MatrixXd>& a) {
  require_finite(a);
  Eigen::BDCSVD<Eigen::MatrixXd> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdResult out{dec.matrixU(), dec.singularValues(), dec.matrixV()};
  // Divide and conquer can lose accuracy on clustered singular values, which the
  // embedding produces in quadruples; recompute with one-sided Jacobi then.
  const double residual = (out.u * out.sigma.asDiagonal() * out.v.transpose() - a).norm();
  if (!(residual <= kSvdResidualTol * std::max(1.0, a.norm()))) {
    Eigen::JacobiSVD<Eigen::MatrixXd> jac(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out = {jac.matrixU(), jac.singularValues(), jac.matrixV()};
  }
  return out;
}

Eigen::VectorXd singular_values(const Eigen::Ref<const Eigen::MatrixXd>& a) {
  if (a.size() == 0) return Eigen::VectorXd();
  return svd(a).sigma;
}

double nuclear_norm(const Eigen::Ref<const Eigen::MatrixXd>& a) {
  if (a.size() == 0) return 0.0;
  return singular_values(a).sum();
}

double q_nuclear_norm(const QMatrix& q) { return 0.25 * nuclear_norm(embed_full(q)); }

QuaternionSpectrum quaternion_singular_values(const QMatrix& q, double zero_rel) {
  QuaternionSpectrum out;
  if (q.rows() == 0 || q.cols() == 0) return out;
  Eigen::VectorXd sv = singular_values(embed_full(q));
  const double floor = zero_rel * sv[0];
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv[i] < floor) sv[i] = 0.0;
  }
  for (Index g = 0; g + 3 < sv.size(); g += 4) {
    const auto quad = sv.segment(g, 4);
    out.values.push_back(quad[0]);
    out.max_spread = std::max(out.max_spread, quad.maxCoeff() - quad.minCoeff());
  }
  return out;
}

SvtResult svt_with_norm(const Eigen::Ref<const Eigen::MatrixXd>& a, double tau) {
  if (!(tau >= 0.0)) {
    throw InvalidArgument("svt: threshold must be non-negative");
  }
  if (a.size() == 0) return {a, 0.0};
  SvdResult dec = svd(a);
  const Eigen::VectorXd shrunk = (dec.sigma.array() - tau).max(0.0).matrix();
  Index keep = 0;
  while (keep < shrunk.size() && shrunk[keep] > 0.0) ++keep;
  SvtResult out;
  out.value = dec.u.leftCols(keep) * shrunk.head(keep).asDiagonal() * dec.v.leftCols(keep).transpose();
  out.nuclear_norm = shrunk.sum();
  return out;
}

Eigen::MatrixXd svt(const Eigen::Ref<const Eigen::MatrixXd>& a, double tau) {
  return svt_with_norm(a, tau).value;
}

double qtsvt_threshold(double beta_plus_rho2) {
  if (!(beta_plus_rho2 > 0.0)) {
    throw InvalidArgument("qtsvt: beta + rho2 must be positive");
  }
  return 1.0 / beta_plus_rho2;
}

QMatrix qtsvt_slice(const QMatrix& h, double beta, double rho2) {
  const double tau = qtsvt_threshold(beta + rho2);
  return project_structure(svt(embed_full(h), tau)).value;
}

double qtnn(const QTensor3& x, const Eigen::Ref<const Eigen::MatrixXd>& t) {
  const QTensor3 z = mode3_product(x, t);
  double total = 0.0;
  for (Index i = 0; i < z.n3(); ++i) total += q_nuclear_norm(z.frontal_slice(i));
  return total;
}

double qtnn_real(const RealTensor3& xr, const Eigen::Ref<const Eigen::MatrixXd>& t) {
  const RealTensor3 z = mode3_product(xr, t);
  double total = 0.0;
  for (Index i = 0; i < z.depth(); ++i) total += nuclear_norm(z.slice(i));
  return 0.25 * total;
}

}  // namespace qnttnn
