#ifndef QNTTNN_SPECTRAL_HPP
#define QNTTNN_SPECTRAL_HPP

#include <vector>

#include <Eigen/Dense>

#include "qnttnn/qmatrix.hpp"
#include "qnttnn/tensor.hpp"

namespace qnttnn {

/// Thin SVD A = U diag(sigma) V^T with p = min(m, n) and sigma non-increasing.
struct SvdResult {
  Eigen::MatrixXd u;
  Eigen::VectorXd sigma;
  Eigen::MatrixXd v;
};

/// Divide-and-conquer SVD, recomputed by Jacobi when the reconstruction residual
/// exceeds 1e-12 relative. Throws InvalidArgument on non-finite input.
SvdResult svd(const Eigen::Ref<const Eigen::MatrixXd>& a);

Eigen::VectorXd singular_values(const Eigen::Ref<const Eigen::MatrixXd>& a);

double nuclear_norm(const Eigen::Ref<const Eigen::MatrixXd>& a);

/// Quaternion nuclear norm, computed as a quarter of the nuclear norm of embed_full(q).
double q_nuclear_norm(const QMatrix& q);

/// Quaternion singular values recovered from the embedding spectrum.
struct QuaternionSpectrum {
  std::vector<double> values;  // one representative per quadruple, non-increasing
  double max_spread = 0.0;     // largest intra-quadruple spread
};

/// Groups the sorted singular values of embed_full(q) into consecutive quadruples.
/// Values below zero_rel * sigma_1 are flattened to zero before grouping.
QuaternionSpectrum quaternion_singular_values(const QMatrix& q, double zero_rel = 1e-12);

struct SvtResult {
  Eigen::MatrixXd value;
  double nuclear_norm = 0.0;  // nuclear norm of the thresholded output
};

/// Singular value thresholding: U diag(max(sigma - tau, 0)) V^T.
SvtResult svt_with_norm(const Eigen::Ref<const Eigen::MatrixXd>& a, double tau);
Eigen::MatrixXd svt(const Eigen::Ref<const Eigen::MatrixXd>& a, double tau);

/// Threshold applied to the embedded slice for the prox of
/// |Y|_*^Q + (c/2)|Y - H|_F^{Q,2} with c = beta + rho2.
double qtsvt_threshold(double beta_plus_rho2);

/// Quaternion SVT of one slice through its real embedding.
QMatrix qtsvt_slice(const QMatrix& h, double beta, double rho2);

/// Transform-based quaternion tensor nuclear norm: sum_i |(X x3 T)^(i)|_*^Q.
double qtnn(const QTensor3& x, const Eigen::Ref<const Eigen::MatrixXd>& t);

/// Same quantity evaluated on real-domain slices: (1/4) sum_i |(X^R x3 T)^(i)|_*.
double qtnn_real(const RealTensor3& xr, const Eigen::Ref<const Eigen::MatrixXd>& t);

}  // namespace qnttnn

#endif  // QNTTNN_SPECTRAL_HPP
