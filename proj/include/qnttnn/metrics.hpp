#ifndef QNTTNN_METRICS_HPP
#define QNTTNN_METRICS_HPP

#include <Eigen/Dense>

#include "qnttnn/tensor.hpp"

namespace qnttnn {

/// |Xhat - X0|_F / |X0|_F with the quaternion Frobenius norm.
double rse(const QTensor3& recovered, const QTensor3& reference);

/// 10 log10(n1 n2 n3 (m1 - m2)^2 / |Xhat - X0|_F^2), where m1 and m2 are the
/// extreme values over the reference's non-zero component planes. Returns
/// +infinity for an exact recovery; throws InvalidArgument for a constant reference.
double psnr(const QTensor3& recovered, const QTensor3& reference);

/// Mean SSIM over frames and the three colour planes (x, y, z): 11x11 Gaussian
/// window, sigma 1.5, K1 = 0.01, K2 = 0.03, dynamic range 1, valid region only.
double ssim(const QTensor3& recovered, const QTensor3& reference);

/// SSIM of one channel pair of equal shape.
double ssim_channel(const Eigen::Ref<const Eigen::MatrixXd>& a,
                    const Eigen::Ref<const Eigen::MatrixXd>& b);

/// Normalized 11x11 Gaussian window with sigma 1.5.
Eigen::MatrixXd ssim_window();

}  // namespace qnttnn

#endif  // QNTTNN_METRICS_HPP
