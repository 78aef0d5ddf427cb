#include "qnttnn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qnttnn/errors.hpp"

namespace qnttnn {

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

void require_same(const QTensor3& a, const QTensor3& b, const char* what) {
  if (!a.same_shape(b)) throw DimensionError(std::string(what) + ": shape mismatch");
}

Eigen::VectorXd gaussian_1d() {
  Eigen::VectorXd g(kWindow);
  const int half = kWindow / 2;
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - half;
    g[i] = std::exp(-d * d / (2.0 * kSigma * kSigma));
  }
  return g / g.sum();
}

// Separable 'valid' correlation with the Gaussian window.
Eigen::MatrixXd filter_valid(const Eigen::MatrixXd& a, const Eigen::VectorXd& g) {
  const Index rows = a.rows() - kWindow + 1;
  const Index cols = a.cols() - kWindow + 1;
  Eigen::MatrixXd tmp(rows, a.cols());
  for (Index i = 0; i < rows; ++i) tmp.row(i) = g.transpose() * a.middleRows(i, kWindow);
  Eigen::MatrixXd out(rows, cols);
  for (Index j = 0; j < cols; ++j) out.col(j) = tmp.middleCols(j, kWindow) * g;
  return out;
}

}  // namespace

double rse(const QTensor3& recovered, const QTensor3& reference) {
  require_same(recovered, reference, "rse");
  const double ref = reference.norm();
  if (ref == 0.0) throw InvalidArgument("rse: reference tensor is zero");
  return (recovered - reference).norm() / ref;
}

double psnr(const QTensor3& recovered, const QTensor3& reference) {
  require_same(recovered, reference, "psnr");
  double m1 = -std::numeric_limits<double>::infinity();
  double m2 = std::numeric_limits<double>::infinity();
  for (int c = 0; c < 4; ++c) {
    const Eigen::VectorXd& v = reference.plane(c).values();
    if (v.size() == 0 || v.cwiseAbs().maxCoeff() == 0.0) continue;
    m1 = std::max(m1, v.maxCoeff());
    m2 = std::min(m2, v.minCoeff());
  }
  if (!(m1 > m2)) throw InvalidArgument("psnr: reference tensor is constant");
  const double err = (recovered - reference).squared_norm();
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  const double entries =
      static_cast<double>(reference.n1()) * reference.n2() * static_cast<double>(reference.n3());
  return 10.0 * std::log10(entries * (m1 - m2) * (m1 - m2) / err);
}

Eigen::MatrixXd ssim_window() {
  const Eigen::VectorXd g = gaussian_1d();
  return g * g.transpose();
}

double ssim_channel(const Eigen::Ref<const Eigen::MatrixXd>& a,
                    const Eigen::Ref<const Eigen::MatrixXd>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("ssim: channel shape mismatch");
  }
  if (a.rows() < kWindow || a.cols() < kWindow) {
    throw InvalidArgument("ssim: frames must be at least 11x11");
  }
  const Eigen::VectorXd g = gaussian_1d();
  const Eigen::MatrixXd x = a;
  const Eigen::MatrixXd y = b;
  const Eigen::ArrayXXd mu_x = filter_valid(x, g).array();
  const Eigen::ArrayXXd mu_y = filter_valid(y, g).array();
  const Eigen::ArrayXXd xx = filter_valid(x.cwiseProduct(x), g).array() - mu_x.square();
  const Eigen::ArrayXXd yy = filter_valid(y.cwiseProduct(y), g).array() - mu_y.square();
  const Eigen::ArrayXXd xy = filter_valid(x.cwiseProduct(y), g).array() - mu_x * mu_y;
  const Eigen::ArrayXXd map = ((2.0 * mu_x * mu_y + kC1) * (2.0 * xy + kC2)) /
                              ((mu_x.square() + mu_y.square() + kC1) * (xx + yy + kC2));
  return map.mean();
}

double ssim(const QTensor3& recovered, const QTensor3& reference) {
  require_same(recovered, reference, "ssim");
  if (reference.n3() == 0) throw InvalidArgument("ssim: empty tensor");
  double total = 0.0;
  for (Index k = 0; k < reference.n3(); ++k) {
    double frame = 0.0;
    for (int c = 1; c <= 3; ++c) {
      frame += ssim_channel(recovered.plane(c).slice(k), reference.plane(c).slice(k));
    }
    total += frame / 3.0;
  }
  return total / static_cast<double>(reference.n3());
}

}  // namespace qnttnn
