#ifndef QNTTNN_TESTS_SUPPORT_HPP
#define QNTTNN_TESTS_SUPPORT_HPP

#include <cmath>
#include <cstdint>
#include <limits>

#include <Eigen/Dense>

#include "qnttnn/qmatrix.hpp"
#include "qnttnn/random.hpp"
#include "qnttnn/tensor.hpp"
#include "qnttnn/transform.hpp"

namespace qnttnn::testing {

inline Quaternion random_quaternion(SplitMix64& rng) {
  return {rng.normal(), rng.normal(), rng.normal(), rng.normal()};
}

inline QMatrix random_qmatrix(Index rows, Index cols, SplitMix64& rng) {
  QMatrix q(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) q.set(i, j, random_quaternion(rng));
  return q;
}

inline QTensor3 random_qtensor(Index n1, Index n2, Index n3, SplitMix64& rng) {
  QTensor3 t(n1, n2, n3);
  for (Index k = 0; k < n3; ++k) t.set_frontal_slice(k, random_qmatrix(n1, n2, rng));
  return t;
}

inline Eigen::MatrixXd random_matrix(Index rows, Index cols, SplitMix64& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

inline RealTensor3 random_real_tensor(Index rows, Index cols, Index depth, SplitMix64& rng) {
  RealTensor3 t(rows, cols, depth);
  for (Index i = 0; i < t.size(); ++i) t.values()[i] = rng.normal();
  return t;
}

/// Orthonormalizes the rows of a random r x n matrix by Householder QR.
inline Eigen::MatrixXd random_semi_orthogonal(Index r, Index n, SplitMix64& rng) {
  const Eigen::MatrixXd a = random_matrix(n, r, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, r);
  return q.transpose();
}

inline Index uniform_index(SplitMix64& rng, Index lo, Index hi) {
  return lo + static_cast<Index>(rng.uniform() * static_cast<double>(hi - lo + 1));
}

/// Quaternion product computed entry by entry from Hamilton products.
inline QMatrix loop_multiply(const QMatrix& a, const QMatrix& b) {
  QMatrix out(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < b.cols(); ++j) {
      Quaternion acc;
      for (Index l = 0; l < a.cols(); ++l) acc += hamilton_product(a.at(i, l), b.at(l, j));
      out.set(i, j, acc);
    }
  }
  return out;
}

inline double max_abs_diff(const QMatrix& a, const QMatrix& b) {
  return std::max({(a.s - b.s).cwiseAbs().maxCoeff(), (a.x - b.x).cwiseAbs().maxCoeff(),
                   (a.y - b.y).cwiseAbs().maxCoeff(), (a.z - b.z).cwiseAbs().maxCoeff()});
}

inline double max_abs_diff(const QTensor3& a, const QTensor3& b) {
  double worst = 0.0;
  for (int c = 0; c < 4; ++c) {
    worst = std::max(worst, (a.plane(c).values() - b.plane(c).values()).cwiseAbs().maxCoeff());
  }
  return worst;
}

/// Brute-force minimizer of (c/8)(z-g)^2 + (beta/8)(phi(z)-y)^2 on [lo, hi]:
/// dense grid, then golden-section refinement around the best node.
inline double grid_minimize(double g, double y, double c, double beta, const Activation& phi,
                            double lo = -10.0, double hi = 10.0, int nodes = 20001) {
  auto h = [&](double z) {
    const double d = z - g;
    const double r = phi.value(z) - y;
    return c / 8.0 * d * d + beta / 8.0 * r * r;
  };
  const double step = (hi - lo) / (nodes - 1);
  double best_z = lo;
  double best_h = h(lo);
  for (int n = 1; n < nodes; ++n) {
    const double z = lo + n * step;
    const double v = h(z);
    if (v < best_h) {
      best_h = v;
      best_z = z;
    }
  }
  double a = std::max(lo, best_z - step);
  double b = std::min(hi, best_z + step);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    const double m1 = b - ratio * (b - a);
    const double m2 = a + ratio * (b - a);
    if (h(m1) < h(m2)) {
      b = m2;
    } else {
      a = m1;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace qnttnn::testing

#endif  // QNTTNN_TESTS_SUPPORT_HPP
