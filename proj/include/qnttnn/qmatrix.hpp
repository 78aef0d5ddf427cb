#ifndef QNTTNN_QMATRIX_HPP
#define QNTTNN_QMATRIX_HPP

#include <Eigen/Dense>

#include "qnttnn/quaternion.hpp"

namespace qnttnn {

using Index = Eigen::Index;

/// Default tolerance for exact round trips through the block embedding.
inline constexpr double kStructureTol = 1e-8;

/// Quaternion matrix stored as four real component planes of equal shape.
struct QMatrix {
  Eigen::MatrixXd s;
  Eigen::MatrixXd x;
  Eigen::MatrixXd y;
  Eigen::MatrixXd z;

  QMatrix() = default;
  QMatrix(Index rows, Index cols);
  QMatrix(Eigen::MatrixXd s_, Eigen::MatrixXd x_, Eigen::MatrixXd y_, Eigen::MatrixXd z_);

  static QMatrix zero(Index rows, Index cols) { return QMatrix(rows, cols); }
  static QMatrix identity(Index n);

  Index rows() const { return s.rows(); }
  Index cols() const { return s.cols(); }

  Quaternion at(Index i, Index j) const { return {s(i, j), x(i, j), y(i, j), z(i, j)}; }
  void set(Index i, Index j, const Quaternion& q);

  /// Quaternion Frobenius norm sqrt(|Xs|^2 + |Xx|^2 + |Xy|^2 + |Xz|^2).
  double norm() const;
  double squared_norm() const;

  /// Conjugate transpose X^H.
  QMatrix adjoint() const;

  QMatrix& operator+=(const QMatrix& o);
  QMatrix& operator-=(const QMatrix& o);
  QMatrix& operator*=(double c);
};

QMatrix operator+(QMatrix a, const QMatrix& b);
QMatrix operator-(QMatrix a, const QMatrix& b);
QMatrix operator*(double c, QMatrix a);

/// Quaternion matrix product; throws DimensionError on inner mismatch.
QMatrix qmat_multiply(const QMatrix& a, const QMatrix& b);
QMatrix operator*(const QMatrix& a, const QMatrix& b);

/// Full 4n1 x 4n2 block real representation:
///   [ Xs -Xx -Xy -Xz ]
///   [ Xx  Xs -Xz  Xy ]
///   [ Xy  Xz  Xs -Xx ]
///   [ Xz -Xy  Xx  Xs ]
Eigen::MatrixXd embed_full(const QMatrix& q);

/// Column representation [Xs; Xx; Xy; Xz] of shape 4n1 x n2.
Eigen::MatrixXd embed_col(const QMatrix& q);

/// Inverse of embed_col.
QMatrix unembed_col(const Eigen::Ref<const Eigen::MatrixXd>& c);

struct Unembedded {
  QMatrix value;
  double max_deviation = 0.0;
};

/// Projects a 4n1 x 4n2 real matrix onto the embedded quaternion manifold.
/// Every component is the signed mean of its four block occurrences;
/// max_deviation is the largest distance of an occurrence from that mean.
Unembedded project_structure(const Eigen::Ref<const Eigen::MatrixXd>& r);

/// Like project_structure, but throws StructureViolation when the deviation exceeds tol.
QMatrix unembed_full(const Eigen::Ref<const Eigen::MatrixXd>& r, double tol = kStructureTol);

}  // namespace qnttnn

#endif  // QNTTNN_QMATRIX_HPP
