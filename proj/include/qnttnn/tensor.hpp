#ifndef QNTTNN_TENSOR_HPP
#define QNTTNN_TENSOR_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "qnttnn/qmatrix.hpp"

namespace qnttnn {

/// Dense real third-order tensor. Frontal slices are stored contiguously and
/// column-major, so slice(k) is a zero-copy Eigen view.
class RealTensor3 {
 public:
  RealTensor3() = default;
  RealTensor3(Index rows, Index cols, Index depth);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index depth() const { return depth_; }
  Index slice_size() const { return rows_ * cols_; }
  Index size() const { return values_.size(); }

  double& operator()(Index i, Index j, Index k) { return values_[k * slice_size() + j * rows_ + i]; }
  double operator()(Index i, Index j, Index k) const {
    return values_[k * slice_size() + j * rows_ + i];
  }

  Eigen::Map<Eigen::MatrixXd> slice(Index k) {
    return {values_.data() + k * slice_size(), rows_, cols_};
  }
  Eigen::Map<const Eigen::MatrixXd> slice(Index k) const {
    return {values_.data() + k * slice_size(), rows_, cols_};
  }

  /// (rows*cols) x depth view; column k is the vectorized k-th slice.
  Eigen::Map<Eigen::MatrixXd> tubes() { return {values_.data(), slice_size(), depth_}; }
  Eigen::Map<const Eigen::MatrixXd> tubes() const {
    return {values_.data(), slice_size(), depth_};
  }

  Eigen::VectorXd& values() { return values_; }
  const Eigen::VectorXd& values() const { return values_; }

  double squared_norm() const { return values_.squaredNorm(); }
  double norm() const { return values_.norm(); }

  bool same_shape(const RealTensor3& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && depth_ == o.depth_;
  }

  RealTensor3& operator+=(const RealTensor3& o);
  RealTensor3& operator-=(const RealTensor3& o);
  RealTensor3& operator*=(double c);

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  Index depth_ = 0;
  Eigen::VectorXd values_;
};

RealTensor3 operator+(RealTensor3 a, const RealTensor3& b);
RealTensor3 operator-(RealTensor3 a, const RealTensor3& b);
RealTensor3 operator*(double c, RealTensor3 a);

/// Third-order quaternion tensor as four real component tensors.
struct QTensor3 {
  RealTensor3 s;
  RealTensor3 x;
  RealTensor3 y;
  RealTensor3 z;

  QTensor3() = default;
  QTensor3(Index n1, Index n2, Index n3);

  Index n1() const { return s.rows(); }
  Index n2() const { return s.cols(); }
  Index n3() const { return s.depth(); }

  Quaternion at(Index i, Index j, Index k) const {
    return {s(i, j, k), x(i, j, k), y(i, j, k), z(i, j, k)};
  }
  void set(Index i, Index j, Index k, const Quaternion& q);

  QMatrix frontal_slice(Index k) const;
  void set_frontal_slice(Index k, const QMatrix& q);

  double squared_norm() const;
  double norm() const;

  bool same_shape(const QTensor3& o) const { return s.same_shape(o.s); }

  RealTensor3& plane(int c);
  const RealTensor3& plane(int c) const;
};

QTensor3 operator-(const QTensor3& a, const QTensor3& b);
QTensor3 operator*(double c, QTensor3 a);

/// Observed-entry set over quaternion indices (i, j, k); true means observed.
class Mask {
 public:
  Mask() = default;
  Mask(Index n1, Index n2, Index n3, bool value = false);

  Index n1() const { return n1_; }
  Index n2() const { return n2_; }
  Index n3() const { return n3_; }
  Index size() const { return static_cast<Index>(bits_.size()); }

  bool operator()(Index i, Index j, Index k) const { return bits_[index(i, j, k)] != 0; }
  void set(Index i, Index j, Index k, bool v) { bits_[index(i, j, k)] = v ? 1 : 0; }

  Index count() const;
  /// FNV-1a hash over the entries in storage order.
  std::uint64_t hash() const;

  Mask complement() const;
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  friend bool operator==(const Mask&, const Mask&) = default;

 private:
  Index index(Index i, Index j, Index k) const { return (k * n2_ + j) * n1_ + i; }

  Index n1_ = 0;
  Index n2_ = 0;
  Index n3_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// d x (rows*cols) matrix whose row l is the vectorized l-th frontal slice.
Eigen::MatrixXd mode3_unfold(const RealTensor3& a);
RealTensor3 mode3_fold(const Eigen::Ref<const Eigen::MatrixXd>& unfolded, Index rows, Index cols);

/// (A x3 D)_{ijl} = sum_k A_{ijk} d_{lk}; D is r x depth.
RealTensor3 mode3_product(const RealTensor3& a, const Eigen::Ref<const Eigen::MatrixXd>& d);
QTensor3 mode3_product(const QTensor3& a, const Eigen::Ref<const Eigen::MatrixXd>& d);

/// Slice-wise full block embedding, shape (4n1, 4n2, n3).
RealTensor3 embed_tensor(const QTensor3& a);

struct UnembeddedTensor {
  QTensor3 value;
  double max_deviation = 0.0;
};

/// Slice-wise structure projection; reports the maximum deviation instead of throwing.
UnembeddedTensor unembed_tensor(const RealTensor3& r);

/// Real-domain mask: an observed quaternion entry pins all 16 positions of its block.
std::vector<std::uint8_t> broadcast_mask(const Mask& mask);

/// P_Omega(reference) + P_Omega^c(a).
QTensor3 project_mask(const QTensor3& a, const QTensor3& reference, const Mask& mask);
RealTensor3 project_mask(const RealTensor3& a, const RealTensor3& reference, const Mask& mask);

}  // namespace qnttnn

#endif  // QNTTNN_TENSOR_HPP
