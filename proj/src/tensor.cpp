#include "qnttnn/tensor.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "qnttnn/errors.hpp"

namespace qnttnn {

RealTensor3::RealTensor3(Index rows, Index cols, Index depth)
    : rows_(rows), cols_(cols), depth_(depth), values_(Eigen::VectorXd::Zero(rows * cols * depth)) {
  if (rows < 0 || cols < 0 || depth < 0) {
    throw DimensionError("RealTensor3: negative dimension");
  }
}

RealTensor3& RealTensor3::operator+=(const RealTensor3& o) {
  if (!same_shape(o)) throw DimensionError("RealTensor3 +=: shape mismatch");
  values_ += o.values_;
  return *this;
}

RealTensor3& RealTensor3::operator-=(const RealTensor3& o) {
  if (!same_shape(o)) throw DimensionError("RealTensor3 -=: shape mismatch");
  values_ -= o.values_;
  return *this;
}

RealTensor3& RealTensor3::operator*=(double c) {
  values_ *= c;
  return *this;
}

RealTensor3 operator+(RealTensor3 a, const RealTensor3& b) { return a += b; }
RealTensor3 operator-(RealTensor3 a, const RealTensor3& b) { return a -= b; }
RealTensor3 operator*(double c, RealTensor3 a) { return a *= c; }

QTensor3::QTensor3(Index n1, Index n2, Index n3)
    : s(n1, n2, n3), x(n1, n2, n3), y(n1, n2, n3), z(n1, n2, n3) {}

void QTensor3::set(Index i, Index j, Index k, const Quaternion& q) {
  s(i, j, k) = q.s;
  x(i, j, k) = q.x;
  y(i, j, k) = q.y;
  z(i, j, k) = q.z;
}

QMatrix QTensor3::frontal_slice(Index k) const {
  return QMatrix(s.slice(k), x.slice(k), y.slice(k), z.slice(k));
}

void QTensor3::set_frontal_slice(Index k, const QMatrix& q) {
  if (q.rows() != n1() || q.cols() != n2()) {
    throw DimensionError("set_frontal_slice: shape mismatch");
  }
  s.slice(k) = q.s;
  x.slice(k) = q.x;
  y.slice(k) = q.y;
  z.slice(k) = q.z;
}

double QTensor3::squared_norm() const {
  return s.squared_norm() + x.squared_norm() + y.squared_norm() + z.squared_norm();
}

double QTensor3::norm() const { return std::sqrt(squared_norm()); }

RealTensor3& QTensor3::plane(int c) {
  switch (c) {
    case 0: return s;
    case 1: return x;
    case 2: return y;
    case 3: return z;
    default: throw InvalidArgument("QTensor3::plane: component index out of range");
  }
}

const RealTensor3& QTensor3::plane(int c) const {
  return const_cast<QTensor3*>(this)->plane(c);
}

QTensor3 operator-(const QTensor3& a, const QTensor3& b) {
  if (!a.same_shape(b)) throw DimensionError("QTensor3 -: shape mismatch");
  QTensor3 out = a;
  for (int c = 0; c < 4; ++c) out.plane(c) -= b.plane(c);
  return out;
}

QTensor3 operator*(double c, QTensor3 a) {
  for (int p = 0; p < 4; ++p) a.plane(p) *= c;
  return a;
}

Mask::Mask(Index n1, Index n2, Index n3, bool value)
    : n1_(n1), n2_(n2), n3_(n3), bits_(static_cast<std::size_t>(n1 * n2 * n3), value ? 1 : 0) {}

Index Mask::count() const {
  return static_cast<Index>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::uint64_t Mask::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : bits_) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Mask Mask::complement() const {
  Mask out = *this;
  for (auto& b : out.bits_) b = b ? 0 : 1;
  return out;
}

Eigen::MatrixXd mode3_unfold(const RealTensor3& a) { return a.tubes().transpose(); }

RealTensor3 mode3_fold(const Eigen::Ref<const Eigen::MatrixXd>& unfolded, Index rows, Index cols) {
  if (unfolded.cols() != rows * cols) {
    throw DimensionError("mode3_fold: column count does not match rows*cols");
  }
  RealTensor3 out(rows, cols, unfolded.rows());
  out.tubes() = unfolded.transpose();
  return out;
}

RealTensor3 mode3_product(const RealTensor3& a, const Eigen::Ref<const Eigen::MatrixXd>& d) {
  if (d.cols() != a.depth()) {
    throw DimensionError("mode3_product: matrix has " + std::to_string(d.cols()) +
                         " columns, tensor depth is " + std::to_string(a.depth()));
  }
  // fold(D * unfold(A)) computed directly on the tube view.
  RealTensor3 out(a.rows(), a.cols(), d.rows());
  out.tubes().noalias() = a.tubes() * d.transpose();
  return out;
}

QTensor3 mode3_product(const QTensor3& a, const Eigen::Ref<const Eigen::MatrixXd>& d) {
  QTensor3 out;
  out.s = mode3_product(a.s, d);
  out.x = mode3_product(a.x, d);
  out.y = mode3_product(a.y, d);
  out.z = mode3_product(a.z, d);
  return out;
}

RealTensor3 embed_tensor(const QTensor3& a) {
  RealTensor3 out(4 * a.n1(), 4 * a.n2(), a.n3());
  for (Index k = 0; k < a.n3(); ++k) {
    out.slice(k) = embed_full(a.frontal_slice(k));
  }
  return out;
}

UnembeddedTensor unembed_tensor(const RealTensor3& r) {
  if (r.rows() % 4 != 0 || r.cols() % 4 != 0) {
    throw DimensionError("unembed_tensor: slice dimensions not divisible by 4");
  }
  UnembeddedTensor out{QTensor3(r.rows() / 4, r.cols() / 4, r.depth()), 0.0};
  for (Index k = 0; k < r.depth(); ++k) {
    Unembedded u = project_structure(r.slice(k));
    out.value.set_frontal_slice(k, u.value);
    out.max_deviation = std::max(out.max_deviation, u.max_deviation);
  }
  return out;
}

std::vector<std::uint8_t> broadcast_mask(const Mask& mask) {
  const Index n1 = mask.n1();
  const Index n2 = mask.n2();
  const Index rows = 4 * n1;
  const Index cols = 4 * n2;
  std::vector<std::uint8_t> out(static_cast<std::size_t>(rows * cols * mask.n3()), 0);
  for (Index k = 0; k < mask.n3(); ++k) {
    for (Index j = 0; j < n2; ++j) {
      for (Index i = 0; i < n1; ++i) {
        if (!mask(i, j, k)) continue;
        for (Index bc = 0; bc < 4; ++bc) {
          for (Index br = 0; br < 4; ++br) {
            out[static_cast<std::size_t>((k * cols + bc * n2 + j) * rows + br * n1 + i)] = 1;
          }
        }
      }
    }
  }
  return out;
}

QTensor3 project_mask(const QTensor3& a, const QTensor3& reference, const Mask& mask) {
  if (!a.same_shape(reference) || a.n1() != mask.n1() || a.n2() != mask.n2() ||
      a.n3() != mask.n3()) {
    throw DimensionError("project_mask: shape mismatch");
  }
  QTensor3 out = a;
  const auto& bits = mask.bits();
  for (int c = 0; c < 4; ++c) {
    Eigen::VectorXd& dst = out.plane(c).values();
    const Eigen::VectorXd& ref = reference.plane(c).values();
    for (Index idx = 0; idx < dst.size(); ++idx) {
      if (bits[static_cast<std::size_t>(idx)]) dst[idx] = ref[idx];
    }
  }
  return out;
}

RealTensor3 project_mask(const RealTensor3& a, const RealTensor3& reference, const Mask& mask) {
  if (!a.same_shape(reference) || a.rows() != 4 * mask.n1() || a.cols() != 4 * mask.n2() ||
      a.depth() != mask.n3()) {
    throw DimensionError("project_mask: shape mismatch");
  }
  const std::vector<std::uint8_t> bits = broadcast_mask(mask);
  RealTensor3 out = a;
  Eigen::VectorXd& dst = out.values();
  const Eigen::VectorXd& ref = reference.values();
  for (Index idx = 0; idx < dst.size(); ++idx) {
    if (bits[static_cast<std::size_t>(idx)]) dst[idx] = ref[idx];
  }
  return out;
}

}  // namespace qnttnn
