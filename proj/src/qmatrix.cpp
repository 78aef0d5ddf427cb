#include "qnttnn/qmatrix.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "qnttnn/errors.hpp"

namespace qnttnn {

namespace {

struct BlockSite {
  int row;
  int col;
  double sign;
};

// Signed positions of each component (s, x, y, z) in the 4x4 block layout.
constexpr std::array<std::array<BlockSite, 4>, 4> kSites = {{
    {{{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}, {3, 3, 1.0}}},
    {{{1, 0, 1.0}, {0, 1, -1.0}, {2, 3, -1.0}, {3, 2, 1.0}}},
    {{{2, 0, 1.0}, {0, 2, -1.0}, {1, 3, 1.0}, {3, 1, -1.0}}},
    {{{3, 0, 1.0}, {0, 3, -1.0}, {1, 2, -1.0}, {2, 1, 1.0}}},
}};

void require_same_shape(const QMatrix& a, const QMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": shape mismatch");
  }
}

}  // namespace

QMatrix::QMatrix(Index rows, Index cols)
    : s(Eigen::MatrixXd::Zero(rows, cols)),
      x(Eigen::MatrixXd::Zero(rows, cols)),
      y(Eigen::MatrixXd::Zero(rows, cols)),
      z(Eigen::MatrixXd::Zero(rows, cols)) {}

QMatrix::QMatrix(Eigen::MatrixXd s_, Eigen::MatrixXd x_, Eigen::MatrixXd y_, Eigen::MatrixXd z_)
    : s(std::move(s_)), x(std::move(x_)), y(std::move(y_)), z(std::move(z_)) {
  const auto same = [this](const Eigen::MatrixXd& m) {
    return m.rows() == s.rows() && m.cols() == s.cols();
  };
  if (!same(x) || !same(y) || !same(z)) {
    throw DimensionError("QMatrix: component planes differ in shape");
  }
}

QMatrix QMatrix::identity(Index n) {
  QMatrix q(n, n);
  q.s.setIdentity();
  return q;
}

void QMatrix::set(Index i, Index j, const Quaternion& q) {
  s(i, j) = q.s;
  x(i, j) = q.x;
  y(i, j) = q.y;
  z(i, j) = q.z;
}

double QMatrix::squared_norm() const {
  return s.squaredNorm() + x.squaredNorm() + y.squaredNorm() + z.squaredNorm();
}

double QMatrix::norm() const { return std::sqrt(squared_norm()); }

QMatrix QMatrix::adjoint() const {
  return QMatrix(s.transpose(), -x.transpose(), -y.transpose(), -z.transpose());
}

QMatrix& QMatrix::operator+=(const QMatrix& o) {
  require_same_shape(*this, o, "QMatrix +=");
  s += o.s;
  x += o.x;
  y += o.y;
  z += o.z;
  return *this;
}

QMatrix& QMatrix::operator-=(const QMatrix& o) {
  require_same_shape(*this, o, "QMatrix -=");
  s -= o.s;
  x -= o.x;
  y -= o.y;
  z -= o.z;
  return *this;
}

QMatrix& QMatrix::operator*=(double c) {
  s *= c;
  x *= c;
  y *= c;
  z *= c;
  return *this;
}

QMatrix operator+(QMatrix a, const QMatrix& b) { return a += b; }
QMatrix operator-(QMatrix a, const QMatrix& b) { return a -= b; }
QMatrix operator*(double c, QMatrix a) { return a *= c; }

QMatrix qmat_multiply(const QMatrix& a, const QMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("qmat_multiply: inner dimensions " + std::to_string(a.cols()) +
                         " and " + std::to_string(b.rows()) + " differ");
  }
  // Hamilton product rule applied to component planes, order preserved.
  return QMatrix(a.s * b.s - a.x * b.x - a.y * b.y - a.z * b.z,
                 a.s * b.x + a.x * b.s + a.y * b.z - a.z * b.y,
                 a.s * b.y - a.x * b.z + a.y * b.s + a.z * b.x,
                 a.s * b.z + a.x * b.y - a.y * b.x + a.z * b.s);
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) { return qmat_multiply(a, b); }

Eigen::MatrixXd embed_full(const QMatrix& q) {
  const Index m = q.rows();
  const Index n = q.cols();
  Eigen::MatrixXd r(4 * m, 4 * n);
  const std::array<const Eigen::MatrixXd*, 4> planes = {&q.s, &q.x, &q.y, &q.z};
  for (int c = 0; c < 4; ++c) {
    for (const BlockSite& site : kSites[c]) {
      r.block(site.row * m, site.col * n, m, n) = site.sign * (*planes[c]);
    }
  }
  return r;
}

Eigen::MatrixXd embed_col(const QMatrix& q) {
  const Index m = q.rows();
  Eigen::MatrixXd c(4 * m, q.cols());
  c.middleRows(0, m) = q.s;
  c.middleRows(m, m) = q.x;
  c.middleRows(2 * m, m) = q.y;
  c.middleRows(3 * m, m) = q.z;
  return c;
}

QMatrix unembed_col(const Eigen::Ref<const Eigen::MatrixXd>& c) {
  if (c.rows() % 4 != 0) {
    throw DimensionError("unembed_col: row count not divisible by 4");
  }
  const Index m = c.rows() / 4;
  return QMatrix(c.middleRows(0, m), c.middleRows(m, m), c.middleRows(2 * m, m),
                 c.middleRows(3 * m, m));
}

Unembedded project_structure(const Eigen::Ref<const Eigen::MatrixXd>& r) {
  if (r.rows() % 4 != 0 || r.cols() % 4 != 0) {
    throw DimensionError("unembed_full: dimensions not divisible by 4");
  }
  const Index m = r.rows() / 4;
  const Index n = r.cols() / 4;
  Unembedded out{QMatrix(m, n), 0.0};
  if (m == 0 || n == 0) {
    return out;
  }
  const std::array<Eigen::MatrixXd*, 4> planes = {&out.value.s, &out.value.x, &out.value.y,
                                                  &out.value.z};
  for (int c = 0; c < 4; ++c) {
    Eigen::MatrixXd& mean = *planes[c];
    for (const BlockSite& site : kSites[c]) {
      mean += site.sign * r.block(site.row * m, site.col * n, m, n);
    }
    mean *= 0.25;
    for (const BlockSite& site : kSites[c]) {
      const double dev =
          (site.sign * r.block(site.row * m, site.col * n, m, n) - mean).cwiseAbs().maxCoeff();
      out.max_deviation = std::max(out.max_deviation, dev);
    }
  }
  return out;
}

QMatrix unembed_full(const Eigen::Ref<const Eigen::MatrixXd>& r, double tol) {
  Unembedded u = project_structure(r);
  if (u.max_deviation > tol) {
    throw StructureViolation(u.max_deviation);
  }
  return std::move(u.value);
}

}  // namespace qnttnn
