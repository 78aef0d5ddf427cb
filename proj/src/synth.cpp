#include "qnttnn/synth.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include "qnttnn/errors.hpp"
#include "qnttnn/random.hpp"

namespace qnttnn {

namespace {

QMatrix normal_qmatrix(Index rows, Index cols, SplitMix64& rng) {
  QMatrix q(rows, cols);
  for (Eigen::MatrixXd* plane : {&q.s, &q.x, &q.y, &q.z}) {
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) (*plane)(i, j) = rng.normal();
  }
  return q;
}

}  // namespace

QTensor3 synth_lowrank(Index n1, Index n2, Index n3, Index slice_rank, std::uint64_t seed) {
  if (n1 < 1 || n2 < 1 || n3 < 1) {
    throw InvalidArgument("synth_lowrank: dimensions must be positive");
  }
  if (slice_rank < 1 || slice_rank > std::min(n1, n2)) {
    throw InvalidArgument("synth_lowrank: slice rank must lie in [1, min(n1, n2)]");
  }
  SplitMix64 rng(seed);
  QMatrix left = normal_qmatrix(n1, slice_rank, rng);
  left.s.col(0).setOnes();
  left.x.col(0).setZero();
  left.y.col(0).setZero();
  left.z.col(0).setZero();

  std::vector<QMatrix> basis;
  for (Index l = 0; l < slice_rank; ++l) basis.push_back(normal_qmatrix(slice_rank, n2, rng));

  QTensor3 out(n1, n2, n3);
  for (Index k = 0; k < n3; ++k) {
    QMatrix right = QMatrix::zero(slice_rank, n2);
    for (const QMatrix& b : basis) right += rng.normal() * b;
    out.set_frontal_slice(k, left * right);
  }

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int c = 0; c < 4; ++c) {
    lo = std::min(lo, out.plane(c).values().minCoeff());
    hi = std::max(hi, out.plane(c).values().maxCoeff());
  }
  const double scale = hi > lo ? 1.0 / (hi - lo) : 1.0;
  for (int c = 0; c < 4; ++c) {
    Eigen::VectorXd& v = out.plane(c).values();
    v = ((v.array() - lo) * scale).cwiseMax(0.0).cwiseMin(1.0).matrix();
  }
  return out;
}

}  // namespace qnttnn
