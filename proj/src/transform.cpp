#include "qnttnn/transform.hpp"

#include <cmath>

#include "qnttnn/errors.hpp"
#include "qnttnn/spectral.hpp"

namespace qnttnn {

namespace {

double logistic(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

template <typename F>
RealTensor3 map_entries(const RealTensor3& a, F&& f) {
  RealTensor3 out(a.rows(), a.cols(), a.depth());
  const Eigen::VectorXd& src = a.values();
  Eigen::VectorXd& dst = out.values();
  for (Index i = 0; i < src.size(); ++i) dst[i] = f(src[i]);
  return out;
}

}  // namespace

Activation Activation::from_name(std::string_view name, double elu_alpha) {
  if (name == "tanh") return Activation(Kind::Tanh, elu_alpha);
  if (name == "sigmoid") return Activation(Kind::Sigmoid, elu_alpha);
  if (name == "relu") return Activation(Kind::Relu, elu_alpha);
  if (name == "elu") return Activation(Kind::Elu, elu_alpha);
  if (name == "swish") return Activation(Kind::Swish, elu_alpha);
  throw InvalidArgument("unknown activation '" + std::string(name) + "'");
}

std::string Activation::name() const {
  switch (kind_) {
    case Kind::Tanh: return "tanh";
    case Kind::Sigmoid: return "sigmoid";
    case Kind::Relu: return "relu";
    case Kind::Elu: return "elu";
    case Kind::Swish: return "swish";
  }
  return "unknown";
}

double Activation::value(double t) const {
  switch (kind_) {
    case Kind::Tanh: return std::tanh(t);
    case Kind::Sigmoid: return logistic(t);
    case Kind::Relu: return t > 0.0 ? t : 0.0;
    case Kind::Elu: return t > 0.0 ? t : elu_alpha_ * std::expm1(t);
    case Kind::Swish: return t * logistic(t);
  }
  return 0.0;
}

double Activation::derivative(double t) const {
  switch (kind_) {
    case Kind::Tanh: {
      const double th = std::tanh(t);
      return 1.0 - th * th;
    }
    case Kind::Sigmoid: {
      const double sg = logistic(t);
      return sg * (1.0 - sg);
    }
    case Kind::Relu: return t > 0.0 ? 1.0 : 0.0;
    case Kind::Elu: return t > 0.0 ? 1.0 : elu_alpha_ * std::exp(t);
    case Kind::Swish: {
      const double sg = logistic(t);
      return sg + t * sg * (1.0 - sg);
    }
  }
  return 0.0;
}

RealTensor3 activation_apply(const RealTensor3& a, const Activation& phi) {
  return map_entries(a, [&phi](double t) { return phi.value(t); });
}

RealTensor3 activation_derivative(const RealTensor3& a, const Activation& phi) {
  return map_entries(a, [&phi](double t) { return phi.derivative(t); });
}

TransformMatrix::TransformMatrix(Eigen::MatrixXd t, double tol) : t_(std::move(t)) {
  if (t_.rows() > t_.cols()) {
    throw InvalidArgument("TransformMatrix: r = " + std::to_string(t_.rows()) +
                          " exceeds n3 = " + std::to_string(t_.cols()));
  }
  const double res = orthogonality_residual();
  if (!(res <= tol)) {
    throw InvalidArgument("TransformMatrix: rows not orthonormal (residual " +
                          std::to_string(res) + ")");
  }
}

double TransformMatrix::orthogonality_residual() const {
  return (t_ * t_.transpose() - Eigen::MatrixXd::Identity(t_.rows(), t_.rows())).norm();
}

TransformMatrix init_transform(const RealTensor3& x0, Index r) {
  const Index n3 = x0.depth();
  if (r < 1 || r > n3) {
    throw InvalidArgument("init_transform: r must lie in [1, n3]");
  }
  // Left singular vectors of the n3 x N unfolding from its n3 x n3 Gram matrix.
  // Power-of-two scaling keeps the Gram matrix finite for huge data.
  int exponent = 0;
  std::frexp(x0.size() > 0 ? x0.values().cwiseAbs().maxCoeff() : 0.0, &exponent);
  const Eigen::MatrixXd tubes = std::ldexp(1.0, -exponent) * x0.tubes();
  const Eigen::MatrixXd gram = tubes.transpose() * tubes;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  Eigen::MatrixXd t(r, n3);
  for (Index row = 0; row < r; ++row) {
    Eigen::VectorXd u = eig.eigenvectors().col(n3 - 1 - row);
    Index lead = 0;
    u.cwiseAbs().maxCoeff(&lead);
    if (u[lead] < 0.0) u = -u;
    t.row(row) = u.transpose();
  }
  return TransformMatrix(std::move(t));
}

RealTensor3 composite_transform(const QTensor3& x, const TransformMatrix& t, const Activation& phi) {
  if (x.n3() != t.n3()) {
    throw DimensionError("composite_transform: transform width does not match tensor depth");
  }
  return activation_apply(embed_tensor(mode3_product(x, t.matrix())), phi);
}

double qnttnn_value(const QTensor3& x, const TransformMatrix& t, const Activation& phi) {
  const RealTensor3 psi = composite_transform(x, t, phi);
  double total = 0.0;
  for (Index i = 0; i < psi.depth(); ++i) total += nuclear_norm(psi.slice(i));
  return 0.25 * total;
}

double transform_subproblem_objective(const RealTensor3& z, const RealTensor3& x,
                                      const Eigen::Ref<const Eigen::MatrixXd>& t,
                                      const TransformMatrix& t_prev, double alpha, double rho4) {
  const Eigen::MatrixXd residual = x.tubes() - z.tubes() * t;
  return alpha / 8.0 * residual.squaredNorm() + rho4 / 2.0 * (t - t_prev.matrix()).squaredNorm();
}

Eigen::MatrixXd procrustes_coupling(const RealTensor3& z, const RealTensor3& x,
                                    const TransformMatrix& t_prev, double alpha, double rho4) {
  if (z.rows() != x.rows() || z.cols() != x.cols()) {
    throw DimensionError("procrustes_update: slice shapes of Z and X differ");
  }
  if (z.depth() != t_prev.rank() || x.depth() != t_prev.n3()) {
    throw DimensionError("procrustes_update: depth does not match transform shape");
  }
  return alpha / 4.0 * (z.tubes().transpose() * x.tubes()) + rho4 * t_prev.matrix();
}

TransformMatrix procrustes_update(const RealTensor3& z, const RealTensor3& x,
                                  const TransformMatrix& t_prev, double alpha, double rho4) {
  const Eigen::MatrixXd d = procrustes_coupling(z, x, t_prev, alpha, rho4);
  const SvdResult dec = svd(d);
  return TransformMatrix(dec.u * dec.v.transpose());
}

}  // namespace qnttnn
