#ifndef QNTTNN_TRANSFORM_HPP
#define QNTTNN_TRANSFORM_HPP

#include <array>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "qnttnn/tensor.hpp"

namespace qnttnn {

/// Element-wise nonlinearity applied to real embeddings.
class Activation {
 public:
  enum class Kind { Tanh, Sigmoid, Relu, Elu, Swish };

  static constexpr std::array<Kind, 5> kAll = {Kind::Tanh, Kind::Sigmoid, Kind::Relu, Kind::Elu,
                                               Kind::Swish};

  constexpr Activation() = default;
  constexpr explicit Activation(Kind kind, double elu_alpha = 1.0)
      : kind_(kind), elu_alpha_(elu_alpha) {}

  /// Accepts "tanh", "sigmoid", "relu", "elu", "swish"; throws InvalidArgument otherwise.
  static Activation from_name(std::string_view name, double elu_alpha = 1.0);

  Kind kind() const { return kind_; }
  double elu_alpha() const { return elu_alpha_; }
  std::string name() const;

  /// Odd activations map embedded quaternion blocks to embedded blocks.
  bool preserves_structure() const { return kind_ == Kind::Tanh; }

  double value(double t) const;
  double derivative(double t) const;

 private:
  Kind kind_ = Kind::Tanh;
  double elu_alpha_ = 1.0;
};

RealTensor3 activation_apply(const RealTensor3& a, const Activation& phi);
RealTensor3 activation_derivative(const RealTensor3& a, const Activation& phi);

/// Real r x n3 matrix with orthonormal rows (T T^T = I_r).
class TransformMatrix {
 public:
  TransformMatrix() = default;
  /// Throws InvalidArgument if r > n3 or the rows are not orthonormal within tol.
  explicit TransformMatrix(Eigen::MatrixXd t, double tol = 1e-8);

  const Eigen::MatrixXd& matrix() const { return t_; }
  Index rank() const { return t_.rows(); }
  Index n3() const { return t_.cols(); }

  /// |T T^T - I|_F
  double orthogonality_residual() const;

 private:
  Eigen::MatrixXd t_;
};

/// Top-r left singular vectors of the mode-3 unfolding, transposed.
TransformMatrix init_transform(const RealTensor3& x0, Index r);

/// Psi(X) = phi(embed(X x3 T)).
RealTensor3 composite_transform(const QTensor3& x, const TransformMatrix& t, const Activation& phi);

/// (1/4) sum_i |phi(embed(X x3 T))^(i)|_*
double qnttnn_value(const QTensor3& x, const TransformMatrix& t, const Activation& phi);

/// (alpha/8)|X_(3) - T^T Z_(3)|^2 + (rho4/2)|T - T_prev|^2.
double transform_subproblem_objective(const RealTensor3& z, const RealTensor3& x,
                                      const Eigen::Ref<const Eigen::MatrixXd>& t,
                                      const TransformMatrix& t_prev, double alpha, double rho4);

/// Coupling matrix (alpha/4) Z_(3) X_(3)^T + rho4 T_prev, shape r x n3.
Eigen::MatrixXd procrustes_coupling(const RealTensor3& z, const RealTensor3& x,
                                    const TransformMatrix& t_prev, double alpha, double rho4);

/// Polar factor U V^T of the coupling matrix; the exact minimizer of
/// transform_subproblem_objective over semi-orthogonal T.
TransformMatrix procrustes_update(const RealTensor3& z, const RealTensor3& x,
                                  const TransformMatrix& t_prev, double alpha, double rho4);

}  // namespace qnttnn

#endif  // QNTTNN_TRANSFORM_HPP
