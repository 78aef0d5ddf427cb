#include "qnttnn/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "qnttnn/errors.hpp"
#include "qnttnn/spectral.hpp"

namespace qnttnn {

namespace {

constexpr double kFeasibilityTol = 1e-8;
constexpr int kMaxHalvings = 20;
// Relative rounding allowance in the line-search test.
constexpr double kAcceptSlack = 1e-12;
constexpr double kAcceptFloor = 1e-30;
// Steps below this (relative to 1 + |z|) change h by less than its rounding
// noise and are taken without the comparison.
constexpr double kTrustedStep = 1e-8;

double max_structure_deviation(const RealTensor3& a) { return unembed_tensor(a).max_deviation; }

double feasibility_residual(const RealTensor3& x, const RealTensor3& m_real,
                            const std::vector<std::uint8_t>& observed) {
  double worst = 0.0;
  const Eigen::VectorXd& xv = x.values();
  const Eigen::VectorXd& mv = m_real.values();
  for (Index i = 0; i < xv.size(); ++i) {
    if (observed[static_cast<std::size_t>(i)]) worst = std::max(worst, std::abs(xv[i] - mv[i]));
  }
  return worst;
}

void check_shapes(const SolverState& state, const RealTensor3& m_real, const Mask& mask) {
  if (!state.x.same_shape(m_real) || m_real.rows() != 4 * mask.n1() ||
      m_real.cols() != 4 * mask.n2() || m_real.depth() != mask.n3()) {
    throw DimensionError("solver: state, data and mask shapes disagree");
  }
}

}  // namespace

void SolverConfig::validate(Index n3) const {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw InvalidArgument("solver: alpha and beta must be positive");
  }
  for (double r : rho) {
    if (!(r > 0.0)) throw InvalidArgument("solver: proximal parameters must be positive");
  }
  if (rank < 1 || rank > n3) {
    throw InvalidArgument("solver: r = " + std::to_string(rank) + " must lie in [1, " +
                          std::to_string(n3) + "]");
  }
  if (max_iters < 1) throw InvalidArgument("solver: max_iters must be at least 1");
  if (!(eps > 0.0)) throw InvalidArgument("solver: eps must be positive");
  if (newton_iters < 0) throw InvalidArgument("solver: newton_iters must be non-negative");
}

double objective_from_nuclear(const SolverState& state, double y_nuclear_sum,
                              const SolverConfig& cfg) {
  const Eigen::MatrixXd& t = state.t.matrix();
  const double fit = (state.x.tubes() - state.z.tubes() * t).squaredNorm();
  const RealTensor3 phi_z = activation_apply(state.z, cfg.activation);
  const double split = (state.y.values() - phi_z.values()).squaredNorm();
  return 0.25 * y_nuclear_sum + cfg.alpha / 8.0 * fit + cfg.beta / 8.0 * split;
}

double objective(const SolverState& state, const RealTensor3& m_real, const Mask& mask,
                 const SolverConfig& cfg) {
  check_shapes(state, m_real, mask);
  if (feasibility_residual(state.x, m_real, broadcast_mask(mask)) > kFeasibilityTol ||
      state.t.orthogonality_residual() > kFeasibilityTol) {
    return std::numeric_limits<double>::infinity();
  }
  double nuclear = 0.0;
  for (Index i = 0; i < state.y.depth(); ++i) nuclear += nuclear_norm(state.y.slice(i));
  return objective_from_nuclear(state, nuclear, cfg);
}

RealTensor3 update_x(const SolverState& state, const RealTensor3& m_real, const Mask& mask,
                     const SolverConfig& cfg) {
  check_shapes(state, m_real, mask);
  const double a = cfg.alpha;
  const double r1 = cfg.rho[0];
  RealTensor3 out = mode3_product(state.z, state.t.matrix().transpose());
  out.values() = (a * out.values() + r1 * state.x.values()) / (a + r1);
  const std::vector<std::uint8_t> observed = broadcast_mask(mask);
  Eigen::VectorXd& xv = out.values();
  const Eigen::VectorXd& mv = m_real.values();
  for (Index i = 0; i < xv.size(); ++i) {
    if (observed[static_cast<std::size_t>(i)]) xv[i] = mv[i];
  }
  return out;
}

YUpdate update_y(const SolverState& state, const SolverConfig& cfg) {
  const double b = cfg.beta;
  const double r2 = cfg.rho[1];
  const double tau = qtsvt_threshold(b + r2);
  RealTensor3 center = activation_apply(state.z, cfg.activation);
  center.values() = (b * center.values() + r2 * state.y.values()) / (b + r2);
  YUpdate out{RealTensor3(center.rows(), center.cols(), center.depth()), 0.0};
  for (Index i = 0; i < center.depth(); ++i) {
    SvtResult s = svt_with_norm(center.slice(i), tau);
    out.y.slice(i) = s.value;
    out.nuclear_sum += s.nuclear_norm;
  }
  return out;
}

double z_scalar_objective(double z, double g, double y, double c, double beta,
                          const Activation& phi) {
  const double d = z - g;
  const double r = phi.value(z) - y;
  return c / 8.0 * d * d + beta / 8.0 * r * r;
}

double newton_scalar(double z0, double g, double y, double c, double beta, const Activation& phi,
                     int iters, double tol) {
  if (beta == 0.0) return g;
  double z = z0;
  double h = z_scalar_objective(z, g, y, c, beta, phi);
  for (int it = 0; it < iters; ++it) {
    const double dphi = phi.derivative(z);
    const double grad = c * (z - g) + beta * (phi.value(z) - y) * dphi;
    const double curv = c + beta * dphi * dphi;
    double step = grad / curv;
    if (step == 0.0 || !std::isfinite(step)) break;
    if (std::abs(step) <= kTrustedStep * (1.0 + std::abs(z))) {
      z -= step;
      h = z_scalar_objective(z, g, y, c, beta, phi);
      if (std::abs(step) < tol) break;
      continue;
    }
    bool accepted = false;
    for (int halving = 0; halving <= kMaxHalvings; ++halving) {
      const double trial = z - step;
      const double h_trial = z_scalar_objective(trial, g, y, c, beta, phi);
      if (h_trial <= h + kAcceptSlack * h + kAcceptFloor) {
        z = trial;
        h = h_trial;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted || std::abs(step) < tol) break;
  }
  return z;
}

RealTensor3 update_z(const SolverState& state, const SolverConfig& cfg) {
  const double a = cfg.alpha;
  const double r3 = cfg.rho[2];
  const double c = a + r3;
  RealTensor3 out = mode3_product(state.x, state.t.matrix());
  out.values() = (a * out.values() + r3 * state.z.values()) / c;
  if (!out.same_shape(state.y)) {
    throw DimensionError("update_z: Y and Z shapes differ");
  }
  Eigen::VectorXd& g = out.values();
  const Eigen::VectorXd& zv = state.z.values();
  const Eigen::VectorXd& yv = state.y.values();
  for (Index i = 0; i < g.size(); ++i) {
    g[i] = newton_scalar(zv[i], g[i], yv[i], c, cfg.beta, cfg.activation, cfg.newton_iters,
                         cfg.newton_tol);
  }
  return out;
}

TransformMatrix update_t(const SolverState& state, const SolverConfig& cfg) {
  return procrustes_update(state.z, state.x, state.t, cfg.alpha, cfg.rho[3]);
}

QTensor3 interpolate_missing(const QTensor3& m, const Mask& mask) {
  if (m.n1() != mask.n1() || m.n2() != mask.n2() || m.n3() != mask.n3()) {
    throw DimensionError("interpolate_missing: mask shape mismatch");
  }
  if (mask.count() == 0) {
    throw InvalidArgument("interpolate_missing: mask has no observed entries");
  }
  const Index n1 = m.n1();
  const Index n2 = m.n2();
  const Index n3 = m.n3();
  QTensor3 out(n1, n2, n3);
  std::vector<Index> seen;
  seen.reserve(static_cast<std::size_t>(n3));
  for (int c = 0; c < 4; ++c) {
    const RealTensor3& src = m.plane(c);
    RealTensor3& dst = out.plane(c);
    double mean = 0.0;
    for (Index k = 0; k < n3; ++k)
      for (Index j = 0; j < n2; ++j)
        for (Index i = 0; i < n1; ++i)
          if (mask(i, j, k)) mean += src(i, j, k);
    mean /= static_cast<double>(mask.count());

    for (Index j = 0; j < n2; ++j) {
      for (Index i = 0; i < n1; ++i) {
        seen.clear();
        for (Index k = 0; k < n3; ++k) {
          if (mask(i, j, k)) seen.push_back(k);
        }
        if (seen.empty()) {
          for (Index k = 0; k < n3; ++k) dst(i, j, k) = mean;
          continue;
        }
        std::size_t next = 0;
        for (Index k = 0; k < n3; ++k) {
          while (next < seen.size() && seen[next] < k) ++next;
          if (next < seen.size() && seen[next] == k) {
            dst(i, j, k) = src(i, j, k);
          } else if (next == 0) {
            dst(i, j, k) = src(i, j, seen.front());
          } else if (next == seen.size()) {
            dst(i, j, k) = src(i, j, seen.back());
          } else {
            const Index lo = seen[next - 1];
            const Index hi = seen[next];
            const double w = static_cast<double>(k - lo) / static_cast<double>(hi - lo);
            dst(i, j, k) = (1.0 - w) * src(i, j, lo) + w * src(i, j, hi);
          }
        }
      }
    }
  }
  return out;
}

SolverState init_state(const QTensor3& m, const Mask& mask, const SolverConfig& cfg) {
  cfg.validate(m.n3());
  for (Index k = 0; k < m.n3(); ++k)
    for (Index j = 0; j < m.n2(); ++j)
      for (Index i = 0; i < m.n1(); ++i) {
        if (!mask(i, j, k)) continue;
        const Quaternion q = m.at(i, j, k);
        if (!std::isfinite(q.s) || !std::isfinite(q.x) || !std::isfinite(q.y) ||
            !std::isfinite(q.z)) {
          throw DataError("init_state: observed entry is not finite");
        }
      }
  SolverState state;
  state.x = embed_tensor(interpolate_missing(m, mask));
  state.t = init_transform(state.x, cfg.rank);
  state.z = mode3_product(state.x, state.t.matrix());
  state.y = activation_apply(state.z, cfg.activation);
  return state;
}

PamResult run_pam(const QTensor3& m, const Mask& mask, const SolverConfig& cfg,
                  const IterationCallback& on_iteration) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const bool diagnostics = cfg.diagnostics || cfg.assert_invariants;

  SolverState state = init_state(m, mask, cfg);
  const RealTensor3 m_real = embed_tensor(m);
  const std::vector<std::uint8_t> observed = broadcast_mask(mask);
  const double rho_min = *std::min_element(cfg.rho.begin(), cfg.rho.end());
  const double rho = 0.5 * rho_min;

  double f_prev = objective(state, m_real, mask, cfg);
  if (!std::isfinite(f_prev)) {
    throw SolverDivergence("run_pam: initial objective is not finite");
  }

  PamResult result;
  std::vector<IterationRecord> history;
  for (int k = 0; k < cfg.max_iters; ++k) {
    SolverState next{update_x(state, m_real, mask, cfg), state.y, state.z, state.t, k + 1, {}};
    // Y reads phi(Z^k) and Y^k; Z reads X^{k+1}, Y^{k+1}; T reads X^{k+1}, Z^{k+1}.
    YUpdate yu = update_y(next, cfg);
    next.y = std::move(yu.y);
    next.z = update_z(next, cfg);
    next.t = update_t(next, cfg);

    IterationRecord rec;
    rec.iter = k + 1;
    rec.objective = objective_from_nuclear(next, yu.nuclear_sum, cfg);
    const double x_prev_norm = state.x.norm();
    const double dx = (next.x.values() - state.x.values()).squaredNorm();
    const double dy = (next.y.values() - state.y.values()).squaredNorm();
    const double dz = (next.z.values() - state.z.values()).squaredNorm();
    const double dt = (next.t.matrix() - state.t.matrix()).squaredNorm();
    rec.rel_change = x_prev_norm > 0.0 ? std::sqrt(dx) / x_prev_norm : std::sqrt(dx);
    // Embedded blocks carry each quaternion component four times.
    const double step_sq = 0.25 * (dx + dy + dz) + dt;
    rec.decrease_slack = 1e-8 * (1.0 + std::abs(f_prev));
    rec.decrease_margin = f_prev + rec.decrease_slack - rec.objective - rho * step_sq;
    rec.elapsed_s = std::chrono::duration<double>(Clock::now() - start).count();

    if (!std::isfinite(rec.objective)) {
      throw SolverDivergence("run_pam: objective became non-finite at iteration " +
                             std::to_string(k + 1));
    }
    if (diagnostics) {
      rec.structure_dev = std::max({max_structure_deviation(next.x),
                                    max_structure_deviation(next.y),
                                    max_structure_deviation(next.z)});
      rec.feasibility_residual = feasibility_residual(next.x, m_real, observed);
      rec.orthogonality_residual = next.t.orthogonality_residual();
    }
    if (cfg.assert_invariants) {
      if (rec.decrease_margin < 0.0) {
        throw SolverDivergence("run_pam: sufficient decrease violated at iteration " +
                               std::to_string(k + 1) + " (margin " +
                               std::to_string(rec.decrease_margin) + ")");
      }
      if (rec.feasibility_residual != 0.0 || rec.orthogonality_residual > 1e-10) {
        throw SolverDivergence("run_pam: feasibility lost at iteration " +
                               std::to_string(k + 1));
      }
    }

    state = std::move(next);
    history.push_back(rec);
    f_prev = rec.objective;
    if (on_iteration) on_iteration(state, rec);
    if (rec.rel_change < cfg.eps) {
      result.converged = true;
      break;
    }
  }

  UnembeddedTensor out = unembed_tensor(state.x);
  result.x = std::move(out.value);
  result.structure_dev = out.max_deviation;
  result.iterations = state.iter;
  result.history = std::move(history);
  return result;
}

}  // namespace qnttnn
