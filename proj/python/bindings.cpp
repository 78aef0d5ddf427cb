#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qnttnn/errors.hpp"
#include "qnttnn/metrics.hpp"
#include "qnttnn/qmatrix.hpp"
#include "qnttnn/random.hpp"
#include "qnttnn/solver.hpp"
#include "qnttnn/spectral.hpp"
#include "qnttnn/synth.hpp"

namespace py = pybind11;
using qnttnn::Index;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using BoolArray = py::array_t<bool, py::array::c_style | py::array::forcecast>;

// Quaternion tensors cross the boundary as float64 arrays of shape (n1, n2, n3, 4).
qnttnn::QTensor3 to_tensor(const Array& a) {
  if (a.ndim() != 4 || a.shape(3) != 4) {
    throw qnttnn::DimensionError("expected an array of shape (n1, n2, n3, 4)");
  }
  auto v = a.unchecked<4>();
  qnttnn::QTensor3 t(v.shape(0), v.shape(1), v.shape(2));
  for (Index i = 0; i < t.n1(); ++i)
    for (Index j = 0; j < t.n2(); ++j)
      for (Index k = 0; k < t.n3(); ++k) t.set(i, j, k, {v(i, j, k, 0), v(i, j, k, 1), v(i, j, k, 2), v(i, j, k, 3)});
  return t;
}

Array from_tensor(const qnttnn::QTensor3& t) {
  Array out({t.n1(), t.n2(), t.n3(), Index{4}});
  auto v = out.mutable_unchecked<4>();
  for (Index i = 0; i < t.n1(); ++i)
    for (Index j = 0; j < t.n2(); ++j)
      for (Index k = 0; k < t.n3(); ++k)
        for (int c = 0; c < 4; ++c) v(i, j, k, c) = t.plane(c)(i, j, k);
  return out;
}

qnttnn::QMatrix to_qmatrix(const Array& a) {
  if (a.ndim() != 3 || a.shape(2) != 4) {
    throw qnttnn::DimensionError("expected an array of shape (n1, n2, 4)");
  }
  auto v = a.unchecked<3>();
  qnttnn::QMatrix q(v.shape(0), v.shape(1));
  for (Index i = 0; i < q.rows(); ++i)
    for (Index j = 0; j < q.cols(); ++j) q.set(i, j, {v(i, j, 0), v(i, j, 1), v(i, j, 2), v(i, j, 3)});
  return q;
}

qnttnn::Mask to_mask(const BoolArray& a) {
  if (a.ndim() != 3) throw qnttnn::DimensionError("mask must have shape (n1, n2, n3)");
  auto v = a.unchecked<3>();
  qnttnn::Mask m(v.shape(0), v.shape(1), v.shape(2));
  for (Index i = 0; i < m.n1(); ++i)
    for (Index j = 0; j < m.n2(); ++j)
      for (Index k = 0; k < m.n3(); ++k) m.set(i, j, k, v(i, j, k));
  return m;
}

BoolArray from_mask(const qnttnn::Mask& m) {
  BoolArray out({m.n1(), m.n2(), m.n3()});
  auto v = out.mutable_unchecked<3>();
  for (Index i = 0; i < m.n1(); ++i)
    for (Index j = 0; j < m.n2(); ++j)
      for (Index k = 0; k < m.n3(); ++k) v(i, j, k) = m(i, j, k);
  return out;
}

py::dict complete(const Array& observed, const BoolArray& mask, double alpha, double beta,
                  double rho, Index r, double eps, int max_iters, int newton_iters,
                  const std::string& activation, double elu_alpha, bool diagnostics) {
  qnttnn::SolverConfig cfg;
  cfg.alpha = alpha;
  cfg.beta = beta;
  cfg.rho = {rho, rho, rho, rho};
  cfg.rank = r;
  cfg.eps = eps;
  cfg.max_iters = max_iters;
  cfg.newton_iters = newton_iters;
  cfg.activation = qnttnn::Activation::from_name(activation, elu_alpha);
  cfg.diagnostics = diagnostics;

  const qnttnn::QTensor3 m = to_tensor(observed);
  const qnttnn::Mask omega = to_mask(mask);
  qnttnn::PamResult res;
  {
    py::gil_scoped_release release;
    res = qnttnn::run_pam(m, omega, cfg);
  }
  py::list history;
  for (const auto& rec : res.history) {
    py::dict row;
    row["iter"] = rec.iter;
    row["objective"] = rec.objective;
    row["rel_change"] = rec.rel_change;
    row["decrease_margin"] = rec.decrease_margin;
    row["elapsed_s"] = rec.elapsed_s;
    if (diagnostics) {
      row["structure_dev"] = rec.structure_dev;
      row["feasibility_residual"] = rec.feasibility_residual;
      row["orthogonality_residual"] = rec.orthogonality_residual;
    }
    history.append(row);
  }
  py::dict out;
  out["x"] = from_tensor(res.x);
  out["history"] = history;
  out["structure_dev"] = res.structure_dev;
  out["iterations"] = res.iterations;
  out["converged"] = res.converged;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quaternion tensor completion via a nonlinear-transform tensor nuclear norm";

  static py::exception<qnttnn::Error> base(m, "Error", PyExc_RuntimeError);
  py::register_exception<qnttnn::DataError>(m, "DataError", base.ptr());
  py::register_exception<qnttnn::SolverDivergence>(m, "SolverDivergence", base.ptr());
  py::register_exception<qnttnn::StructureViolation>(m, "StructureViolation", base.ptr());
  py::register_exception<qnttnn::InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<qnttnn::DimensionError>(m, "DimensionError", PyExc_ValueError);

  m.def(
      "hamilton_product",
      [](std::array<double, 4> a, std::array<double, 4> b) {
        const qnttnn::Quaternion p =
            qnttnn::hamilton_product({a[0], a[1], a[2], a[3]}, {b[0], b[1], b[2], b[3]});
        return std::array<double, 4>{p.s, p.x, p.y, p.z};
      },
      py::arg("a"), py::arg("b"), "Hamilton product of (s, x, y, z) quadruples.");

  m.def(
      "q_nuclear_norm", [](const Array& q) { return qnttnn::q_nuclear_norm(to_qmatrix(q)); },
      py::arg("q"), "Quaternion nuclear norm of an (n1, n2, 4) array.");

  m.def(
      "embed_full", [](const Array& q) { return Eigen::MatrixXd(qnttnn::embed_full(to_qmatrix(q))); },
      py::arg("q"), "Full 4n1 x 4n2 real block representation.");

  m.def(
      "synth_lowrank",
      [](Index n1, Index n2, Index n3, Index rank, std::uint64_t seed) {
        return from_tensor(qnttnn::synth_lowrank(n1, n2, n3, rank, seed));
      },
      py::arg("n1"), py::arg("n2"), py::arg("n3"), py::arg("rank"), py::arg("seed") = 0);

  m.def(
      "sample_mask",
      [](std::array<Index, 3> shape, double rate, std::uint64_t seed) {
        return from_mask(qnttnn::sample_mask(shape[0], shape[1], shape[2], rate, seed));
      },
      py::arg("shape"), py::arg("rate"), py::arg("seed") = 0);

  const qnttnn::SolverConfig defaults;
  m.def("complete", &complete, py::arg("observed"), py::arg("mask"),
        py::arg("alpha") = defaults.alpha, py::arg("beta") = defaults.beta,
        py::arg("rho") = defaults.rho[0], py::arg("r") = defaults.rank,
        py::arg("eps") = defaults.eps, py::arg("max_iters") = defaults.max_iters,
        py::arg("newton_iters") = defaults.newton_iters, py::arg("activation") = "tanh",
        py::arg("elu_alpha") = 1.0, py::arg("diagnostics") = false,
        "Run proximal alternating minimization; returns x, history and diagnostics.");

  m.def(
      "rse", [](const Array& a, const Array& b) { return qnttnn::rse(to_tensor(a), to_tensor(b)); },
      py::arg("recovered"), py::arg("reference"));
  m.def(
      "psnr",
      [](const Array& a, const Array& b) { return qnttnn::psnr(to_tensor(a), to_tensor(b)); },
      py::arg("recovered"), py::arg("reference"));
  m.def(
      "ssim",
      [](const Array& a, const Array& b) { return qnttnn::ssim(to_tensor(a), to_tensor(b)); },
      py::arg("recovered"), py::arg("reference"));
}
