#include "condreg/errors.hpp"
#include "condreg/fixed_kappa.hpp"
#include "condreg/path.hpp"
#include "condreg/projection.hpp"
#include "condreg/simulate.hpp"
#include "condreg/splitting.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

namespace py = pybind11;
using namespace condreg;

namespace {

PseudoKind parse_kind(const std::string& name) {
  if (name == "concord") return PseudoKind::Concord;
  if (name == "dtrace") return PseudoKind::DTrace;
  throw InvalidInput("unknown pseudo-likelihood loss '" + name + "' (use concord or dtrace)");
}

CovarianceMap parse_fmap(const std::string& name) {
  if (name == "negate") return CovarianceMap::Negate;
  if (name == "identity") return CovarianceMap::Identity;
  if (name == "constant-identity") return CovarianceMap::ConstantIdentity;
  if (name == "zero") return CovarianceMap::Zero;
  throw InvalidInput("unknown covariance map '" + name + "'");
}

py::tuple region_tuple(RegionIndex r) { return py::make_tuple(r.alpha, r.beta); }

py::dict report_dict(const SplitReport& r) {
  py::dict d;
  d["iterations"] = r.iterations;
  d["residual"] = r.residual;
  d["objective"] = r.objective;
  d["min_eig"] = r.min_eig;
  d["max_eig"] = r.max_eig;
  d["cond"] = r.cond;
  d["nnz_offdiag"] = r.nnz_offdiag;
  py::list support;
  for (const auto& [i, j] : r.support) support.append(py::make_tuple(i, j));
  d["support"] = support;
  d["converged"] = r.converged;
  return d;
}

SplitConfig make_config(double mu, double kappa, double outer_tol, int outer_max, int inner_max,
                        double inner_tol, bool penalize_diagonal) {
  SplitConfig c;
  c.mu = mu;
  c.kappa = kappa;
  c.outer_tol = outer_tol;
  c.outer_max = outer_max;
  c.inner_max = inner_max;
  c.inner_tol = inner_tol;
  c.penalize_diagonal = penalize_diagonal;
  return c;
}

SymmetricMatrix sym(const Eigen::MatrixXd& m) { return SymmetricMatrix(m); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Condition-number-constrained covariance and precision estimation";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto invalid = py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", invalid.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  py::class_<SpectralLoss>(m, "SpectralLoss")
      .def_static("gaussian", &SpectralLoss::gaussian)
      .def_static("quadratic", &SpectralLoss::quadratic)
      .def_static("nuclear_pair", &SpectralLoss::nuclear_pair, py::arg("eta"), py::arg("mix"))
      .def_property_readonly("name", &SpectralLoss::name)
      .def("value", &SpectralLoss::value)
      .def("derivatives",
           [](const SpectralLoss& l, double x) {
             const auto d = l.derivatives(x);
             return py::make_tuple(d.first, d.second);
           })
      .def("unconstrained_minimizer", &SpectralLoss::unconstrained_minimizer)
      .def("__repr__", [](const SpectralLoss& l) { return "SpectralLoss(" + l.name() + ")"; });

  m.def("sample_covariance",
        [](const Eigen::MatrixXd& x) { return sample_covariance(DataMatrix(x)).matrix(); },
        py::arg("data"), "Sample covariance with divisor n.");
  m.def("eigendecompose",
        [](const Eigen::MatrixXd& a) {
          const Spectrum s = eigendecompose(sym(a));
          return py::make_tuple(s.values, s.vectors);
        },
        py::arg("a"), "Eigenvalues (descending) and eigenvectors of a symmetric matrix.");
  m.def("condition_number", [](const Eigen::MatrixXd& a) { return condition_number(sym(a)).value; },
        py::arg("a"));

  py::class_<ClampedEigenSolution>(m, "ClampedEigenSolution")
      .def_readonly("u_star", &ClampedEigenSolution::u_star)
      .def_readonly("v_star", &ClampedEigenSolution::v_star)
      .def_readonly("lambdas", &ClampedEigenSolution::lambdas)
      .def_readonly("kappa", &ClampedEigenSolution::kappa)
      .def_readonly("constraint_active", &ClampedEigenSolution::constraint_active)
      .def_readonly("at_floor", &ClampedEigenSolution::at_floor)
      .def_property_readonly("region",
                             [](const ClampedEigenSolution& s) { return region_tuple(s.region); });

  m.def("solve_fixed_kappa",
        [](const Eigen::VectorXd& d, const SpectralLoss& loss, double kappa) {
          return solve_fixed_kappa(d, loss, kappa);
        },
        py::arg("d"), py::arg("loss"), py::arg("kappa"),
        "Clamped eigenvalues for one bound; d sorted non-increasing.");
  m.def("oracle_univariate", &oracle_univariate, py::arg("d"), py::arg("loss"), py::arg("kappa"));
  m.def("estimate",
        [](const Eigen::MatrixXd& s, const SpectralLoss& loss, double kappa,
           std::optional<std::string> fmap) {
          const CovarianceMap map = fmap ? parse_fmap(*fmap) : default_covariance_map(loss);
          return estimate(sym(s), loss, map, kappa).matrix();
        },
        py::arg("s"), py::arg("loss"), py::arg("kappa"), py::arg("fmap") = py::none(),
        "Spectral estimate for one bound. fmap: negate, identity, constant-identity or zero.");

  py::class_<SolutionPath>(m, "SolutionPath")
      .def_property_readonly("breakpoints", &SolutionPath::breakpoints)
      .def_property_readonly("regions",
                             [](const SolutionPath& p) {
                               py::list out;
                               for (const auto& r : p.regions()) out.append(region_tuple(r));
                               return out;
                             })
      .def_property_readonly("terminal_kappa", &SolutionPath::terminal_kappa)
      .def_property_readonly("initial_u", &SolutionPath::initial_u)
      .def_property_readonly("num_segments",
                             [](const SolutionPath& p) { return p.segments().size(); })
      .def("u_at", &SolutionPath::u_at, py::arg("kappa"))
      .def("eval", &SolutionPath::eval, py::arg("kappa"));

  m.def("gaussian_path", &gaussian_path, py::arg("s"),
        "Path for the Gaussian likelihood from sample eigenvalues sorted non-increasing.");
  m.def("quadratic_path", &quadratic_path, py::arg("d"));
  m.def("generic_path", &generic_path, py::arg("d"), py::arg("loss"));
  m.def("solution_path", &solution_path, py::arg("d"), py::arg("loss"));

  m.def("project", [](const Eigen::MatrixXd& x, double kappa) { return project(sym(x), kappa).matrix(); },
        py::arg("x"), py::arg("kappa"), "Frobenius projection onto the condition-number set.");
  py::class_<ProjectionPath>(m, "ProjectionPath")
      .def_property_readonly("path", &ProjectionPath::path)
      .def("at", [](const ProjectionPath& p, double kappa) { return p.at(kappa).matrix(); },
           py::arg("kappa"));
  m.def("project_path", [](const Eigen::MatrixXd& x) { return project_path(sym(x)); },
        py::arg("x"));

  m.def("soft_threshold", &soft_threshold, py::arg("x"), py::arg("tau"));
  m.def("prox_l1_offdiag",
        [](const Eigen::MatrixXd& x, double tau, bool penalize_diagonal) {
          return prox_l1_offdiag(sym(x), tau, penalize_diagonal).matrix();
        },
        py::arg("x"), py::arg("tau"), py::arg("penalize_diagonal") = false);
  m.def("smooth_value",
        [](const std::string& kind, const Eigen::MatrixXd& s, const Eigen::MatrixXd& omega,
           double shift, const Eigen::MatrixXd& linear) {
          return smooth_value({parse_kind(kind), sym(s)}, sym(omega), shift, sym(linear));
        },
        py::arg("kind"), py::arg("s"), py::arg("omega"), py::arg("shift"), py::arg("linear"));
  m.def("smooth_gradient",
        [](const std::string& kind, const Eigen::MatrixXd& s, const Eigen::MatrixXd& omega,
           double shift, const Eigen::MatrixXd& linear) {
          return smooth_gradient({parse_kind(kind), sym(s)}, sym(omega), shift, sym(linear)).matrix();
        },
        py::arg("kind"), py::arg("s"), py::arg("omega"), py::arg("shift"), py::arg("linear"));
  m.def("pseudo_objective",
        [](const std::string& kind, const Eigen::MatrixXd& s, const Eigen::MatrixXd& omega,
           double mu) { return pseudo_objective({parse_kind(kind), sym(s)}, sym(omega), mu); },
        py::arg("kind"), py::arg("s"), py::arg("omega"), py::arg("mu"));

  m.def("estimate_sparse_wellconditioned",
        [](const Eigen::MatrixXd& s, const std::string& kind, double mu, double kappa,
           double outer_tol, int outer_max, int inner_max, double inner_tol,
           bool penalize_diagonal) {
          const SplitResult r = estimate_sparse_wellconditioned(
              sym(s), parse_kind(kind),
              make_config(mu, kappa, outer_tol, outer_max, inner_max, inner_tol, penalize_diagonal));
          return py::make_tuple(r.omega.matrix(), report_dict(r.report));
        },
        py::arg("s"), py::arg("kind") = "concord", py::arg("mu"), py::arg("kappa"),
        py::arg("outer_tol") = 1e-6, py::arg("outer_max") = 1000, py::arg("inner_max") = 100,
        py::arg("inner_tol") = 1e-8, py::arg("penalize_diagonal") = false,
        "Sparse precision estimate constrained to condition number <= kappa. Returns (omega, report).");
  m.def("estimate_sparse_unconstrained",
        [](const Eigen::MatrixXd& s, const std::string& kind, double mu, double outer_tol,
           int outer_max, int inner_max, bool penalize_diagonal) {
          const SplitResult r = estimate_sparse_unconstrained(
              sym(s), parse_kind(kind),
              make_config(mu, 1.0, outer_tol, outer_max, inner_max, 1e-8, penalize_diagonal));
          return py::make_tuple(r.omega.matrix(), report_dict(r.report));
        },
        py::arg("s"), py::arg("kind") = "concord", py::arg("mu"), py::arg("outer_tol") = 1e-6,
        py::arg("outer_max") = 1000, py::arg("inner_max") = 100,
        py::arg("penalize_diagonal") = false);

  m.def("make_illustration_precision", [] { return make_illustration_precision().matrix(); });
  m.def("sample_mvn",
        [](const Eigen::MatrixXd& precision, int n, std::uint64_t seed) {
          return sample_mvn(SimSpec(n, seed, sym(precision))).rows();
        },
        py::arg("precision"), py::arg("n"), py::arg("seed"),
        "n rows from N(0, precision^-1); mt19937_64 + Box-Muller, deterministic per seed.");
}
