#include "condreg/cli.hpp"

#include "condreg/csv.hpp"
#include "condreg/errors.hpp"
#include "condreg/fixed_kappa.hpp"
#include "condreg/path.hpp"
#include "condreg/projection.hpp"
#include "condreg/simulate.hpp"
#include "condreg/splitting.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace condreg::cli {

namespace {

using nlohmann::json;

struct Common {
  std::string input;
  std::string output;
  bool header = false;
  bool from_data = false;
};

struct LossOpts {
  std::string loss = "gaussian";
  double eta = 1.0;
  double mix = 0.5;
  std::string fmap;
};

void add_io(CLI::App* cmd, Common& c, bool needs_input = true) {
  auto* in = cmd->add_option("--input", c.input, "Input CSV file");
  if (needs_input) in->required();
  cmd->add_option("--output", c.output, "Output CSV file (standard output when omitted)");
  cmd->add_flag("--header", c.header, "Skip a header line in the input CSV");
}

void add_from_data(CLI::App* cmd, Common& c) {
  cmd->add_flag("--from-data", c.from_data,
                "Treat the input as an n x p data matrix and use its sample covariance");
}

void add_loss(CLI::App* cmd, LossOpts& l) {
  cmd->add_option("--loss", l.loss, "Spectral loss")
      ->check(CLI::IsMember({"gaussian", "quadratic", "nuclear"}))
      ->capture_default_str();
  cmd->add_option("--eta", l.eta, "Penalty weight of the nuclear pair loss")->capture_default_str();
  cmd->add_option("--mix", l.mix, "Mixing weight of the nuclear pair loss")->capture_default_str();
  cmd->add_option("--fmap", l.fmap,
                  "Linear term f(S): negate, identity, constant-identity or zero "
                  "(default: identity for quadratic, negate otherwise)")
      ->check(CLI::IsMember({"negate", "identity", "constant-identity", "zero"}));
}

SpectralLoss make_loss(const LossOpts& l) {
  if (l.loss == "gaussian") return SpectralLoss::gaussian();
  if (l.loss == "quadratic") return SpectralLoss::quadratic();
  return SpectralLoss::nuclear_pair(l.eta, l.mix);
}

CovarianceMap make_fmap(const LossOpts& l, const SpectralLoss& loss) {
  if (l.fmap.empty()) return default_covariance_map(loss);
  if (l.fmap == "negate") return CovarianceMap::Negate;
  if (l.fmap == "identity") return CovarianceMap::Identity;
  if (l.fmap == "constant-identity") return CovarianceMap::ConstantIdentity;
  return CovarianceMap::Zero;
}

SymmetricMatrix load_symmetric(const Common& c) {
  const Eigen::MatrixXd m = csv::read_matrix(c.input, c.header);
  if (c.from_data) return sample_covariance(DataMatrix(m));
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << "input matrix must be square (got " << m.rows() << " x " << m.cols() << ")";
    throw InvalidInput(os.str());
  }
  return SymmetricMatrix(m);
}

void emit(const Common& c, const std::string& content, std::ostream& out) {
  if (c.output.empty()) {
    out << content;
  } else {
    csv::write_atomic(c.output, content);
  }
}

// Expands `--config file.json` into `--key=value` tokens placed right after the
// subcommand, so flags typed on the command line (parsed later) win.
std::vector<std::string> expand_config(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::string path;
  std::size_t at = 0;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      at = i;
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      at = i;
      break;
    }
  }
  if (path.empty()) return args;
  args.erase(args.begin() + static_cast<std::ptrdiff_t>(at),
             args.begin() + static_cast<std::ptrdiff_t>(at + (args[at] == "--config" ? 2 : 1)));

  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file '" + path + "'");
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw InvalidInput("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!cfg.is_object()) throw InvalidInput("config file must hold a JSON object");

  std::vector<std::string> injected;
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    if (value.is_boolean()) {
      if (value.get<bool>()) injected.push_back(flag);
    } else if (value.is_string()) {
      injected.push_back(flag + "=" + value.get<std::string>());
    } else if (value.is_number_integer()) {
      injected.push_back(flag + "=" + std::to_string(value.get<long long>()));
    } else if (value.is_number()) {
      injected.push_back(flag + "=" + csv::format_double(value.get<double>()));
    } else {
      throw InvalidInput("config key '" + key + "' must be a string, number or boolean");
    }
  }
  // Subcommand is the first token that is not an option.
  std::size_t sub = 1;
  while (sub < args.size() && args[sub].rfind("-", 0) == 0) ++sub;
  const std::size_t insert_at = std::min(sub + 1, args.size());
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(insert_at), injected.begin(),
              injected.end());
  return args;
}

std::string path_csv(const SolutionPath& path, int grid, double kappa_max) {
  std::ostringstream os;
  os << "kappa,alpha,beta,u,v\n";
  auto row = [&](double kappa, RegionIndex r, double u) {
    os << csv::format_double(kappa) << ',' << r.alpha << ',' << r.beta << ','
       << csv::format_double(u) << ',' << csv::format_double(kappa * u) << '\n';
  };
  const auto& bps = path.breakpoints();
  const auto& regions = path.regions();
  for (std::size_t k = 0; k < bps.size(); ++k) {
    // At κ = 1 report the starting point itself, which is the shared limit of
    // the first segment.
    const double u = k == 0 ? path.initial_u() : path.u_at(bps[k]);
    row(bps[k], regions[k], u);
  }
  if (bps.empty()) row(1.0, {0, path.problem().dim() + 1}, path.initial_u());
  if (grid > 0) {
    double top = kappa_max;
    if (!(top > 1.0)) {
      const double term = path.terminal_kappa();
      top = std::isfinite(term) && term > 1.0 ? 1.25 * term
                                              : (bps.size() > 1 ? 2.0 * bps.back() : 10.0);
    }
    for (int i = 0; i < grid; ++i) {
      const double t = grid == 1 ? 0.0 : static_cast<double>(i) / (grid - 1);
      const double kappa = std::exp(t * std::log(top));
      const ClampedEigenSolution sol = path.eval(kappa);
      row(kappa, sol.region, sol.u_star);
    }
  }
  return os.str();
}

json report_json(const SplitReport& r, const std::string& loss, const SplitConfig& cfg,
                 bool constrained) {
  json j;
  j["schema"] = 1;
  j["loss"] = loss;
  j["mu"] = cfg.mu;
  j["kappa"] = constrained ? json(cfg.kappa) : json(nullptr);
  j["iterations"] = r.iterations;
  j["residual"] = r.residual;
  j["objective"] = r.objective;
  j["min_eig"] = r.min_eig;
  j["max_eig"] = r.max_eig;
  j["cond"] = std::isfinite(r.cond) ? json(r.cond) : json(nullptr);
  j["nnz_offdiag"] = r.nnz_offdiag;
  json support = json::array();
  for (const auto& [i, k] : r.support) support.push_back({i + 1, k + 1});
  j["support"] = support;
  j["converged"] = r.converged;
  return j;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Condition-number-constrained covariance and precision estimation"};
  app.name("condreg");
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string config_path;
  app.add_option("--config", config_path,
                 "JSON file whose keys mirror the long flags of the chosen subcommand");

  Common common;
  LossOpts lopts;
  double kappa = 0.0;

  auto* est = app.add_subcommand("estimate", "Spectral estimator for one condition-number bound");
  add_io(est, common);
  add_from_data(est, common);
  add_loss(est, lopts);
  est->add_option("--kappa", kappa, "Condition-number bound (>= 1)")->required();

  int grid = 0;
  double kappa_max = 0.0;
  auto* pth = app.add_subcommand("path", "Breakpoints of the solution path in kappa");
  add_io(pth, common);
  add_from_data(pth, common);
  add_loss(pth, lopts);
  pth->add_option("--grid", grid, "Also emit this many log-spaced kappa samples")
      ->check(CLI::NonNegativeNumber);
  pth->add_option("--kappa-max", kappa_max, "Upper end of the --grid samples");

  auto* prj = app.add_subcommand("project", "Frobenius projection onto the condition-number set");
  add_io(prj, common);
  prj->add_option("--kappa", kappa, "Condition-number bound (>= 1)")->required();

  SplitConfig scfg;
  std::string sloss = "concord";
  std::string report_path;
  bool unconstrained = false;
  auto* spr = app.add_subcommand("sparse", "Sparse and well-conditioned precision estimate");
  add_io(spr, common);
  add_from_data(spr, common);
  spr->add_option("--loss", sloss, "Pseudo-likelihood loss")
      ->check(CLI::IsMember({"concord", "dtrace"}))
      ->capture_default_str();
  spr->add_option("--mu", scfg.mu, "l1 penalty level")->required();
  spr->add_option("--kappa", scfg.kappa, "Condition-number bound (>= 1)");
  spr->add_option("--outer-tol", scfg.outer_tol, "Relative-change tolerance")->capture_default_str();
  spr->add_option("--outer-max", scfg.outer_max, "Outer iteration cap")->capture_default_str();
  spr->add_option("--inner-max", scfg.inner_max, "Inner iterations per outer step")
      ->capture_default_str();
  spr->add_option("--inner-tol", scfg.inner_tol, "Inner relative-change tolerance")
      ->capture_default_str();
  spr->add_flag("--penalize-diagonal", scfg.penalize_diagonal, "Penalize diagonal entries too");
  spr->add_flag("--unconstrained", unconstrained, "Drop the condition-number constraint");
  spr->add_option("--report", report_path, "Write a JSON report here");

  int sim_p = 10;
  int sim_n = 200;
  std::uint64_t seed = 0;
  std::string planted = "illustration";
  std::string cov_output;
  auto* sim = app.add_subcommand("simulate", "Draw Gaussian samples from a planted precision");
  sim->add_option("--p", sim_p, "Dimension")->capture_default_str();
  sim->add_option("--n", sim_n, "Number of samples")->capture_default_str();
  sim->add_option("--seed", seed, "Random seed")->required();
  sim->add_option("--planted", planted, "Planted precision")
      ->check(CLI::IsMember({"illustration", "identity"}))
      ->capture_default_str();
  sim->add_option("--output", common.output, "Output CSV file (standard output when omitted)");
  sim->add_option("--cov-output", cov_output, "Also write the sample covariance here");

  auto* eig = app.add_subcommand("eigs", "Eigenvalues as index,eigenvalue rows");
  add_io(eig, common);
  add_from_data(eig, common);

  try {
    const std::vector<std::string> args = expand_config(argc, argv);
    std::vector<const char*> cargs;
    for (const auto& a : args) cargs.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kOk : kUsage;
    }

    if (est->parsed()) {
      const SpectralLoss loss = make_loss(lopts);
      const SymmetricMatrix s = load_symmetric(common);
      const SymmetricMatrix omega = estimate(s, loss, make_fmap(lopts, loss), kappa);
      emit(common, csv::format_matrix(omega.matrix()), out);
    } else if (pth->parsed()) {
      const SpectralLoss loss = make_loss(lopts);
      const SymmetricMatrix s = load_symmetric(common);
      const Spectrum basis = eigendecompose(apply_covariance_map(s, make_fmap(lopts, loss)));
      const SolutionPath path = solution_path(basis.values, loss);
      emit(common, path_csv(path, grid, kappa_max), out);
    } else if (prj->parsed()) {
      const SymmetricMatrix x = load_symmetric(common);
      emit(common, csv::format_matrix(project(x, kappa).matrix()), out);
    } else if (spr->parsed()) {
      const SymmetricMatrix s = load_symmetric(common);
      const PseudoKind kind = sloss == "dtrace" ? PseudoKind::DTrace : PseudoKind::Concord;
      const SplitResult res = unconstrained ? estimate_sparse_unconstrained(s, kind, scfg)
                                            : estimate_sparse_wellconditioned(s, kind, scfg);
      if (!res.report.converged) {
        err << "warning: iteration cap reached before the tolerance was met\n";
      }
      emit(common, csv::format_matrix(res.omega.matrix()), out);
      if (!report_path.empty()) {
        csv::write_atomic(report_path,
                          report_json(res.report, sloss, scfg, !unconstrained).dump(2) + "\n");
      }
    } else if (sim->parsed()) {
      SymmetricMatrix precision;
      if (planted == "illustration") {
        if (sim_p != 10) throw InvalidInput("the illustration precision is 10 x 10 (use --p 10)");
        precision = make_illustration_precision();
      } else {
        if (sim_p < 1) throw InvalidInput("--p must be >= 1");
        precision = SymmetricMatrix::identity(sim_p);
      }
      const DataMatrix data = sample_mvn(SimSpec(sim_n, seed, precision));
      emit(common, csv::format_matrix(data.rows()), out);
      if (!cov_output.empty()) {
        csv::write_atomic(cov_output, csv::format_matrix(sample_covariance(data).matrix()));
      }
    } else if (eig->parsed()) {
      const SymmetricMatrix s = load_symmetric(common);
      const Spectrum spec = eigendecompose(s);
      std::ostringstream os;
      os << "index,eigenvalue\n";
      for (Eigen::Index i = 0; i < spec.values.size(); ++i) {
        os << i + 1 << ',' << csv::format_double(spec.values[i]) << '\n';
      }
      emit(common, os.str(), out);
    }
    return kOk;
  } catch (const NumericalError& e) {
    err << "condreg: numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const InvalidInput& e) {
    err << "condreg: invalid input: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    err << "condreg: error: " << e.what() << '\n';
    return kNumerical;
  }
}

}  // namespace condreg::cli
