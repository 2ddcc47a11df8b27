// lwf command-line driver: one subcommand per library operation, JSON on
// stdout (or --out), CSV for sweeps and iterate histories.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "lwf/diagrams.hpp"
#include "lwf/duality.hpp"
#include "lwf/io.hpp"
#include "lwf/oracle.hpp"
#include "lwf/solver.hpp"
#include "lwf/verify.hpp"

namespace {

using namespace lwf;

struct Options {
  std::string model;
  std::string green;
  std::string out;
  std::string csv;
  std::string mode;
  std::string sigma_model = "bold1";
  std::string quantity = "phi";
  std::string eps = "1e-3:1e-1:log:10";
  std::string suite = "all";
  int order = 1;
  double damping = 0.5;
  double tol = 0.0;
  int max_iter = 0;
  int quad_nodes = 0;
  std::uint64_t mc_samples = 0;
  std::optional<std::uint64_t> seed;
};

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::NoConvergence:
    case ErrorKind::IterateLeftCone: return 2;
    case ErrorKind::NotPositiveDefinite:
    case ErrorKind::NonFinite: return 3;
    default: return 1;
  }
}

void emit(const std::string& text, const Options& o) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw Error(ErrorKind::ValidationError, "cannot write '" + o.out + "'");
  f << text;
}

OracleConfig oracle_config(const Options& o, const ModelFile& m) {
  OracleConfig c = m.oracle.value_or(OracleConfig{});
  if (o.mode == "quadrature") {
    c.mode = OracleMode::Quadrature;
  } else if (o.mode == "mc") {
    c.mode = OracleMode::MonteCarlo;
  } else if (!o.mode.empty()) {
    throw Error(ErrorKind::ValidationError, "--mode must be quadrature or mc");
  }
  if (o.quad_nodes > 0) c.nodes_per_dim = o.quad_nodes;
  if (o.mc_samples > 0) c.samples = o.mc_samples;
  if (o.seed) c.seed = *o.seed;
  return c;
}

NewtonOptions newton_options(const Options& o) {
  NewtonOptions n;
  n.tol = o.tol;
  if (o.max_iter > 0) n.max_iter = o.max_iter;
  return n;
}

SpdMatrix need_green(const Options& o, const ModelFile& m) {
  if (o.green.empty()) throw Error(ErrorKind::ValidationError, "--G is required for this subcommand");
  SpdMatrix g = load_green(o.green);
  require_dim(m.n, g.dim(), "G file");
  return g;
}

std::vector<double> parse_grid(const std::string& spec) {
  // a:b:log:k
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 4 || parts[2] != "log") {
    throw Error(ErrorKind::ValidationError, "--eps expects a:b:log:k, got '" + spec + "'");
  }
  try {
    return log_grid(std::stod(parts[0]), std::stod(parts[1]), std::stoi(parts[3]));
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::ValidationError, "--eps expects a:b:log:k, got '" + spec + "'");
  }
}

int run_oracle(const Options& o) {
  const ModelFile m = load_model(o.model);
  const OracleConfig c = oracle_config(o, m);
  const MomentReport r = evaluate_moments(m.A, m.interaction, c);
  Json j = to_json(r);
  j["oracle"] = oracle_config_to_json(c);
  emit(dump_json(j), o);
  return 0;
}

int run_invert(const Options& o) {
  const ModelFile m = load_model(o.model);
  const InverseMapResult r =
      solve_inverse_map(need_green(o, m), m.interaction, oracle_config(o, m), newton_options(o));
  emit(dump_json(to_json(r)), o);
  return 0;
}

int run_lw(const Options& o) {
  const ModelFile m = load_model(o.model);
  const LwReport r = lw_evaluate(need_green(o, m), m.interaction, oracle_config(o, m), newton_options(o));
  emit(dump_json(to_json(r)), o);
  return 0;
}

int run_sigma(const Options& o) {
  const ModelFile m = load_model(o.model);
  const BoldSeries s(need_green(o, m), m.interaction, o.order);
  Json terms = Json::array();
  for (int k = 1; k <= s.order(); ++k) {
    terms.push_back({{"order", k},
                     {"sigma", matrix_to_json(s.sigma_terms()[k - 1].matrix())},
                     {"phi", s.phi_terms()[k - 1]}});
  }
  const Json j = {{"order", s.order()},
                  {"terms", terms},
                  {"sigma", matrix_to_json(s.sigma(1.0).matrix())},
                  {"phi", s.phi(1.0)}};
  emit(dump_json(j), o);
  return 0;
}

int run_solve(const Options& o, bool minimize) {
  const ModelFile m = load_model(o.model);
  SolverOptions so;
  so.damping = o.damping;
  if (o.tol > 0.0) so.tol = o.tol;
  if (o.max_iter > 0) so.max_iter = o.max_iter;
  if (!o.green.empty()) {
    so.initial = load_green(o.green);
    require_dim(m.n, so.initial->dim(), "G file");
  }
  const SigmaModel model = parse_sigma_model(o.sigma_model);
  const OracleConfig c = oracle_config(o, m);
  const SolveTrace t = minimize ? minimize_free_energy(m.A, m.interaction, model, so, c)
                                : dyson_solve(m.A, m.interaction, model, so, c);
  Json j = to_json(t);
  j["sigma_model"] = std::string(to_string(model));
  emit(dump_json(j), o);
  if (!o.csv.empty()) {
    std::ofstream f(o.csv, std::ios::binary);
    if (!f) throw Error(ErrorKind::ValidationError, "cannot write '" + o.csv + "'");
    write_trace_csv(t, f);
  }
  return 0;
}

int run_verify(const Options& o) {
  OracleConfig c;
  if (!o.model.empty()) c = oracle_config(o, load_model(o.model));
  else c = oracle_config(o, ModelFile{});
  VerifyContext ctx = make_context(c, o.seed.value_or(20240601));
  if (o.quad_nodes > 0) ctx.cfg.nodes_per_dim = o.quad_nodes;
  const std::vector<CheckReport> reports = run_suite(o.suite, ctx);
  bool ok = true;
  for (const auto& r : reports) {
    ok = ok && r.passed;
    std::fprintf(stderr, "%-4s %-26s metric %-12.4g %s %-10.3g%s%s\n", r.passed ? "PASS" : "FAIL",
                 r.name.c_str(), r.metric, r.lower_bound ? ">=" : "<=", r.threshold,
                 r.error.empty() ? "" : "  error: ", r.error.c_str());
  }
  emit(dump_json(to_json(reports)), o);
  return ok ? 0 : 1;
}

int run_sweep(const Options& o) {
  const ModelFile m = load_model(o.model);
  if (o.quantity != "phi" && o.quantity != "sigma") {
    throw Error(ErrorKind::ValidationError, "--quantity must be phi or sigma");
  }
  const OracleConfig c = oracle_config(o, m);
  // G defaults to the non-interacting propagator of the model
  const SpdMatrix g = o.green.empty() ? SpdMatrix(m.A).inverse() : need_green(o, m);
  const int order = std::max(1, o.order);
  const BoldSeries series(g, m.interaction, order);
  std::vector<SweepRow> rows;
  NewtonOptions n = newton_options(o);
  if (!(n.tol > 0.0) && c.mode == OracleMode::Quadrature) n.tol = 1e-12;
  for (double eps : parse_grid(o.eps)) {
    const LwReport lw = lw_evaluate(g, Interaction::scaled(eps, m.interaction), c, n);
    SweepRow r{eps, 0.0, 0.0};
    if (o.quantity == "phi") {
      r.value = lw.Phi;
      r.residual_vs_series = std::abs(lw.Phi - series.phi(eps));
    } else {
      r.value = lw.Sigma_exact.frobenius_norm();
      r.residual_vs_series = (lw.Sigma_exact - series.sigma(eps)).frobenius_norm();
    }
    rows.push_back(r);
  }
  std::ostringstream os;
  write_sweep_csv(o.quantity, rows, os);
  emit(os.str(), o);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Luttinger-Ward functional toolkit"};
  app.require_subcommand(1);
  Options o;

  auto model_opt = [&](CLI::App* s, bool required) {
    auto* opt = s->add_option("--model", o.model, "model JSON file");
    if (required) opt->required();
  };
  auto oracle_opts = [&](CLI::App* s) {
    s->add_option("--mode", o.mode, "oracle mode: quadrature or mc");
    s->add_option("--quad-nodes", o.quad_nodes, "Gauss-Hermite nodes per dimension");
    s->add_option("--mc-samples", o.mc_samples, "Monte Carlo sample count");
    s->add_option("--seed", o.seed, "Monte Carlo seed");
    s->add_option("--out", o.out, "write output here instead of stdout");
  };
  auto newton_opts = [&](CLI::App* s) {
    s->add_option("--tol", o.tol, "tolerance (<= 0 picks the mode default)");
    s->add_option("--max-iter", o.max_iter, "iteration limit");
  };

  auto* oracle = app.add_subcommand("oracle", "Z, Omega and G for the model's A and U");
  model_opt(oracle, true);
  oracle_opts(oracle);

  auto* invert = app.add_subcommand("invert", "solve G[A] = G for A");
  model_opt(invert, true);
  invert->add_option("--G", o.green, "Green's function JSON file")->required();
  oracle_opts(invert);
  newton_opts(invert);

  auto* lw = app.add_subcommand("lw", "F, Phi and the exact self-energy at G");
  model_opt(lw, true);
  lw->add_option("--G", o.green, "Green's function JSON file")->required();
  oracle_opts(lw);
  newton_opts(lw);

  auto* sigma = app.add_subcommand("sigma", "bold self-energy terms at G");
  model_opt(sigma, true);
  sigma->add_option("--G", o.green, "Green's function JSON file")->required();
  sigma->add_option("--order", o.order, "highest bold order (1 or 2)");
  sigma->add_option("--out", o.out, "write output here instead of stdout");

  auto* dyson = app.add_subcommand("dyson", "damped Dyson fixed-point iteration");
  auto* minimize = app.add_subcommand("minimize", "descent on the variational free energy");
  for (auto* s : {dyson, minimize}) {
    model_opt(s, true);
    s->add_option("--G", o.green, "starting Green's function JSON file");
    s->add_option("--sigma-model", o.sigma_model, "none, bold1, bold12 or exact");
    s->add_option("--damping", o.damping, "mixing parameter in (0, 1]");
    s->add_option("--csv", o.csv, "iterate history CSV (iter,residual,free_energy)");
    oracle_opts(s);
    newton_opts(s);
  }

  auto* verify = app.add_subcommand("verify", "run a named check suite");
  model_opt(verify, false);
  verify->add_option("--suite", o.suite, "gaussian, gradient, bijection, theorem3, transformation, "
                                         "boundary, dyson, truncation or all");
  oracle_opts(verify);

  auto* sweep = app.add_subcommand("sweep", "Phi or Sigma along eps U against the bold series");
  model_opt(sweep, true);
  sweep->add_option("--G", o.green, "Green's function JSON file (default A^{-1})");
  sweep->add_option("--quantity", o.quantity, "phi or sigma");
  sweep->add_option("--eps", o.eps, "grid a:b:log:k");
  sweep->add_option("--order", o.order, "bold order of the comparison series");
  oracle_opts(sweep);
  newton_opts(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help() << "\n" << schema_help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n\n" << app.help() << "\n" << schema_help();
    return 1;
  }

  try {
    if (*oracle) return run_oracle(o);
    if (*invert) return run_invert(o);
    if (*lw) return run_lw(o);
    if (*sigma) return run_sigma(o);
    if (*dyson) return run_solve(o, false);
    if (*minimize) return run_solve(o, true);
    if (*verify) return run_verify(o);
    if (*sweep) return run_sweep(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.kind() == ErrorKind::ParseError) std::cerr << "\n" << schema_help();
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
