#include "lwf/solver.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lwf/diagrams.hpp"

namespace lwf {

SigmaModel parse_sigma_model(std::string_view name) {
  if (name == "none") return SigmaModel::None;
  if (name == "bold1") return SigmaModel::Bold1;
  if (name == "bold12") return SigmaModel::Bold12;
  if (name == "exact") return SigmaModel::ExactOracle;
  throw Error(ErrorKind::ValidationError, "unknown sigma model '" + std::string(name) + "'");
}

std::string_view to_string(SigmaModel model) {
  switch (model) {
    case SigmaModel::None: return "none";
    case SigmaModel::Bold1: return "bold1";
    case SigmaModel::Bold12: return "bold12";
    case SigmaModel::ExactOracle: return "exact";
  }
  return "unknown";
}

namespace {

constexpr double kDescentSlack = 1e-12;

double phi0(int n) { return n * std::log(2.0 * std::numbers::pi * std::numbers::e); }

double objective(const SymMatrix& A, const SpdMatrix& G, double phi) {
  return 0.5 * ((A.matrix().cwiseProduct(G.matrix())).sum() - G.logdet() - phi - phi0(G.dim()));
}

void check_model(const SymMatrix& A, const Interaction& U, SigmaModel model) {
  require_dim(A.dim(), U.dim(), "solver");
  if (model == SigmaModel::None && !is_spd(A)) {
    throw Error(ErrorKind::ValidationError,
                "the non-interacting model needs a positive definite A");
  }
  if ((model == SigmaModel::Bold1 || model == SigmaModel::Bold12) &&
      !U.is_diagonal_quartic_family()) {
    throw Error(ErrorKind::UnsupportedInteraction,
                "bold models need a (scaled) diagonal quartic interaction");
  }
}

SpdMatrix initial_green(const SymMatrix& A, const SolverOptions& opts, const OracleConfig& cfg) {
  if (opts.initial) {
    require_dim(A.dim(), opts.initial->dim(), "solver initial G");
    return *opts.initial;
  }
  if (is_spd(A)) return SpdMatrix(A).inverse();
  return SpdMatrix(envelope_matrix(A, cfg.envelope_floor)).inverse();
}

NewtonOptions inner_newton(const SolverOptions& opts) {
  NewtonOptions n = opts.newton;
  if (!(n.tol > 0.0)) n.tol = std::min(1e-12, opts.tol / 100.0);
  return n;
}

}  // namespace

double dyson_residual(const SymMatrix& A, const SpdMatrix& G, const SymMatrix& sigma) {
  return (G.inverse().matrix() - A.matrix() + sigma.matrix()).norm();
}

ModelValue evaluate_model(const SpdMatrix& G, const Interaction& U, SigmaModel model,
                          const OracleConfig& cfg, const NewtonOptions& newton) {
  require_dim(G.dim(), U.dim(), "evaluate_model");
  switch (model) {
    case SigmaModel::None: return {SymMatrix::zero(G.dim()), 0.0, std::nullopt};
    case SigmaModel::Bold1:
    case SigmaModel::Bold12: {
      const BoldSeries series(G, U, model == SigmaModel::Bold1 ? 1 : 2);
      return {series.sigma(1.0), series.phi(1.0), std::nullopt};
    }
    case SigmaModel::ExactOracle: {
      const LwReport lw = lw_evaluate(G, U, cfg, newton);
      return {lw.Sigma_exact, lw.Phi, lw.A_of_G};
    }
  }
  throw Error(ErrorKind::ValidationError, "unknown sigma model");
}

double free_energy(const SymMatrix& A, const SpdMatrix& G, const Interaction& U, SigmaModel model,
                   const OracleConfig& cfg, const NewtonOptions& newton) {
  require_dim(A.dim(), G.dim(), "free_energy");
  return objective(A, G, evaluate_model(G, U, model, cfg, newton).phi);
}

SolveTrace dyson_solve(const SymMatrix& A, const Interaction& U, SigmaModel model,
                       const SolverOptions& opts, const OracleConfig& cfg) {
  check_model(A, U, model);
  if (!(opts.damping > 0.0 && opts.damping <= 1.0)) {
    throw Error(ErrorKind::ValidationError, "damping must lie in (0, 1]");
  }
  NewtonOptions newton = inner_newton(opts);
  SolveTrace trace;
  SpdMatrix g = initial_green(A, opts, cfg);
  for (int t = 0; t <= opts.max_iter; ++t) {
    const ModelValue mv = evaluate_model(g, U, model, cfg, newton);
    if (mv.A_of_G) newton.initial = mv.A_of_G;  // warm start the next inverse map
    const double res = dyson_residual(A, g, mv.sigma);
    trace.iterates.push_back({t, res, objective(A, g, mv.phi)});
    trace.final_G = g;
    if (res <= opts.tol) {
      trace.converged = true;
      return trace;
    }
    if (t == opts.max_iter) break;

    const Eigen::MatrixXd bare_inverse = A.matrix() - mv.sigma.matrix();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(bare_inverse);
    if (!lu.isInvertible()) {
      throw Error(ErrorKind::IterateLeftCone, "A - Sigma[G] is singular", res);
    }
    const Eigen::MatrixXd target = lu.inverse();
    bool moved = false;
    for (double alpha = opts.damping; alpha >= kMinDamping * (1.0 - 1e-12); alpha *= 0.5) {
      const Eigen::MatrixXd mix = (1.0 - alpha) * g.matrix() + alpha * target;
      const SymMatrix cand(0.5 * (mix + mix.transpose()));
      if (is_spd(cand)) {
        g = SpdMatrix(cand);
        moved = true;
        break;
      }
    }
    if (!moved) {
      throw Error(ErrorKind::IterateLeftCone,
                  "no damping >= 1/64 keeps the iterate positive definite", res);
    }
  }
  throw Error(ErrorKind::NoConvergence,
              "Dyson iteration did not reach tol " + std::to_string(opts.tol),
              trace.iterates.back().residual);
}

SolveTrace minimize_free_energy(const SymMatrix& A, const Interaction& U, SigmaModel model,
                                const SolverOptions& opts, const OracleConfig& cfg) {
  check_model(A, U, model);
  NewtonOptions newton = inner_newton(opts);

  struct Point {
    Eigen::MatrixXd L;
    SpdMatrix G;
    double f = 0.0;
    Eigen::MatrixXd grad;  // d f / d L, lower triangle
    double residual = 0.0;
  };
  auto evaluate = [&](const Eigen::MatrixXd& L) {
    Point p;
    p.L = L;
    p.G = SpdMatrix(SymMatrix(L * L.transpose()));
    const ModelValue mv = evaluate_model(p.G, U, model, cfg, newton);
    if (mv.A_of_G) newton.initial = mv.A_of_G;
    p.f = objective(A, p.G, mv.phi);
    const Eigen::MatrixXd m =
        0.5 * (A.matrix() - p.G.inverse().matrix() - mv.sigma.matrix());  // d f / d G
    p.residual = 2.0 * m.norm();
    p.grad = (2.0 * m * L).triangularView<Eigen::Lower>();
    return p;
  };

  SolveTrace trace;
  Point cur = evaluate(initial_green(A, opts, cfg).factor());
  double step = 1.0;
  Eigen::MatrixXd prev_L;
  Eigen::MatrixXd prev_grad;
  for (int t = 0; t <= opts.max_iter; ++t) {
    trace.iterates.push_back({t, cur.residual, cur.f});
    trace.final_G = cur.G;
    if (cur.residual <= opts.tol) {
      trace.converged = true;
      return trace;
    }
    if (t == opts.max_iter) break;
    if (t > 0) {
      // Barzilai-Borwein length as the first trial step
      const Eigen::MatrixXd s = cur.L - prev_L;
      const Eigen::MatrixXd y = cur.grad - prev_grad;
      const double sy = (s.cwiseProduct(y)).sum();
      if (sy > 0.0) step = (s.cwiseProduct(s)).sum() / sy;
    }
    const double g2 = cur.grad.squaredNorm();
    bool accepted = false;
    for (int h = 0; h < 60 && !accepted; ++h, step *= 0.5) {
      const Eigen::MatrixXd L = cur.L - step * cur.grad;
      if ((L.diagonal().array() <= 0.0).any()) continue;
      try {
        Point next = evaluate(L);
        // Armijo, with a 1e-12 slack that lets the residual keep shrinking
        // once decreases of f drop below roundoff
        const bool armijo = next.f <= cur.f - 1e-4 * step * g2;
        const bool flat = next.f <= cur.f + kDescentSlack * std::max(1.0, std::abs(cur.f)) &&
                          next.residual < cur.residual;
        if (armijo || flat) {
          prev_L = cur.L;
          prev_grad = cur.grad;
          cur = std::move(next);
          accepted = true;
        }
      } catch (const Error&) {
        // step left the cone or the oracle domain
      }
    }
    if (!accepted) break;
  }
  if (cur.residual <= opts.tol) {
    trace.converged = true;
    return trace;
  }
  throw Error(ErrorKind::NoConvergence,
              "free-energy descent stalled at Dyson residual " + std::to_string(cur.residual),
              cur.residual);
}

}  // namespace lwf
