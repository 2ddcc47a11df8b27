#include "lwf/duality.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lwf/diagrams.hpp"

namespace lwf {

namespace {

double resolve_tol(const NewtonOptions& opts, const OracleConfig& cfg, const MomentReport& first) {
  if (opts.tol > 0.0) return opts.tol;
  if (cfg.mode == OracleMode::Quadrature || !first.std_errors) return kDefaultQuadratureTol;
  return 3.0 * first.std_errors->G.maxCoeff();
}

double residual_norm(const SpdMatrix& G, const SpdMatrix& target) {
  return (G.matrix() - target.matrix()).norm();
}

SymMatrix default_start(const SpdMatrix& G, const Interaction& U) {
  const SymMatrix g_inv = G.inverse().sym();
  if (U.is_diagonal_quartic_family()) return g_inv - sigma1(G, U.effective_coupling());
  return g_inv;
}

}  // namespace

Eigen::MatrixXd forward_jacobian(const MomentReport& report) {
  if (!report.M4) throw Error(ErrorKind::ValidationError, "Jacobian needs fourth moments");
  const int n = report.G.dim();
  const TriangleIndex idx{n};
  const FourthMoments& m4 = *report.M4;
  Eigen::MatrixXd j(idx.size(), idx.size());
  for (int r = 0; r < idx.size(); ++r) {
    const auto [a, b] = idx.pair(r);
    for (int c = 0; c < idx.size(); ++c) {
      const auto [k, l] = idx.pair(c);
      const double cov = m4(a, b, k, l) - report.G(a, b) * report.G(k, l);
      j(r, c) = -0.5 * (k == l ? 1.0 : 2.0) * cov;
    }
  }
  return j;
}

InverseMapResult solve_inverse_map(const SpdMatrix& G_target, const Interaction& U,
                                   const OracleConfig& cfg, const NewtonOptions& opts) {
  require_dim(G_target.dim(), U.dim(), "inverse_map");
  const double lo = G_target.sym().min_eigenvalue();
  if (lo < kBoundaryGuard) {
    throw Error(ErrorKind::BoundaryTooClose,
                "lambda_min(G) = " + std::to_string(lo) + " is below the boundary guard");
  }
  OracleConfig c = cfg;
  c.want_fourth_moments = true;

  InverseMapResult state{opts.initial ? *opts.initial : default_start(G_target, U),
                         MomentReport{}, 0, 0.0};
  require_dim(G_target.dim(), state.A.dim(), "inverse_map initial guess");
  state.moments = evaluate_moments(state.A, U, c);
  state.residual = residual_norm(state.moments.G, G_target);
  const double tol = resolve_tol(opts, cfg, state.moments);
  const int n = G_target.dim();

  for (int it = 0; it < opts.max_iter; ++it) {
    if (state.residual <= tol) return state;
    const Eigen::VectorXd r = upper_triangle(state.moments.G.matrix() - G_target.matrix());
    Eigen::VectorXd step = forward_jacobian(state.moments).fullPivLu().solve(-r);
    // trust cap: no entry moves further than the current scale of A
    const double cap = std::max(1.0, state.A.max_abs());
    const double biggest = step.cwiseAbs().maxCoeff();
    if (!std::isfinite(biggest)) break;
    if (biggest > cap) step *= cap / biggest;

    bool accepted = false;
    double t = 1.0;
    for (int h = 0; h <= kMaxStepHalvings && !accepted; ++h, t *= 0.5) {
      try {
        SymMatrix trial = state.A + from_upper_triangle(n, t * step);
        MomentReport m = evaluate_moments(trial, U, c);
        const double res = residual_norm(m.G, G_target);
        if (res < state.residual) {
          state.A = std::move(trial);
          state.moments = std::move(m);
          state.residual = res;
          accepted = true;
        }
      } catch (const Error&) {
        // trial left the region the oracle can evaluate; shorten the step
      }
    }
    state.iterations = it + 1;
    if (!accepted) break;
  }
  if (state.residual <= tol) return state;
  throw Error(ErrorKind::NoConvergence,
              "inverse map stalled at residual " + std::to_string(state.residual) +
                  " (tol " + std::to_string(tol) + ")",
              state.residual);
}

SymMatrix inverse_map(const SpdMatrix& G_target, const Interaction& U, const OracleConfig& cfg,
                      double tol, int max_iter) {
  NewtonOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  return solve_inverse_map(G_target, U, cfg, opts).A;
}

LwReport lw_evaluate(const SpdMatrix& G, const Interaction& U, const OracleConfig& cfg,
                     const NewtonOptions& opts) {
  const InverseMapResult inv = solve_inverse_map(G, U, cfg, opts);
  const int n = G.dim();
  LwReport r;
  r.A_of_G = inv.A;
  r.Omega = inv.moments.Omega;
  r.F = 0.5 * (inv.A.matrix().cwiseProduct(G.matrix())).sum() - inv.moments.Omega;
  r.Phi0 = n * std::log(2.0 * std::numbers::pi * std::numbers::e);
  r.Phi = 2.0 * r.F - G.logdet() - r.Phi0;
  r.Sigma_exact = inv.A - G.inverse().sym();
  r.mean_U = inv.moments.mean_U;
  r.entropy = r.F + r.mean_U;
  r.solver_iterations = inv.iterations;
  r.residual = inv.residual;
  return r;
}

SymMatrix exact_self_energy(const SpdMatrix& G, const Interaction& U, const OracleConfig& cfg,
                            const NewtonOptions& opts) {
  return solve_inverse_map(G, U, cfg, opts).A - G.inverse().sym();
}

double rho_g_logdensity(const SpdMatrix& G, const Interaction& U, const Eigen::VectorXd& x,
                        const OracleConfig& cfg, const NewtonOptions& opts) {
  require_dim(G.dim(), static_cast<int>(x.size()), "rho_g_logdensity");
  const InverseMapResult inv = solve_inverse_map(G, U, cfg, opts);
  return -0.5 * x.dot(inv.A.matrix() * x) - U.eval(x) + inv.moments.Omega;
}

}  // namespace lwf
