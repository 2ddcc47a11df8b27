#include "lwf/verify.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "lwf/diagrams.hpp"
#include "lwf/duality.hpp"
#include "lwf/solver.hpp"

namespace lwf {

// ---------------------------------------------------------------- profiles

const ThresholdProfile& quadrature_profile() {
  static const ThresholdProfile p{
      .name = "quadrature",
      .gaussian_closed_form = 1e-10,
      .noninteracting_phi = 1e-8,
      .gradient_omega = 1e-5,
      .bijection = 1e-6,
      .asymptotic_margin = 0.8,
      .transformation = 1e-5,
      .boundary = 1e-3,
      .selfenergy_gradient = 1e-4,
      .dyson_match = 1e-6,
      .bold1_root = 1e-10,
      .truncation_probe = 1e-8,
      .newton_tol = 1e-12,
      .solver_tol = 1e-9,
      .fd_step_omega = 1e-4,
      .fd_step_phi = 1e-4,
      .slope_noise_floor = 1e-12,
      .slope_points = 4,
      .boundary_power = 1,
      .boundary_terms = 3,
      .fd_directions = 6,
      // 64 nodes leave ~1e-5 discretization error at unit coupling
      .quad_nodes = 256,
  };
  return p;
}

const ThresholdProfile& monte_carlo_profile() {
  // sized for 10^6 samples at n <= 2
  static const ThresholdProfile p{
      .name = "monte_carlo",
      .gaussian_closed_form = 2e-2,
      .noninteracting_phi = 1e-3,  // second order in the sampling error of A
      .gradient_omega = 5e-2,
      .bijection = 5e-2,
      .asymptotic_margin = 0.8,
      .transformation = 5e-2,
      .boundary = 5e-2,
      .selfenergy_gradient = 1e-1,
      .dyson_match = 5e-2,
      .bold1_root = 1e-10,
      .truncation_probe = 1e-6,
      .newton_tol = 0.0,  // three standard errors
      .solver_tol = 1e-6,
      .fd_step_omega = 1e-2,
      .fd_step_phi = 1e-2,
      .slope_noise_floor = 1e-12,
      .slope_points = 4,
      .boundary_power = 1,
      .boundary_terms = 3,
      .fd_directions = 6,
      .quad_nodes = 64,
  };
  return p;
}

VerifyContext make_context(const OracleConfig& cfg, std::uint64_t seed) {
  VerifyContext ctx;
  ctx.cfg = cfg;
  ctx.th = cfg.mode == OracleMode::Quadrature ? quadrature_profile() : monte_carlo_profile();
  ctx.seed = seed;
  if (cfg.mode == OracleMode::Quadrature) ctx.cfg.nodes_per_dim = ctx.th.quad_nodes;
  return ctx;
}

// ---------------------------------------------------------------- helpers

namespace {

constexpr double kFdAbsFloor = 1e-6;

NewtonOptions newton(const VerifyContext& ctx) {
  NewtonOptions o;
  o.tol = ctx.th.newton_tol;
  return o;
}

CheckReport make_report(std::string name, double metric, double threshold, bool lower = false) {
  CheckReport r;
  r.name = std::move(name);
  r.metric = metric;
  r.threshold = threshold;
  r.lower_bound = lower;
  r.passed = std::isfinite(metric) && (lower ? metric >= threshold : metric <= threshold);
  return r;
}

template <class F>
CheckReport guarded(const std::string& name, double threshold, bool lower, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    CheckReport r = make_report(name, std::numeric_limits<double>::quiet_NaN(), threshold, lower);
    r.error = e.what();
    return r;
  }
}

std::vector<SymMatrix> random_directions(int n, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<SymMatrix> out;
  for (int c = 0; c < count; ++c) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = u(rng);
    out.emplace_back(m / m.norm());
  }
  return out;
}

double trace_product(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a.cwiseProduct(b)).sum();
}

double relative_gap(double fd, double analytic, double scale) {
  return std::abs(fd - analytic) / std::max({std::abs(analytic), 1e-3 * scale, kFdAbsFloor});
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

SpdMatrix block_diagonal(const SpdMatrix& gp, int n, double delta) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  const int p = gp.dim();
  g.topLeftCorner(p, p) = gp.matrix();
  for (int i = p; i < n; ++i) g(i, i) = delta;
  return SpdMatrix(SymMatrix(g));
}

}  // namespace

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0 && hi > 0.0) || count < 1) {
    throw Error(ErrorKind::ValidationError, "log grid needs positive bounds and count");
  }
  std::vector<double> g;
  if (count == 1) return {lo};
  for (int k = 0; k < count; ++k) {
    g.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * k / (count - 1)));
  }
  return g;
}

double fit_loglog_slope(const std::vector<double>& eps, const std::vector<double>& residual,
                        int points, double floor) {
  std::vector<std::pair<double, double>> kept;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    if (std::isfinite(residual[k]) && residual[k] > floor && eps[k] > 0.0) {
      kept.emplace_back(eps[k], residual[k]);
    }
  }
  std::sort(kept.begin(), kept.end());
  if (static_cast<int>(kept.size()) > points) kept.resize(points);
  if (kept.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [e, r] : kept) {
    const double x = std::log(e);
    const double y = std::log(r);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(kept.size());
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double extrapolate_to_zero(const std::vector<double>& delta, const std::vector<double>& value,
                           int power, int terms) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < delta.size(); ++k) pts.emplace_back(delta[k], value[k]);
  std::sort(pts.begin(), pts.end());
  if (terms < 1 || static_cast<int>(pts.size()) < terms) {
    throw Error(ErrorKind::ValidationError, "not enough grid points for extrapolation");
  }
  pts.resize(terms);
  // Lagrange interpolation in t = delta^power evaluated at t = 0
  double result = 0.0;
  for (int a = 0; a < terms; ++a) {
    const double ta = std::pow(pts[a].first, power);
    double basis = 1.0;
    for (int b = 0; b < terms; ++b) {
      if (b == a) continue;
      const double tb = std::pow(pts[b].first, power);
      basis *= tb / (tb - ta);
    }
    result += basis * pts[a].second;
  }
  return result;
}

// ---------------------------------------------------------------- checks

CheckReport check_gaussian_closed_form(const SymMatrix& A, const VerifyContext& ctx) {
  const double th = ctx.th.gaussian_closed_form;
  return guarded("gaussian_closed_form", th, false, [&] {
    const int n = A.dim();
    const SpdMatrix a(A);
    const MomentReport m = evaluate_moments(A, Interaction::zero(n), ctx.cfg);
    const double omega = 0.5 * a.logdet() - 0.5 * n * std::log(2.0 * std::numbers::pi);
    const SpdMatrix g0 = a.inverse();
    const double e_omega = std::abs(m.Omega - omega) / std::max(1.0, std::abs(omega));
    const double e_g = max_abs(m.G.matrix() - g0.matrix()) / max_abs(g0.matrix());
    CheckReport r = make_report("gaussian_closed_form", std::max(e_omega, e_g), th);
    r.details = {{"omega", {m.Omega, omega}}, {"rel_err_omega", {e_omega}}, {"rel_err_G", {e_g}}};
    return r;
  });
}

CheckReport check_noninteracting_phi(const SpdMatrix& G, const VerifyContext& ctx) {
  const double th = ctx.th.noninteracting_phi;
  return guarded("noninteracting_phi", th, false, [&] {
    const int n = G.dim();
    // start Newton away from G^{-1} so the solve actually iterates
    NewtonOptions o = newton(ctx);
    o.initial = SymMatrix::identity(n) * (n / G.matrix().trace());
    const LwReport lw = lw_evaluate(G, Interaction::zero(n), ctx.cfg, o);
    const double f_closed =
        0.5 * (n * std::log(2.0 * std::numbers::pi * std::numbers::e) + G.logdet());
    CheckReport r = make_report("noninteracting_phi", std::abs(lw.Phi), th);
    r.details = {{"phi", {lw.Phi}},
                 {"F", {lw.F, f_closed}},
                 {"sigma_norm", {lw.Sigma_exact.frobenius_norm()}},
                 {"newton_iterations", {static_cast<double>(lw.solver_iterations)}}};
    return r;
  });
}

CheckReport check_gradient_omega(const SymMatrix& A, const Interaction& U, const VerifyContext& ctx) {
  const double th = ctx.th.gradient_omega;
  return guarded("gradient_omega", th, false, [&] {
    const MomentReport base = evaluate_moments(A, U, ctx.cfg);
    const double h = ctx.th.fd_step_omega;
    double worst = 0.0;
    CheckDetail fd{"fd", {}};
    CheckDetail an{"analytic", {}};
    for (const SymMatrix& d : random_directions(A.dim(), ctx.th.fd_directions, ctx.seed)) {
      const double up = evaluate_moments(A + d * h, U, ctx.cfg).Omega;
      const double dn = evaluate_moments(A - d * h, U, ctx.cfg).Omega;
      const double deriv = (up - dn) / (2.0 * h);
      const double analytic = 0.5 * trace_product(base.G.matrix(), d.matrix());
      worst = std::max(worst, relative_gap(deriv, analytic, 0.5 * base.G.matrix().norm()));
      fd.values.push_back(deriv);
      an.values.push_back(analytic);
    }
    CheckReport r = make_report("gradient_omega", worst, th);
    r.details = {fd, an};
    return r;
  });
}

CheckReport check_bijection(const SymMatrix& A, const Interaction& U, const VerifyContext& ctx) {
  const double th = ctx.th.bijection;
  return guarded("bijection", th, false, [&] {
    const SpdMatrix g = green_of_A(A, U, ctx.cfg);
    const InverseMapResult inv = solve_inverse_map(g, U, ctx.cfg, newton(ctx));
    CheckReport r = make_report("bijection", max_abs(inv.A.matrix() - A.matrix()), th);
    r.details = {{"newton_iterations", {static_cast<double>(inv.iterations)}},
                 {"newton_residual", {inv.residual}},
                 {"lambda_min_A", {A.min_eigenvalue()}}};
    return r;
  });
}

CheckReport check_asymptotic_order(const SpdMatrix& G, const SymMatrix& v, int order,
                                   const std::vector<double>& eps_grid, const VerifyContext& ctx) {
  const double th = order + ctx.th.asymptotic_margin;
  const std::string name = "asymptotic_order_N" + std::to_string(order);
  return guarded(name, th, true, [&] {
    const BoldSeries series(G, v, order);
    const Interaction base = Interaction::diagonal_quartic(v);
    std::vector<double> res_sigma;
    std::vector<double> res_phi;
    for (double eps : eps_grid) {
      const LwReport lw = lw_evaluate(G, Interaction::scaled(eps, base), ctx.cfg, newton(ctx));
      res_sigma.push_back((lw.Sigma_exact.matrix() - series.sigma(eps).matrix()).norm());
      res_phi.push_back(std::abs(lw.Phi - series.phi(eps)));
    }
    const double s_sigma =
        fit_loglog_slope(eps_grid, res_sigma, ctx.th.slope_points, ctx.th.slope_noise_floor);
    const double s_phi =
        fit_loglog_slope(eps_grid, res_phi, ctx.th.slope_points, ctx.th.slope_noise_floor);
    CheckReport r = make_report(name, std::min(s_sigma, s_phi), th, true);
    if (std::isnan(s_sigma) || std::isnan(s_phi)) r.passed = false;
    r.details = {{"eps", eps_grid},
                 {"residual_sigma", res_sigma},
                 {"residual_phi", res_phi},
                 {"slope_sigma", {s_sigma}},
                 {"slope_phi", {s_phi}}};
    return r;
  });
}

CheckReport check_transformation_rule(const SpdMatrix& G, const Interaction& U, const LinearMap& T,
                                      const VerifyContext& ctx) {
  const double th = ctx.th.transformation;
  return guarded("transformation_rule", th, false, [&] {
    const double lhs = lw_evaluate(congruence(T, G), U, ctx.cfg, newton(ctx)).Phi;
    const double rhs = lw_evaluate(G, compose(U, T), ctx.cfg, newton(ctx)).Phi;
    CheckReport r = make_report("transformation_rule", std::abs(lhs - rhs), th);
    r.details = {{"phi_transformed_G", {lhs}}, {"phi_composed_U", {rhs}}, {"det_T", {T.determinant()}}};
    return r;
  });
}

CheckReport check_boundary_continuity(const SpdMatrix& G_p, const Interaction& U,
                                      const std::vector<double>& delta_grid,
                                      const VerifyContext& ctx) {
  const double th = ctx.th.boundary;
  return guarded("boundary_continuity", th, false, [&] {
    const int n = U.dim();
    const int p = G_p.dim();
    if (p >= n) throw Error(ErrorKind::DimensionMismatch, "boundary check needs p < n");
    std::vector<double> phis;
    for (double delta : delta_grid) {
      if (delta < kBoundaryGuard) {
        throw Error(ErrorKind::BoundaryTooClose, "delta below the boundary guard");
      }
      phis.push_back(lw_evaluate(block_diagonal(G_p, n, delta), U, ctx.cfg, newton(ctx)).Phi);
    }
    const double limit =
        extrapolate_to_zero(delta_grid, phis, ctx.th.boundary_power, ctx.th.boundary_terms);
    const double reference = lw_evaluate(G_p, restrict(U, p), ctx.cfg, newton(ctx)).Phi;
    CheckReport r = make_report("boundary_continuity", std::abs(limit - reference), th);
    r.details = {{"delta", delta_grid}, {"phi_n", phis}, {"limit", {limit}}, {"phi_p", {reference}}};
    return r;
  });
}

CheckReport check_selfenergy_gradient(const SpdMatrix& G, const Interaction& U,
                                      const VerifyContext& ctx) {
  const double th = ctx.th.selfenergy_gradient;
  return guarded("selfenergy_gradient", th, false, [&] {
    const LwReport base = lw_evaluate(G, U, ctx.cfg, newton(ctx));
    NewtonOptions warm = newton(ctx);
    warm.initial = base.A_of_G;
    const double h = ctx.th.fd_step_phi;
    double worst = 0.0;
    CheckDetail fd{"fd", {}};
    CheckDetail an{"analytic", {}};
    for (const SymMatrix& d : random_directions(G.dim(), ctx.th.fd_directions, ctx.seed + 1)) {
      const SpdMatrix up(G.sym() + d * h);
      const SpdMatrix dn(G.sym() - d * h);
      const double deriv = (lw_evaluate(up, U, ctx.cfg, warm).Phi -
                            lw_evaluate(dn, U, ctx.cfg, warm).Phi) / (2.0 * h);
      const double analytic = trace_product(base.Sigma_exact.matrix(), d.matrix());
      worst = std::max(worst, relative_gap(deriv, analytic, base.Sigma_exact.frobenius_norm()));
      fd.values.push_back(deriv);
      an.values.push_back(analytic);
    }
    CheckReport r = make_report("selfenergy_gradient", worst, th);
    r.details = {fd, an};
    return r;
  });
}

CheckReport check_dyson_consistency(const SymMatrix& A, const Interaction& U,
                                    const VerifyContext& ctx) {
  const double th = ctx.th.dyson_match;
  return guarded("dyson_consistency", th, false, [&] {
    SolverOptions opts;
    opts.tol = ctx.th.solver_tol;
    const MomentReport oracle = evaluate_moments(A, U, ctx.cfg);
    const SolveTrace fixed = dyson_solve(A, U, SigmaModel::ExactOracle, opts, ctx.cfg);
    const SolveTrace descent = minimize_free_energy(A, U, SigmaModel::ExactOracle, opts, ctx.cfg);
    NewtonOptions o = newton(ctx);
    const double fe = free_energy(A, oracle.G, U, SigmaModel::ExactOracle, ctx.cfg, o);

    const double e_fixed = max_abs(fixed.final_G.matrix() - oracle.G.matrix());
    const double e_descent = max_abs(descent.final_G.matrix() - oracle.G.matrix());
    const double e_omega = std::abs(fe - oracle.Omega);
    const double stationarity = descent.iterates.back().residual;
    CheckReport r = make_report("dyson_consistency", std::max({e_fixed, e_descent, e_omega}), th);
    r.passed = r.passed && fixed.converged && descent.converged &&
               stationarity <= 10.0 * opts.tol;
    r.details = {{"dyson_vs_oracle", {e_fixed}},
                 {"descent_vs_oracle", {e_descent}},
                 {"free_energy_vs_omega", {e_omega}},
                 {"descent_dyson_residual", {stationarity, 10.0 * opts.tol}},
                 {"dyson_iterations", {static_cast<double>(fixed.iterates.size())}},
                 {"descent_iterations", {static_cast<double>(descent.iterates.size())}}};
    return r;
  });
}

CheckReport check_bold1_root(const VerifyContext& ctx) {
  const double th = ctx.th.bold1_root;
  return guarded("bold1_root", th, false, [&] {
    const SymMatrix a = SymMatrix::identity(1);
    const Interaction u = Interaction::diagonal_quartic(SymMatrix::identity(1));
    SolverOptions opts;
    opts.tol = 1e-13;
    const double root = (std::sqrt(7.0) - 1.0) / 3.0;
    const double g_fixed = dyson_solve(a, u, SigmaModel::Bold1, opts, ctx.cfg).final_G(0, 0);
    const double g_descent = minimize_free_energy(a, u, SigmaModel::Bold1, opts, ctx.cfg).final_G(0, 0);
    CheckReport r = make_report(
        "bold1_root", std::max(std::abs(g_fixed - root), std::abs(g_descent - root)), th);
    r.details = {{"dyson", {g_fixed}}, {"descent", {g_descent}}, {"closed_form", {root}}};
    return r;
  });
}

CheckReport check_truncation_probe(const SpdMatrix& G, const SymMatrix& v, double eps, int order,
                                   const VerifyContext& ctx) {
  const double th = ctx.th.truncation_probe;
  return guarded("truncation_probe", th, false, [&] {
    const Interaction scaled = Interaction::scaled(eps, Interaction::diagonal_quartic(v));
    const SymMatrix exact = exact_self_energy(G, scaled, ctx.cfg, newton(ctx));
    const SymMatrix truncated = truncated_sigma(G, v, eps, order);
    const Interaction modified = Interaction::quadratic_shift(exact - truncated, scaled);
    const InverseMapResult inv = solve_inverse_map(G, modified, ctx.cfg, newton(ctx));
    const SymMatrix sigma_modified = inv.A - G.inverse().sym();
    const SpdMatrix g0 = g0_of_truncation(G, v, eps, order);
    const double e_sigma = (sigma_modified.matrix() - truncated.matrix()).norm();
    const double e_bare = (inv.A.matrix() - g0.inverse().matrix()).norm();
    CheckReport r = make_report("truncation_probe", std::max(e_sigma, e_bare), th);
    r.details = {{"sigma_gap", {e_sigma}},
                 {"bare_propagator_gap", {e_bare}},
                 {"exact_minus_truncated", {(exact - truncated).frobenius_norm()}}};
    return r;
  });
}

// ---------------------------------------------------------------- suites

namespace {

SymMatrix m2(double a, double b, double c) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, b, c;
  return SymMatrix(m);
}

SymMatrix random_spd(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> eig(lo, hi);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = normal(rng);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
  const Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d(i) = eig(rng);
  const Eigen::MatrixXd a = q * d.asDiagonal() * q.transpose();
  return SymMatrix(0.5 * (a + a.transpose()));
}

Interaction quartic(const SymMatrix& v) { return Interaction::diagonal_quartic(v); }

void append(std::vector<CheckReport>& out, std::vector<CheckReport> more) {
  for (auto& r : more) out.push_back(std::move(r));
}

std::vector<CheckReport> suite_gaussian(const VerifyContext& ctx) {
  std::vector<CheckReport> out;
  std::mt19937_64 rng(ctx.seed);
  for (int n = 1; n <= 3; ++n) out.push_back(check_gaussian_closed_form(random_spd(rng, n, 0.5, 4.0), ctx));
  for (int n = 1; n <= 2; ++n) out.push_back(check_noninteracting_phi(SpdMatrix(random_spd(rng, n, 0.2, 3.0)), ctx));
  out.push_back(check_gradient_omega(SymMatrix::identity(2), Interaction::zero(2), ctx));
  out.push_back(check_bijection(random_spd(rng, 2, 0.5, 3.0), Interaction::zero(2), ctx));
  return out;
}

std::vector<CheckReport> suite_gradient(const VerifyContext& ctx) {
  const SymMatrix v1 = SymMatrix::identity(1);
  const SymMatrix v2 = m2(1.0, 0.5, 1.0);
  std::vector<CheckReport> out;
  out.push_back(check_gradient_omega(SymMatrix::identity(2), Interaction::zero(2), ctx));
  out.push_back(check_gradient_omega(SymMatrix::identity(1), quartic(v1), ctx));
  out.push_back(check_gradient_omega(m2(1.0, 0.0, -0.2), quartic(v2), ctx));
  if (ctx.cfg.mode == OracleMode::Quadrature) {
    out.push_back(check_selfenergy_gradient(SpdMatrix(m2(1.0, 0.1, 0.7)), Interaction::zero(2), ctx));
    out.push_back(check_selfenergy_gradient(SpdMatrix(SymMatrix::identity(1)), quartic(v1), ctx));
    out.push_back(check_selfenergy_gradient(SpdMatrix(m2(1.0, 0.2, 0.8)), quartic(v2), ctx));
  }
  return out;
}

std::vector<CheckReport> suite_bijection(const VerifyContext& ctx) {
  const SymMatrix v1 = SymMatrix::identity(1);
  const SymMatrix v2 = m2(1.0, 0.5, 1.0);
  std::vector<CheckReport> out;
  out.push_back(check_bijection(SymMatrix::identity(1), quartic(v1), ctx));
  out.push_back(check_bijection(SymMatrix::identity(1) * 3.0, quartic(v1 * 0.5), ctx));
  out.push_back(check_bijection(SymMatrix::identity(1) * -1.0, quartic(v1), ctx));
  out.push_back(check_bijection(m2(1.0, 0.3, 2.0), quartic(v2), ctx));
  out.push_back(check_bijection(m2(2.0, -0.4, 1.0), quartic(m2(0.5, 0.2, 1.5)), ctx));
  out.push_back(check_bijection(m2(1.0, 0.0, -0.5), quartic(v2), ctx));
  out.push_back(check_bijection(m2(0.5, 0.8, 0.5), quartic(v2), ctx));
  if (ctx.cfg.mode == OracleMode::Quadrature) {
    out.push_back(check_bijection(m2(1.5, 0.2, 0.8), quartic(SymMatrix::identity(2)), ctx));
    out.push_back(check_bijection(SymMatrix::identity(1) * 0.3, quartic(v1 * 2.0), ctx));
    out.push_back(check_bijection(m2(3.0, 1.0, 2.0), quartic(m2(1.0, 0.0, 2.0)), ctx));
  }
  return out;
}

std::vector<CheckReport> suite_theorem3(const VerifyContext& ctx) {
  const std::vector<double> grid = log_grid(1e-3, 1e-1, 7);
  const SymMatrix v1 = SymMatrix::identity(1);
  const SymMatrix v2 = m2(1.0, 0.5, 1.0);
  const SpdMatrix g1(SymMatrix::identity(1));
  const SpdMatrix g2(SymMatrix::identity(2));
  const SpdMatrix g2b(m2(1.0, 0.3, 0.8));
  std::vector<CheckReport> out;
  for (int order = 1; order <= 2; ++order) {
    out.push_back(check_asymptotic_order(g1, v1, order, grid, ctx));
    out.push_back(check_asymptotic_order(g2, v2, order, grid, ctx));
    out.push_back(check_asymptotic_order(g2b, v2, order, grid, ctx));
  }
  return out;
}

std::vector<CheckReport> suite_transformation(const VerifyContext& ctx) {
  const SpdMatrix g(m2(1.0, 0.2, 0.7));
  const Interaction u = quartic(m2(1.0, 0.5, 1.0));
  std::vector<CheckReport> out;
  out.push_back(check_transformation_rule(g, u, LinearMap::identity(2), ctx));
  out.push_back(check_transformation_rule(g, u, LinearMap::rotation(std::numbers::pi / 4), ctx));
  Eigen::MatrixXd d(2, 2);
  d << 2.0, 0.0, 0.0, 0.5;
  out.push_back(check_transformation_rule(g, u, LinearMap(d), ctx));
  return out;
}

std::vector<CheckReport> suite_boundary(const VerifyContext& ctx) {
  const std::vector<double> deltas{1e-1, 3e-2, 1e-2, 3e-3};
  const SpdMatrix gp(SymMatrix::identity(1));
  std::vector<CheckReport> out;
  out.push_back(check_boundary_continuity(gp, Interaction::zero(2), deltas, ctx));
  out.push_back(check_boundary_continuity(gp, quartic(m2(1.0, 0.5, 1.0)), deltas, ctx));
  out.push_back(check_boundary_continuity(gp, quartic(m2(1.0, 0.0, 1.0)), deltas, ctx));
  return out;
}

std::vector<CheckReport> suite_dyson(const VerifyContext& ctx) {
  std::vector<CheckReport> out;
  out.push_back(check_dyson_consistency(SymMatrix::identity(1),
                                        quartic(SymMatrix::identity(1)), ctx));
  out.push_back(check_bold1_root(ctx));
  return out;
}

std::vector<CheckReport> suite_truncation(const VerifyContext& ctx) {
  std::vector<CheckReport> out;
  out.push_back(check_truncation_probe(SpdMatrix(SymMatrix::identity(1)), SymMatrix::identity(1),
                                       0.05, 2, ctx));
  return out;
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"gaussian", "gradient", "bijection", "theorem3", "transformation",
          "boundary", "dyson", "truncation", "all"};
}

std::vector<CheckReport> run_suite(const std::string& name, const VerifyContext& ctx) {
  const bool mc = ctx.cfg.mode == OracleMode::MonteCarlo;
  std::vector<CheckReport> out;
  auto want = [&](const char* s) { return name == s || name == "all"; };
  bool known = false;
  for (const auto& s : suite_names()) known = known || s == name;
  if (!known) throw Error(ErrorKind::ValidationError, "unknown suite '" + name + "'");
  const bool precise_only = name != "all" && name != "gaussian" && name != "gradient" &&
                            name != "bijection";
  if (mc && precise_only) {
    throw Error(ErrorKind::ValidationError,
                "suite '" + name + "' needs quadrature precision; run it with --mode quadrature");
  }
  if (want("gaussian")) append(out, suite_gaussian(ctx));
  if (want("gradient")) append(out, suite_gradient(ctx));
  if (want("bijection")) append(out, suite_bijection(ctx));
  if (mc) return out;
  if (want("theorem3")) append(out, suite_theorem3(ctx));
  if (want("transformation")) append(out, suite_transformation(ctx));
  if (want("boundary")) append(out, suite_boundary(ctx));
  if (want("dyson")) append(out, suite_dyson(ctx));
  if (want("truncation")) append(out, suite_truncation(ctx));
  return out;
}

}  // namespace lwf
