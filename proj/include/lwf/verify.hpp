#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lwf/interaction.hpp"
#include "lwf/oracle.hpp"
#include "lwf/symmat.hpp"

namespace lwf {

struct CheckDetail {
  std::string key;
  std::vector<double> values;
};

struct CheckReport {
  std::string name;
  bool passed = false;
  double metric = 0.0;
  double threshold = 0.0;
  /// Slope checks pass when metric >= threshold, everything else when
  /// metric <= threshold.
  bool lower_bound = false;
  std::vector<CheckDetail> details;
  std::string error;  // set when the check aborted with an exception
};

/// Every tolerance and threshold used by the checks.
struct ThresholdProfile {
  std::string name;
  double gaussian_closed_form;   // relative, Omega and G
  double noninteracting_phi;     // |Phi[G; 0]|
  double gradient_omega;         // relative
  double bijection;              // max-norm on A
  double asymptotic_margin;      // slope >= N + margin
  double transformation;         // |Phi difference|
  double boundary;               // |extrapolated - Phi_p|
  double selfenergy_gradient;    // relative
  double dyson_match;            // G and Omega agreement
  double bold1_root;             // scalar closed form
  double truncation_probe;       // Sigma[G; U_eps^(N)] vs truncated sigma
  double newton_tol;             // inverse maps inside checks
  double solver_tol;             // Dyson / descent tolerance inside checks
  double fd_step_omega;
  double fd_step_phi;
  double slope_noise_floor;      // residuals below this are dropped
  int slope_points;              // smallest-eps points kept for the fit
  int boundary_power;            // extrapolate in delta^power
  int boundary_terms;            // polynomial terms in the extrapolant
  int fd_directions;
  int quad_nodes;                // nodes per dimension used by the checks
};

const ThresholdProfile& quadrature_profile();
const ThresholdProfile& monte_carlo_profile();

struct VerifyContext {
  OracleConfig cfg;
  ThresholdProfile th = quadrature_profile();
  std::uint64_t seed = 20240601;
};

/// Picks the profile that matches cfg.mode; quadrature contexts use the
/// profile's node count.
VerifyContext make_context(const OracleConfig& cfg, std::uint64_t seed = 20240601);

CheckReport check_gaussian_closed_form(const SymMatrix& A, const VerifyContext& ctx);
CheckReport check_noninteracting_phi(const SpdMatrix& G, const VerifyContext& ctx);
CheckReport check_gradient_omega(const SymMatrix& A, const Interaction& U, const VerifyContext& ctx);
CheckReport check_bijection(const SymMatrix& A, const Interaction& U, const VerifyContext& ctx);
CheckReport check_asymptotic_order(const SpdMatrix& G, const SymMatrix& v, int order,
                                   const std::vector<double>& eps_grid, const VerifyContext& ctx);
CheckReport check_transformation_rule(const SpdMatrix& G, const Interaction& U, const LinearMap& T,
                                      const VerifyContext& ctx);
CheckReport check_boundary_continuity(const SpdMatrix& G_p, const Interaction& U,
                                      const std::vector<double>& delta_grid,
                                      const VerifyContext& ctx);
CheckReport check_selfenergy_gradient(const SpdMatrix& G, const Interaction& U,
                                      const VerifyContext& ctx);
/// dyson_solve(ExactOracle) vs the oracle, stationarity of the descent, and
/// the free energy at the optimum vs Omega[A].
CheckReport check_dyson_consistency(const SymMatrix& A, const Interaction& U,
                                    const VerifyContext& ctx);
/// Scalar Bold1 Dyson solution vs its closed-form root.
CheckReport check_bold1_root(const VerifyContext& ctx);
/// Exact self-energy under eps U + x^T (Sigma(eps) - truncated) x / 2
/// reproduces the truncated series.
CheckReport check_truncation_probe(const SpdMatrix& G, const SymMatrix& v, double eps, int order,
                                   const VerifyContext& ctx);

/// log-spaced grid from lo to hi with count points.
std::vector<double> log_grid(double lo, double hi, int count);

/// Least-squares slope of log(residual) against log(eps) over the smallest
/// `points` eps values whose residual is finite and above `floor`. NaN when
/// fewer than two points survive.
double fit_loglog_slope(const std::vector<double>& eps, const std::vector<double>& residual,
                        int points, double floor);

/// Polynomial extrapolation to delta = 0 in the variable delta^power using the
/// `terms` smallest grid points.
double extrapolate_to_zero(const std::vector<double>& delta, const std::vector<double>& value,
                           int power, int terms);

std::vector<std::string> suite_names();
/// Runs a named suite ("gaussian", "gradient", "bijection", "theorem3",
/// "transformation", "boundary", "dyson", "truncation", "all") on its fixed case
/// matrix. Monte Carlo contexts run only the suites that do not need
/// quadrature-level precision.
std::vector<CheckReport> run_suite(const std::string& name, const VerifyContext& ctx);

}  // namespace lwf
