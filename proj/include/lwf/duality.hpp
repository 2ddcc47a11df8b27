#pragma once

#include <optional>

#include "lwf/interaction.hpp"
#include "lwf/oracle.hpp"
#include "lwf/symmat.hpp"

namespace lwf {

/// Smallest eigenvalue of a target Green's function accepted by the inverse map.
inline constexpr double kBoundaryGuard = 1e-6;
inline constexpr double kDefaultQuadratureTol = 1e-8;
inline constexpr int kDefaultNewtonIterations = 100;
inline constexpr int kMaxStepHalvings = 30;

struct NewtonOptions {
  /// Frobenius tolerance on G[A] - G_target. <= 0 selects the mode default:
  /// 1e-8 for quadrature, three standard errors for Monte Carlo.
  double tol = 0.0;
  int max_iter = kDefaultNewtonIterations;
  /// Starting point; the default is G^{-1} - Sigma1[G] for diagonal quartic
  /// families and G^{-1} otherwise.
  std::optional<SymMatrix> initial;
};

struct InverseMapResult {
  SymMatrix A;
  MomentReport moments;  // oracle output at A, including fourth moments
  int iterations = 0;
  double residual = 0.0;
};

/// Solves G[A; U] = G_target for A by damped Newton iteration.
InverseMapResult solve_inverse_map(const SpdMatrix& G_target, const Interaction& U,
                                   const OracleConfig& cfg, const NewtonOptions& opts = {});

SymMatrix inverse_map(const SpdMatrix& G_target, const Interaction& U, const OracleConfig& cfg,
                      double tol = 0.0, int max_iter = kDefaultNewtonIterations);

/// dG/dA in upper-triangle coordinates (TriangleIndex): column (k,l) holds the
/// response of G to a symmetric unit perturbation of A_kl (and A_lk), i.e.
/// -1/2 (2 - delta_kl) Cov(x_i x_j, x_k x_l). Needs report.M4.
Eigen::MatrixXd forward_jacobian(const MomentReport& report);

struct LwReport {
  SymMatrix A_of_G;
  double F = 0.0;
  double Phi = 0.0;
  double Phi0 = 0.0;  // n log(2 pi e)
  SymMatrix Sigma_exact;
  double entropy = 0.0;
  double mean_U = 0.0;
  double Omega = 0.0;  // Omega[A[G]]
  int solver_iterations = 0;
  double residual = 0.0;
};

/// F, Phi and the exact self-energy at G through the Legendre route.
LwReport lw_evaluate(const SpdMatrix& G, const Interaction& U, const OracleConfig& cfg,
                     const NewtonOptions& opts = {});

/// A[G] - G^{-1}.
SymMatrix exact_self_energy(const SpdMatrix& G, const Interaction& U, const OracleConfig& cfg,
                            const NewtonOptions& opts = {});

/// log of the maximum-entropy density with second moments G at x.
double rho_g_logdensity(const SpdMatrix& G, const Interaction& U, const Eigen::VectorXd& x,
                        const OracleConfig& cfg, const NewtonOptions& opts = {});

}  // namespace lwf
