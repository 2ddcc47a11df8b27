#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "lwf/duality.hpp"
#include "lwf/interaction.hpp"
#include "lwf/oracle.hpp"
#include "lwf/symmat.hpp"

namespace lwf {

/// Self-energy used to close the Dyson equation.
enum class SigmaModel {
  None,         // Sigma = 0
  Bold1,        // first-order bold diagrams
  Bold12,       // first + second order
  ExactOracle,  // A[G] - G^{-1} through the inverse map
};

SigmaModel parse_sigma_model(std::string_view name);
std::string_view to_string(SigmaModel model);

inline constexpr double kMinDamping = 1.0 / 64.0;

struct SolveIterate {
  int iteration = 0;
  double residual = 0.0;  // ||G^{-1} - A + Sigma[G]||_F
  double free_energy = 0.0;
};

struct SolveTrace {
  std::vector<SolveIterate> iterates;
  bool converged = false;
  SpdMatrix final_G;
};

struct SolverOptions {
  double damping = 0.5;
  double tol = 1e-8;
  int max_iter = 1000;
  /// Starting Green's function; defaults to A^{-1}, or the inverse of the
  /// envelope-shifted A when A is indefinite.
  std::optional<SpdMatrix> initial;
  /// Inverse-map settings for the ExactOracle model. A non-positive tol is
  /// replaced by min(1e-12, tol / 100).
  NewtonOptions newton;
};

/// Self-energy and LW value of a model at G.
struct ModelValue {
  SymMatrix sigma;
  double phi = 0.0;
  std::optional<SymMatrix> A_of_G;  // ExactOracle only
};

ModelValue evaluate_model(const SpdMatrix& G, const Interaction& U, SigmaModel model,
                          const OracleConfig& cfg, const NewtonOptions& newton = {});

/// Damped fixed-point iteration G <- (1 - a) G + a (A - Sigma[G])^{-1}.
SolveTrace dyson_solve(const SymMatrix& A, const Interaction& U, SigmaModel model,
                       const SolverOptions& opts, const OracleConfig& cfg);

/// (Tr[A G] - log det G - Phi_model[G] - n log(2 pi e)) / 2.
double free_energy(const SymMatrix& A, const SpdMatrix& G, const Interaction& U, SigmaModel model,
                   const OracleConfig& cfg, const NewtonOptions& newton = {});

/// Gradient descent on free_energy over G = L L^T with Armijo backtracking;
/// stops when the Dyson residual is below tol.
SolveTrace minimize_free_energy(const SymMatrix& A, const Interaction& U, SigmaModel model,
                                const SolverOptions& opts, const OracleConfig& cfg);

/// Dyson residual ||G^{-1} - A + sigma||_F.
double dyson_residual(const SymMatrix& A, const SpdMatrix& G, const SymMatrix& sigma);

}  // namespace lwf
