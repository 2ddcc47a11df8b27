#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lwf/interaction.hpp"
#include "lwf/symmat.hpp"

namespace lwf {

enum class OracleMode { Quadrature, MonteCarlo };

inline constexpr int kQuadDimCap = 6;
/// Upper bound on nodes_per_dim^n for the tensor-product rule.
inline constexpr std::uint64_t kQuadNodeBudget = std::uint64_t{1} << 24;
inline constexpr int kMcBatches = 64;

struct OracleConfig {
  OracleMode mode = OracleMode::Quadrature;
  int nodes_per_dim = 64;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  /// Smallest eigenvalue allowed in the Gaussian envelope.
  double envelope_floor = 0.5;
  bool want_fourth_moments = false;
  /// Monte Carlo worker threads; 0 picks hardware_concurrency. Results do not
  /// depend on this value.
  int workers = 0;
};

/// <x_i x_j x_k x_l>, fully index symmetric.
class FourthMoments {
 public:
  FourthMoments() = default;
  FourthMoments(int n, std::vector<double> m) : n_(n), m_(std::move(m)) {}

  int dim() const { return n_; }
  double operator()(int i, int j, int k, int l) const {
    return m_[((static_cast<std::size_t>(i) * n_ + j) * n_ + k) * n_ + l];
  }
  const std::vector<double>& data() const { return m_; }

 private:
  int n_ = 0;
  std::vector<double> m_;
};

/// One-sigma errors of the Monte Carlo estimates (64 batch means).
struct StdErrors {
  double Z = 0.0;
  double Omega = 0.0;
  double mean_U = 0.0;
  Eigen::MatrixXd G;
};

struct MomentReport {
  double Z = 0.0;
  double Omega = 0.0;  // -log Z, computed in log space
  SpdMatrix G;
  std::optional<FourthMoments> M4;
  double mean_U = 0.0;  // <U> under the Gibbs density
  std::optional<StdErrors> std_errors;
};

/// Moments of exp(-x^T A x / 2 - U(x)).
MomentReport evaluate_moments(const SymMatrix& A, const Interaction& U, const OracleConfig& cfg);

SpdMatrix green_of_A(const SymMatrix& A, const Interaction& U, const OracleConfig& cfg);

/// Envelope matrix: A itself when lambda_min(A) >= floor, else A shifted up
/// so that its smallest eigenvalue equals floor.
SymMatrix envelope_matrix(const SymMatrix& A, double floor);

/// Gauss-Hermite nodes and weights for the weight exp(-y^2 / 2) on R.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> log_weights;  // finite even where weights underflow
};
GaussHermiteRule gauss_hermite(int count);

}  // namespace lwf
