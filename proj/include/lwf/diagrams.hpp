#pragma once

#include <vector>

#include "lwf/interaction.hpp"
#include "lwf/symmat.hpp"

namespace lwf {

// Bold (skeleton) self-energy and LW coefficients for the diagonal quartic
// interaction U(x) = (1/8) sum_ij v_ij x_i^2 x_j^2, expressed in the
// interacting propagator G. Only orders 1 and 2 are available.

inline constexpr int kMaxBoldOrder = 2;

/// Hartree + Fock:  -1/2 (sum_k v_ik G_kk) delta_ij - v_ij G_ij.
SymMatrix sigma1(const SpdMatrix& G, const SymMatrix& v);

/// Ring + second-order exchange:
///   1/2 G_ij sum_kl v_ik G_kl^2 v_lj + sum_kl v_ik G_kj G_kl G_li v_jl.
SymMatrix sigma2(const SpdMatrix& G, const SymMatrix& v);

/// Order-k self-energy coefficient; UnsupportedOrder outside 1..2.
SymMatrix sigma_k(const SpdMatrix& G, const SymMatrix& v, int k);

/// (1 / 2k) Tr[G Sigma^(k)].
double phi_k(const SpdMatrix& G, const SymMatrix& v, int k);

/// sum_{k=1..N} eps^k Sigma^(k).
SymMatrix truncated_sigma(const SpdMatrix& G, const SymMatrix& v, double eps, int order);

/// sum_{k=1..N} eps^k Phi^(k).
double truncated_phi(const SpdMatrix& G, const SymMatrix& v, double eps, int order);

/// (G^{-1} + truncated_sigma)^{-1}; NotPositiveDefinite when eps is too large
/// for this G.
SpdMatrix g0_of_truncation(const SpdMatrix& G, const SymMatrix& v, double eps, int order);

/// Sigma^(1..N) and Phi^(1..N) at one G. Construction enforces
/// phi_terms[k-1] == Tr[G sigma_terms[k-1]] / 2k.
class BoldSeries {
 public:
  BoldSeries(const SpdMatrix& G, const SymMatrix& v, int order);
  /// Uses the coupling of a (scaled) diagonal quartic interaction;
  /// UnsupportedInteraction otherwise.
  BoldSeries(const SpdMatrix& G, const Interaction& U, int order);

  int order() const { return static_cast<int>(sigma_terms_.size()); }
  const std::vector<SymMatrix>& sigma_terms() const { return sigma_terms_; }
  const std::vector<double>& phi_terms() const { return phi_terms_; }

  SymMatrix sigma(double eps) const;
  double phi(double eps) const;

 private:
  std::vector<SymMatrix> sigma_terms_;
  std::vector<double> phi_terms_;
};

}  // namespace lwf
