#pragma once

#include <memory>
#include <span>
#include <vector>

#include "lwf/symmat.hpp"

namespace lwf {

enum class InteractionKind {
  Zero,
  DiagonalQuartic,  // (1/8) sum_ij v_ij x_i^2 x_j^2
  GeneralQuartic,   // sum_ijkl w_ijkl x_i x_j x_k x_l
  Scaled,           // factor * inner(x)
  Composed,         // inner(T x)
  QuadraticShift,   // (1/2) x^T D x + inner(x)
};

/// Fully index-symmetric fourth-order coefficient tensor, row-major n^4.
class QuarticTensor {
 public:
  QuarticTensor() = default;
  /// Symmetrizes input within 1e-9 (relative to max |w|); rejects larger
  /// deviations with ValidationError.
  QuarticTensor(int n, std::vector<double> w);

  int dim() const { return n_; }
  double operator()(int i, int j, int k, int l) const {
    return w_[((static_cast<std::size_t>(i) * n_ + j) * n_ + k) * n_ + l];
  }
  const std::vector<double>& data() const { return w_; }

  double eval(std::span<const double> x) const;

 private:
  int n_ = 0;
  std::vector<double> w_;
};

/// The interaction U(x). Immutable value type; copies share structure.
class Interaction {
 public:
  static Interaction zero(int n);
  static Interaction diagonal_quartic(SymMatrix v);
  static Interaction general_quartic(QuarticTensor w);
  /// factor must be >= 0.
  static Interaction scaled(double factor, Interaction inner);
  static Interaction composed(Interaction inner, LinearMap map);
  static Interaction quadratic_shift(SymMatrix d, Interaction inner);

  int dim() const;
  InteractionKind kind() const;

  /// U(x). DimensionMismatch when x.size() != dim().
  double operator()(std::span<const double> x) const;
  double eval(const Eigen::VectorXd& x) const {
    return (*this)(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
  }

  // Variant accessors. Each throws UnsupportedInteraction on the wrong kind.
  const SymMatrix& coupling() const;            // DiagonalQuartic
  const QuarticTensor& tensor() const;          // GeneralQuartic
  double factor() const;                        // Scaled
  const Interaction& inner() const;             // Scaled, Composed, QuadraticShift
  const LinearMap& map() const;                 // Composed
  const SymMatrix& shift() const;               // QuadraticShift

  /// Total coupling when this is DiagonalQuartic or a (nested) Scaled
  /// DiagonalQuartic: returns c * v. Throws UnsupportedInteraction otherwise.
  SymMatrix effective_coupling() const;
  bool is_diagonal_quartic_family() const;

  /// Explicit coefficient tensor for any homogeneous quartic interaction
  /// (everything except QuadraticShift).
  QuarticTensor materialize() const;

  struct Node;

 private:
  explicit Interaction(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// U o T.
Interaction compose(const Interaction& u, const LinearMap& t);

/// U_p(y) = U(y, 0). DimensionMismatch unless 1 <= p <= dim.
Interaction restrict(const Interaction& u, int p);

enum class GrowthClass { SuperQuadratic, ZeroInteraction, Unverified };

struct GrowthReport {
  GrowthClass cls = GrowthClass::Unverified;
  /// True when the verdict rests on the direction-grid screen of a general
  /// quartic form rather than on the entrywise sufficient condition.
  bool screened = false;
  /// Smallest sampled value of the quartic form on the unit sphere (screened
  /// verdicts only).
  double min_on_sphere = 0.0;
};

/// Number of unit directions used for the general quartic screen.
inline constexpr int kGrowthDirections = 4096;

GrowthReport validate_growth(const Interaction& u);

}  // namespace lwf
