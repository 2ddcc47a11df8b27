#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "lwf/error.hpp"

namespace lwf {

/// Absolute asymmetry tolerated (and symmetrized away) at construction.
inline constexpr double kSymTolerance = 1e-9;
/// Smallest Cholesky pivot accepted as positive.
inline constexpr double kSpdTolerance = 1e-12;
/// Smallest |det T| accepted for a LinearMap.
inline constexpr double kInvTolerance = 1e-12;

/// Dense real symmetric matrix. Entries are exactly symmetric and finite.
class SymMatrix {
 public:
  SymMatrix() = default;
  /// Symmetrizes input whose max asymmetry is within kSymTolerance; rejects
  /// anything else with ValidationError.
  explicit SymMatrix(const Eigen::MatrixXd& m);

  static SymMatrix zero(int n);
  static SymMatrix identity(int n);
  static SymMatrix diagonal(std::span<const double> d);
  static SymMatrix from_rows(const std::vector<std::vector<double>>& rows);

  int dim() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  const Eigen::MatrixXd& matrix() const { return m_; }

  double min_eigenvalue() const;
  double frobenius_norm() const { return m_.norm(); }
  double max_abs() const { return m_.cwiseAbs().maxCoeff(); }

  SymMatrix operator+(const SymMatrix& o) const;
  SymMatrix operator-(const SymMatrix& o) const;
  SymMatrix operator*(double s) const;
  friend SymMatrix operator*(double s, const SymMatrix& a) { return a * s; }

  std::vector<std::vector<double>> rows() const;

 private:
  Eigen::MatrixXd m_;
};

/// Symmetric positive definite matrix with its Cholesky factor cached.
class SpdMatrix {
 public:
  SpdMatrix() = default;
  /// Throws NotPositiveDefinite when any pivot is <= kSpdTolerance.
  explicit SpdMatrix(SymMatrix s);
  explicit SpdMatrix(const Eigen::MatrixXd& m) : SpdMatrix(SymMatrix(m)) {}

  int dim() const { return base_.dim(); }
  double operator()(int i, int j) const { return base_(i, j); }
  const SymMatrix& sym() const { return base_; }
  const Eigen::MatrixXd& matrix() const { return base_.matrix(); }
  const Eigen::MatrixXd& factor() const { return chol_; }

  double logdet() const;
  SpdMatrix inverse() const;
  /// Solves S y = b using the cached factor.
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

 private:
  SymMatrix base_;
  Eigen::MatrixXd chol_;
};

/// Invertible square matrix, used both as a basis change x -> T x and as the
/// congruence G -> T G T^T.
class LinearMap {
 public:
  LinearMap() = default;
  /// Throws SingularMap when |det| < kInvTolerance.
  explicit LinearMap(const Eigen::MatrixXd& m);

  static LinearMap identity(int n);
  static LinearMap rotation(double angle);  // 2x2
  static LinearMap from_rows(const std::vector<std::vector<double>>& rows);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double determinant() const { return det_; }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return m_ * x; }
  LinearMap inverse() const;
  /// (*this) composed after `inner`: x -> this(inner(x)).
  LinearMap operator*(const LinearMap& inner) const;

  std::vector<std::vector<double>> rows() const;

 private:
  Eigen::MatrixXd m_;
  double det_ = 0.0;
};

/// Lower-triangular L with L L^T = S. NotPositiveDefinite if a pivot is
/// <= kSpdTolerance.
Eigen::MatrixXd cholesky(const SymMatrix& s);

double logdet_spd(const SpdMatrix& s);

/// T G T^T.
SpdMatrix congruence(const LinearMap& t, const SpdMatrix& g);

/// True when the Cholesky factorization succeeds.
bool is_spd(const SymMatrix& s);

/// Flattening of the upper triangle (i <= j) used by the Newton solvers.
struct TriangleIndex {
  int n;
  int size() const { return n * (n + 1) / 2; }
  int operator()(int i, int j) const;
  std::pair<int, int> pair(int k) const;
};

Eigen::VectorXd upper_triangle(const Eigen::MatrixXd& m);
SymMatrix from_upper_triangle(int n, const Eigen::VectorXd& v);

}  // namespace lwf
