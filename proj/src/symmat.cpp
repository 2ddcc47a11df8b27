#include "lwf/symmat.hpp"

#include <cmath>
#include <string>

namespace lwf {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::SingularMap: return "SingularMap";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DivergentIntegral: return "DivergentIntegral";
    case ErrorKind::DimensionCap: return "DimensionCap";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::BoundaryTooClose: return "BoundaryTooClose";
    case ErrorKind::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorKind::UnsupportedInteraction: return "UnsupportedInteraction";
    case ErrorKind::IterateLeftCone: return "IterateLeftCone";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

namespace {

Eigen::MatrixXd matrix_from_rows(const std::vector<std::vector<double>>& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != n) {
      throw Error(ErrorKind::ValidationError, "matrix is not square");
    }
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::vector<std::vector<double>> rows_of(const Eigen::MatrixXd& m) {
  std::vector<std::vector<double>> out(m.rows(), std::vector<double>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

}  // namespace

// ---------------------------------------------------------------- SymMatrix

SymMatrix::SymMatrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::ValidationError, "matrix must be square and non-empty");
  }
  if (!m.allFinite()) throw Error(ErrorKind::ValidationError, "matrix has non-finite entries");
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymTolerance) {
    throw Error(ErrorKind::ValidationError,
                "matrix not symmetric (max asymmetry " + std::to_string(asym) + ")");
  }
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::zero(int n) { return SymMatrix(Eigen::MatrixXd::Zero(n, n)); }
SymMatrix SymMatrix::identity(int n) { return SymMatrix(Eigen::MatrixXd::Identity(n, n)); }

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d.size()),
                                            static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return SymMatrix(m);
}

SymMatrix SymMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  return SymMatrix(matrix_from_rows(rows));
}

double SymMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

SymMatrix SymMatrix::operator+(const SymMatrix& o) const {
  require_dim(dim(), o.dim(), "SymMatrix +");
  return SymMatrix(m_ + o.m_);
}

SymMatrix SymMatrix::operator-(const SymMatrix& o) const {
  require_dim(dim(), o.dim(), "SymMatrix -");
  return SymMatrix(m_ - o.m_);
}

SymMatrix SymMatrix::operator*(double s) const { return SymMatrix(m_ * s); }

std::vector<std::vector<double>> SymMatrix::rows() const { return rows_of(m_); }

// ---------------------------------------------------------------- Cholesky

Eigen::MatrixXd cholesky(const SymMatrix& s) {
  const int n = s.dim();
  const Eigen::MatrixXd& a = s.matrix();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double pivot = a(j, j);
    for (int k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > kSpdTolerance)) {
      throw Error(ErrorKind::NotPositiveDefinite,
                  "Cholesky pivot " + std::to_string(j) + " = " + std::to_string(pivot));
    }
    const double d = std::sqrt(pivot);
    l(j, j) = d;
    for (int i = j + 1; i < n; ++i) {
      double v = a(i, j);
      for (int k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / d;
    }
  }
  return l;
}

bool is_spd(const SymMatrix& s) {
  try {
    (void)cholesky(s);
    return true;
  } catch (const Error&) {
    return false;
  }
}

// ---------------------------------------------------------------- SpdMatrix

SpdMatrix::SpdMatrix(SymMatrix s) : base_(std::move(s)), chol_(cholesky(base_)) {}

double SpdMatrix::logdet() const { return 2.0 * chol_.diagonal().array().log().sum(); }

Eigen::VectorXd SpdMatrix::solve(const Eigen::VectorXd& b) const {
  const auto l = chol_.triangularView<Eigen::Lower>();
  return l.transpose().solve(l.solve(b));
}

SpdMatrix SpdMatrix::inverse() const {
  const int n = dim();
  const auto l = chol_.triangularView<Eigen::Lower>();
  Eigen::MatrixXd linv = l.solve(Eigen::MatrixXd::Identity(n, n));
  return SpdMatrix(SymMatrix(linv.transpose() * linv));
}

double logdet_spd(const SpdMatrix& s) { return s.logdet(); }

// ---------------------------------------------------------------- LinearMap

LinearMap::LinearMap(const Eigen::MatrixXd& m) : m_(m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::ValidationError, "linear map must be square and non-empty");
  }
  if (!m.allFinite()) throw Error(ErrorKind::ValidationError, "linear map has non-finite entries");
  det_ = m.fullPivLu().determinant();
  if (std::abs(det_) < kInvTolerance) {
    throw Error(ErrorKind::SingularMap, "|det T| = " + std::to_string(std::abs(det_)));
  }
}

LinearMap LinearMap::identity(int n) { return LinearMap(Eigen::MatrixXd::Identity(n, n)); }

LinearMap LinearMap::rotation(double angle) {
  Eigen::MatrixXd r(2, 2);
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return LinearMap(r);
}

LinearMap LinearMap::from_rows(const std::vector<std::vector<double>>& rows) {
  return LinearMap(matrix_from_rows(rows));
}

LinearMap LinearMap::inverse() const { return LinearMap(m_.fullPivLu().inverse()); }

LinearMap LinearMap::operator*(const LinearMap& inner) const {
  require_dim(dim(), inner.dim(), "LinearMap composition");
  return LinearMap(m_ * inner.m_);
}

std::vector<std::vector<double>> LinearMap::rows() const { return rows_of(m_); }

SpdMatrix congruence(const LinearMap& t, const SpdMatrix& g) {
  require_dim(t.dim(), g.dim(), "congruence");
  const Eigen::MatrixXd tg = t.matrix() * g.matrix() * t.matrix().transpose();
  return SpdMatrix(SymMatrix(0.5 * (tg + tg.transpose())));
}

// ---------------------------------------------------------------- triangle packing

int TriangleIndex::operator()(int i, int j) const {
  if (i > j) std::swap(i, j);
  // rows of the upper triangle laid out consecutively
  return i * n - i * (i - 1) / 2 + (j - i);
}

std::pair<int, int> TriangleIndex::pair(int k) const {
  int i = 0;
  while (k >= n - i) {
    k -= n - i;
    ++i;
  }
  return {i, i + k};
}

Eigen::VectorXd upper_triangle(const Eigen::MatrixXd& m) {
  const TriangleIndex idx{static_cast<int>(m.rows())};
  Eigen::VectorXd v(idx.size());
  for (int i = 0; i < idx.n; ++i)
    for (int j = i; j < idx.n; ++j) v(idx(i, j)) = m(i, j);
  return v;
}

SymMatrix from_upper_triangle(int n, const Eigen::VectorXd& v) {
  const TriangleIndex idx{n};
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m(i, j) = m(j, i) = v(idx(i, j));
  return SymMatrix(m);
}

}  // namespace lwf
