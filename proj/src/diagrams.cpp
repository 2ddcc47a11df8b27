#include "lwf/diagrams.hpp"

#include <cmath>
#include <string>

namespace lwf {

namespace {

void check_order(int k) {
  if (k < 1 || k > kMaxBoldOrder) {
    throw Error(ErrorKind::UnsupportedOrder,
                "bold diagrams available for orders 1.." + std::to_string(kMaxBoldOrder) +
                    ", requested " + std::to_string(k));
  }
}

}  // namespace

SymMatrix sigma1(const SpdMatrix& G, const SymMatrix& v) {
  require_dim(G.dim(), v.dim(), "sigma1");
  const int n = G.dim();
  Eigen::MatrixXd s(n, n);
  for (int i = 0; i < n; ++i) {
    double hartree = 0.0;
    for (int k = 0; k < n; ++k) hartree += v(i, k) * G(k, k);
    for (int j = 0; j < n; ++j) s(i, j) = -v(i, j) * G(i, j);
    s(i, i) -= 0.5 * hartree;
  }
  return SymMatrix(s);
}

SymMatrix sigma2(const SpdMatrix& G, const SymMatrix& v) {
  require_dim(G.dim(), v.dim(), "sigma2");
  const int n = G.dim();
  const Eigen::MatrixXd& g = G.matrix();
  const Eigen::MatrixXd& w = v.matrix();
  // ring: bubble of two propagators between interaction lines
  const Eigen::MatrixXd ring = w * g.cwiseProduct(g) * w;
  Eigen::MatrixXd s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double exchange = 0.0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) exchange += w(i, k) * g(k, j) * g(k, l) * g(l, i) * w(j, l);
      s(i, j) = 0.5 * g(i, j) * ring(i, j) + exchange;
    }
  return SymMatrix(0.5 * (s + s.transpose()));
}

SymMatrix sigma_k(const SpdMatrix& G, const SymMatrix& v, int k) {
  check_order(k);
  return k == 1 ? sigma1(G, v) : sigma2(G, v);
}

double phi_k(const SpdMatrix& G, const SymMatrix& v, int k) {
  const SymMatrix s = sigma_k(G, v, k);
  return (G.matrix().cwiseProduct(s.matrix())).sum() / (2.0 * k);
}

SymMatrix truncated_sigma(const SpdMatrix& G, const SymMatrix& v, double eps, int order) {
  check_order(order);
  require_dim(G.dim(), v.dim(), "truncated_sigma");
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(G.dim(), G.dim());
  for (int k = 1; k <= order; ++k) s += std::pow(eps, k) * sigma_k(G, v, k).matrix();
  return SymMatrix(s);
}

double truncated_phi(const SpdMatrix& G, const SymMatrix& v, double eps, int order) {
  check_order(order);
  double p = 0.0;
  for (int k = 1; k <= order; ++k) p += std::pow(eps, k) * phi_k(G, v, k);
  return p;
}

SpdMatrix g0_of_truncation(const SpdMatrix& G, const SymMatrix& v, double eps, int order) {
  const SymMatrix bare_inverse = G.inverse().sym() + truncated_sigma(G, v, eps, order);
  return SpdMatrix(bare_inverse).inverse();
}

BoldSeries::BoldSeries(const SpdMatrix& G, const SymMatrix& v, int order) {
  check_order(order);
  for (int k = 1; k <= order; ++k) {
    sigma_terms_.push_back(sigma_k(G, v, k));
    phi_terms_.push_back((G.matrix().cwiseProduct(sigma_terms_.back().matrix())).sum() / (2.0 * k));
  }
}

BoldSeries::BoldSeries(const SpdMatrix& G, const Interaction& U, int order)
    : BoldSeries(G, U.effective_coupling(), order) {}

SymMatrix BoldSeries::sigma(double eps) const {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(sigma_terms_.front().dim(), sigma_terms_.front().dim());
  for (std::size_t k = 0; k < sigma_terms_.size(); ++k)
    s += std::pow(eps, static_cast<int>(k) + 1) * sigma_terms_[k].matrix();
  return SymMatrix(s);
}

double BoldSeries::phi(double eps) const {
  double p = 0.0;
  for (std::size_t k = 0; k < phi_terms_.size(); ++k)
    p += std::pow(eps, static_cast<int>(k) + 1) * phi_terms_[k];
  return p;
}

}  // namespace lwf
