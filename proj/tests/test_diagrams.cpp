#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lwf/diagrams.hpp"

using namespace lwf;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an lwf::Error";
  return ErrorKind::ValidationError;
}

SpdMatrix random_spd(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> d;
  Eigen::MatrixXd z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = d(rng);
  return SpdMatrix(SymMatrix(z * z.transpose() / n + 0.3 * Eigen::MatrixXd::Identity(n, n)));
}

SymMatrix random_coupling(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd v(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) v(i, j) = v(j, i) = u(rng);
  return SymMatrix(v);
}

SpdMatrix scalar(double g) { return SpdMatrix(SymMatrix::from_rows({{g}})); }

// index-by-index evaluation of the order-2 skeleton terms
Eigen::MatrixXd sigma2_loops(const Eigen::MatrixXd& g, const Eigen::MatrixXd& v) {
  const int n = static_cast<int>(g.rows());
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          s(i, j) += 0.5 * g(i, j) * v(i, k) * g(k, l) * g(k, l) * v(l, j);
          s(i, j) += v(i, k) * g(k, j) * g(k, l) * g(l, i) * v(j, l);
        }
  return 0.5 * (s + s.transpose());
}

}  // namespace

TEST(Diagrams, ScalarCoefficients) {
  // one site: Sigma1 = -3/2 v g, Sigma2 = 3/2 v^2 g^3
  for (double g : {0.5, 1.0, 2.0}) {
    for (double v : {0.3, 1.0}) {
      const SymMatrix vv = SymMatrix::from_rows({{v}});
      EXPECT_NEAR(sigma1(scalar(g), vv)(0, 0), -1.5 * v * g, 1e-15);
      EXPECT_NEAR(sigma2(scalar(g), vv)(0, 0), 1.5 * v * v * g * g * g, 1e-14);
      EXPECT_NEAR(phi_k(scalar(g), vv, 1), -0.75 * v * g * g, 1e-15);
      EXPECT_NEAR(phi_k(scalar(g), vv, 2), 0.375 * v * v * g * g * g * g, 1e-14);
    }
  }
}

TEST(Diagrams, HartreeFockStructure) {
  const SpdMatrix g(SymMatrix::from_rows({{1.0, 0.3}, {0.3, 0.8}}));
  const SymMatrix v = SymMatrix::from_rows({{1.0, 0.5}, {0.5, 2.0}});
  const SymMatrix s = sigma1(g, v);
  EXPECT_NEAR(s(0, 0), -0.5 * (1.0 * 1.0 + 0.5 * 0.8) - 1.0 * 1.0, 1e-15);
  EXPECT_NEAR(s(1, 1), -0.5 * (0.5 * 1.0 + 2.0 * 0.8) - 2.0 * 0.8, 1e-15);
  EXPECT_NEAR(s(0, 1), -0.5 * 0.3, 1e-15);
}

TEST(Diagrams, SecondOrderMatchesIndexSums) {
  std::mt19937_64 rng(21);
  for (int n = 1; n <= 4; ++n) {
    const SpdMatrix g = random_spd(rng, n);
    const SymMatrix v = random_coupling(rng, n);
    EXPECT_LT((sigma2(g, v).matrix() - sigma2_loops(g.matrix(), v.matrix())).norm(), 1e-12);
  }
}

TEST(Diagrams, HomogeneityInCoupling) {
  std::mt19937_64 rng(2);
  const SpdMatrix g = random_spd(rng, 3);
  const SymMatrix v = random_coupling(rng, 3);
  for (int k = 1; k <= 2; ++k) {
    const Eigen::MatrixXd scaled = sigma_k(g, v * 0.3, k).matrix();
    EXPECT_LT((scaled - std::pow(0.3, k) * sigma_k(g, v, k).matrix()).norm(), 1e-13);
  }
}

TEST(Diagrams, PhiSigmaIdentityOnRandomInputs) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 4;
    const SpdMatrix g = random_spd(rng, n);
    const SymMatrix v = random_coupling(rng, n);
    const BoldSeries s(g, v, 2);
    for (int k = 1; k <= 2; ++k) {
      const double tr = (g.matrix().cwiseProduct(s.sigma_terms()[k - 1].matrix())).sum();
      EXPECT_NEAR(s.phi_terms()[k - 1], tr / (2.0 * k), 1e-12);
    }
  }
}

TEST(Diagrams, TruncationsAndBareGreen) {
  const SpdMatrix g(SymMatrix::from_rows({{1.0, 0.2}, {0.2, 1.0}}));
  const SymMatrix v = SymMatrix::from_rows({{1.0, 0.5}, {0.5, 1.0}});
  const double eps = 0.1;
  const SymMatrix t = truncated_sigma(g, v, eps, 2);
  EXPECT_LT((t.matrix() - (eps * sigma1(g, v).matrix() + eps * eps * sigma2(g, v).matrix())).norm(), 1e-15);
  EXPECT_NEAR(truncated_phi(g, v, eps, 2), eps * phi_k(g, v, 1) + eps * eps * phi_k(g, v, 2), 1e-15);
  // bare: G0^{-1} = G^{-1} + Sigma
  const SpdMatrix g0 = g0_of_truncation(g, v, eps, 2);
  EXPECT_LT((g0.inverse().matrix() - g.inverse().matrix() - t.matrix()).norm(), 1e-12);
  // large coupling pushes G^{-1} + Sigma out of the cone
  EXPECT_EQ(kind_of([&] { g0_of_truncation(g, v, 5.0, 1); }), ErrorKind::NotPositiveDefinite);
}

TEST(Diagrams, SeriesEvaluation) {
  const BoldSeries s(scalar(1.0), SymMatrix::identity(1), 2);
  EXPECT_EQ(s.order(), 2);
  EXPECT_NEAR(s.sigma(0.1)(0, 0), -0.15 + 0.015, 1e-15);
  EXPECT_NEAR(s.phi(0.1), -0.075 + 0.00375, 1e-15);
  const Interaction u = Interaction::scaled(0.1, Interaction::diagonal_quartic(SymMatrix::identity(1)));
  EXPECT_NEAR(BoldSeries(scalar(1.0), u, 2).sigma(1.0)(0, 0), s.sigma(0.1)(0, 0), 1e-15);
}

TEST(Diagrams, Errors) {
  const SymMatrix v = SymMatrix::identity(1);
  EXPECT_EQ(kind_of([&] { sigma_k(scalar(1.0), v, 3); }), ErrorKind::UnsupportedOrder);
  EXPECT_EQ(kind_of([&] { BoldSeries(scalar(1.0), v, 0); }), ErrorKind::UnsupportedOrder);
  const Interaction c = compose(Interaction::diagonal_quartic(v), LinearMap::identity(1));
  EXPECT_EQ(kind_of([&] { BoldSeries(scalar(1.0), c, 1); }), ErrorKind::UnsupportedInteraction);
  EXPECT_EQ(kind_of([&] { sigma1(scalar(1.0), SymMatrix::identity(2)); }), ErrorKind::DimensionMismatch);
}
