#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lwf/diagrams.hpp"
#include "lwf/solver.hpp"

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

OracleConfig quad(int nodes = 128) {
  OracleConfig c;
  c.nodes_per_dim = nodes;
  return c;
}

const Interaction kQuartic1 = Interaction::diagonal_quartic(SymMatrix::identity(1));
const Interaction kQuartic2 =
    Interaction::diagonal_quartic(SymMatrix::from_rows({{1.0, 0.5}, {0.5, 1.0}}));
const double kBold1Root = (std::sqrt(7.0) - 1.0) / 3.0;

}  // namespace

TEST(SigmaModel, NamesRoundTrip) {
  for (SigmaModel m : {SigmaModel::None, SigmaModel::Bold1, SigmaModel::Bold12, SigmaModel::ExactOracle}) {
    EXPECT_EQ(parse_sigma_model(to_string(m)), m);
  }
  EXPECT_EQ(kind_of([] { parse_sigma_model("bold3"); }), ErrorKind::ValidationError);
}

TEST(Dyson, NonInteractingIsInverse) {
  const SymMatrix a = SymMatrix::from_rows({{2.0, 0.5}, {0.5, 1.0}});
  SolverOptions o;
  const SolveTrace t = dyson_solve(a, kQuartic2, SigmaModel::None, o, quad());
  EXPECT_TRUE(t.converged);
  EXPECT_EQ(t.iterates.size(), 1u);
  EXPECT_LT((t.final_G.matrix() - SpdMatrix(a).inverse().matrix()).norm(), 1e-12);
  EXPECT_EQ(kind_of([&] { dyson_solve(SymMatrix::from_rows({{-1.0}}), kQuartic1, SigmaModel::None, o, quad()); }),
            ErrorKind::ValidationError);
}

TEST(Dyson, Bold1ScalarRoot) {
  SolverOptions o;
  o.tol = 1e-13;
  const SolveTrace t = dyson_solve(SymMatrix::identity(1), kQuartic1, SigmaModel::Bold1, o, quad());
  EXPECT_TRUE(t.converged);
  EXPECT_NEAR(t.final_G(0, 0), kBold1Root, 1e-12);
  EXPECT_LE(t.iterates.back().residual, 1e-13);
  // undamped iteration reaches the same point
  o.damping = 1.0;
  EXPECT_NEAR(dyson_solve(SymMatrix::identity(1), kQuartic1, SigmaModel::Bold1, o, quad()).final_G(0, 0),
              kBold1Root, 1e-12);
}

TEST(Dyson, ExactModelReproducesOracle) {
  SolverOptions o;
  o.tol = 1e-10;
  for (const SymMatrix& a : {SymMatrix::identity(1), SymMatrix::from_rows({{-0.5}})}) {
    const SolveTrace t = dyson_solve(a, kQuartic1, SigmaModel::ExactOracle, o, quad());
    EXPECT_NEAR(t.final_G(0, 0), green_of_A(a, kQuartic1, quad())(0, 0), 1e-9);
  }
  const SymMatrix a2 = SymMatrix::from_rows({{1.0, 0.2}, {0.2, 0.7}});
  const SolveTrace t2 = dyson_solve(a2, kQuartic2, SigmaModel::ExactOracle, o, quad(64));
  EXPECT_LT((t2.final_G.matrix() - green_of_A(a2, kQuartic2, quad(64)).matrix()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Dyson, ReportsNoConvergence) {
  SolverOptions o;
  o.tol = 1e-14;
  o.max_iter = 2;
  try {
    // at A = 1 the two bold orders cancel, so start from A = 2
    dyson_solve(SymMatrix::from_rows({{2.0}}), kQuartic1, SigmaModel::Bold12, o, quad());
    FAIL() << "expected NoConvergence";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoConvergence);
    EXPECT_GT(e.residual(), 0.0);
  }
  o.damping = 1.5;
  EXPECT_EQ(kind_of([&] { dyson_solve(SymMatrix::identity(1), kQuartic1, SigmaModel::Bold1, o, quad()); }),
            ErrorKind::ValidationError);
}

TEST(Dyson, BoldModelsNeedDiagonalQuartic) {
  const Interaction c = compose(kQuartic1, LinearMap::identity(1));
  EXPECT_EQ(kind_of([&] { dyson_solve(SymMatrix::identity(1), c, SigmaModel::Bold1, {}, quad()); }),
            ErrorKind::UnsupportedInteraction);
}

TEST(FreeEnergy, EqualsOmegaAtTheSolution) {
  // non-interacting closed form at G = A^{-1}
  const SymMatrix a = SymMatrix::from_rows({{2.0, 0.5}, {0.5, 1.0}});
  const SpdMatrix g = SpdMatrix(a).inverse();
  const double omega = 0.5 * SpdMatrix(a).logdet() - std::log(2 * std::numbers::pi);
  EXPECT_NEAR(free_energy(a, g, Interaction::zero(2), SigmaModel::None, quad()), omega, 1e-13);
  // exact model at the interacting Green's function
  const MomentReport m = evaluate_moments(SymMatrix::identity(1), kQuartic1, quad());
  NewtonOptions n;
  n.tol = 1e-13;
  EXPECT_NEAR(free_energy(SymMatrix::identity(1), m.G, kQuartic1, SigmaModel::ExactOracle, quad(), n),
              m.Omega, 1e-11);
}

TEST(FreeEnergy, ExactModelIsMinimizedByTheOracle) {
  const SymMatrix a = SymMatrix::identity(1);
  const double g_star = green_of_A(a, kQuartic1, quad())(0, 0);
  NewtonOptions n;
  n.tol = 1e-13;
  const double f_star = free_energy(a, SpdMatrix(SymMatrix::from_rows({{g_star}})), kQuartic1,
                                    SigmaModel::ExactOracle, quad(), n);
  for (double g : {0.3, 0.5, 0.7, 1.0}) {
    EXPECT_GT(free_energy(a, SpdMatrix(SymMatrix::from_rows({{g}})), kQuartic1, SigmaModel::ExactOracle,
                          quad(), n),
              f_star);
  }
}

TEST(Minimize, MatchesDysonAndDecreases) {
  SolverOptions o;
  o.tol = 1e-10;
  const SolveTrace t = minimize_free_energy(SymMatrix::identity(1), kQuartic1, SigmaModel::Bold1, o, quad());
  EXPECT_TRUE(t.converged);
  EXPECT_NEAR(t.final_G(0, 0), kBold1Root, 1e-9);
  for (std::size_t k = 1; k < t.iterates.size(); ++k) {
    EXPECT_LE(t.iterates[k].free_energy, t.iterates[k - 1].free_energy + 1e-12);
  }
  const SymMatrix a2 = SymMatrix::from_rows({{1.0, 0.2}, {0.2, 0.7}});
  const SolveTrace t2 = minimize_free_energy(a2, kQuartic2, SigmaModel::ExactOracle, o, quad(64));
  EXPECT_LE(t2.iterates.back().residual, o.tol);
  EXPECT_LT((t2.final_G.matrix() - green_of_A(a2, kQuartic2, quad(64)).matrix()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Minimize, Bold12Stationarity) {
  SolverOptions o;
  o.tol = 1e-10;
  const SymMatrix a = SymMatrix::from_rows({{1.0, 0.1}, {0.1, 1.2}});
  const SolveTrace t = minimize_free_energy(a, kQuartic2, SigmaModel::Bold12, o, quad());
  const BoldSeries s(t.final_G, kQuartic2, 2);
  EXPECT_LE(dyson_residual(a, t.final_G, s.sigma(1.0)), o.tol);
}
