// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "lwf/diagrams.hpp"
#include "lwf/oracle.hpp"
#include "lwf/verify.hpp"

using namespace lwf;

namespace {

struct Outcome {
  bool passed = false;
  std::string summary;
};

struct Criterion {
  int id;
  const char* title;
  double time_limit_s;
  std::function<Outcome()> run;
};

SymMatrix random_spd(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> eig(lo, hi);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = normal(rng);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(z).householderQ();
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d(i) = eig(rng);
  const Eigen::MatrixXd a = q * d.asDiagonal() * q.transpose();
  return SymMatrix(0.5 * (a + a.transpose()));
}

SymMatrix random_coupling(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd v(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) v(i, j) = v(j, i) = (i == j ? 0.5 + u(rng) : 0.5 * u(rng));
  return SymMatrix(v);
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// every report passes; summary carries the worst metric in the failing direction
Outcome all_pass(const std::vector<CheckReport>& reports) {
  Outcome o{true, ""};
  // worst check relative to its own threshold
  const CheckReport* worst = nullptr;
  double worst_ratio = -1.0;
  for (const CheckReport& r : reports) {
    o.passed = o.passed && r.passed;
    const double ratio = std::isnan(r.metric) ? INFINITY
                         : r.lower_bound      ? r.threshold / r.metric
                                              : r.metric / r.threshold;
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      worst = &r;
    }
    if (!r.error.empty()) o.summary += " [" + r.name + ": " + r.error + "]";
  }
  if (worst == nullptr) return {false, "no checks ran"};
  o.summary = fmt("%zu checks, worst %s %.3g (%s %.3g)", reports.size(), worst->name.c_str(), worst->metric,
                  worst->lower_bound ? ">=" : "<=", worst->threshold) +
              o.summary;
  return o;
}

const VerifyContext& ctx() {
  static const VerifyContext c = make_context(OracleConfig{});
  return c;
}

// with U = 0 the integrand is a constant or a mild Gaussian ratio, which the
// default rule resolves; the larger quartic node count only costs time at n = 3
const VerifyContext& gaussian_ctx() {
  static const VerifyContext c = [] {
    VerifyContext v = make_context(OracleConfig{});
    v.cfg.nodes_per_dim = OracleConfig{}.nodes_per_dim;
    return v;
  }();
  return c;
}

Outcome criterion_gaussian() {
  std::mt19937_64 rng(101);
  std::vector<CheckReport> reports;
  for (int k = 0; k < 25; ++k) {
    reports.push_back(check_gaussian_closed_form(random_spd(rng, 1 + k % 3, 0.1, 5.0), gaussian_ctx()));
  }
  return all_pass(reports);
}

Outcome criterion_noninteracting() {
  std::mt19937_64 rng(202);
  std::vector<CheckReport> reports;
  for (int k = 0; k < 10; ++k) {
    reports.push_back(check_noninteracting_phi(SpdMatrix(random_spd(rng, 1 + k % 3, 0.2, 4.0)), gaussian_ctx()));
  }
  return all_pass(reports);
}

Outcome criterion_bijection() {
  const std::vector<CheckReport> r = run_suite("bijection", ctx());
  int indefinite = 0;
  for (const CheckReport& c : r)
    for (const CheckDetail& d : c.details)
      if (d.key == "lambda_min_A" && d.values[0] < 0.0) ++indefinite;
  Outcome o = all_pass(r);
  o.passed = o.passed && r.size() == 10 && indefinite >= 3;
  o.summary += fmt(", %d with indefinite A", indefinite);
  return o;
}

Outcome criterion_gradients() {
  const std::vector<CheckReport> r = run_suite("gradient", ctx());
  Outcome o = all_pass(r);
  o.passed = o.passed && r.size() == 6;
  return o;
}

Outcome criterion_asymptotics() {
  const std::vector<CheckReport> r = run_suite("theorem3", ctx());
  Outcome o = all_pass(r);
  std::string slopes;
  for (const CheckReport& c : r) {
    double ss = 0, sp = 0;
    for (const CheckDetail& d : c.details) {
      if (d.key == "slope_sigma") ss = d.values[0];
      if (d.key == "slope_phi") sp = d.values[0];
    }
    slopes += fmt(" %s:%.2f/%.2f", c.name.c_str() + c.name.size() - 2, ss, sp);
  }
  o.summary += ", slopes sigma/phi" + slopes;
  return o;
}

Outcome criterion_phi_sigma_identity() {
  std::mt19937_64 rng(606);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const int n = 1 + k % 4;
    const SpdMatrix g(random_spd(rng, n, 0.2, 3.0));
    const BoldSeries s(g, random_coupling(rng, n), kMaxBoldOrder);
    for (int order = 1; order <= s.order(); ++order) {
      const double tr = (g.matrix().cwiseProduct(s.sigma_terms()[order - 1].matrix())).sum();
      worst = std::max(worst, std::abs(s.phi_terms()[order - 1] - tr / (2.0 * order)));
    }
  }
  return {worst <= 1e-12, fmt("20 random (G, v), max |Phi_k - Tr[G Sigma_k]/2k| = %.3g (<= 1e-12)", worst)};
}

Outcome criterion_transformation() { return all_pass(run_suite("transformation", ctx())); }
Outcome criterion_boundary() { return all_pass(run_suite("boundary", ctx())); }
Outcome criterion_dyson() { return all_pass(run_suite("dyson", ctx())); }

Outcome criterion_mc_honesty() {
  std::mt19937_64 rng(1010);
  int total = 0;
  int inside = 0;
  auto tally = [&](double est, double se, double ref) {
    ++total;
    if (std::abs(est - ref) <= 3.0 * se) ++inside;
  };
  for (int k = 0; k < 70; ++k) {
    const int n = 1 + k % 3;
    const bool gaussian = k < 50;
    const SymMatrix a = random_spd(rng, n, gaussian ? 0.2 : 0.5, 3.0);
    const Interaction u = gaussian ? Interaction::zero(n) : Interaction::diagonal_quartic(random_coupling(rng, n));
    OracleConfig q;
    const MomentReport ref = evaluate_moments(a, u, q);
    OracleConfig m;
    m.mode = OracleMode::MonteCarlo;
    m.samples = 1000000;
    m.seed = 5000 + k;
    const MomentReport est = evaluate_moments(a, u, m);
    tally(est.Omega, est.std_errors->Omega, ref.Omega);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) tally(est.G(i, j), est.std_errors->G(i, j), ref.G(i, j));
  }
  const double frac = static_cast<double>(inside) / total;
  return {frac >= 0.95, fmt("%d/%d estimates within 3 SE (%.1f%%, need >= 95%%)", inside, total, 100.0 * frac)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "Gaussian closed forms", 10, criterion_gaussian},
      {2, "Non-interacting LW functional vanishes", 30, criterion_noninteracting},
      {3, "Bijection round trip", 120, criterion_bijection},
      {4, "Gradient identities", 120, criterion_gradients},
      {5, "Bold-series asymptotic order", 300, criterion_asymptotics},
      {6, "Phi/Sigma bold identity", 1e9, criterion_phi_sigma_identity},
      {7, "Transformation rule", 180, criterion_transformation},
      {8, "Boundary continuity", 180, criterion_boundary},
      {9, "Dyson / variational consistency", 1e9, criterion_dyson},
      {10, "Monte Carlo estimator honesty", 1e9, criterion_mc_honesty},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("aborted: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.time_limit_s;
    const bool ok = o.passed && in_time;
    if (!ok) ++failures;
    std::string limit = c.time_limit_s < 1e8 ? fmt(" (limit %.0fs)", c.time_limit_s) : "";
    std::printf("%s  %2d. %-40s %s; %.2fs%s%s\n", ok ? "PASS" : "FAIL", c.id, c.title, o.summary.c_str(), secs,
                limit.c_str(), in_time ? "" : " TIME LIMIT EXCEEDED");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
