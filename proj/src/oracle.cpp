#include "lwf/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

namespace lwf {

// ---------------------------------------------------------------- Gauss-Hermite

GaussHermiteRule gauss_hermite(int count) {
  if (count < 1) throw Error(ErrorKind::ValidationError, "need at least one quadrature node");
  // Golub-Welsch for e^{-t^2} gives starting points; Newton on the orthonormal
  // recurrence then polishes nodes and yields weights with full relative accuracy.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(count, count);
  for (int k = 1; k < count; ++k) jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(k / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi, Eigen::EigenvaluesOnly);

  const double p0 = std::pow(std::numbers::pi, -0.25);
  // p_count and p_{count-1} share a scale factor exp(log_scale) so large
  // counts do not overflow
  auto recurrence = [&](double t, double& pn, double& pn1, double& log_scale) {
    double prev = 0.0;
    double cur = p0;
    log_scale = 0.0;
    for (int j = 0; j < count; ++j) {
      const double next = t * std::sqrt(2.0 / (j + 1)) * cur - std::sqrt(static_cast<double>(j) / (j + 1)) * prev;
      prev = cur;
      cur = next;
      if (std::abs(cur) > 1e100) {
        cur *= 1e-100;
        prev *= 1e-100;
        log_scale += 100.0 * std::log(10.0);
      }
    }
    pn = cur;    // p_count
    pn1 = prev;  // p_{count-1}
  };

  GaussHermiteRule rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  rule.log_weights.resize(count);
  for (int k = 0; k < count; ++k) {
    double t = es.eigenvalues()(k);
    double pn = 0.0;
    double pn1 = 0.0;
    double log_scale = 0.0;
    for (int it = 0; it < 20; ++it) {
      recurrence(t, pn, pn1, log_scale);
      const double dt = pn / (std::sqrt(2.0 * count) * pn1);
      t -= dt;
      if (std::abs(dt) <= 1e-15 * std::max(1.0, std::abs(t))) break;
    }
    recurrence(t, pn, pn1, log_scale);
    // w = 1 / (count p_{count-1}^2), then the change to exp(-y^2 / 2)
    const double log_w = -std::log(static_cast<double>(count)) -
                         2.0 * (std::log(std::abs(pn1)) + log_scale) + 0.5 * std::log(2.0);
    rule.nodes[k] = std::numbers::sqrt2 * t;
    rule.log_weights[k] = log_w;
    rule.weights[k] = std::exp(log_w);
  }
  if (count % 2 == 1) rule.nodes[count / 2] = 0.0;
  return rule;
}

SymMatrix envelope_matrix(const SymMatrix& A, double floor) {
  if (!(floor > 0.0)) throw Error(ErrorKind::ValidationError, "envelope floor must be > 0");
  const double lo = A.min_eigenvalue();
  if (lo >= floor) return A;
  return A + SymMatrix::identity(A.dim()) * (floor - lo);
}

namespace {

// Accumulates weighted moments of exp(l) in log space, rescaling whenever the
// running maximum of l moves.
class MomentAccumulator {
 public:
  MomentAccumulator(int n, bool fourth) : n_(n), fourth_(fourth) {
    second_.assign(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0);
    if (fourth) {
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
          for (int k = j; k < n; ++k)
            for (int l = k; l < n; ++l) quads_.push_back({i, j, k, l});
      fourth_sum_.assign(quads_.size(), 0.0);
    }
  }

  void add(double logw, const double* x, double u) {
    if (logw > max_) {
      const double scale = std::isfinite(max_) ? std::exp(max_ - logw) : 0.0;
      rescale(scale);
      max_ = logw;
    }
    const double w = std::exp(logw - max_);
    add_to_sum(w);
    sum_u_ += w * u;
    std::size_t p = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j) second_[p++] += w * x[i] * x[j];
    for (std::size_t q = 0; q < quads_.size(); ++q) {
      const auto& [i, j, k, l] = quads_[q];
      fourth_sum_[q] += w * x[i] * x[j] * x[k] * x[l];
    }
  }

  void merge(const MomentAccumulator& o) {
    if (!std::isfinite(o.max_)) return;
    if (o.max_ > max_) {
      rescale(std::isfinite(max_) ? std::exp(max_ - o.max_) : 0.0);
      max_ = o.max_;
    }
    const double s = std::exp(o.max_ - max_);
    add_to_sum(s * o.sum_);
    add_to_sum(s * o.sum_comp_);
    sum_u_ += s * o.sum_u_;
    for (std::size_t p = 0; p < second_.size(); ++p) second_[p] += s * o.second_[p];
    for (std::size_t q = 0; q < fourth_sum_.size(); ++q) fourth_sum_[q] += s * o.fourth_sum_[q];
  }

  double log_sum() const { return max_ + std::log(total()); }
  double mean_u() const { return sum_u_ / total(); }

  Eigen::MatrixXd second() const {
    Eigen::MatrixXd g(n_, n_);
    std::size_t p = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j) g(i, j) = g(j, i) = second_[p++] / total();
    return g;
  }

  FourthMoments fourth() const {
    const std::size_t n = static_cast<std::size_t>(n_);
    std::vector<double> m(n * n * n * n, 0.0);
    for (std::size_t q = 0; q < quads_.size(); ++q) {
      std::array<int, 4> idx = quads_[q];
      const double v = fourth_sum_[q] / total();
      do {
        m[((idx[0] * n + idx[1]) * n + idx[2]) * n + idx[3]] = v;
      } while (std::next_permutation(idx.begin(), idx.end()));
    }
    return FourthMoments(n_, std::move(m));
  }

 private:
  // Neumaier summation: the normalizer adds up to millions of positive terms
  void add_to_sum(double w) {
    const double t = sum_ + w;
    sum_comp_ += std::abs(sum_) >= std::abs(w) ? (sum_ - t) + w : (w - t) + sum_;
    sum_ = t;
  }
  double total() const { return sum_ + sum_comp_; }

  void rescale(double s) {
    sum_ *= s;
    sum_comp_ *= s;
    sum_u_ *= s;
    for (double& v : second_) v *= s;
    for (double& v : fourth_sum_) v *= s;
  }

  int n_;
  bool fourth_;
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
  double sum_comp_ = 0.0;
  double sum_u_ = 0.0;
  std::vector<double> second_;
  std::vector<std::array<int, 4>> quads_;
  std::vector<double> fourth_sum_;
};

struct Integrand {
  const SymMatrix& A;
  const Interaction& U;
  Eigen::MatrixXd residual_quadratic;  // A - B
  Eigen::MatrixXd factor;              // Cholesky factor L of B
  double logdet_b = 0.0;

  Integrand(const SymMatrix& a, const Interaction& u, double floor) : A(a), U(u) {
    const SymMatrix b = envelope_matrix(a, floor);
    const SpdMatrix bs(b);
    residual_quadratic = a.matrix() - b.matrix();
    factor = bs.factor();
    logdet_b = bs.logdet();
  }

  // x = L^{-T} y so that x^T B x = y^T y.
  void to_x(const Eigen::VectorXd& y, Eigen::VectorXd& x) const {
    x = factor.transpose().triangularView<Eigen::Upper>().solve(y);
  }

  // log of exp(-x^T (A - B) x / 2 - U(x)); returns U(x) through u.
  double log_residual(const Eigen::VectorXd& x, double& u) const {
    u = U.eval(x);
    return -0.5 * x.dot(residual_quadratic * x) - u;
  }
};

void check_preconditions(const SymMatrix& A, const Interaction& U) {
  require_dim(A.dim(), U.dim(), "oracle");
  const GrowthReport growth = validate_growth(U);
  if (growth.cls == GrowthClass::SuperQuadratic) return;
  SymMatrix quadratic = A;
  if (U.kind() == InteractionKind::QuadraticShift) quadratic = A + U.shift();
  if (!is_spd(quadratic)) {
    throw Error(ErrorKind::DivergentIntegral,
                "A is not positive definite and the interaction growth is not verified");
  }
}

MomentReport finish(const MomentAccumulator& acc, double log_norm, int n, bool fourth) {
  MomentReport r;
  const double log_z = acc.log_sum() + log_norm;
  r.Omega = -log_z;
  r.Z = std::exp(log_z);
  if (!std::isfinite(r.Omega) || !std::isfinite(r.Z) || !(r.Z > 0.0)) {
    throw Error(ErrorKind::NonFinite, "partition function not finite (log Z = " +
                                          std::to_string(log_z) + ")");
  }
  const Eigen::MatrixXd g = acc.second();
  if (!g.allFinite()) throw Error(ErrorKind::NonFinite, "Green's function not finite");
  try {
    r.G = SpdMatrix(SymMatrix(g));
  } catch (const Error& e) {
    throw Error(ErrorKind::NonFinite, std::string("Green's function lost definiteness: ") + e.what());
  }
  r.mean_U = acc.mean_u();
  if (fourth) r.M4 = acc.fourth();
  (void)n;
  return r;
}

MomentReport quadrature_moments(const SymMatrix& A, const Interaction& U, const OracleConfig& cfg) {
  const int n = A.dim();
  if (n > kQuadDimCap) {
    throw Error(ErrorKind::DimensionCap, "quadrature supports n <= " + std::to_string(kQuadDimCap) +
                                             ", got " + std::to_string(n));
  }
  std::uint64_t total = 1;
  for (int d = 0; d < n; ++d) {
    total *= static_cast<std::uint64_t>(cfg.nodes_per_dim);
    if (total > kQuadNodeBudget) {
      throw Error(ErrorKind::DimensionCap, "nodes_per_dim^n exceeds the node budget");
    }
  }
  const GaussHermiteRule rule = gauss_hermite(cfg.nodes_per_dim);
  const std::vector<double>& log_w = rule.log_weights;

  const Integrand f(A, U, cfg.envelope_floor);
  MomentAccumulator acc(n, cfg.want_fourth_moments);
  std::vector<int> digit(n, 0);
  Eigen::VectorXd y(n);
  Eigen::VectorXd x(n);
  for (std::uint64_t node = 0; node < total; ++node) {
    double lw = 0.0;
    for (int d = 0; d < n; ++d) {
      y(d) = rule.nodes[digit[d]];
      lw += log_w[digit[d]];
    }
    f.to_x(y, x);
    double u = 0.0;
    const double l = lw + f.log_residual(x, u);
    if (std::isnan(l)) throw Error(ErrorKind::NonFinite, "integrand is NaN");
    acc.add(l, x.data(), u);
    for (int d = n - 1; d >= 0; --d) {
      if (++digit[d] < cfg.nodes_per_dim) break;
      digit[d] = 0;
    }
  }
  // dx = dy / det L
  return finish(acc, -0.5 * f.logdet_b, n, cfg.want_fourth_moments);
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct BatchResult {
  MomentAccumulator acc;
  std::uint64_t count = 0;
};

double batch_std_error(const std::vector<double>& values) {
  const double m = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= m;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (m - 1.0) / m);
}

MomentReport monte_carlo_moments(const SymMatrix& A, const Interaction& U, const OracleConfig& cfg) {
  const int n = A.dim();
  if (cfg.samples < 2 * static_cast<std::uint64_t>(kMcBatches)) {
    throw Error(ErrorKind::ValidationError, "Monte Carlo needs at least 128 samples");
  }
  const Integrand f(A, U, cfg.envelope_floor);

  std::vector<BatchResult> batches;
  batches.reserve(kMcBatches);
  for (int b = 0; b < kMcBatches; ++b) {
    const std::uint64_t count =
        cfg.samples / kMcBatches + (static_cast<std::uint64_t>(b) < cfg.samples % kMcBatches ? 1 : 0);
    batches.push_back({MomentAccumulator(n, cfg.want_fourth_moments), count});
  }

  // each batch owns a stream derived from (seed, batch index) only
  auto run_batch = [&](int b) {
    std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(b) + 1)));
    std::normal_distribution<double> normal;
    Eigen::VectorXd z(n);
    Eigen::VectorXd x(n);
    BatchResult& out = batches[b];
    for (std::uint64_t s = 0; s < out.count; ++s) {
      for (int d = 0; d < n; ++d) z(d) = normal(rng);
      f.to_x(z, x);
      double u = 0.0;
      const double l = f.log_residual(x, u);
      if (std::isnan(l)) continue;
      out.acc.add(l, x.data(), u);
    }
  };

  int workers = cfg.workers > 0 ? cfg.workers : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, kMcBatches);
  if (workers == 1) {
    for (int b = 0; b < kMcBatches; ++b) run_batch(b);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int b = w; b < kMcBatches; b += workers) run_batch(b);
      });
    }
    for (auto& t : pool) t.join();
  }

  MomentAccumulator total(n, cfg.want_fourth_moments);
  for (const BatchResult& b : batches) total.merge(b.acc);

  // proposal N(0, B^{-1}) has normalization (2 pi)^{n/2} det(B)^{-1/2};
  // the accumulated log-sum is over samples, so divide by the sample count
  const double log_norm = 0.5 * n * std::log(2.0 * std::numbers::pi) - 0.5 * f.logdet_b -
                          std::log(static_cast<double>(cfg.samples));
  MomentReport r = finish(total, log_norm, n, cfg.want_fourth_moments);

  std::vector<double> rel_z;
  std::vector<double> mean_u;
  std::vector<Eigen::MatrixXd> g;
  const double ref = total.log_sum();
  for (const BatchResult& b : batches) {
    rel_z.push_back(std::exp(b.acc.log_sum() - ref) * static_cast<double>(cfg.samples) /
                    static_cast<double>(b.count));
    mean_u.push_back(b.acc.mean_u());
    g.push_back(b.acc.second());
  }
  StdErrors se;
  // floor at a few ulps: with an exact envelope every weight is 1 and the
  // sample spread of Z vanishes
  auto floored = [](double e, double value) {
    return std::max(e, 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(value)));
  };
  se.Omega = floored(batch_std_error(rel_z), r.Omega);
  se.Z = floored(se.Omega * r.Z, r.Z);
  se.mean_U = floored(batch_std_error(mean_u), r.mean_U);
  se.G.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::vector<double> vals;
      vals.reserve(g.size());
      for (const auto& gb : g) vals.push_back(gb(i, j));
      se.G(i, j) = floored(batch_std_error(vals), r.G(i, j));
    }
  r.std_errors = std::move(se);
  return r;
}

}  // namespace

MomentReport evaluate_moments(const SymMatrix& A, const Interaction& U, const OracleConfig& cfg) {
  check_preconditions(A, U);
  if (!(cfg.envelope_floor > 0.0)) throw Error(ErrorKind::ValidationError, "envelope floor must be > 0");
  if (cfg.mode == OracleMode::Quadrature) {
    if (cfg.nodes_per_dim < 1) throw Error(ErrorKind::ValidationError, "nodes_per_dim must be >= 1");
    return quadrature_moments(A, U, cfg);
  }
  return monte_carlo_moments(A, U, cfg);
}

SpdMatrix green_of_A(const SymMatrix& A, const Interaction& U, const OracleConfig& cfg) {
  return evaluate_moments(A, U, cfg).G;
}

}  // namespace lwf
