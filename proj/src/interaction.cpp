#include "lwf/interaction.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <variant>

namespace lwf {

// ---------------------------------------------------------------- QuarticTensor

QuarticTensor::QuarticTensor(int n, std::vector<double> w) : n_(n), w_(std::move(w)) {
  const std::size_t size = static_cast<std::size_t>(n) * n * n * n;
  if (n <= 0 || w_.size() != size) {
    throw Error(ErrorKind::ValidationError,
                "quartic tensor needs n^4 = " + std::to_string(size) + " entries");
  }
  double scale = 0.0;
  for (double v : w_) {
    if (!std::isfinite(v)) throw Error(ErrorKind::ValidationError, "quartic tensor not finite");
    scale = std::max(scale, std::abs(v));
  }
  std::vector<double> sym(size, 0.0);
  double dev = 0.0;
  auto at = [n](int i, int j, int k, int l) {
    return ((static_cast<std::size_t>(i) * n + j) * n + k) * n + l;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          std::array<int, 4> idx{i, j, k, l};
          std::sort(idx.begin(), idx.end());
          double sum = 0.0;
          int count = 0;
          do {
            const double v = w_[at(idx[0], idx[1], idx[2], idx[3])];
            dev = std::max(dev, std::abs(v - w_[at(i, j, k, l)]));
            sum += v;
            ++count;
          } while (std::next_permutation(idx.begin(), idx.end()));
          sym[at(i, j, k, l)] = sum / count;
        }
  if (dev > 1e-9 * std::max(1.0, scale)) {
    throw Error(ErrorKind::ValidationError, "quartic tensor not permutation symmetric");
  }
  w_ = std::move(sym);
}

double QuarticTensor::eval(std::span<const double> x) const {
  double total = 0.0;
  std::size_t p = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      const double xij = x[i] * x[j];
      for (int k = 0; k < n_; ++k) {
        const double xijk = xij * x[k];
        for (int l = 0; l < n_; ++l) total += w_[p++] * xijk * x[l];
      }
    }
  return total;
}

// ---------------------------------------------------------------- nodes

namespace {

struct ZeroTerm {
  int n;
};
struct DiagonalTerm {
  SymMatrix v;
};
struct GeneralTerm {
  QuarticTensor w;
};
struct ScaledTerm {
  double factor;
  Interaction inner;
};
struct ComposedTerm {
  Interaction inner;
  LinearMap map;
};
struct ShiftTerm {
  SymMatrix d;
  Interaction inner;
};

}  // namespace

struct Interaction::Node {
  std::variant<ZeroTerm, DiagonalTerm, GeneralTerm, ScaledTerm, ComposedTerm, ShiftTerm> term;
};

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void wrong_kind(const char* what) {
  throw Error(ErrorKind::UnsupportedInteraction, std::string("interaction has no ") + what);
}

}  // namespace

Interaction Interaction::zero(int n) {
  if (n <= 0) throw Error(ErrorKind::ValidationError, "dimension must be positive");
  return Interaction(std::make_shared<Node>(Node{ZeroTerm{n}}));
}

Interaction Interaction::diagonal_quartic(SymMatrix v) {
  return Interaction(std::make_shared<Node>(Node{DiagonalTerm{std::move(v)}}));
}

Interaction Interaction::general_quartic(QuarticTensor w) {
  return Interaction(std::make_shared<Node>(Node{GeneralTerm{std::move(w)}}));
}

Interaction Interaction::scaled(double factor, Interaction inner) {
  if (!(factor >= 0.0) || !std::isfinite(factor)) {
    throw Error(ErrorKind::ValidationError, "scale factor must be finite and >= 0");
  }
  return Interaction(std::make_shared<Node>(Node{ScaledTerm{factor, std::move(inner)}}));
}

Interaction Interaction::composed(Interaction inner, LinearMap map) {
  require_dim(inner.dim(), map.dim(), "compose");
  return Interaction(std::make_shared<Node>(Node{ComposedTerm{std::move(inner), std::move(map)}}));
}

Interaction Interaction::quadratic_shift(SymMatrix d, Interaction inner) {
  require_dim(inner.dim(), d.dim(), "quadratic shift");
  return Interaction(std::make_shared<Node>(Node{ShiftTerm{std::move(d), std::move(inner)}}));
}

int Interaction::dim() const {
  return std::visit(Overloaded{
                        [](const ZeroTerm& t) { return t.n; },
                        [](const DiagonalTerm& t) { return t.v.dim(); },
                        [](const GeneralTerm& t) { return t.w.dim(); },
                        [](const ScaledTerm& t) { return t.inner.dim(); },
                        [](const ComposedTerm& t) { return t.map.dim(); },
                        [](const ShiftTerm& t) { return t.d.dim(); },
                    },
                    node_->term);
}

InteractionKind Interaction::kind() const {
  return static_cast<InteractionKind>(node_->term.index());
}

double Interaction::operator()(std::span<const double> x) const {
  require_dim(dim(), static_cast<int>(x.size()), "interaction evaluation");
  return std::visit(
      Overloaded{
          [](const ZeroTerm&) { return 0.0; },
          [&](const DiagonalTerm& t) {
            const int n = t.v.dim();
            double total = 0.0;
            for (int i = 0; i < n; ++i) {
              const double xi2 = x[i] * x[i];
              double row = 0.0;
              for (int j = 0; j < n; ++j) row += t.v(i, j) * x[j] * x[j];
              total += xi2 * row;
            }
            return total / 8.0;
          },
          [&](const GeneralTerm& t) { return t.w.eval(x); },
          [&](const ScaledTerm& t) { return t.factor == 0.0 ? 0.0 : t.factor * t.inner(x); },
          [&](const ComposedTerm& t) {
            const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
            const Eigen::VectorXd y = t.map.matrix() * xv;
            return t.inner.eval(y);
          },
          [&](const ShiftTerm& t) {
            const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
            return 0.5 * xv.dot(t.d.matrix() * xv) + t.inner(x);
          },
      },
      node_->term);
}

const SymMatrix& Interaction::coupling() const {
  if (const auto* t = std::get_if<DiagonalTerm>(&node_->term)) return t->v;
  wrong_kind("diagonal quartic coupling");
}

const QuarticTensor& Interaction::tensor() const {
  if (const auto* t = std::get_if<GeneralTerm>(&node_->term)) return t->w;
  wrong_kind("general quartic tensor");
}

double Interaction::factor() const {
  if (const auto* t = std::get_if<ScaledTerm>(&node_->term)) return t->factor;
  wrong_kind("scale factor");
}

const Interaction& Interaction::inner() const {
  if (const auto* t = std::get_if<ScaledTerm>(&node_->term)) return t->inner;
  if (const auto* t = std::get_if<ComposedTerm>(&node_->term)) return t->inner;
  if (const auto* t = std::get_if<ShiftTerm>(&node_->term)) return t->inner;
  wrong_kind("inner interaction");
}

const LinearMap& Interaction::map() const {
  if (const auto* t = std::get_if<ComposedTerm>(&node_->term)) return t->map;
  wrong_kind("linear map");
}

const SymMatrix& Interaction::shift() const {
  if (const auto* t = std::get_if<ShiftTerm>(&node_->term)) return t->d;
  wrong_kind("quadratic shift");
}

bool Interaction::is_diagonal_quartic_family() const {
  switch (kind()) {
    case InteractionKind::DiagonalQuartic: return true;
    case InteractionKind::Scaled: return inner().is_diagonal_quartic_family();
    default: return false;
  }
}

SymMatrix Interaction::effective_coupling() const {
  switch (kind()) {
    case InteractionKind::DiagonalQuartic: return coupling();
    case InteractionKind::Scaled: return factor() * inner().effective_coupling();
    default:
      throw Error(ErrorKind::UnsupportedInteraction,
                  "bold diagrams need a (scaled) diagonal quartic interaction");
  }
}

QuarticTensor Interaction::materialize() const {
  const int n = dim();
  const std::size_t size = static_cast<std::size_t>(n) * n * n * n;
  auto at = [n](int i, int j, int k, int l) {
    return ((static_cast<std::size_t>(i) * n + j) * n + k) * n + l;
  };
  return std::visit(
      Overloaded{
          [&](const ZeroTerm&) { return QuarticTensor(n, std::vector<double>(size, 0.0)); },
          [&](const DiagonalTerm& t) {
            // (1/8) v_ac x_a^2 x_c^2 spread over the three pairings of four indices
            std::vector<double> w(size, 0.0);
            for (int a = 0; a < n; ++a)
              for (int b = 0; b < n; ++b) {
                w[at(a, a, b, b)] += t.v(a, b) / 24.0;
                w[at(a, b, a, b)] += t.v(a, b) / 24.0;
                w[at(a, b, b, a)] += t.v(a, b) / 24.0;
              }
            return QuarticTensor(n, std::move(w));
          },
          [&](const GeneralTerm& t) { return t.w; },
          [&](const ScaledTerm& t) {
            std::vector<double> w = t.inner.materialize().data();
            for (double& v : w) v *= t.factor;
            return QuarticTensor(n, std::move(w));
          },
          [&](const ComposedTerm& t) {
            // contract each index of the inner tensor with T in turn
            std::vector<double> w = t.inner.materialize().data();
            const Eigen::MatrixXd& m = t.map.matrix();
            for (int mode = 0; mode < 4; ++mode) {
              std::vector<double> next(size, 0.0);
              for (std::size_t p = 0; p < size; ++p) {
                std::array<int, 4> idx{};
                std::size_t q = p;
                for (int s = 3; s >= 0; --s) {
                  idx[s] = static_cast<int>(q % n);
                  q /= n;
                }
                const int out = idx[mode];
                for (int r = 0; r < n; ++r) {
                  idx[mode] = r;
                  next[p] += w[at(idx[0], idx[1], idx[2], idx[3])] * m(r, out);
                }
              }
              w = std::move(next);
            }
            return QuarticTensor(n, std::move(w));
          },
          [&](const ShiftTerm&) -> QuarticTensor {
            throw Error(ErrorKind::UnsupportedInteraction,
                        "quadratic shift is not a homogeneous quartic form");
          },
      },
      node_->term);
}

// ---------------------------------------------------------------- compose / restrict

Interaction compose(const Interaction& u, const LinearMap& t) {
  return Interaction::composed(u, t);
}

Interaction restrict(const Interaction& u, int p) {
  const int n = u.dim();
  if (p < 1 || p > n) {
    throw Error(ErrorKind::DimensionMismatch,
                "restriction to p = " + std::to_string(p) + " of a " + std::to_string(n) +
                    "-dimensional interaction");
  }
  if (p == n) return u;
  switch (u.kind()) {
    case InteractionKind::Zero: return Interaction::zero(p);
    case InteractionKind::DiagonalQuartic:
      return Interaction::diagonal_quartic(SymMatrix(u.coupling().matrix().topLeftCorner(p, p)));
    case InteractionKind::Scaled: return Interaction::scaled(u.factor(), restrict(u.inner(), p));
    case InteractionKind::QuadraticShift:
      return Interaction::quadratic_shift(SymMatrix(u.shift().matrix().topLeftCorner(p, p)),
                                          restrict(u.inner(), p));
    case InteractionKind::GeneralQuartic:
    case InteractionKind::Composed: {
      const QuarticTensor w = u.materialize();
      std::vector<double> sub;
      sub.reserve(static_cast<std::size_t>(p) * p * p * p);
      for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
          for (int k = 0; k < p; ++k)
            for (int l = 0; l < p; ++l) sub.push_back(w(i, j, k, l));
      return Interaction::general_quartic(QuarticTensor(p, std::move(sub)));
    }
  }
  throw Error(ErrorKind::UnsupportedInteraction, "unknown interaction kind");
}

// ---------------------------------------------------------------- growth

namespace {

double radical_inverse(std::uint64_t index, int base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                           59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131};

// Unit directions: the coordinate axes followed by Halton points pushed
// through the normal quantile and normalized.
std::vector<Eigen::VectorXd> sphere_directions(int n, int count) {
  std::vector<Eigen::VectorXd> dirs;
  dirs.reserve(count);
  for (int i = 0; i < n && static_cast<int>(dirs.size()) < count; ++i) {
    dirs.push_back(Eigen::VectorXd::Unit(n, i));
  }
  const boost::math::normal normal;
  std::uint64_t index = 1;
  while (static_cast<int>(dirs.size()) < count) {
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) {
      const int base = kPrimes[i % std::size(kPrimes)];
      double u = radical_inverse(index + static_cast<std::uint64_t>(i / std::size(kPrimes)) * 7919,
                                 base);
      u = std::clamp(u, 1e-12, 1.0 - 1e-12);
      d(i) = boost::math::quantile(normal, u);
    }
    ++index;
    const double norm = d.norm();
    if (norm > 1e-12) dirs.push_back(d / norm);
  }
  return dirs;
}

GrowthReport screen_quartic(const QuarticTensor& w) {
  GrowthReport report;
  report.screened = true;
  if (std::all_of(w.data().begin(), w.data().end(), [](double v) { return v == 0.0; })) {
    report.cls = GrowthClass::ZeroInteraction;
    report.screened = false;
    return report;
  }
  double lo = std::numeric_limits<double>::infinity();
  for (const Eigen::VectorXd& d : sphere_directions(w.dim(), kGrowthDirections)) {
    lo = std::min(lo, w.eval(std::span<const double>(d.data(), static_cast<std::size_t>(d.size()))));
  }
  report.min_on_sphere = lo;
  report.cls = lo > 0.0 ? GrowthClass::SuperQuadratic : GrowthClass::Unverified;
  return report;
}

}  // namespace

GrowthReport validate_growth(const Interaction& u) {
  switch (u.kind()) {
    case InteractionKind::Zero: return {GrowthClass::ZeroInteraction, false, 0.0};
    case InteractionKind::DiagonalQuartic: {
      const SymMatrix& v = u.coupling();
      if (v.max_abs() == 0.0) return {GrowthClass::ZeroInteraction, false, 0.0};
      bool ok = true;
      for (int i = 0; i < v.dim(); ++i) {
        ok = ok && v(i, i) > 0.0;
        for (int j = 0; j < v.dim(); ++j) ok = ok && v(i, j) >= 0.0;
      }
      return {ok ? GrowthClass::SuperQuadratic : GrowthClass::Unverified, false, 0.0};
    }
    case InteractionKind::GeneralQuartic: return screen_quartic(u.tensor());
    case InteractionKind::Scaled: {
      if (u.factor() == 0.0) return {GrowthClass::ZeroInteraction, false, 0.0};
      return validate_growth(u.inner());
    }
    case InteractionKind::Composed: {
      // an invertible change of variables preserves positivity on the sphere
      GrowthReport inner = validate_growth(u.inner());
      if (inner.cls == GrowthClass::Unverified) return screen_quartic(u.materialize());
      return inner;
    }
    case InteractionKind::QuadraticShift: {
      GrowthReport inner = validate_growth(u.inner());
      if (inner.cls != GrowthClass::SuperQuadratic) inner.cls = GrowthClass::Unverified;
      return inner;
    }
  }
  return {};
}

}  // namespace lwf
