#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tgk/errors.hpp"
#include "tgk/quadrature.hpp"
#include "tgk/specfun.hpp"

namespace tgk {

enum class OperatorKind { dirichlet_interval, neumann_interval, star_graph, involution, jacobi_fractional };

inline std::string_view to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::dirichlet_interval: return "dirichlet_interval";
    case OperatorKind::neumann_interval: return "neumann_interval";
    case OperatorKind::star_graph: return "star_graph";
    case OperatorKind::involution: return "involution";
    case OperatorKind::jacobi_fractional: return "jacobi_fractional";
  }
  return "unknown";
}

// A point of the y-domain. `edge` is used only by graph operators.
struct DomainPoint {
  int edge = 0;
  double y = 0.0;
};

struct OperatorQuadrature {
  std::vector<DomainPoint> points;
  std::vector<double> weights;
};

namespace detail {

// Jacobi polynomial P_n^{(a,b)}(y) by the three-term recurrence.
inline double jacobi_polynomial(int n, double a, double b, double y) {
  if (n == 0) return 1.0;
  double p0 = 1.0;
  double p1 = (a + 1.0) + 0.5 * (a + b + 2.0) * (y - 1.0);
  for (int k = 2; k <= n; ++k) {
    const double s = 2.0 * k + a + b;
    const double c1 = 2.0 * k * (k + a + b) * (s - 2.0);
    const double c2 = (s - 1.0) * (s * (s - 2.0) * y + a * a - b * b);
    const double c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
    const double p2 = (c2 * p1 - c3 * p0) / c1;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

}  // namespace detail

// Eigenpairs of a self-adjoint nonnegative operator with discrete spectrum.
// Modes are labelled by k >= first_mode(); immutable after construction.
class SpectralOperator {
 public:
  static SpectralOperator dirichlet_interval(double length) {
    if (!(length > 0.0) || !std::isfinite(length)) throw InvalidParams("dirichlet_interval: length must be positive");
    return SpectralOperator(OperatorKind::dirichlet_interval, length, 1);
  }

  static SpectralOperator neumann_interval(double length) {
    if (!(length > 0.0) || !std::isfinite(length)) throw InvalidParams("neumann_interval: length must be positive");
    return SpectralOperator(OperatorKind::neumann_interval, length, 0);
  }

  static SpectralOperator star_graph(int edges) {
    if (edges < 2) throw InvalidParams("star_graph: at least 2 edges are required");
    SpectralOperator op(OperatorKind::star_graph, std::numbers::pi, 1);
    op.edges_ = edges;
    return op;
  }

  static SpectralOperator involution(double epsilon) {
    if (!(std::fabs(epsilon) < 1.0)) throw InvalidParams("involution: epsilon must lie in (-1, 1)");
    SpectralOperator op(OperatorKind::involution, 2.0 * std::numbers::pi, 1);
    op.param_ = epsilon;
    return op;
  }

  static SpectralOperator jacobi_fractional(double mu) {
    if (!(mu > 0.0 && mu < 1.0)) throw InvalidParams("jacobi_fractional: mu must lie in (0, 1)");
    SpectralOperator op(OperatorKind::jacobi_fractional, 2.0, 1);
    op.param_ = mu;
    op.jacobi_norms_ = std::make_shared<const std::vector<double>>(jacobi_normalizations(mu, kJacobiCached));
    return op;
  }

  OperatorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return to_string(kind_); }
  int first_mode() const noexcept { return first_mode_; }
  bool has_zero_eigenvalue() const noexcept { return kind_ == OperatorKind::neumann_interval; }
  int edge_count() const noexcept { return edges_; }
  double length() const noexcept { return length_; }
  double parameter() const noexcept { return param_; }

  // Left and right ends of the y-interval (of every edge for graphs).
  double y_min() const noexcept {
    switch (kind_) {
      case OperatorKind::involution: return -std::numbers::pi;
      case OperatorKind::jacobi_fractional: return -1.0;
      default: return 0.0;
    }
  }
  double y_max() const noexcept { return y_min() + length_; }

  bool contains(const DomainPoint& p) const noexcept {
    return p.edge >= 0 && p.edge < edges_ && p.y >= y_min() && p.y <= y_max();
  }

  // Square root of λ_k, the quantity entering the mode factor.
  double sqrt_eigenvalue(int k) const {
    check_mode(k);
    switch (kind_) {
      case OperatorKind::dirichlet_interval:
      case OperatorKind::neumann_interval: return k * std::numbers::pi / length_;
      case OperatorKind::star_graph: return k - 0.5;
      case OperatorKind::involution: return (1.0 + ((k % 2 == 0) ? param_ : -param_)) * k * std::numbers::pi;
      case OperatorKind::jacobi_fractional: return std::exp(0.5 * jacobi_log_eigenvalue(k));
    }
    return 0.0;
  }

  double eigenvalue(int k) const {
    if (kind_ == OperatorKind::jacobi_fractional) {
      check_mode(k);
      return std::exp(jacobi_log_eigenvalue(k));
    }
    const double s = sqrt_eigenvalue(k);
    return s * s;
  }

  // Orthonormal eigenfunction e_k at p under the operator's inner product.
  double eigenfunction(int k, const DomainPoint& p) const {
    check_mode(k);
    if (!contains(p)) throw DomainError("eigenfunction: point outside the operator domain");
    const double y = p.y;
    switch (kind_) {
      case OperatorKind::dirichlet_interval:
        return std::sqrt(2.0 / length_) * std::sin(k * std::numbers::pi * y / length_);
      case OperatorKind::neumann_interval:
        if (k == 0) return 1.0 / std::sqrt(length_);
        return std::sqrt(2.0 / length_) * std::cos(k * std::numbers::pi * y / length_);
      case OperatorKind::star_graph:
        return std::sqrt(2.0 / (edges_ * std::numbers::pi)) * std::sin((k - 0.5) * y);
      case OperatorKind::involution:
        return std::sin(0.5 * k * (y + std::numbers::pi)) / std::sqrt(std::numbers::pi);
      case OperatorKind::jacobi_fractional: {
        const double mu = param_;
        const double base = y <= -1.0 ? 0.0 : std::pow(1.0 + y, mu);
        return jacobi_normalization(k) * base * detail::jacobi_polynomial(k - 1, -mu, mu, y);
      }
    }
    return 0.0;
  }

  // Weighted inner-product weight w(y): ⟨f, g⟩ = Σ_edges ∫ f g w dy.
  double inner_product_weight(double y) const {
    if (kind_ != OperatorKind::jacobi_fractional) return 1.0;
    return std::pow(1.0 - y * y, -param_);
  }

  // Quadrature for ⟨f, g⟩ that resolves modes up to `modes`. Interval and
  // graph kinds use composite Gauss-Legendre (32 nodes per panel); the
  // Jacobi kind uses Gauss-Jacobi nodes absorbing the endpoint singularity.
  OperatorQuadrature quadrature(int modes) const {
    OperatorQuadrature q;
    if (kind_ == OperatorKind::jacobi_fractional) {
      const double mu = param_;
      const QuadratureRule gj = gauss_jacobi(std::max(64, 2 * modes + 16), -mu, mu);
      for (std::size_t i = 0; i < gj.nodes.size(); ++i) {
        q.points.push_back({0, gj.nodes[i]});
        q.weights.push_back(gj.weights[i] * std::pow(1.0 + gj.nodes[i], -2.0 * mu));
      }
      return q;
    }
    const int panels = std::max(4, (modes + 3) / 4);
    const QuadratureRule rule = composite_gauss_legendre(y_min(), y_max(), panels, 32);
    for (int e = 0; e < edges_; ++e) {
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        q.points.push_back({e, rule.nodes[i]});
        q.weights.push_back(rule.weights[i]);
      }
    }
    return q;
  }

  // Number of full oscillations of e_k across one edge.
  double oscillations(int k) const {
    switch (kind_) {
      case OperatorKind::dirichlet_interval:
      case OperatorKind::neumann_interval:
      case OperatorKind::involution: return 0.5 * k;
      case OperatorKind::star_graph: return 0.5 * (k - 0.5);
      case OperatorKind::jacobi_fractional: return 0.5 * (k - 1);
    }
    return 0.0;
  }

 private:
  SpectralOperator(OperatorKind kind, double length, int first_mode)
      : kind_(kind), length_(length), first_mode_(first_mode) {}

  void check_mode(int k) const {
    if (k < first_mode_) throw DomainError("mode index " + std::to_string(k) + " below the first mode of " +
                                           std::string(name()));
  }

  double jacobi_log_eigenvalue(int k) const { return log_gamma(k + param_) - log_gamma(k - param_); }

  static constexpr int kJacobiCached = 256;

  // 1/sqrt(h_n) for n < count, h_n = ∫ (P_n^{(-μ,μ)})² (1-y)^{-μ}(1+y)^{μ} dy
  // by a Gauss-Jacobi rule that is exact for these degrees.
  static std::vector<double> jacobi_normalizations(double mu, int count) {
    const QuadratureRule gj = gauss_jacobi(count + 2, -mu, mu);
    std::vector<double> out(count);
    for (int n = 0; n < count; ++n) {
      double s = 0.0;
      for (std::size_t i = 0; i < gj.nodes.size(); ++i) {
        const double p = detail::jacobi_polynomial(n, -mu, mu, gj.nodes[i]);
        s += gj.weights[i] * p * p;
      }
      out[n] = 1.0 / std::sqrt(s);
    }
    return out;
  }

  double jacobi_normalization(int k) const {
    const int n = k - 1;
    if (n < kJacobiCached) return (*jacobi_norms_)[n];
    return jacobi_normalizations(param_, n + 1)[n];
  }

  OperatorKind kind_;
  double length_;
  int first_mode_;
  int edges_ = 1;
  double param_ = 0.0;
  std::shared_ptr<const std::vector<double>> jacobi_norms_;
};

// Named-kind construction for configuration files.
inline SpectralOperator make_operator(std::string_view kind, const std::map<std::string, double>& params) {
  auto get = [&](const char* key, double fallback) {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  if (kind == "dirichlet_interval") return SpectralOperator::dirichlet_interval(get("length", 1.0));
  if (kind == "neumann_interval") return SpectralOperator::neumann_interval(get("length", 1.0));
  if (kind == "star_graph") {
    const double d = get("edges", 3.0);
    if (d != std::floor(d)) throw InvalidParams("star_graph: edge count must be an integer");
    return SpectralOperator::star_graph(static_cast<int>(d));
  }
  if (kind == "involution") return SpectralOperator::involution(get("epsilon", 0.0));
  if (kind == "jacobi_fractional") return SpectralOperator::jacobi_fractional(get("mu", 0.5));
  throw InvalidParams("unknown operator kind '" + std::string(kind) + "'");
}

// Coefficients φ_k for modes k = first_mode .. first_mode + size - 1.
struct CoefficientVector {
  int first_mode = 1;
  std::vector<double> values;
  // Filled by projections: ‖φ‖² and |Σ|φ_k|² - ‖φ‖²|; NaN otherwise.
  double data_norm_sq = std::numeric_limits<double>::quiet_NaN();
  double parseval_defect = std::numeric_limits<double>::quiet_NaN();

  int size() const noexcept { return static_cast<int>(values.size()); }
  int end_mode() const noexcept { return first_mode + size(); }

  double coefficient(int k) const {
    const int i = k - first_mode;
    return (i >= 0 && i < size()) ? values[i] : 0.0;
  }

  double l2_norm() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return std::sqrt(s);
  }

  // (Σ λ_k² |φ_k|²)^{1/2}
  double hl_norm(const SpectralOperator& op) const {
    double s = 0.0;
    for (int i = 0; i < size(); ++i) {
      const double l = op.eigenvalue(first_mode + i);
      s += l * l * values[i] * values[i];
    }
    return std::sqrt(s);
  }
};

using BoundaryFunction = std::function<double(const DomainPoint&)>;

// φ_k = ⟨φ, e_k⟩ for the first K modes by the operator quadrature.
inline CoefficientVector project_boundary_data(const BoundaryFunction& phi, const SpectralOperator& op, int K) {
  if (K < 1) throw DomainError("project_boundary_data: K must be positive");
  const OperatorQuadrature q = op.quadrature(K);
  const int per_edge = static_cast<int>(q.points.size()) / op.edge_count();
  const double osc = op.oscillations(op.first_mode() + K - 1);
  // Gauss-Jacobi nodes are exact on the polynomial factor up to degree 2n-1;
  // composite rules need 10 nodes per oscillation.
  const bool resolved = op.kind() == OperatorKind::jacobi_fractional ? 2 * per_edge - 1 >= 2 * K + 8
                                                                     : !(osc > 0.0 && per_edge / osc < 10.0);
  if (!resolved) {
    throw ResolutionError("project_boundary_data: quadrature does not resolve the highest mode");
  }
  std::vector<double> f(q.points.size());
  double norm_sq = 0.0;
  for (std::size_t i = 0; i < q.points.size(); ++i) {
    f[i] = phi(q.points[i]);
    norm_sq += q.weights[i] * f[i] * f[i];
  }
  CoefficientVector c;
  c.first_mode = op.first_mode();
  c.values.resize(K);
  double energy = 0.0;
  for (int j = 0; j < K; ++j) {
    const int k = op.first_mode() + j;
    double s = 0.0;
    for (std::size_t i = 0; i < q.points.size(); ++i) s += q.weights[i] * f[i] * op.eigenfunction(k, q.points[i]);
    c.values[j] = s;
    energy += s * s;
  }
  c.data_norm_sq = norm_sq;
  c.parseval_defect = std::fabs(energy - norm_sq);
  return c;
}

// Projection of data sampled on a uniform grid of one interval (all edges
// share the samples for graph kinds). Uses Simpson's rule for an odd sample
// count and the trapezoid rule otherwise.
inline CoefficientVector project_sampled_data(std::span<const double> samples, const SpectralOperator& op, int K) {
  if (op.kind() == OperatorKind::jacobi_fractional) {
    throw DomainError("project_sampled_data: the Jacobi kind needs a callable boundary function");
  }
  const int n = static_cast<int>(samples.size());
  if (n < 3) throw ResolutionError("project_sampled_data: at least 3 samples are required");
  if (K < 1) throw DomainError("project_sampled_data: K must be positive");
  const double osc = op.oscillations(op.first_mode() + K - 1);
  if (osc > 0.0 && (n - 1) / osc < 10.0) {
    throw ResolutionError("project_sampled_data: fewer than 10 samples per oscillation of the highest mode");
  }
  const double dy = op.length() / (n - 1);
  std::vector<double> w(n, dy);
  if (n % 2 == 1) {
    for (int i = 0; i < n; ++i) w[i] = dy / 3.0 * ((i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0));
  } else {
    w.front() = w.back() = 0.5 * dy;
  }
  CoefficientVector c;
  c.first_mode = op.first_mode();
  c.values.resize(K);
  double norm_sq = 0.0;
  for (int i = 0; i < n; ++i) norm_sq += w[i] * samples[i] * samples[i];
  norm_sq *= op.edge_count();
  double energy = 0.0;
  for (int j = 0; j < K; ++j) {
    const int k = op.first_mode() + j;
    double s = 0.0;
    for (int e = 0; e < op.edge_count(); ++e) {
      for (int i = 0; i < n; ++i) {
        const double y = (i == n - 1) ? op.y_max() : op.y_min() + i * dy;
        s += w[i] * samples[i] * op.eigenfunction(k, {e, y});
      }
    }
    c.values[j] = s;
    energy += s * s;
  }
  c.data_norm_sq = norm_sq;
  c.parseval_defect = std::fabs(energy - norm_sq);
  return c;
}

enum class SymbolKind { laplacian, fractional_laplacian, polynomial };

struct Monomial {
  std::array<int, 2> powers{0, 0};
  double coefficient = 0.0;
};

// Nonnegative Fourier symbol a(ξ) on R^N, N ∈ {1, 2}.
class SymbolSpec {
 public:
  static SymbolSpec laplacian(int dimension) { return SymbolSpec(SymbolKind::laplacian, dimension, 1.0, {}); }

  static SymbolSpec fractional_laplacian(int dimension, double s) {
    if (!(s > 0.0 && s < 1.0)) throw InvalidParams("fractional_laplacian: s must lie in (0, 1)");
    return SymbolSpec(SymbolKind::fractional_laplacian, dimension, s, {});
  }

  static SymbolSpec polynomial(int dimension, std::vector<Monomial> terms) {
    for (const auto& t : terms) {
      if (t.powers[0] < 0 || t.powers[1] < 0) throw InvalidParams("polynomial symbol: negative power");
      if (dimension == 1 && t.powers[1] != 0) throw InvalidParams("polynomial symbol: ξ_2 used with N = 1");
    }
    return SymbolSpec(SymbolKind::polynomial, dimension, 1.0, std::move(terms));
  }

  SymbolKind kind() const noexcept { return kind_; }
  int dimension() const noexcept { return dimension_; }
  double order() const noexcept { return s_; }
  const std::vector<Monomial>& terms() const noexcept { return terms_; }

  double operator()(std::span<const double> xi) const {
    if (static_cast<int>(xi.size()) != dimension_) throw DomainError("symbol: frequency dimension mismatch");
    double r2 = 0.0;
    for (double v : xi) r2 += v * v;
    double a = 0.0;
    switch (kind_) {
      case SymbolKind::laplacian: a = r2; break;
      case SymbolKind::fractional_laplacian: a = r2 == 0.0 ? 0.0 : std::pow(r2, s_); break;
      case SymbolKind::polynomial:
        for (const auto& t : terms_) {
          double m = t.coefficient;
          for (int d = 0; d < dimension_; ++d) m *= std::pow(xi[d], t.powers[d]);
          a += m;
        }
        break;
    }
    if (!(a >= 0.0)) throw NegativeSymbolError("symbol evaluated to a negative value");
    return a;
  }

  double operator()(double xi) const {
    const double v[1] = {xi};
    return (*this)(std::span<const double>(v, 1));
  }

 private:
  SymbolSpec(SymbolKind kind, int dimension, double s, std::vector<Monomial> terms)
      : kind_(kind), dimension_(dimension), s_(s), terms_(std::move(terms)) {
    if (dimension != 1 && dimension != 2) throw InvalidParams("symbol: dimension must be 1 or 2");
  }

  SymbolKind kind_;
  int dimension_;
  double s_;
  std::vector<Monomial> terms_;
};

inline SymbolSpec make_symbol(std::string_view kind, int dimension, const std::map<std::string, double>& params,
                              std::vector<Monomial> terms = {}) {
  if (kind == "laplacian") return SymbolSpec::laplacian(dimension);
  if (kind == "fractional_laplacian") {
    const auto it = params.find("s");
    if (it == params.end()) throw InvalidParams("fractional_laplacian: parameter s is required");
    return SymbolSpec::fractional_laplacian(dimension, it->second);
  }
  if (kind == "polynomial") return SymbolSpec::polynomial(dimension, std::move(terms));
  throw InvalidParams("unknown symbol kind '" + std::string(kind) + "'");
}

}  // namespace tgk
