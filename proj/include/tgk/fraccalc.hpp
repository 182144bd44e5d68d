#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "tgk/errors.hpp"
#include "tgk/parallel.hpp"
#include "tgk/specfun.hpp"

namespace tgk {

struct Grid1D {
  double x_max = 1.0;
  int num_points = 3;

  Grid1D() = default;
  Grid1D(double x_max_, int num_points_) : x_max(x_max_), num_points(num_points_) {
    if (!(x_max > 0.0) || !std::isfinite(x_max)) throw DomainError("Grid1D: x_max must be positive");
    if (num_points < 3) throw DomainError("Grid1D: at least 3 points are required");
  }

  double h() const { return x_max / (num_points - 1); }
  double x(int i) const { return i == num_points - 1 ? x_max : i * h(); }
};

struct SampledFunction {
  Grid1D grid;
  std::vector<double> values;

  SampledFunction() = default;
  SampledFunction(Grid1D g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (static_cast<int>(values.size()) != grid.num_points) {
      throw DomainError("SampledFunction: value count does not match the grid");
    }
  }

  template <class F>
  static SampledFunction sample(const Grid1D& g, F&& f) {
    std::vector<double> v(g.num_points);
    for (int i = 0; i < g.num_points; ++i) v[i] = f(g.x(i));
    return {g, std::move(v)};
  }

  int size() const { return grid.num_points; }
  double operator[](int i) const { return values[i]; }
};

namespace detail {

inline void check_order(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("Caputo order must lie in (0, 1]");
}

// b_j = (j+1)^{1-α} - j^{1-α}; for α = 1 only b_0 = 1 survives.
inline std::vector<double> l1_weights(int n, double alpha) {
  std::vector<double> b(n, 0.0);
  if (alpha == 1.0) {
    if (n > 0) b[0] = 1.0;
    return b;
  }
  const double e = 1.0 - alpha;
  double prev = 0.0;
  for (int j = 0; j < n; ++j) {
    const double next = std::pow(j + 1.0, e);
    b[j] = next - prev;
    prev = next;
  }
  return b;
}

// Unscaled L1 sums S_i = Σ_{j<i} b_j (f_{i-j} - f_{i-j-1}), S_0 = 0.
inline std::vector<double> l1_sums(std::span<const double> f, std::span<const double> b) {
  const int n = static_cast<int>(f.size());
  std::vector<double> diff(n, 0.0), out(n, 0.0);
  for (int i = 1; i < n; ++i) diff[i] = f[i] - f[i - 1];
  parallel_for(n, [&](int i) {
    double s = 0.0;
    for (int j = 0; j < i; ++j) s += b[j] * diff[i - j];
    out[i] = s;
  }, 64);
  return out;
}

}  // namespace detail

// Exponents σ ∈ (0, 2), σ ≠ 1, of the fractional powers x^{k(α+β)} present
// in the expansion of KS(c·x^{α+β}); these are the non-smooth components
// that limit the accuracy of the plain L1 scheme near x = 0.
inline std::vector<double> ks_mode_exponents(double alpha, double beta) {
  std::vector<double> out;
  const double step = alpha + beta;
  if (!(step > 0.0)) return out;
  for (int k = 1; k * step < 2.0 - 1e-12 && k < 64; ++k) {
    const double s = k * step;
    if (std::fabs(s - std::round(s)) > 1e-12) out.push_back(s);
  }
  return out;
}

// L1 approximation of the Caputo derivative of order α on a uniform grid.
// With an empty exponent list this is the classical scheme, with value 0
// at x_0. A non-empty list adds starting weights on nodes 1..K that make
// the scheme exact on span{1, x, x^σ}, and the node-0 value is then the
// limit implied by the fitted x^σ components (Γ(1+α)·c for σ = α). The
// linear power joins the fit so that it is not absorbed by the x^σ terms.
inline SampledFunction caputo_l1(const SampledFunction& f, double alpha, std::span<const double> exponents = {}) {
  detail::check_order(alpha);
  const int n = f.size();
  const double h = f.grid.h();
  const double scale = std::pow(h, -alpha) / std::tgamma(2.0 - alpha);
  const std::vector<double> b = detail::l1_weights(n, alpha);
  std::vector<double> out = detail::l1_sums(f.values, b);
  for (double& v : out) v *= scale;

  if (exponents.empty()) return {f.grid, std::move(out)};
  std::vector<double> basis(exponents.begin(), exponents.end());
  if (std::none_of(basis.begin(), basis.end(), [](double s) { return std::fabs(s - 1.0) < 1e-12; })) {
    basis.push_back(1.0);
  }
  const int K = static_cast<int>(basis.size());
  if (K >= n) throw ResolutionError("caputo_l1: more correction exponents than grid nodes");

  Eigen::MatrixXd B(K, K);
  for (int r = 0; r < K; ++r) {
    for (int k = 0; k < K; ++k) B(r, k) = std::pow(k + 1.0, basis[r]);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_t(B.transpose());

  // R(r, i): exact minus discrete derivative of y^σ_r at integer node i.
  Eigen::MatrixXd R(K, n);
  for (int r = 0; r < K; ++r) {
    const double s = basis[r];
    std::vector<double> mono(n);
    for (int i = 0; i < n; ++i) mono[i] = std::pow(static_cast<double>(i), s);
    const std::vector<double> disc = detail::l1_sums(mono, b);
    const double exact_coef = std::exp(log_gamma(1.0 + s) - log_gamma(1.0 + s - alpha)) * gamma_sign(1.0 + s - alpha);
    for (int i = 0; i < n; ++i) {
      const double exact = i == 0 ? 0.0 : exact_coef * std::pow(static_cast<double>(i), s - alpha);
      R(r, i) = exact - disc[i] / std::tgamma(2.0 - alpha);
    }
  }
  const Eigen::MatrixXd W = qr.solve(R);

  Eigen::VectorXd d(K);
  for (int k = 0; k < K; ++k) d(k) = f.values[k + 1] - f.values[0];
  const double hs = std::pow(h, -alpha);
  for (int i = 1; i < n; ++i) {
    double c = 0.0;
    for (int k = 0; k < K; ++k) c += W(k, i) * d(k);
    out[i] += hs * c;
  }

  const Eigen::VectorXd fitted = qr_t.solve(d);
  double g0 = 0.0;
  for (int r = 0; r < K; ++r) {
    if (std::fabs(basis[r] - alpha) < 1e-12) g0 += fitted(r) * hs * std::tgamma(1.0 + alpha);
  }
  out[0] = g0;
  return {f.grid, std::move(out)};
}

// Sequential operator D^{2α} = ∂^α ∂^α as two applications of caputo_l1.
// Starting corrections for the second pass use the shifted exponents σ - α
// together with 1 - α.
inline SampledFunction sequential_d2alpha(const SampledFunction& f, double alpha,
                                          std::span<const double> exponents = {}) {
  const SampledFunction first = caputo_l1(f, alpha, exponents);
  std::vector<double> shifted;
  if (exponents.empty()) return caputo_l1(first, alpha);
  auto keep = [&](double t) {
    const bool listed = std::any_of(shifted.begin(), shifted.end(), [&](double u) { return std::fabs(u - t) < 1e-12; });
    if (!listed && t > 1e-12 && t < 2.0 && std::fabs(t - 1.0) > 1e-12) shifted.push_back(t);
  };
  for (double s : exponents) keep(s - alpha);
  // Image of the linear component under the first pass.
  keep(1.0 - alpha);
  return caputo_l1(first, alpha, shifted);
}

struct ResidualOptions {
  // Nodes with x < x_cut are excluded; a negative value means 4h.
  double x_cut = -1.0;
  // Nodes with x > x_end are excluded; a negative value means the grid end.
  double x_end = -1.0;
  std::vector<double> exponents;
};

struct ResidualNorms {
  double max_residual = 0.0;
  double l2_residual = 0.0;
  int nodes = 0;
};

// Residual of D^{2α}f - λ x^{2β} f on the nodes inside [x_cut, x_end].
inline ResidualNorms residual_sequential(const SampledFunction& f, double alpha, double beta, double lam,
                                         const ResidualOptions& opt = {}) {
  if (!(beta > -alpha)) throw DomainError("residual_sequential: beta must exceed -alpha");
  if (!(lam >= 0.0)) throw DomainError("residual_sequential: lambda must be nonnegative");
  const SampledFunction d = sequential_d2alpha(f, alpha, opt.exponents);
  const double h = f.grid.h();
  const double lo = opt.x_cut < 0.0 ? 4.0 * h : opt.x_cut;
  const double hi = opt.x_end < 0.0 ? f.grid.x_max : opt.x_end;
  ResidualNorms out;
  double sq = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    const double x = f.grid.x(i);
    if (x < lo - 1e-12 * h || x > hi + 1e-12 * h) continue;
    const double weight = x == 0.0 ? (beta == 0.0 ? 1.0 : 0.0) : std::exp(2.0 * beta * std::log(x));
    const double r = d[i] - lam * weight * f[i];
    out.max_residual = std::max(out.max_residual, std::fabs(r));
    sq += r * r;
    ++out.nodes;
  }
  out.l2_residual = std::sqrt(sq * h);
  return out;
}

// Least-squares slope of log(error) against log(h).
inline double empirical_order(std::span<const double> hs, std::span<const double> errors) {
  const int n = static_cast<int>(hs.size());
  if (n < 2 || errors.size() != hs.size()) throw DomainError("empirical_order: need at least two matching samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(hs[i]);
    const double y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace tgk
