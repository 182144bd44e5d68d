#pragma once

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "tgk/errors.hpp"
#include "tgk/operators.hpp"
#include "tgk/parallel.hpp"
#include "tgk/quadrature.hpp"
#include "tgk/solver_spectral.hpp"
#include "tgk/specfun.hpp"

namespace tgk {

// Data φ on the periodic box [-L, L)^N with M points per axis,
// y_j = -L + j·2L/M, row-major for N = 2 (first axis outermost).
struct FourierProblem {
  double alpha = 1.0;
  double beta = 0.0;
  SymbolSpec symbol = SymbolSpec::laplacian(1);
  double half_width = 1.0;
  int points = 64;
  std::vector<double> data;
  // The data are zero-padded to pad_factor·M points per axis before
  // transforming, which pushes the periodic images of slowly decaying
  // kernels away from the box.
  int pad_factor = 1;

  int dimension() const { return symbol.dimension(); }
  double spacing() const { return 2.0 * half_width / points; }
  double coordinate(int j) const { return -half_width + j * spacing(); }
  std::size_t grid_size() const { return dimension() == 1 ? points : static_cast<std::size_t>(points) * points; }

  void validate() const {
    if (!(alpha > 0.5 && alpha <= 1.0)) throw DomainError("fourier problem: alpha must lie in (1/2, 1]");
    if (!(beta > -alpha) || !std::isfinite(beta)) throw DomainError("fourier problem: beta must exceed -alpha");
    if (!(half_width > 0.0) || !std::isfinite(half_width)) throw DomainError("fourier problem: L must be positive");
    if (points < 4 || (points & (points - 1)) != 0) throw DomainError("fourier problem: M must be a power of two");
    if (pad_factor < 1 || (pad_factor & (pad_factor - 1)) != 0) {
      throw DomainError("fourier problem: pad factor must be a power of two");
    }
    if (data.size() != grid_size()) throw DomainError("fourier problem: data size does not match the grid");
  }

  template <class F>
  static std::vector<double> sample(int dimension, double half_width, int points, F&& f) {
    const double h = 2.0 * half_width / points;
    std::vector<double> v;
    if (dimension == 1) {
      v.resize(points);
      for (int j = 0; j < points; ++j) v[j] = f(-half_width + j * h, 0.0);
    } else {
      v.resize(static_cast<std::size_t>(points) * points);
      for (int a = 0; a < points; ++a) {
        for (int b = 0; b < points; ++b) v[a * points + b] = f(-half_width + a * h, -half_width + b * h);
      }
    }
    return v;
  }
};

enum class MultiplierPath { kilbas_saigo, mittag_leffler };

struct FourierSlice {
  double x = 0.0;
  std::vector<double> field;      // on the M-point grid
  double l2_norm = 0.0;           // grid L² norm of u(x, ·) on the padded box
  double weighted_norm = 0.0;     // (Σ a(ξ)² |û|²)^{1/2}, same scaling
};

struct FourierSolution {
  FourierProblem problem;
  std::vector<std::complex<double>> spectrum;  // unnormalized DFT of padded data
  std::vector<double> symbol_values;           // a(ξ_j) on the padded frequency grid
  std::vector<FourierSlice> slices;
  double data_l2 = 0.0;
  double data_hl = 0.0;
  int skipped_frequencies = 0;
};

namespace detail {

inline double frequency(int j, int n, double h) {
  const int s = j < n / 2 ? j : j - n;
  return 2.0 * std::numbers::pi * s / (n * h);
}

inline void fft_axes(std::vector<std::complex<double>>& v, int n, int dim, bool inverse) {
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> in(n), out(n);
  if (dim == 1) {
    in.assign(v.begin(), v.end());
    inverse ? fft.inv(out, in) : fft.fwd(out, in);
    v = out;
    return;
  }
  for (int a = 0; a < n; ++a) {
    std::copy(v.begin() + static_cast<std::size_t>(a) * n, v.begin() + static_cast<std::size_t>(a + 1) * n, in.begin());
    inverse ? fft.inv(out, in) : fft.fwd(out, in);
    std::copy(out.begin(), out.end(), v.begin() + static_cast<std::size_t>(a) * n);
  }
  for (int b = 0; b < n; ++b) {
    for (int a = 0; a < n; ++a) in[a] = v[static_cast<std::size_t>(a) * n + b];
    inverse ? fft.inv(out, in) : fft.fwd(out, in);
    for (int a = 0; a < n; ++a) v[static_cast<std::size_t>(a) * n + b] = out[a];
  }
}

inline void check_support(const FourierProblem& p) {
  const int M = p.points;
  const int band = std::max(1, M / 64);
  double peak = 0.0, edge = 0.0;
  auto on_edge = [&](int j) { return j < band || j >= M - band; };
  for (std::size_t i = 0; i < p.data.size(); ++i) {
    const double v = std::fabs(p.data[i]);
    peak = std::max(peak, v);
    const bool border = p.dimension() == 1 ? on_edge(static_cast<int>(i))
                                           : (on_edge(static_cast<int>(i) / M) || on_edge(static_cast<int>(i) % M));
    if (border) edge = std::max(edge, v);
  }
  if (edge > 1e-12 * peak) {
    throw BoundarySupportError("fourier problem: data do not decay below 1e-12 of their peak near the box boundary");
  }
}

}  // namespace detail

// Multiplier evaluator. The double path is accepted when its error estimate
// is below abs_tol; otherwise the evaluator's own escalation applies. The
// multiplier lies in (0, 1], so an absolute tolerance is meaningful.
class ModeMultiplier {
 public:
  ModeMultiplier(double alpha, double beta, MultiplierPath path)
      : path_(path), ks_(KSParams::for_mode(alpha, beta)), ml_(alpha, 1.0), power_(alpha + beta) {
    if (path == MultiplierPath::mittag_leffler && beta != 0.0) {
      throw DomainError("the Mittag-Leffler multiplier path requires beta = 0");
    }
  }

  double operator()(double sqrt_symbol, double x, double abs_tol = 1e-14) const {
    if (sqrt_symbol == 0.0 || x == 0.0) return 1.0;
    const double z = -sqrt_symbol * fractional_power(x, power_);
    SeriesOptions quick;
    quick.allow_extended = false;
    const EvalResult r = path_ == MultiplierPath::kilbas_saigo ? ks_.evaluate(z, quick) : ml_.evaluate(z, quick);
    if (r.abs_error_estimate <= abs_tol) return r.value;
    return path_ == MultiplierPath::kilbas_saigo ? ks_(z) : ml_(z);
  }

 private:
  MultiplierPath path_;
  KilbasSaigo ks_;
  MittagLeffler ml_;
  double power_;
};

inline FourierSolution solve_fourier(const FourierProblem& p, std::span<const double> x_slices,
                                     MultiplierPath path = MultiplierPath::kilbas_saigo) {
  p.validate();
  detail::check_support(p);
  for (double x : x_slices) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("solve_fourier: slices must be nonnegative");
  }
  const int N = p.dimension();
  const int M = p.points;
  const int Mp = M * p.pad_factor;
  const int offset = (Mp - M) / 2;
  const double h = p.spacing();
  const std::size_t total = N == 1 ? Mp : static_cast<std::size_t>(Mp) * Mp;

  FourierSolution s;
  s.problem = p;
  s.spectrum.assign(total, {0.0, 0.0});
  if (N == 1) {
    for (int j = 0; j < M; ++j) s.spectrum[offset + j] = p.data[j];
  } else {
    for (int a = 0; a < M; ++a) {
      for (int b = 0; b < M; ++b) {
        s.spectrum[static_cast<std::size_t>(offset + a) * Mp + offset + b] = p.data[static_cast<std::size_t>(a) * M + b];
      }
    }
  }
  // Shift the box origin y = 0 to index 0 so frequencies carry no phase.
  const int shift = offset + M / 2;
  {
    std::vector<std::complex<double>> rolled(total);
    if (N == 1) {
      for (int j = 0; j < Mp; ++j) rolled[j] = s.spectrum[(j + shift) % Mp];
    } else {
      for (int a = 0; a < Mp; ++a) {
        for (int b = 0; b < Mp; ++b) {
          rolled[static_cast<std::size_t>(a) * Mp + b] =
              s.spectrum[static_cast<std::size_t>((a + shift) % Mp) * Mp + (b + shift) % Mp];
        }
      }
    }
    s.spectrum = std::move(rolled);
  }
  detail::fft_axes(s.spectrum, Mp, N, false);

  s.symbol_values.resize(total);
  double peak = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    double xi[2];
    if (N == 1) {
      xi[0] = detail::frequency(static_cast<int>(i), Mp, h);
    } else {
      xi[0] = detail::frequency(static_cast<int>(i / Mp), Mp, h);
      xi[1] = detail::frequency(static_cast<int>(i % Mp), Mp, h);
    }
    s.symbol_values[i] = p.symbol(std::span<const double>(xi, N));
    peak = std::max(peak, std::abs(s.spectrum[i]));
  }
  const double scale = std::pow(h, N) / static_cast<double>(total);
  double e0 = 0.0, e1 = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    const double m2 = std::norm(s.spectrum[i]);
    e0 += m2;
    e1 += s.symbol_values[i] * s.symbol_values[i] * m2;
  }
  s.data_l2 = std::sqrt(scale * e0);
  s.data_hl = std::sqrt(scale * e1);

  // Each multiplier is needed only to the accuracy that keeps
  // |φ̂_j|·error below 1e-16·max|φ̂|, the round-off level of the transform.
  // Coefficients at or below that level are dropped.
  const double floor = 1e-16 * peak;
  std::vector<std::size_t> active;
  std::vector<double> tolerance;
  for (std::size_t i = 0; i < total; ++i) {
    const double mag = std::abs(s.spectrum[i]);
    if (mag > floor) {
      active.push_back(i);
      tolerance.push_back(std::max(1e-14, floor / mag));
    }
  }
  s.skipped_frequencies = static_cast<int>(total - active.size());

  const ModeMultiplier multiplier(p.alpha, p.beta, path);
  for (double x : x_slices) {
    FourierSlice slice;
    slice.x = x;
    std::vector<std::complex<double>> u(total, {0.0, 0.0});
    std::vector<double> factor(active.size());
    parallel_for(static_cast<int>(active.size()), [&](int t) {
      factor[t] = multiplier(std::sqrt(s.symbol_values[active[t]]), x, tolerance[t]);
    }, 64);
    double l2 = 0.0, w2 = 0.0;
    for (std::size_t t = 0; t < active.size(); ++t) {
      const std::size_t i = active[t];
      u[i] = s.spectrum[i] * factor[t];
      const double m2 = std::norm(u[i]);
      l2 += m2;
      w2 += s.symbol_values[i] * s.symbol_values[i] * m2;
    }
    slice.l2_norm = std::sqrt(scale * l2);
    slice.weighted_norm = std::sqrt(scale * w2);
    if (x == 0.0) {
      slice.field = p.data;
    } else {
      detail::fft_axes(u, Mp, N, true);
      slice.field.resize(p.grid_size());
      if (N == 1) {
        for (int j = 0; j < M; ++j) slice.field[j] = u[(j - M / 2 + Mp) % Mp].real();
      } else {
        for (int a = 0; a < M; ++a) {
          for (int b = 0; b < M; ++b) {
            slice.field[static_cast<std::size_t>(a) * M + b] =
                u[static_cast<std::size_t>((a - M / 2 + Mp) % Mp) * Mp + (b - M / 2 + Mp) % Mp].real();
          }
        }
      }
    }
    s.slices.push_back(std::move(slice));
  }
  return s;
}

// Relative defect between the grid norm of φ and the DFT norm of φ̂.
inline double plancherel_check(const FourierProblem& p) {
  p.validate();
  const int N = p.dimension();
  std::vector<std::complex<double>> v(p.data.begin(), p.data.end());
  double direct = 0.0;
  for (double d : p.data) direct += d * d;
  if (direct == 0.0) return 0.0;
  detail::fft_axes(v, p.points, N, false);
  double spectral = 0.0;
  for (const auto& c : v) spectral += std::norm(c);
  spectral /= static_cast<double>(v.size());
  return std::fabs(spectral - direct) / direct;
}

using FieldFunction = std::function<double(double, double)>;

struct OracleField {
  std::vector<double> field;
  double fitted_constant = 1.0;
  double printed_constant = 1.0;
};

namespace detail {

// Convolution of φ with a radial kernel over the box [-L, L]^N on the
// problem grid, Gauss-Legendre panels no wider than `panel_width`.
template <class Kernel>
std::vector<double> box_convolution(const FieldFunction& phi, int N, double L, int M, double panel_width,
                                    Kernel&& kernel) {
  const int panels = std::max(2, static_cast<int>(std::ceil(2.0 * L / panel_width)));
  const QuadratureRule rule = composite_gauss_legendre(-L, L, panels, 16);
  const std::size_t q = rule.nodes.size();
  const double h = 2.0 * L / M;
  std::vector<double> out;
  if (N == 1) {
    std::vector<double> f(q);
    for (std::size_t i = 0; i < q; ++i) f[i] = rule.weights[i] * phi(rule.nodes[i], 0.0);
    out.resize(M);
    parallel_for(M, [&](int j) {
      const double y = -L + j * h;
      double s = 0.0;
      for (std::size_t i = 0; i < q; ++i) {
        const double r = y - rule.nodes[i];
        s += f[i] * kernel(r * r);
      }
      out[j] = s;
    }, 4);
    return out;
  }
  std::vector<double> f(q * q);
  for (std::size_t a = 0; a < q; ++a) {
    for (std::size_t b = 0; b < q; ++b) {
      f[a * q + b] = rule.weights[a] * rule.weights[b] * phi(rule.nodes[a], rule.nodes[b]);
    }
  }
  out.resize(static_cast<std::size_t>(M) * M);
  parallel_for(M * M, [&](int idx) {
    const double y1 = -L + (idx / M) * h;
    const double y2 = -L + (idx % M) * h;
    double s = 0.0;
    for (std::size_t a = 0; a < q; ++a) {
      const double r1 = y1 - rule.nodes[a];
      for (std::size_t b = 0; b < q; ++b) {
        const double r2 = y2 - rule.nodes[b];
        s += f[a * q + b] * kernel(r1 * r1 + r2 * r2);
      }
    }
    out[idx] = s;
  }, 4);
  return out;
}

inline double boundary_peak(const FieldFunction& phi, int N, double L, int samples, double& interior_peak) {
  double edge = 0.0;
  interior_peak = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double t = -L + 2.0 * L * i / samples;
    edge = std::max({edge, std::fabs(phi(-L, N == 2 ? t : 0.0)), std::fabs(phi(L, N == 2 ? t : 0.0))});
    if (N == 2) edge = std::max({edge, std::fabs(phi(t, -L)), std::fabs(phi(t, L))});
    interior_peak = std::max(interior_peak, std::fabs(phi(t, 0.0)));
  }
  return edge;
}

}  // namespace detail

// Half-space Poisson integral of φ at height x, truncated to the box.
inline std::vector<double> poisson_oracle(const FieldFunction& phi, double x, int N, double L, int M,
                                          Warnings* warnings = nullptr) {
  if (!(x > 0.0)) throw DomainError("poisson_oracle: x must be positive");
  if (N != 1 && N != 2) throw DomainError("poisson_oracle: N must be 1 or 2");
  const double c = std::exp(std::lgamma((N + 1) / 2.0)) / std::pow(std::numbers::pi, (N + 1) / 2.0);
  const double p = (N + 1) / 2.0;
  double interior = 0.0;
  const double edge = detail::boundary_peak(phi, N, L, 256, interior);
  // Kernel mass beyond the box as seen from the box centre.
  const double outside = N == 1 ? 1.0 - 2.0 / std::numbers::pi * std::atan(L / x) : x / std::sqrt(L * L + x * x);
  if (outside * edge > 1e-8 * std::max(interior, 1e-300)) {
    warn(warnings, "poisson_oracle: kernel mass outside the box exceeds 1e-8 of the data scale");
  }
  return detail::box_convolution(phi, N, L, M, std::min(x, 1.0),
                                 [&](double r2) { return c * x / std::pow(r2 + x * x, p); });
}

// Total mass of x/(x^{m+2} + ((m+2)/2)² r²)^{N/2+1/(m+2)} over R^N by
// geometric Gauss-Legendre panels in r plus the analytic power-law tail.
inline double degenerate_kernel_mass(double m, int N, double x = 1.0) {
  if (!(m > -2.0)) throw DomainError("degenerate kernel: m must exceed -2");
  if (N != 1 && N != 2) throw DomainError("degenerate kernel: N must be 1 or 2");
  const double q = 1.0 / (m + 2.0);
  const double c = 0.5 * (m + 2.0);
  const double p = N / 2.0 + q;
  const double xm = std::pow(x, m + 2.0);
  const double ell = std::sqrt(xm) / c;
  const double surface = N == 1 ? 2.0 : 2.0 * std::numbers::pi;
  auto f = [&](double r) { return x / std::pow(xm + c * c * r * r, p) * (N == 1 ? 1.0 : r); };
  const QuadratureRule g = gauss_legendre(20);
  double lo = 0.0, hi = ell / 1024.0, sum = 0.0;
  const double R = ell * std::ldexp(1.0, 48);
  while (lo < R) {
    for (int i = 0; i < 20; ++i) sum += 0.5 * (hi - lo) * g.weights[i] * f(lo + 0.5 * (hi - lo) * (g.nodes[i] + 1.0));
    lo = hi;
    hi *= 2.0;
  }
  const double tail = x * std::pow(c, -2.0 * p) * std::pow(R, -2.0 * q) / (2.0 * q);
  return surface * (sum + tail);
}

// Closed form π^{N/2} Γ(1/(m+2)) / Γ(N/2 + 1/(m+2)) · ((m+2)/2)^{-N}.
inline double degenerate_kernel_mass_closed_form(double m, int N) {
  const double q = 1.0 / (m + 2.0);
  return std::pow(std::numbers::pi, N / 2.0) * std::exp(std::lgamma(q) - std::lgamma(N / 2.0 + q)) *
         std::pow(0.5 * (m + 2.0), -N);
}

// Normalizing constant as printed for the Gellerstedt kernel, with the
// undefined exponent symbol read as N.
inline double degenerate_kernel_printed_constant(double m, int N) {
  const double q = 1.0 / (m + 2.0);
  return std::pow(m + 2.0, N + 0.5) * std::tgamma(2.0 / 3.0) * std::tgamma(N / 2.0 + q) /
         (std::pow(2.0, N) * std::pow(std::numbers::pi, N / 2.0) * std::tgamma(q));
}

// Convolution with the degenerate kernel normalized numerically to unit mass.
inline OracleField degenerate_kernel_oracle(const FieldFunction& phi, double x, double m, int N, double L, int M,
                                            Warnings* warnings = nullptr) {
  if (!(x > 0.0)) throw DomainError("degenerate_kernel_oracle: x must be positive");
  OracleField out;
  out.fitted_constant = 1.0 / degenerate_kernel_mass(m, N, x);
  out.printed_constant = degenerate_kernel_printed_constant(m, N);
  const double q = 1.0 / (m + 2.0);
  const double c = 0.5 * (m + 2.0);
  const double p = N / 2.0 + q;
  const double xm = std::pow(x, m + 2.0);
  const double width = std::sqrt(xm) / c;
  double interior = 0.0;
  const double edge = detail::boundary_peak(phi, N, L, 256, interior);
  const double tail_mass = out.fitted_constant * 2.0 * x * std::pow(c, -2.0 * p) * std::pow(L, -2.0 * q) / (2.0 * q);
  if (std::min(1.0, tail_mass) * edge > 1e-8 * std::max(interior, 1e-300)) {
    warn(warnings, "degenerate_kernel_oracle: kernel mass outside the box exceeds 1e-8 of the data scale");
  }
  const double C = out.fitted_constant;
  out.field = detail::box_convolution(phi, N, L, M, std::min(width, 1.0),
                                      [&](double r2) { return C * x / std::pow(xm + c * c * r2, p); });
  return out;
}

}  // namespace tgk
