#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "tgk/errors.hpp"
#include "tgk/operators.hpp"
#include "tgk/parallel.hpp"
#include "tgk/specfun.hpp"

namespace tgk {

enum class InfinityCondition { bounded, decay_to_zero };

struct ProblemSpec {
  double alpha = 1.0;
  double beta = 0.0;
  SpectralOperator op = SpectralOperator::dirichlet_interval(1.0);
  CoefficientVector data;
  InfinityCondition infinity = InfinityCondition::bounded;

  void validate() const {
    if (!(alpha > 0.5 && alpha <= 1.0)) throw DomainError("problem: alpha must lie in (1/2, 1]");
    if (!(beta > -alpha) || !std::isfinite(beta)) throw DomainError("problem: beta must exceed -alpha");
    if (data.first_mode != op.first_mode()) {
      throw DomainError("problem: data coefficients do not start at the operator's first mode");
    }
  }
};

// x^p for x >= 0 as exp(p ln x), with 0^p = 0 for p > 0.
inline double fractional_power(double x, double p) {
  if (x < 0.0) throw DomainError("fractional_power: negative base");
  if (x == 0.0) return p == 0.0 ? 1.0 : 0.0;
  return std::exp(p * std::log(x));
}

// Truncated expansion u(x, y) = Σ_{k<K} φ_k KS(-√λ_k x^{α+β}) e_k(y).
class SpectralSolution {
 public:
  SpectralSolution(ProblemSpec problem, int truncation, double tail_bound)
      : problem_(std::move(problem)),
        truncation_(truncation),
        tail_bound_(tail_bound),
        ks_(KSParams::for_mode(problem_.alpha, problem_.beta)) {
    sqrt_lambda_.resize(truncation_);
    lambda_.resize(truncation_);
    for (int i = 0; i < truncation_; ++i) {
      sqrt_lambda_[i] = problem_.op.sqrt_eigenvalue(mode(i));
      lambda_[i] = problem_.op.eigenvalue(mode(i));
    }
  }

  const ProblemSpec& problem() const noexcept { return problem_; }
  int truncation() const noexcept { return truncation_; }
  double tail_bound() const noexcept { return tail_bound_; }
  const KilbasSaigo& mode_function() const noexcept { return ks_; }

  int mode(int index) const noexcept { return problem_.data.first_mode + index; }
  double coefficient(int index) const noexcept { return problem_.data.values[index]; }
  double eigenvalue(int index) const noexcept { return lambda_[index]; }

  // KS(-√λ_k x^{α+β}) for the mode at position `index`.
  double mode_factor(int index, double x) const {
    if (!(x >= 0.0)) throw DomainError("solution: x must be nonnegative");
    const double s = sqrt_lambda_[index];
    if (s == 0.0 || x == 0.0) return 1.0;
    return ks_(-s * fractional_power(x, problem_.alpha + problem_.beta));
  }

  // u_k(x) = φ_k KS(-√λ_k x^{α+β}).
  double mode_value(int index, double x) const {
    const double c = coefficient(index);
    return c == 0.0 ? 0.0 : c * mode_factor(index, x);
  }

  // All mode values at x, mode order.
  std::vector<double> mode_values(double x) const {
    std::vector<double> out(truncation_);
    parallel_for(truncation_, [&](int i) { out[i] = mode_value(i, x); }, 4);
    return out;
  }

 private:
  ProblemSpec problem_;
  int truncation_;
  double tail_bound_;
  KilbasSaigo ks_;
  std::vector<double> sqrt_lambda_;
  std::vector<double> lambda_;
};

inline SpectralSolution solve_spectral(const ProblemSpec& p, int K) {
  p.validate();
  if (K < 1) throw DomainError("solve_spectral: K must be positive");
  if (K > p.data.size()) throw DomainError("solve_spectral: fewer data coefficients than the truncation K");
  if (p.infinity == InfinityCondition::decay_to_zero && p.op.has_zero_eigenvalue()) {
    const double phi0 = p.data.coefficient(0);
    if (std::fabs(phi0) > 1e-12) {
      throw IllPosedDecay("decay at infinity requires a vanishing zero-mode coefficient, got " + std::to_string(phi0));
    }
  }
  double tail = 0.0;
  for (int i = K; i < p.data.size(); ++i) tail += p.data.values[i] * p.data.values[i];
  ProblemSpec truncated = p;
  return SpectralSolution(std::move(truncated), K, tail);
}

// Partial sum at one point; modes summed in increasing k.
inline double evaluate_solution(const SpectralSolution& s, double x, const DomainPoint& y) {
  if (!s.problem().op.contains(y)) throw DomainError("evaluate_solution: y outside the operator domain");
  double u = 0.0;
  for (int i = 0; i < s.truncation(); ++i) {
    const double c = s.coefficient(i);
    if (c == 0.0) continue;
    u += s.mode_value(i, x) * s.problem().op.eigenfunction(s.mode(i), y);
  }
  return u;
}

// u on the tensor grid xs × ys, x-major. Mode factors are computed once per x.
inline std::vector<double> evaluate_solution_grid(const SpectralSolution& s, std::span<const double> xs,
                                                  std::span<const DomainPoint> ys) {
  const int K = s.truncation();
  for (const auto& y : ys) {
    if (!s.problem().op.contains(y)) throw DomainError("evaluate_solution: y outside the operator domain");
  }
  std::vector<double> basis(ys.size() * K);
  for (std::size_t j = 0; j < ys.size(); ++j) {
    for (int i = 0; i < K; ++i) basis[j * K + i] = s.problem().op.eigenfunction(s.mode(i), ys[j]);
  }
  std::vector<double> modes(xs.size() * K);
  parallel_for(static_cast<int>(xs.size() * K), [&](int idx) {
    modes[idx] = s.mode_value(idx % K, xs[idx / K]);
  }, 8);
  std::vector<double> out(xs.size() * ys.size());
  for (std::size_t a = 0; a < xs.size(); ++a) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      double u = 0.0;
      for (int i = 0; i < K; ++i) u += modes[a * K + i] * basis[j * K + i];
      out[a * ys.size() + j] = u;
    }
  }
  return out;
}

struct SolutionNorms {
  double sup_L2 = 0.0;
  double sup_weighted_D2alpha = 0.0;
  double sup_Lu = 0.0;
  double data_L2 = 0.0;
  double data_HL = 0.0;
};

// Spectral norms of the truncated solution. On the representation the
// weighted derivative x^{-2β}D^{2α}u equals Lu, so both share one value.
inline SolutionNorms solution_norms(const SpectralSolution& s, std::span<const double> x_samples) {
  if (x_samples.empty()) throw DomainError("solution_norms: at least one x sample is required");
  const int K = s.truncation();
  SolutionNorms n;
  for (int i = 0; i < K; ++i) {
    const double c = s.coefficient(i);
    const double l = s.eigenvalue(i);
    n.data_L2 += c * c;
    n.data_HL += l * l * c * c;
  }
  n.data_L2 = std::sqrt(n.data_L2);
  n.data_HL = std::sqrt(n.data_HL);
  for (double x : x_samples) {
    const std::vector<double> u = s.mode_values(x);
    double l2 = 0.0, lu = 0.0;
    for (int i = 0; i < K; ++i) {
      const double l = s.eigenvalue(i);
      l2 += u[i] * u[i];
      lu += l * l * u[i] * u[i];
    }
    n.sup_L2 = std::max(n.sup_L2, std::sqrt(l2));
    n.sup_Lu = std::max(n.sup_Lu, std::sqrt(lu));
  }
  n.sup_weighted_D2alpha = n.sup_Lu;
  return n;
}

}  // namespace tgk
