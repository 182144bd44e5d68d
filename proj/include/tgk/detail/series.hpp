#pragma once

// Power-series summation shared by the Mittag-Leffler and Kilbas-Saigo
// evaluators: a double-precision pass with running error bookkeeping, and an
// MPFR pass used when cancellation makes the double result untrustworthy.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <mutex>
#include <string>
#include <vector>

#include "tgk/detail/bigfloat.hpp"
#include "tgk/errors.hpp"

namespace tgk {

struct SeriesOptions {
  // A term counts as negligible when |t_k| < truncation_tol * |partial sum|.
  double truncation_tol = 1e-16;
  // Escalate to extended precision when the double-path error estimate
  // exceeds target_rel_error * |value|.
  double target_rel_error = 1e-12;
  int max_terms = 10000;
  int min_extended_digits = 50;
  int max_extended_digits = 6000;
  bool allow_extended = true;
};

struct EvalResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  int terms_used = 0;
  // sum |t_k| / |sum t_k|; exactly 1 when every term has the same sign.
  double cancellation_index = 1.0;
  // log10 of the same ratio; finite even when the ratio overflows.
  double log10_cancellation = 0.0;
  bool extended_precision = false;
  int working_digits = 16;
};

namespace detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();
inline constexpr double kLogOverflow = 690.7755278982137;  // ln(1e300)

// Coefficient in log form. sign == 0 marks a vanishing coefficient, after
// which the series is a polynomial.
struct LogCoefficient {
  double log_abs = 0.0;
  int sign = 1;
  double log_err = 0.0;  // bound on the absolute error of log_abs
};

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

inline double lgamma_signed(double x, int& sign) {
  int s = 1;
  const double v = ::lgamma_r(x, &s);
  sign = s;
  return v;
}

// Conservative absolute error bound for a double lgamma evaluation at x,
// including propagation of one rounding in x itself.
inline double lgamma_error_bound(double x, double lg) {
  const double psi_scale = std::fabs(x) * (std::fabs(std::log(std::fabs(x) + 1.0)) + 1.0);
  return 8.0 * kEps * (std::max(1.0, std::fabs(lg)) + psi_scale);
}

// Grow-only coefficient cache shared between copies of an evaluator.
// Generator requirements:
//   LogCoefficient first() const;
//   LogCoefficient next(int k, const LogCoefficient& prev) const;
//   void big_first(BigFloat& c) const;
//   void big_next(int k, BigFloat& c, double& rel_err) const;   // c: c_{k-1} -> c_k, rel_err in units of 2^{1-bits}
//   int monotone_from() const;   // ratios |c_{j+1}/c_j| non-increasing for j >= this
template <class Generator>
class CoefficientTable {
 public:
  explicit CoefficientTable(Generator gen) : gen_(std::move(gen)) {}

  const Generator& generator() const noexcept { return gen_; }

  void fetch_log(int begin, int count, std::vector<LogCoefficient>& out) {
    std::lock_guard lock(mutex_);
    const auto needed = static_cast<std::size_t>(begin + count);
    if (log_.empty()) log_.push_back(gen_.first());
    while (log_.size() < needed) {
      const int k = static_cast<int>(log_.size());
      log_.push_back(gen_.next(k, log_.back()));
    }
    out.assign(log_.begin() + begin, log_.begin() + begin + count);
  }

  void fetch_big(int begin, int count, mpfr_prec_t bits, std::vector<BigFloat>& out,
                 std::vector<double>& rel_err) {
    std::lock_guard lock(mutex_);
    if (bits > big_bits_) {
      big_.clear();
      big_err_.clear();
      big_bits_ = bits;
    }
    const auto needed = static_cast<std::size_t>(begin + count);
    if (big_.empty()) {
      BigFloat c(big_bits_);
      gen_.big_first(c);
      big_.push_back(std::move(c));
      big_err_.push_back(0.0);
    }
    while (big_.size() < needed) {
      const int k = static_cast<int>(big_.size());
      BigFloat c = big_.back();
      double err = big_err_.back();
      gen_.big_next(k, c, err);
      big_.push_back(std::move(c));
      big_err_.push_back(err);
    }
    out.clear();
    for (int k = begin; k < begin + count; ++k) {
      BigFloat c(bits);
      mpfr_set(c.get(), big_[k].get(), MPFR_RNDN);
      out.push_back(std::move(c));
    }
    rel_err.assign(big_err_.begin() + begin, big_err_.begin() + begin + count);
  }

 private:
  Generator gen_;
  std::mutex mutex_;
  std::vector<LogCoefficient> log_;
  mpfr_prec_t big_bits_ = 0;
  std::vector<BigFloat> big_;
  std::vector<double> big_err_;
};

inline constexpr int kBlock = 64;

// Double-precision pass. Terms are handled as exp(L_k - L_ref) with a moving
// reference so that neither huge nor tiny coefficients leave the range.
template <class Generator>
EvalResult sum_double(CoefficientTable<Generator>& table, double z, const SeriesOptions& opt) {
  EvalResult r;
  if (z == 0.0) {
    r.value = 1.0;
    r.terms_used = 1;
    return r;
  }
  const double log_z = std::log(std::fabs(z));
  const int monotone_from = table.generator().monotone_from();

  double ref = 0.0;  // L_ref
  double sum = 0.0, comp = 0.0, abs_sum = 0.0, coef_err = 0.0;
  int rescales = 0;
  int small_run = 0;
  double tail = 0.0;
  bool done = false;
  double prev_log_term = -INFINITY;
  int k = 0;

  std::vector<LogCoefficient> block;
  while (!done) {
    if (k >= opt.max_terms) {
      if (z > 0.0) {
        throw OverflowError("series did not converge within the term cap; log-magnitude is a lower bound",
                            ref + std::log(std::fabs(sum + comp)));
      }
      throw PrecisionError("series did not converge within " + std::to_string(opt.max_terms) + " terms at z = " +
                           std::to_string(z));
    }
    table.fetch_log(k, kBlock + 1, block);
    for (int b = 0; b < kBlock && !done; ++b, ++k) {
      const LogCoefficient& c = block[b];
      if (c.sign == 0) {
        done = true;
        break;
      }
      const double log_term = c.log_abs + k * log_z;
      const int sign = (z < 0.0 && (k & 1)) ? -c.sign : c.sign;
      if (log_term > ref + 40.0) {
        const double f = std::exp(ref - log_term);
        sum *= f;
        comp *= f;
        abs_sum *= f;
        coef_err *= f;
        ref = log_term;
        ++rescales;
      }
      const double t = sign * std::exp(log_term - ref);
      // Neumaier compensated summation.
      const double s = sum + t;
      comp += (std::fabs(sum) >= std::fabs(t)) ? (sum - s) + t : (t - s) + sum;
      sum = s;
      abs_sum += std::fabs(t);
      const double rel_term_err =
          c.log_err + kEps * (std::fabs(k * log_z) + std::fabs(log_term) + std::fabs(ref) + 2.0);
      coef_err += std::fabs(t) * std::expm1(rel_term_err);

      const double total = sum + comp;
      if (z > 0.0 && total > 0.0 && ref + std::log(total) > kLogOverflow) {
        throw OverflowError("series value exceeds 1e300", ref + std::log(total));
      }

      const bool decreasing = log_term < prev_log_term;
      prev_log_term = log_term;
      if (k >= monotone_from && decreasing && std::fabs(t) < opt.truncation_tol * std::fabs(total)) {
        ++small_run;
      } else {
        small_run = 0;
      }
      if (small_run >= 3) {
        const LogCoefficient& nx = block[b + 1];
        if (nx.sign == 0) {
          tail = 0.0;
          done = true;
        } else {
          const double q = std::exp(nx.log_abs - c.log_abs + log_z);
          if (q < 1.0) {
            tail = std::fabs(t) * q / (1.0 - q);
            done = true;
          }
        }
      }
    }
  }

  const double total = sum + comp;
  const double scale = std::exp(ref);
  r.terms_used = k;
  r.value = total * scale;
  r.cancellation_index = (total == 0.0) ? INFINITY : std::max(1.0, abs_sum / std::fabs(total));
  r.log10_cancellation = std::log10(r.cancellation_index);
  const double round_err = 2.0 * kEps * std::fabs(total) + 4.0 * k * kEps * kEps * abs_sum +
                           2.0 * rescales * kEps * abs_sum + kEps * abs_sum;
  r.abs_error_estimate = (coef_err + round_err + tail) * scale;
  return r;
}

// Extended-precision pass with `digits` significant decimal digits.
template <class Generator>
EvalResult sum_extended(CoefficientTable<Generator>& table, double z, int digits, const SeriesOptions& opt) {
  const mpfr_prec_t bits = digits_to_bits(digits);
  const double log_unit = (1.0 - static_cast<double>(bits)) * std::numbers::ln2;
  const int monotone_from = table.generator().monotone_from();
  const double log_z = std::log(std::fabs(z));

  BigFloat zb(bits, z), power(bits, 1.0), sum(bits), abs_sum(bits), term(bits), tmp(bits);
  std::vector<BigFloat> block;
  std::vector<double> block_err;
  double max_rel = 0.0;
  double tail = 0.0;
  int small_run = 0;
  bool done = false;
  int k = 0;
  const double hp_tol = std::min(opt.truncation_tol, 1e-30);

  while (!done) {
    if (k >= opt.max_terms) {
      throw PrecisionError("extended-precision series did not converge within " + std::to_string(opt.max_terms) +
                           " terms at z = " + std::to_string(z));
    }
    table.fetch_big(k, kBlock + 1, bits, block, block_err);
    for (int b = 0; b < kBlock && !done; ++b, ++k) {
      if (block[b].is_zero()) {
        done = true;
        break;
      }
      mpfr_mul(term.get(), block[b].get(), power.get(), MPFR_RNDN);
      mpfr_add(sum.get(), sum.get(), term.get(), MPFR_RNDN);
      mpfr_abs(tmp.get(), term.get(), MPFR_RNDN);
      mpfr_add(abs_sum.get(), abs_sum.get(), tmp.get(), MPFR_RNDN);
      max_rel = std::max(max_rel, block_err[b] + (k + 3));  // units of 2^{1-bits}
      mpfr_mul(power.get(), power.get(), zb.get(), MPFR_RNDN);

      const double log_t = term.log_abs();
      const double log_s = sum.log_abs();
      if (k >= monotone_from && log_t < log_s + std::log(hp_tol)) {
        ++small_run;
      } else {
        small_run = 0;
      }
      if (small_run >= 3) {
        if (block[b + 1].is_zero()) {
          tail = 0.0;
          done = true;
        } else {
          const double q = std::exp(block[b + 1].log_abs() - block[b].log_abs() + log_z);
          if (q < 1.0) {
            tail = std::exp(log_t) * q / (1.0 - q);
            done = true;
          }
        }
      }
    }
  }

  EvalResult r;
  r.value = sum.to_double();
  r.terms_used = k;
  r.extended_precision = true;
  r.working_digits = digits;
  const double log_abs_total = abs_sum.log_abs();
  const double log_cancel = sum.is_zero() ? INFINITY : std::max(0.0, log_abs_total - sum.log_abs());
  r.cancellation_index = std::exp(log_cancel);
  r.log10_cancellation = log_cancel / std::log(10.0);
  // Final rounding to double dominates unless the working precision was
  // too small for the cancellation.
  r.abs_error_estimate = 0.5 * kEps * std::fabs(r.value) + std::exp(log_abs_total + std::log(max_rel) + log_unit) + tail;
  return r;
}

template <class Generator>
EvalResult sum_series(CoefficientTable<Generator>& table, double z, const SeriesOptions& opt) {
  EvalResult r = sum_double(table, z, opt);
  if (!opt.allow_extended) return r;
  if (std::isfinite(r.value) && r.abs_error_estimate <= opt.target_rel_error * std::fabs(r.value)) return r;

  const double cancel_digits = std::isfinite(r.log10_cancellation) ? r.log10_cancellation : 30.0;
  // Precision is rounded up to multiples of 50 digits so the coefficient
  // cache is reused across nearby arguments.
  auto quantize = [](int d) { return (d + 49) / 50 * 50; };
  int digits = quantize(std::max(opt.min_extended_digits, static_cast<int>(std::ceil(cancel_digits)) + 30));
  for (;;) {
    if (digits > opt.max_extended_digits) {
      throw PrecisionError("required working precision of " + std::to_string(digits) +
                           " digits exceeds the configured maximum at z = " + std::to_string(z));
    }
    EvalResult hp = sum_extended(table, z, digits, opt);
    if (std::isfinite(hp.value) &&
        (hp.abs_error_estimate <= opt.target_rel_error * std::fabs(hp.value) || hp.value == 0.0)) {
      return hp;
    }
    const double more = std::isfinite(hp.log10_cancellation) ? hp.log10_cancellation + 30.0 : 2.0 * digits;
    digits = quantize(std::max(2 * digits, static_cast<int>(std::ceil(more))));
  }
}

}  // namespace detail
}  // namespace tgk
