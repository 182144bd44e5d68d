#pragma once

#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include "tgk/detail/series.hpp"
#include "tgk/errors.hpp"

namespace tgk {

// ln|Γ(x)|. Throws PoleError at x = 0, -1, -2, ...
inline double log_gamma(double x) {
  if (!std::isfinite(x)) throw DomainError("log_gamma: non-finite argument");
  if (detail::is_nonpositive_integer(x)) throw PoleError("log_gamma: pole at x = " + std::to_string(x));
  int sign = 1;
  return detail::lgamma_signed(x, sign);
}

// Sign of Γ(x) away from the poles.
inline int gamma_sign(double x) {
  if (detail::is_nonpositive_integer(x)) throw PoleError("gamma_sign: pole at x = " + std::to_string(x));
  int sign = 1;
  detail::lgamma_signed(x, sign);
  return sign;
}

struct KSParams {
  double alpha = 1.0;
  double m = 1.0;
  double n = 0.0;

  // Parameters of the mode factor for exponents (alpha, beta).
  static KSParams for_mode(double alpha, double beta) { return {alpha, 1.0 + beta / alpha, beta / alpha}; }

  double a(int j) const { return alpha * (j * m + n) + 1.0; }

  // Index of the first vanishing coefficient, or -1 when the series is infinite.
  int terminating_index() const {
    if (!(alpha > 0.0) || !(m > 0.0)) return -1;
    for (int j = 0; a(j) + alpha <= 0.0; ++j) {
      if (detail::is_nonpositive_integer(a(j) + alpha)) return j + 1;
    }
    return -1;
  }

  void validate() const {
    if (!std::isfinite(alpha) || !std::isfinite(m) || !std::isfinite(n)) {
      throw InvalidParams("KSParams: non-finite parameter");
    }
    if (!(alpha > 0.0)) throw InvalidParams("KSParams: alpha must be positive");
    if (!(m > 0.0)) throw InvalidParams("KSParams: m must be positive");
    const int stop = terminating_index();
    for (int j = 0; a(j) <= 0.0 && (stop < 0 || j < stop); ++j) {
      if (detail::is_nonpositive_integer(a(j))) {
        throw InvalidParams("KSParams: alpha(jm+n)+1 is a non-positive integer at j = " + std::to_string(j));
      }
    }
  }
};

namespace detail {

// Extended-path relative errors are counted in units of u = 2^{1-bits}, which
// stays representable at any working precision.
inline double mpfr_term_error(mpfr_srcptr x) { return std::fabs(mpfr_get_d(x, MPFR_RNDN)) + 1.0; }

class KSCoefficients {
 public:
  explicit KSCoefficients(KSParams p) : p_(p) {
    monotone_from_ = 0;
    while (p_.a(monotone_from_) <= 0.0) ++monotone_from_;
  }

  LogCoefficient first() const { return {0.0, 1, 0.0}; }

  LogCoefficient next(int k, const LogCoefficient& prev) const {
    if (prev.sign == 0) return {0.0, 0, 0.0};
    const double a = p_.a(k - 1);
    const double b = a + p_.alpha;
    if (is_nonpositive_integer(b)) return {0.0, 0, 0.0};
    int sa = 1, sb = 1;
    const double la = lgamma_signed(a, sa);
    const double lb = lgamma_signed(b, sb);
    LogCoefficient c;
    c.log_abs = prev.log_abs + la - lb;
    c.sign = prev.sign * sa * sb;
    c.log_err = prev.log_err + lgamma_error_bound(a, la) + lgamma_error_bound(b, lb) + kEps * std::fabs(c.log_abs);
    return c;
  }

  void big_first(BigFloat& c) const { mpfr_set_ui(c.get(), 1, MPFR_RNDN); }

  void big_next(int k, BigFloat& c, double& rel_err) const {
    if (c.is_zero()) return;
    const mpfr_prec_t bits = c.bits();
    BigFloat a(bits), b(bits), la(bits), lb(bits);
    // a = alpha*((k-1)*m + n) + 1 evaluated at working precision.
    mpfr_set_d(a.get(), p_.m, MPFR_RNDN);
    mpfr_mul_si(a.get(), a.get(), k - 1, MPFR_RNDN);
    mpfr_add_d(a.get(), a.get(), p_.n, MPFR_RNDN);
    mpfr_set(b.get(), a.get(), MPFR_RNDN);
    mpfr_add_ui(b.get(), b.get(), 1, MPFR_RNDN);
    mpfr_mul_d(a.get(), a.get(), p_.alpha, MPFR_RNDN);
    mpfr_add_ui(a.get(), a.get(), 1, MPFR_RNDN);
    mpfr_mul_d(b.get(), b.get(), p_.alpha, MPFR_RNDN);
    mpfr_add_ui(b.get(), b.get(), 1, MPFR_RNDN);
    if (mpfr_integer_p(b.get()) && mpfr_sgn(b.get()) <= 0) {
      mpfr_set_zero(c.get(), 1);
      return;
    }
    int sa = 1, sb = 1;
    mpfr_lgamma(la.get(), &sa, a.get(), MPFR_RNDN);
    mpfr_lgamma(lb.get(), &sb, b.get(), MPFR_RNDN);
    const double da = mpfr_get_d(a.get(), MPFR_RNDN);
    const double db = mpfr_get_d(b.get(), MPFR_RNDN);
    rel_err += mpfr_term_error(la.get()) + mpfr_term_error(lb.get()) +
               2.0 * (std::fabs(da) + std::fabs(db)) * (std::log(std::fabs(db) + 2.0) + 2.0);
    mpfr_sub(la.get(), la.get(), lb.get(), MPFR_RNDN);
    mpfr_exp(la.get(), la.get(), MPFR_RNDN);
    mpfr_mul(c.get(), c.get(), la.get(), MPFR_RNDN);
    if (sa * sb < 0) mpfr_neg(c.get(), c.get(), MPFR_RNDN);
  }

  int monotone_from() const { return monotone_from_; }

 private:
  KSParams p_;
  int monotone_from_ = 0;
};

class MLCoefficients {
 public:
  MLCoefficients(double alpha, double beta) : alpha_(alpha), beta_(beta) {}

  LogCoefficient first() const { return at(0); }
  LogCoefficient next(int k, const LogCoefficient&) const { return at(k); }

  void big_first(BigFloat& c) const { big_at(0, c); }
  void big_next(int k, BigFloat& c, double& rel_err) const { rel_err = big_at(k, c); }

  int monotone_from() const { return 0; }

 private:
  LogCoefficient at(int k) const {
    const double x = alpha_ * k + beta_;
    int s = 1;
    const double lg = lgamma_signed(x, s);
    return {-lg, s, lgamma_error_bound(x, lg)};
  }

  double big_at(int k, BigFloat& c) const {
    const mpfr_prec_t bits = c.bits();
    BigFloat x(bits), lg(bits);
    mpfr_set_d(x.get(), alpha_, MPFR_RNDN);
    mpfr_mul_si(x.get(), x.get(), k, MPFR_RNDN);
    mpfr_add_d(x.get(), x.get(), beta_, MPFR_RNDN);
    int s = 1;
    mpfr_lgamma(lg.get(), &s, x.get(), MPFR_RNDN);
    mpfr_neg(lg.get(), lg.get(), MPFR_RNDN);
    mpfr_exp(c.get(), lg.get(), MPFR_RNDN);
    if (s < 0) mpfr_neg(c.get(), c.get(), MPFR_RNDN);
    const double dx = mpfr_get_d(x.get(), MPFR_RNDN);
    return mpfr_term_error(lg.get()) + 2.0 * std::fabs(dx) * (std::log(std::fabs(dx) + 2.0) + 2.0);
  }

  double alpha_;
  double beta_;
};

}  // namespace detail

// Kilbas-Saigo function E_{α,m,n}(z) = Σ c_k z^k, c_0 = 1,
// c_k = c_{k-1} Γ(α((k-1)m+n)+1) / Γ(α((k-1)m+n+1)+1).
// Copies share one coefficient cache; evaluation is thread-safe.
class KilbasSaigo {
 public:
  explicit KilbasSaigo(KSParams p) : params_(p) {
    p.validate();
    table_ = std::make_shared<detail::CoefficientTable<detail::KSCoefficients>>(detail::KSCoefficients(p));
  }

  const KSParams& params() const noexcept { return params_; }

  EvalResult evaluate(double z, const SeriesOptions& opt = {}) const {
    if (!std::isfinite(z)) throw DomainError("kilbas_saigo: non-finite argument");
    return detail::sum_series(*table_, z, opt);
  }

  double operator()(double z) const { return evaluate(z).value; }

 private:
  KSParams params_;
  std::shared_ptr<detail::CoefficientTable<detail::KSCoefficients>> table_;
};

// Two-parameter Mittag-Leffler function E_{α,β}(z) = Σ z^k / Γ(αk+β).
class MittagLeffler {
 public:
  MittagLeffler(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidParams("mittag_leffler: alpha must be positive");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidParams("mittag_leffler: beta must be positive");
    table_ = std::make_shared<detail::CoefficientTable<detail::MLCoefficients>>(detail::MLCoefficients(alpha, beta));
  }

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

  EvalResult evaluate(double z, const SeriesOptions& opt = {}) const {
    if (!std::isfinite(z)) throw DomainError("mittag_leffler: non-finite argument");
    if (z == 0.0) {
      EvalResult r;
      r.value = std::exp(-log_gamma(beta_)) * gamma_sign(beta_);
      r.terms_used = 1;
      r.abs_error_estimate = 4.0 * detail::kEps * std::fabs(r.value);
      return r;
    }
    return detail::sum_series(*table_, z, opt);
  }

  double operator()(double z) const { return evaluate(z).value; }

 private:
  double alpha_;
  double beta_;
  std::shared_ptr<detail::CoefficientTable<detail::MLCoefficients>> table_;
};

inline EvalResult kilbas_saigo(const KSParams& p, double z, const SeriesOptions& opt = {}) {
  return KilbasSaigo(p).evaluate(z, opt);
}

inline EvalResult mittag_leffler(double alpha, double beta, double z, const SeriesOptions& opt = {}) {
  return MittagLeffler(alpha, beta).evaluate(z, opt);
}

// K_ν(x) = e^{-x} ∫_0^∞ e^{-x(cosh t - 1)} cosh(νt) dt by the trapezoid rule,
// which converges geometrically for this analytic, rapidly decaying integrand.
inline double bessel_k(double nu, double x, Warnings* warnings = nullptr) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("bessel_k: x must be positive and finite");
  if (!std::isfinite(nu)) throw DomainError("bessel_k: non-finite order");
  if (x < 1e-6) warn(warnings, "bessel_k: argument below 1e-6, near the singularity at 0");
  const double anu = std::fabs(nu);

  auto exponent = [&](double t) { return anu * t - x * (std::cosh(t) - 1.0); };
  const double t_peak = std::asinh(anu / x);
  const double g_peak = std::max(0.0, exponent(t_peak));
  double upper = std::max(1.0, t_peak);
  while (exponent(upper) > g_peak - 60.0) upper *= 1.25;

  auto integrand = [&](double t) { return std::exp(-x * (std::cosh(t) - 1.0)) * std::cosh(anu * t); };

  int intervals = 16;
  double step = upper / intervals;
  double sum = 0.5 * (integrand(0.0) + integrand(upper));
  for (int i = 1; i < intervals; ++i) sum += integrand(i * step);
  double estimate = sum * step;
  for (int level = 0; level < 22; ++level) {
    double mid = 0.0;
    for (int i = 0; i < intervals; ++i) mid += integrand((i + 0.5) * step);
    sum += mid;
    intervals *= 2;
    step *= 0.5;
    const double refined = sum * step;
    const bool converged = std::fabs(refined - estimate) <= 1e-14 * std::fabs(refined);
    estimate = refined;
    if (converged && level >= 2) return estimate * std::exp(-x);
  }
  throw PrecisionError("bessel_k: trapezoid rule did not converge");
}

// Ai(x) for x ≥ 0: Maclaurin series on [0, 1], K_{1/3} form beyond.
inline double airy_ai(double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("airy_ai: only x >= 0 is supported");
  if (x <= 1.0) {
    const double c1 = std::exp(-log_gamma(2.0 / 3.0)) * std::pow(3.0, -2.0 / 3.0);
    const double c2 = std::exp(-log_gamma(1.0 / 3.0)) * std::pow(3.0, -1.0 / 3.0);
    const double x3 = x * x * x;
    double f = 1.0, g = x, tf = 1.0, tg = x;
    for (int k = 1; k < 60; ++k) {
      tf *= x3 / ((3.0 * k - 1.0) * (3.0 * k));
      tg *= x3 / ((3.0 * k) * (3.0 * k + 1.0));
      f += tf;
      g += tg;
      if (tf < 1e-18 * f && tg <= 1e-18 * std::max(g, 1e-300)) break;
    }
    return c1 * f - c2 * g;
  }
  const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
  return std::sqrt(x / 3.0) / std::numbers::pi * bessel_k(1.0 / 3.0, zeta);
}

}  // namespace tgk
