#pragma once

// Extended-precision reference summation of the Kilbas-Saigo series with a
// rigorous truncation remainder. Independent of the MPFR evaluation path:
// arithmetic and gamma ratios come from Boost.Multiprecision/Boost.Math.

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "tgk/errors.hpp"
#include "tgk/specfun.hpp"

namespace tgk {

struct OracleValue {
  double value = 0.0;
  double remainder_bound = 0.0;  // relative, on the truncated tail
  int terms = 0;
  int working_digits = 0;
};

namespace detail {

template <unsigned Digits>
class BigfloatKSTable {
 public:
  using real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<Digits>>;

  explicit BigfloatKSTable(KSParams p) : p_(p) {
    c_.push_back(real(1));
    while (p_.a(monotone_from_) <= 0.0) ++monotone_from_;
  }

  // Sum with relative remainder below `rel_tail`; returns false when the
  // working precision is too small for the observed cancellation.
  bool sum(double z, double rel_tail, int required_digits, int max_terms, OracleValue& out) {
    const real zr(z);
    const real tol(rel_tail);
    real s(0), power(1), max_term(0);
    int k = 0;
    real tail(0);
    for (;; ++k) {
      if (k >= max_terms) {
        throw PrecisionError("bigfloat oracle: remainder target not reached within " + std::to_string(max_terms) +
                             " terms");
      }
      const real ck = coefficient(k);
      if (ck == 0) break;
      const real t = ck * power;
      s += t;
      const real at = abs(t);
      if (at > max_term) max_term = at;
      power *= zr;
      if (k >= monotone_from_ && s != 0) {
        const real next = coefficient(k + 1);
        if (next == 0) {
          ++k;
          break;
        }
        const real q = abs(next / ck * zr);
        if (q < 1) {
          tail = at * q / (1 - q);
          if (tail <= tol * abs(s)) {
            ++k;
            break;
          }
        }
      }
    }
    out.value = static_cast<double>(s);
    out.terms = k;
    out.working_digits = static_cast<int>(Digits);
    out.remainder_bound = s == 0 ? 0.0 : static_cast<double>(tail / abs(s));
    if (s == 0) return false;
    const double lost = static_cast<double>(log10(max_term / abs(s)));
    return lost + required_digits + 10 <= static_cast<double>(Digits);
  }

 private:
  const real& coefficient(int k) {
    while (static_cast<int>(c_.size()) <= k) {
      const int j = static_cast<int>(c_.size()) - 1;
      const real& prev = c_.back();
      if (prev == 0) {
        c_.push_back(real(0));
        continue;
      }
      const real alpha(p_.alpha), m(p_.m), n(p_.n);
      const real a = alpha * (j * m + n) + 1;
      const real b = a + alpha;
      if (b <= 0 && b == floor(b)) {
        c_.push_back(real(0));
        continue;
      }
      real ratio;
      if (a > 0) {
        ratio = boost::math::tgamma_ratio(a, b);
      } else {
        ratio = boost::math::tgamma(a) / boost::math::tgamma(b);
      }
      c_.push_back(prev * ratio);
    }
    return c_[k];
  }

  KSParams p_;
  std::vector<real> c_;
  int monotone_from_ = 0;
};

}  // namespace detail

// Caches coefficient tables per precision tier (50, 100, 200, 400 digits).
// Each tier instantiates Boost.Math constant tables at static initialization;
// the cost grows steeply with precision, hence the cap at 400.
// Not thread-safe; use one instance per thread.
class BigfloatKSOracle {
 public:
  explicit BigfloatKSOracle(KSParams p, int max_terms = 10000) : p_(p), max_terms_(max_terms) { p.validate(); }

  // Value with at least digits/2 correct significant digits.
  OracleValue evaluate(double z, int digits = 50) {
    if (digits < 50) throw DomainError("bigfloat oracle: at least 50 digits are required");
    if (z == 0.0) return {1.0, 0.0, 1, 0};
    const int required = digits / 2;
    const double rel_tail = std::pow(10.0, -required);
    OracleValue out;
    if (required + 10 <= 50 && tier<50>(t50_).sum(z, rel_tail, required, max_terms_, out)) return out;
    if (required + 10 <= 100 && tier<100>(t100_).sum(z, rel_tail, required, max_terms_, out)) return out;
    if (required + 10 <= 200 && tier<200>(t200_).sum(z, rel_tail, required, max_terms_, out)) return out;
    if (tier<400>(t400_).sum(z, rel_tail, required, max_terms_, out)) return out;
    throw PrecisionError("bigfloat oracle: cancellation exceeds the largest precision tier");
  }

 private:
  template <unsigned D>
  detail::BigfloatKSTable<D>& tier(std::unique_ptr<detail::BigfloatKSTable<D>>& slot) {
    if (!slot) slot = std::make_unique<detail::BigfloatKSTable<D>>(p_);
    return *slot;
  }

  KSParams p_;
  int max_terms_;
  std::unique_ptr<detail::BigfloatKSTable<50>> t50_;
  std::unique_ptr<detail::BigfloatKSTable<100>> t100_;
  std::unique_ptr<detail::BigfloatKSTable<200>> t200_;
  std::unique_ptr<detail::BigfloatKSTable<400>> t400_;
};

inline double bigfloat_ks_oracle(const KSParams& p, double z, int digits = 50) {
  return BigfloatKSOracle(p).evaluate(z, digits).value;
}

}  // namespace tgk
