#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

#include "support.hpp"
#include "tgk/oracle.hpp"
#include "tgk/parallel.hpp"
#include "tgk/specfun.hpp"

using namespace tgk;
using tgk_test::for_all;
using tgk_test::Gen;

TEST(LogGamma, MatchesFactorialsAndRejectsPoles) {
  EXPECT_NEAR(log_gamma(5.0), std::log(24.0), 1e-14);
  EXPECT_NEAR(log_gamma(0.5), 0.5 * std::log(std::numbers::pi), 1e-14);
  EXPECT_EQ(gamma_sign(-0.5), -1);
  EXPECT_EQ(gamma_sign(-1.5), 1);
  EXPECT_THROW(log_gamma(0.0), PoleError);
  EXPECT_THROW(log_gamma(-3.0), PoleError);
}

TEST(KilbasSaigo, ExponentialCaseAtMinusTwo) {
  // (1, 2, 1): c_k = 2^{-k}/k!, so the function is exp(z/2).
  EXPECT_NEAR(kilbas_saigo({1.0, 2.0, 1.0}, -2.0).value, std::exp(-1.0), 1e-15);
}

TEST(KilbasSaigo, ZeroArgumentIsOne) {
  for (double a : {0.3, 0.6, 1.0}) {
    const EvalResult r = kilbas_saigo({a, 1.5, 0.5}, 0.0);
    EXPECT_EQ(r.value, 1.0);
    EXPECT_EQ(r.cancellation_index, 1.0);
  }
}

TEST(KilbasSaigo, AlphaOneIsExponentialProperty) {
  // For α = 1 the mode function is exp(z/(1+β)). β is dyadic so that
  // m = 1 + β is exact; at heavy cancellation a rounded m alone shifts
  // the value by far more than the target error.
  for_all(60, 11, [](Gen& g) {
    const double beta = g.integer(-57, 128) / 64.0;
    const double z = g.uniform(-30.0, 30.0);
    const double v = KilbasSaigo(KSParams::for_mode(1.0, beta))(z);
    const double ref = std::exp(z / (1.0 + beta));
    EXPECT_NEAR(v, ref, 1e-12 * ref) << "beta=" << beta << " z=" << z;
  });
}

TEST(KilbasSaigo, ReductionToMittagLeffler) {
  for (double a : {0.6, 0.75, 0.9, 1.0}) {
    for (int i = 0; i <= 40; ++i) {
      const double z = -20.0 + i;
      const double ks = KilbasSaigo({a, 1.0, 0.0})(z);
      const double ml = MittagLeffler(a, 1.0)(z);
      EXPECT_NEAR(ks, ml, 1e-10 * std::max(1.0, std::fabs(ml))) << "alpha=" << a << " z=" << z;
    }
  }
}

TEST(KilbasSaigo, ShiftedReductionToTwoParameterMittagLeffler) {
  // E_{α,1,n}(z) = Γ(αn+1) E_{α,αn+1}(z).
  for (double a : {0.6, 0.75, 0.9, 1.0}) {
    for (double n : {0.5, 1.0, 2.0}) {
      const double g = std::tgamma(a * n + 1.0);
      for (int i = 0; i <= 40; ++i) {
        const double z = -20.0 + i;
        const double ks = KilbasSaigo({a, 1.0, n})(z);
        const double ml = g * MittagLeffler(a, a * n + 1.0)(z);
        EXPECT_NEAR(ks, ml, 1e-10 * std::max(1.0, std::fabs(ml))) << "alpha=" << a << " n=" << n << " z=" << z;
      }
    }
  }
}

TEST(MittagLeffler, ClosedForms) {
  EXPECT_NEAR(mittag_leffler(1.0, 1.0, 1.0).value, std::numbers::e, 1e-12);
  EXPECT_NEAR(mittag_leffler(2.0, 1.0, -std::numbers::pi * std::numbers::pi / 4.0).value, 0.0, 1e-12);
  // E_{1/2,1}(-x) = exp(x²) erfc(x).
  for (double x : {0.25, 1.0, 3.0, 6.0}) {
    const double ref = std::exp(x * x) * std::erfc(x);
    EXPECT_NEAR(mittag_leffler(0.5, 1.0, -x).value, ref, 1e-12 * ref) << "x=" << x;
  }
  EXPECT_NEAR(mittag_leffler(0.5, 1.0, -1.0).value, 0.42758357615580705, 1e-15);
  // E_{2,1}(-x²) = cos x.
  EXPECT_NEAR(mittag_leffler(2.0, 1.0, -9.0).value, std::cos(3.0), 1e-12);
}

TEST(MittagLeffler, RejectsNonPositiveParameters) {
  EXPECT_THROW(MittagLeffler(0.0, 1.0), InvalidParams);
  EXPECT_THROW(MittagLeffler(0.5, 0.0), InvalidParams);
}

TEST(KSParams, RejectsNonPositiveIntegerShift) {
  // α(jm+n)+1 = 0 at j = 0.
  EXPECT_THROW((KSParams{0.5, 1.0, -2.0}.validate()), InvalidParams);
  // α(jm+n)+1 = -1 at j = 0.
  EXPECT_THROW((KSParams{1.0, 1.0, -2.0}.validate()), InvalidParams);
  EXPECT_NO_THROW((KSParams{0.75, 1.0, 0.5}.validate()));
  EXPECT_THROW((KSParams{0.5, 0.0, 0.0}.validate()), InvalidParams);
}

TEST(SeriesEngine, CancellationIndexIsOneWithoutSignChanges) {
  for_all(40, 12, [](Gen& g) {
    const KSParams p{g.uniform(0.5, 1.0), g.uniform(0.5, 3.0), g.uniform(0.0, 2.0)};
    const EvalResult r = kilbas_saigo(p, g.uniform(0.0, 5.0));
    EXPECT_NEAR(r.cancellation_index, 1.0, 1e-15);
  });
}

TEST(SeriesEngine, CancellationGrowsOnNegativeAxis) {
  const KilbasSaigo ks(KSParams::for_mode(0.75, 0.0));
  EXPECT_GT(ks.evaluate(-20.0).cancellation_index, 1e10);
  EXPECT_TRUE(ks.evaluate(-20.0).extended_precision);
  EXPECT_FALSE(ks.evaluate(-0.5).extended_precision);
}

TEST(SeriesEngine, ErrorEstimateCoversOracleError) {
  for_all(40, 13, [](Gen& g) {
    const double alpha = g.pick(std::vector<double>{0.6, 0.75, 0.9, 1.0});
    const double beta = g.uniform(-0.25, 1.0);
    const double z = g.uniform(-20.0, 20.0);
    const KSParams p = KSParams::for_mode(alpha, beta);
    const EvalResult r = kilbas_saigo(p, z);
    const double ref = bigfloat_ks_oracle(p, z);
    EXPECT_LE(std::fabs(r.value - ref), r.abs_error_estimate + 1e-15 * std::fabs(ref))
        << "alpha=" << alpha << " beta=" << beta << " z=" << z;
    EXPECT_LE(std::fabs(r.value - ref), 1e-10 * std::fabs(ref));
  });
}

TEST(SeriesEngine, OverflowCarriesLogMagnitude) {
  try {
    kilbas_saigo({1.0, 1.0, 0.0}, 800.0);
    FAIL() << "expected OverflowError";
  } catch (const OverflowError& e) {
    EXPECT_GT(e.log_magnitude(), std::log(1e300));
  }
}

TEST(SeriesEngine, TermCapRaisesPrecisionError) {
  // Needs more than 10^4 terms before the tail is controlled.
  EXPECT_THROW(kilbas_saigo({0.5, 1.5, 0.5}, -100.0), PrecisionError);
  SeriesOptions opt;
  opt.max_terms = 20;
  EXPECT_THROW(kilbas_saigo({1.0, 1.0, 0.0}, -30.0, opt), PrecisionError);
}

TEST(SeriesEngine, TerminatingSeriesIsPolynomial) {
  // a_0 = -1.5 and a_0 + α = -1, so c_1 = Γ(a_0)/Γ(-1) = 0.
  const KSParams q{0.5, 1.0, -5.0};
  EXPECT_NO_THROW(q.validate());
  EXPECT_EQ(q.terminating_index(), 1);
  EXPECT_EQ(kilbas_saigo(q, 3.0).value, 1.0);
}

TEST(SeriesEngine, DeterministicAcrossCallsAndThreads) {
  const KilbasSaigo ks(KSParams::for_mode(0.75, 0.5));
  std::vector<double> zs;
  for (int i = 0; i < 64; ++i) zs.push_back(-20.0 + 0.6 * i);
  std::vector<double> serial(zs.size()), threaded(zs.size());
  for (std::size_t i = 0; i < zs.size(); ++i) serial[i] = ks(zs[i]);
  const KilbasSaigo fresh(KSParams::for_mode(0.75, 0.5));
  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < zs.size(); i += 4) threaded[i] = fresh(zs[i]);
    });
  }
  for (auto& th : pool) th.join();
  for (std::size_t i = 0; i < zs.size(); ++i) EXPECT_EQ(serial[i], threaded[i]) << "z=" << zs[i];
}

TEST(BigfloatOracle, ClosedFormsAndZero) {
  EXPECT_EQ(bigfloat_ks_oracle({0.75, 2.0, 1.0}, 0.0), 1.0);
  BigfloatKSOracle o({1.0, 2.0, 1.0});
  const OracleValue v = o.evaluate(-2.0, 60);
  EXPECT_NEAR(v.value, std::exp(-1.0), 1e-16);
  EXPECT_LE(v.remainder_bound, 1e-30);
  EXPECT_THROW(o.evaluate(1.0, 40), DomainError);
}

TEST(BigfloatOracle, CancellationStressReference) {
  // Agreement of two independent summations at heavy cancellation.
  const KSParams p{0.75, 2.0, 1.0};
  const double ref = bigfloat_ks_oracle(p, -25.0);
  const EvalResult r = kilbas_saigo(p, -25.0);
  EXPECT_TRUE(r.extended_precision);
  EXPECT_NEAR(r.value, ref, 1e-12 * std::fabs(ref));
}

TEST(BesselK, HalfOrderClosedForm) {
  for (double x : {0.1, 1.0, 5.0, 20.0}) {
    const double ref = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x);
    EXPECT_NEAR(bessel_k(0.5, x), ref, 1e-13 * ref) << "x=" << x;
  }
  // Against the standard library where available.
  for (double nu : {0.0, 0.25, 1.0 / 3.0, 1.5}) {
    for (double x : {0.5, 2.0, 7.0}) {
      const double ref = std::cyl_bessel_k(nu, x);
      EXPECT_NEAR(bessel_k(nu, x), ref, 1e-12 * ref) << "nu=" << nu << " x=" << x;
    }
  }
}

TEST(BesselK, DomainAndWarnings) {
  EXPECT_THROW(bessel_k(0.5, 0.0), DomainError);
  EXPECT_THROW(bessel_k(0.5, -1.0), DomainError);
  Warnings w;
  bessel_k(0.25, 1e-8, &w);
  EXPECT_EQ(w.size(), 1u);
}

TEST(Airy, FrozenValuesAndContinuity) {
  EXPECT_NEAR(airy_ai(0.0), 0.355028053887817239, 1e-15);
  EXPECT_NEAR(airy_ai(1.0), 0.135292416312881416, 1e-15);
  EXPECT_NEAR(airy_ai(2.0), 0.0349241304232743791, 1e-15);
  // Series and Bessel branches meet at x = 1; Ai'(1) ≈ -0.159.
  EXPECT_NEAR(airy_ai(1.0 - 1e-12) - airy_ai(1.0 + 1e-12), 2e-12 * 0.15914744129679328, 1e-14);
  EXPECT_THROW(airy_ai(-0.5), DomainError);
}

TEST(Parallel, ThreadLimitHonoursEnvironment) {
  EXPECT_GE(thread_limit(), 1);
  std::vector<int> hits(1000, 0);
  parallel_for(1000, [&](int i) { hits[i] += 1; }, 1);
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(100, [](int i) { if (i == 37) throw DomainError("x"); }, 1), DomainError);
}
