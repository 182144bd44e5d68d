#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "support.hpp"
#include "tgk/fraccalc.hpp"

using namespace tgk;
using tgk_test::for_all;
using tgk_test::Gen;

TEST(Grid1D, RejectsDegenerateGrids) {
  EXPECT_THROW(Grid1D(0.0, 10), DomainError);
  EXPECT_THROW(Grid1D(1.0, 2), DomainError);
  EXPECT_THROW(Grid1D(INFINITY, 10), DomainError);
  const Grid1D g(2.0, 5);
  EXPECT_DOUBLE_EQ(g.h(), 0.5);
  EXPECT_EQ(g.x(4), 2.0);
}

TEST(SampledFunction, RejectsSizeMismatch) {
  EXPECT_THROW(SampledFunction(Grid1D(1.0, 5), std::vector<double>(4)), DomainError);
}

TEST(CaputoL1, RejectsOrderOutsideUnitInterval) {
  const SampledFunction f = SampledFunction::sample(Grid1D(1.0, 9), [](double x) { return x; });
  EXPECT_THROW(caputo_l1(f, 0.0), DomainError);
  EXPECT_THROW(caputo_l1(f, 1.5), DomainError);
}

TEST(CaputoL1, ExactOnAffineFunctionsProperty) {
  // ∂^α (a + b x) = b x^{1-α}/Γ(2-α); the scheme is exact on piecewise linears.
  for_all(50, 21, [](Gen& g) {
    const double alpha = g.uniform(0.05, 1.0);
    const double a = g.uniform(-3.0, 3.0), b = g.uniform(-3.0, 3.0);
    const int n = g.integer(5, 200);
    const SampledFunction f = SampledFunction::sample(Grid1D(g.uniform(0.5, 4.0), n), [&](double x) { return a + b * x; });
    const SampledFunction d = caputo_l1(f, alpha);
    EXPECT_EQ(d[0], 0.0);
    for (int i = 1; i < n; ++i) {
      const double x = f.grid.x(i);
      const double ref = b * std::pow(x, 1.0 - alpha) / std::tgamma(2.0 - alpha);
      EXPECT_NEAR(d[i], ref, 1e-11 * std::max(1.0, std::fabs(ref))) << "alpha=" << alpha << " i=" << i;
    }
  });
}

TEST(CaputoL1, AlphaOneIsBackwardDifference) {
  const SampledFunction f = SampledFunction::sample(Grid1D(1.0, 11), [](double x) { return std::sin(3.0 * x); });
  const SampledFunction d = caputo_l1(f, 1.0);
  for (int i = 1; i < f.size(); ++i) EXPECT_NEAR(d[i], (f[i] - f[i - 1]) / f.grid.h(), 1e-12);
}

TEST(CaputoL1, OrderTwoMinusAlphaOnSquare) {
  // ∂^α x² = 2 x^{2-α}/Γ(3-α).
  for (double alpha : {0.3, 0.6, 0.9}) {
    std::vector<double> hs, errs;
    for (int lv = 5; lv <= 9; ++lv) {
      const Grid1D g(1.0, (1 << lv) + 1);
      const SampledFunction d = caputo_l1(SampledFunction::sample(g, [](double x) { return x * x; }), alpha);
      double err = 0.0;
      for (int i = 0; i < g.num_points; ++i) {
        const double x = g.x(i);
        err = std::max(err, std::fabs(d[i] - 2.0 * std::pow(x, 2.0 - alpha) / std::tgamma(3.0 - alpha)));
      }
      hs.push_back(g.h());
      errs.push_back(err);
    }
    EXPECT_GT(empirical_order(hs, errs), 2.0 - alpha - 0.1) << "alpha=" << alpha;
  }
}

TEST(CaputoL1, CorrectedSchemeExactOnListedPowersProperty) {
  for_all(30, 22, [](Gen& g) {
    const double alpha = g.uniform(0.55, 0.95);
    const double sigma = g.uniform(0.1, 0.9);
    const double c0 = g.uniform(-1.0, 1.0), c1 = g.uniform(-1.0, 1.0), c2 = g.uniform(-1.0, 1.0);
    const std::vector<double> ex = {sigma};
    const Grid1D grid(1.0, 65);
    const SampledFunction f =
        SampledFunction::sample(grid, [&](double x) { return c0 + c1 * x + c2 * std::pow(x, sigma); });
    const SampledFunction d = caputo_l1(f, alpha, ex);
    const double gs = std::tgamma(1.0 + sigma) / std::tgamma(1.0 + sigma - alpha);
    for (int i = 1; i < grid.num_points; ++i) {
      const double x = grid.x(i);
      const double ref = c1 * std::pow(x, 1.0 - alpha) / std::tgamma(2.0 - alpha) + c2 * gs * std::pow(x, sigma - alpha);
      EXPECT_NEAR(d[i], ref, 1e-9 * std::max(1.0, std::fabs(ref))) << "sigma=" << sigma << " i=" << i;
    }
  });
}

TEST(CaputoL1, TooManyCorrectionsRaise) {
  const SampledFunction f = SampledFunction::sample(Grid1D(1.0, 3), [](double x) { return x; });
  const std::vector<double> ex = {0.2, 0.4, 0.6};
  EXPECT_THROW(caputo_l1(f, 0.5, ex), ResolutionError);
}

TEST(KsModeExponents, SkipIntegersAndStopBelowTwo) {
  EXPECT_EQ(ks_mode_exponents(0.75, 0.0), (std::vector<double>{0.75, 1.5}));
  EXPECT_EQ(ks_mode_exponents(0.6, 0.4), std::vector<double>{});
  const std::vector<double> half = ks_mode_exponents(0.5, 0.0);
  EXPECT_EQ(half, (std::vector<double>{0.5, 1.5}));
  EXPECT_TRUE(ks_mode_exponents(1.0, 0.0).empty());
}

TEST(SequentialResidual, ExponentialSolvesSecondOrderEquation) {
  // α = 1, β = 0: u = e^{-x} satisfies u'' = u; two backward differences are O(h).
  std::vector<double> hs, errs;
  for (int lv = 6; lv <= 9; ++lv) {
    const Grid1D g(1.0, (1 << lv) + 1);
    const SampledFunction f = SampledFunction::sample(g, [](double x) { return std::exp(-x); });
    hs.push_back(g.h());
    errs.push_back(residual_sequential(f, 1.0, 0.0, 1.0).max_residual);
  }
  EXPECT_GT(empirical_order(hs, errs), 0.9);
  EXPECT_LT(errs.back(), 1e-2);
}

TEST(SequentialResidual, RejectsInvalidParameters) {
  const SampledFunction f = SampledFunction::sample(Grid1D(1.0, 9), [](double x) { return x; });
  EXPECT_THROW(residual_sequential(f, 0.75, -0.8, 1.0), DomainError);
  EXPECT_THROW(residual_sequential(f, 0.75, 0.0, -1.0), DomainError);
}

TEST(EmpiricalOrder, RecoversPowerLawSlopeProperty) {
  for_all(40, 23, [](Gen& g) {
    const double p = g.uniform(0.2, 4.0), c = g.uniform(0.1, 10.0);
    std::vector<double> hs, es;
    for (int i = 0; i < g.integer(2, 8); ++i) {
      const double h = std::ldexp(1.0, -i - 2);
      hs.push_back(h);
      es.push_back(c * std::pow(h, p));
    }
    EXPECT_NEAR(empirical_order(hs, es), p, 1e-10);
  });
  const std::vector<double> one = {0.1};
  EXPECT_THROW(empirical_order(one, one), DomainError);
}
