#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "support.hpp"
#include "tgk/operators.hpp"

using namespace tgk;
using tgk_test::for_all;
using tgk_test::Gen;

namespace {

std::vector<SpectralOperator> all_kinds() {
  return {SpectralOperator::dirichlet_interval(1.5), SpectralOperator::neumann_interval(2.0),
          SpectralOperator::star_graph(3), SpectralOperator::involution(0.3),
          SpectralOperator::jacobi_fractional(0.25)};
}

// Gram matrix of the first K modes by the operator's own quadrature.
double orthonormality_defect(const SpectralOperator& op, int K) {
  const OperatorQuadrature q = op.quadrature(K);
  double worst = 0.0;
  for (int a = 0; a < K; ++a) {
    for (int b = a; b < K; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < q.points.size(); ++i) {
        s += q.weights[i] * op.eigenfunction(op.first_mode() + a, q.points[i]) *
             op.eigenfunction(op.first_mode() + b, q.points[i]);
      }
      worst = std::max(worst, std::fabs(s - (a == b ? 1.0 : 0.0)));
    }
  }
  return worst;
}

}  // namespace

TEST(SpectralOperator, EigenfunctionsAreOrthonormal) {
  for (const auto& op : all_kinds()) EXPECT_LT(orthonormality_defect(op, 32), 1e-11) << op.name();
  EXPECT_LT(orthonormality_defect(SpectralOperator::star_graph(5), 24), 1e-11);
}

TEST(SpectralOperator, EigenvaluesArePositiveAndIncreasing) {
  for (const auto& op : all_kinds()) {
    double prev = -1.0;
    for (int k = op.first_mode(); k < op.first_mode() + 40; ++k) {
      const double l = op.eigenvalue(k);
      if (op.kind() != OperatorKind::involution) EXPECT_GT(l, prev) << op.name() << " k=" << k;
      EXPECT_GE(l, 0.0);
      EXPECT_NEAR(op.sqrt_eigenvalue(k) * op.sqrt_eigenvalue(k), l, 1e-12 * std::max(1.0, l));
      prev = l;
    }
  }
  EXPECT_TRUE(SpectralOperator::neumann_interval(1.0).has_zero_eigenvalue());
  EXPECT_EQ(SpectralOperator::neumann_interval(1.0).eigenvalue(0), 0.0);
}

TEST(SpectralOperator, ClosedFormEigenvalues) {
  EXPECT_NEAR(SpectralOperator::dirichlet_interval(1.0).eigenvalue(3), 9.0 * std::numbers::pi * std::numbers::pi, 1e-12);
  EXPECT_NEAR(SpectralOperator::star_graph(4).eigenvalue(2), 2.25, 1e-15);
  // λ_k = Γ(k+μ)/Γ(k-μ); k = 1, μ = 1/2 gives Γ(3/2)/Γ(1/2) = 1/2.
  EXPECT_NEAR(SpectralOperator::jacobi_fractional(0.5).eigenvalue(1), 0.5, 1e-14);
}

TEST(SpectralOperator, ConstructionErrors) {
  EXPECT_THROW(SpectralOperator::dirichlet_interval(0.0), InvalidParams);
  EXPECT_THROW(SpectralOperator::star_graph(1), InvalidParams);
  EXPECT_THROW(SpectralOperator::involution(1.0), InvalidParams);
  EXPECT_THROW(SpectralOperator::jacobi_fractional(1.0), InvalidParams);
  EXPECT_THROW(SpectralOperator::dirichlet_interval(1.0).eigenvalue(0), DomainError);
  EXPECT_THROW(SpectralOperator::dirichlet_interval(1.0).eigenfunction(1, {0, 2.0}), DomainError);
  EXPECT_THROW(SpectralOperator::star_graph(3).eigenfunction(1, {3, 0.5}), DomainError);
}

TEST(MakeOperator, NamedKindsAndErrors) {
  EXPECT_EQ(make_operator("star_graph", {{"edges", 4.0}}).edge_count(), 4);
  EXPECT_EQ(make_operator("neumann_interval", {}).first_mode(), 0);
  EXPECT_THROW(make_operator("star_graph", {{"edges", 2.5}}), InvalidParams);
  EXPECT_THROW(make_operator("torus", {}), InvalidParams);
}

TEST(Projection, RecoversFiniteExpansionsProperty) {
  for_all(20, 31, [](Gen& g) {
    const auto ops = all_kinds();
    const SpectralOperator& op = ops[g.integer(0, static_cast<int>(ops.size()) - 1)];
    const int K = g.integer(3, 12);
    std::vector<double> c(K);
    for (double& v : c) v = g.uniform(-1.0, 1.0);
    const BoundaryFunction phi = [&](const DomainPoint& p) {
      double s = 0.0;
      for (int j = 0; j < K; ++j) s += c[j] * op.eigenfunction(op.first_mode() + j, p);
      return s;
    };
    const CoefficientVector got = project_boundary_data(phi, op, K + 4);
    for (int j = 0; j < K + 4; ++j) EXPECT_NEAR(got.values[j], j < K ? c[j] : 0.0, 1e-11) << op.name() << " j=" << j;
    EXPECT_LT(got.parseval_defect, 1e-11);
  });
}

TEST(Projection, SampledDataMatchesCallableProjection) {
  const SpectralOperator op = SpectralOperator::dirichlet_interval(1.0);
  const int n = 2049;
  std::vector<double> s(n);
  for (int i = 0; i < n; ++i) {
    const double y = static_cast<double>(i) / (n - 1);
    s[i] = y * (1.0 - y);
  }
  const CoefficientVector a = project_sampled_data(s, op, 16);
  // ⟨y(1-y), √2 sin kπy⟩ = 4√2/(kπ)³ for odd k, 0 for even k.
  for (int k = 1; k <= 16; ++k) {
    const double ref = k % 2 == 1 ? 4.0 * std::sqrt(2.0) / std::pow(k * std::numbers::pi, 3) : 0.0;
    EXPECT_NEAR(a.coefficient(k), ref, 1e-10) << "k=" << k;
  }
  EXPECT_LT(a.parseval_defect, 1e-6);
}

TEST(Projection, UnderResolvedSamplesRaise) {
  const SpectralOperator op = SpectralOperator::dirichlet_interval(1.0);
  const std::vector<double> s(33, 1.0);
  EXPECT_THROW(project_sampled_data(s, op, 64), ResolutionError);
  EXPECT_THROW(project_sampled_data(s, SpectralOperator::jacobi_fractional(0.3), 4), DomainError);
  EXPECT_THROW(project_boundary_data([](const DomainPoint&) { return 1.0; }, op, 0), DomainError);
}

TEST(CoefficientVector, NormsAndLookup) {
  const SpectralOperator op = SpectralOperator::star_graph(3);
  CoefficientVector c;
  c.first_mode = 1;
  c.values = {3.0, 4.0};
  EXPECT_DOUBLE_EQ(c.l2_norm(), 5.0);
  EXPECT_DOUBLE_EQ(c.hl_norm(op), std::hypot(0.25 * 3.0, 2.25 * 4.0));
  EXPECT_EQ(c.coefficient(0), 0.0);
  EXPECT_EQ(c.coefficient(3), 0.0);
}

TEST(SymbolSpec, ValuesAndNegativity) {
  const double xi2[2] = {3.0, 4.0};
  EXPECT_DOUBLE_EQ(SymbolSpec::laplacian(2)(std::span<const double>(xi2, 2)), 25.0);
  EXPECT_NEAR(SymbolSpec::fractional_laplacian(2, 0.5)(std::span<const double>(xi2, 2)), 5.0, 1e-14);
  EXPECT_EQ(SymbolSpec::fractional_laplacian(1, 0.5)(0.0), 0.0);
  const SymbolSpec bad = SymbolSpec::polynomial(1, {Monomial{{1, 0}, 1.0}});
  EXPECT_NO_THROW(bad(2.0));
  EXPECT_THROW(bad(-2.0), NegativeSymbolError);
  EXPECT_THROW(SymbolSpec::laplacian(3), InvalidParams);
  EXPECT_THROW(SymbolSpec::fractional_laplacian(1, 1.0), InvalidParams);
  EXPECT_THROW(SymbolSpec::polynomial(1, {Monomial{{0, 2}, 1.0}}), InvalidParams);
  EXPECT_THROW(SymbolSpec::laplacian(2)(1.0), DomainError);
  EXPECT_THROW(make_symbol("fractional_laplacian", 1, {}), InvalidParams);
  EXPECT_THROW(make_symbol("biharmonic", 1, {}), InvalidParams);
}

TEST(SymbolSpec, PolynomialMatchesLaplacianProperty) {
  const SymbolSpec poly = SymbolSpec::polynomial(2, {Monomial{{2, 0}, 1.0}, Monomial{{0, 2}, 1.0}});
  const SymbolSpec lap = SymbolSpec::laplacian(2);
  for_all(50, 32, [&](Gen& g) {
    const double xi[2] = {g.uniform(-50.0, 50.0), g.uniform(-50.0, 50.0)};
    const std::span<const double> v(xi, 2);
    EXPECT_NEAR(poly(v), lap(v), 1e-12 * lap(v));
  });
}
