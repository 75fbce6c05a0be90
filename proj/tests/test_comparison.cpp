#include <doctest.h>

#include <cmath>
#include <functional>

#include "collarlab/comparison.hpp"

using namespace collarlab;

TEST_CASE("kobayashi and caratheodory ball norms") {
  CHECK(kobayashi_ball(2.0, Complex(1, 0)) == 1.0);
  CHECK(kobayashi_ball(6.0, Complex(1, 0)) == doctest::Approx(1.0 / 3.0));
  CHECK(kobayashi_ball(2.0, Complex(0, 0)) == 0.0);
  CHECK(caratheodory_ball(1.0, Complex(3, 0)) == doctest::Approx(6.0));
  CHECK(caratheodory_ball(2.0, Complex(1, 0)) == kobayashi_ball(2.0, Complex(1, 0)));
  CHECK_THROWS_AS(kobayashi_ball(-1.0, Complex(1, 0)), domain_error);
}

TEST_CASE("bers pinch bounds") {
  auto [lo, hi] = bers_pinch_bounds(Complex(1, 0));
  CHECK(lo == doctest::Approx(1.0 / 3.0));
  CHECK(hi == doctest::Approx(1.0));
  auto [lo0, hi0] = bers_pinch_bounds(Complex(0, 0));
  CHECK(lo0 == 0.0);
  CHECK(hi0 == 0.0);
  // linear in |v|, and brackets every ball value for rho in [2, 6]
  auto [lo2, hi2] = bers_pinch_bounds(Complex(2, 0));
  CHECK(lo2 == doctest::Approx(2 * lo));
  CHECK(hi2 == doctest::Approx(2 * hi));
  for (Real rho = 2.0; rho <= 6.0; rho += 0.25) {
    const Real exact = kobayashi_ball(rho, Complex(1, 0));
    CHECK(lo <= exact + 1e-15);
    CHECK(exact <= hi + 1e-15);
  }
}

TEST_CASE("bergman kernel of the disk") {
  const DomainModel disk = DomainModel::disk();
  CHECK(bergman_kernel_numeric(disk, Complex(0, 0), 8) ==
        doctest::Approx(1.0 / kPi).epsilon(1e-10));
  CHECK(bergman_kernel_numeric(disk, Complex(0.5, 0), 50) ==
        doctest::Approx(16.0 / (9.0 * kPi)).epsilon(1e-6));
  // partial sums are monotone nondecreasing in the basis size
  Real prev = 0.0;
  for (int N = 8; N <= 48; N += 8) {
    const Real k = bergman_kernel_numeric(disk, Complex(0.5, 0.2), N);
    CHECK(k >= prev - 1e-15);
    prev = k;
  }
  // shrinking the domain increases the kernel
  const DomainModel big = DomainModel::ball(2.0);
  const Complex z(0.4, 0.1);
  CHECK(bergman_kernel_numeric(disk, z, 40) >= bergman_kernel_numeric(big, z, 40));
  // rotation invariance on the disk
  CHECK(bergman_kernel_numeric(disk, std::polar(0.3, 1.1), 40) ==
        doctest::Approx(bergman_kernel_numeric(disk, Complex(0.3, 0), 40)).epsilon(1e-12));
  CHECK_THROWS_AS(bergman_kernel_numeric(disk, Complex(0, 0), 2), config_error);
}

TEST_CASE("bergman kernel of an annulus is positive and monotone in N") {
  const DomainModel ann = DomainModel::annulus(0.3, 1.0);
  Real prev = 0.0;
  for (int N = 4; N <= 20; N += 4) {
    const Real k = bergman_kernel_numeric(ann, Complex(0.6, 0), N);
    CHECK(k >= prev - 1e-15);
    prev = k;
  }
  CHECK(prev > 0.0);
}

TEST_CASE("bergman metric of the disk") {
  const DomainModel disk = DomainModel::disk();
  CHECK(bergman_metric_numeric(disk, Complex(0, 0), 50) == doctest::Approx(2.0).epsilon(1e-4));
  // caratheodory <= 2 bergman at the center
  const Real C = caratheodory_ball(1.0, Complex(1, 0));
  const Real B = std::sqrt(bergman_metric_numeric(disk, Complex(0, 0), 50));
  CHECK(C <= 2.0 * B + 1e-9);
}

TEST_CASE("teichmuller conorm of the leading quadratic differential") {
  BeltramiFamily fam = make_model_family(1, 1, {Complex(1e-6, 0)}, {}, {});
  const FamilyGrids grids = make_family_grids(fam, 256, 4);
  const CollarGrid& g = *grids[0];
  // scaled |phi| = r^{-2}/pi; closed form 2 (log r range) = 2 (tau range)/u
  const Real expect = 2.0 * (g.xi_hi - g.xi_lo) / fam.u[0];
  CHECK(teichmuller_conorm(fam, 0, grids) == doctest::Approx(expect).epsilon(1e-6));
  // homogeneity
  BeltramiFamily doubled = fam;
  doubled.quad.beta(0, 0) *= 2.0;
  CHECK(teichmuller_conorm(doubled, 0, grids) ==
        doctest::Approx(2.0 * expect).epsilon(1e-6));
  // a direction with no quadratic data has zero conorm
  BeltramiFamily two = make_model_family(1, 2, {Complex(1e-6, 0)}, {Complex(0.01, 0)}, {});
  const FamilyGrids g2 = make_family_grids(two, 256, 4);
  CHECK(teichmuller_conorm(two, 1, g2) == 0.0);
}

namespace {

MetricField synthetic_field(std::function<Real(Real)> entry) {
  MetricField f;
  for (Real u : {0.3, 0.2, 0.12, 0.08, 0.05}) {
    SweepPoint p;
    p.u = u;
    p.t_abs = std::exp(-kPi / u);
    p.g = MatrixXcd::Constant(1, 1, Complex(entry(u), 0));
    f.push_back(p);
  }
  return f;
}

}  // namespace

TEST_CASE("schwarz check verdicts") {
  const MetricField g = synthetic_field([](Real u) { return u * u; });
  SchwarzReport same = schwarz_check(g, g);
  CHECK(same.sup_ratio == doctest::Approx(1.0));
  CHECK(same.bounded);

  // h/g ~ u: bounded toward the boundary
  const MetricField h = synthetic_field([](Real u) { return u * u * u; });
  SchwarzReport ok = schwarz_check(g, h);
  CHECK(ok.bounded);
  CHECK(ok.fitted_exponent == doctest::Approx(1.0).epsilon(1e-6));

  // h/g ~ 1/u: no finite constant, fitted exponent -1
  SchwarzReport bad = schwarz_check(h, g);
  CHECK_FALSE(bad.bounded);
  CHECK(bad.fitted_exponent == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("equivalence report verdicts and reciprocity") {
  const MetricField a = synthetic_field([](Real) { return 2.0; });
  const MetricField b = synthetic_field([](Real u) { return 2.0 * (1.0 + 0.05 * u); });
  EquivalenceReport eq = equivalence_report(a, b, 32.0, 0.7, "a", "b");
  CHECK(eq.verdict == EquivalenceReport::kEquivalent);
  CHECK(eq.global_min <= eq.global_max);

  EquivalenceReport ba = equivalence_report(b, a, 32.0, 0.7, "b", "a");
  CHECK(eq.global_min == doctest::Approx(1.0 / ba.global_max).epsilon(1e-10));
  CHECK(eq.global_max == doctest::Approx(1.0 / ba.global_min).epsilon(1e-10));

  // a pure power-law ratio is flagged even when the constants fit
  const MetricField pw = synthetic_field([](Real u) { return 2.0 * u; });
  EquivalenceReport deg = equivalence_report(pw, a, 32.0, 0.7, "pw", "a");
  CHECK(deg.verdict == EquivalenceReport::kNotEquivalent);
  CHECK(deg.fitted_exponent == doctest::Approx(1.0).epsilon(1e-6));

  // identical fields compare with constants [1,1]
  EquivalenceReport same = equivalence_report(a, a, 32.0, 0.7, "a", "a");
  CHECK(same.global_min == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(same.global_max == doctest::Approx(1.0).epsilon(1e-12));

  MetricField single(1, a[0]);
  EquivalenceReport ins = equivalence_report(single, single, 32.0, 0.7, "a", "a");
  CHECK(ins.verdict == EquivalenceReport::kInsufficient);

  MetricField mismatched(a.begin(), a.begin() + 3);
  CHECK_THROWS_AS(equivalence_report(mismatched, a, 32.0, 0.7, "x", "y"), config_error);
}
