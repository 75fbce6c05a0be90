#include <doctest.h>

#include <cmath>

#include "collarlab/collar.hpp"
#include "collarlab/sections.hpp"

using namespace collarlab;

TEST_CASE("collar density closed form") {
  CollarChart chart(0.2, 0.5);
  const Real r_geo = chart.geodesic_radius();
  // at tau = -pi/2 the density is u^2 / (2 r^2)
  CHECK(collar_density(chart, r_geo) * r_geo * r_geo == doctest::Approx(0.02).epsilon(1e-12));

  const Real u6 = u_from_t(Complex(1e-6, 0.0));
  CollarChart deep(u6, 0.5);
  const Real rg = deep.geodesic_radius();
  CHECK(collar_density(deep, rg) * rg * rg ==
        doctest::Approx(0.5 * u6 * u6).epsilon(1e-12));
  CHECK(0.5 * u6 * u6 == doctest::Approx(0.025856).epsilon(1e-4));

  // density independent of angle by construction: function of r only
  CHECK_THROWS_AS(collar_density(chart, chart.r_outer() * 1.01), domain_error);
  CHECK_THROWS_AS(collar_density(chart, chart.r_inner() * 0.99), domain_error);
}

TEST_CASE("cusp density closed form") {
  CuspChart cusp(0.9);
  CHECK(cusp_density(cusp, Complex(std::exp(-1.0), 0.0)) ==
        doctest::Approx(std::exp(2.0) / 2.0).epsilon(1e-12));
  CHECK(cusp_density(cusp, Complex(std::exp(-2.0), 0.0)) ==
        doctest::Approx(std::exp(4.0) / 8.0).epsilon(1e-12));
  // rotation invariance
  const Complex z = std::polar(0.3, 1.234);
  CHECK(cusp_density(cusp, z) == doctest::Approx(cusp_density(cusp, Complex(0.3, 0))));
  CHECK_THROWS_AS(cusp_density(cusp, Complex(0, 0)), domain_error);
  CHECK_THROWS_AS(cusp_density(cusp, Complex(0.95, 0)), domain_error);
}

TEST_CASE("u_from_t") {
  CHECK(u_from_t(Complex(1e-6, 0)) == doctest::Approx(0.2273961).epsilon(1e-6));
  CHECK(u_from_t(Complex(1e-30, 0)) == doctest::Approx(0.04547921).epsilon(1e-6));
  // exact identity u log|t| = -pi
  for (Real lg : {-2.0, -7.5, -40.0}) {
    const Real t = std::pow(10.0, lg);
    CHECK(u_from_t(Complex(t, 0)) * std::log(t) == doctest::Approx(-kPi).epsilon(1e-14));
  }
  // strictly monotone
  Real prev = u_from_t(Complex(0.9, 0));
  for (Real t = 0.5; t > 1e-12; t *= 1e-2) {
    const Real u = u_from_t(Complex(t, 0));
    CHECK(u < prev);
    prev = u;
  }
  CHECK_THROWS_AS(u_from_t(Complex(1.5, 0)), domain_error);
}

TEST_CASE("plumbing map") {
  const Complex t(1e-4, 0);
  CHECK(std::abs(plumbing_map(Complex(0.1, 0), t, 0.5) - Complex(1e-3, 0)) < 1e-18);
  // sqrt(t) is fixed
  const Complex sq = std::sqrt(t);
  CHECK(std::abs(plumbing_map(sq, t, 0.5) - sq) < 1e-18);
  // involution on a few points in the annulus
  for (Real r : {3e-4, 1e-2, 0.4}) {
    const Complex eta = std::polar(r, 0.7);
    const Complex back = plumbing_map(plumbing_map(eta, t, 0.5), t, 0.5);
    CHECK(std::abs(back - eta) < 1e-15);
  }
  CHECK_THROWS_AS(plumbing_map(Complex(0.6, 0), t, 0.5), domain_error);
  CHECK_THROWS_AS(plumbing_map(Complex(1e-5, 0), t, 0.5), domain_error);
}

TEST_CASE("geodesic length") {
  CHECK(geodesic_length_numeric(CollarChart(0.2, 0.5), 64) ==
        doctest::Approx(2.0 * kPi * 0.2).epsilon(1e-10));
  CHECK(geodesic_length_numeric(CollarChart(0.5, 0.5), 64) == doctest::Approx(kPi).epsilon(1e-10));
  const Real a = geodesic_length_numeric(CollarChart(0.31, 0.4), 64);
  const Real b = geodesic_length_numeric(CollarChart(0.31, 0.4), 128);
  CHECK(std::abs(a - b) < 1e-12);
  CHECK_THROWS_AS(geodesic_length_numeric(CollarChart(0.2, 0.5), 8), config_error);
}

TEST_CASE("geodesic circle minimizes circumference among r-circles") {
  CollarChart chart(0.2, 0.5);
  const CollarGrid g = grid_build(chart, 257, 0);
  Real best = 1e300;
  int best_i = -1;
  for (int i = 0; i < g.size(); ++i) {
    const Real lam = collar_density(chart, g.r[i]);
    const Real circ = 2.0 * kPi * g.r[i] * std::sqrt(2.0 * lam);
    if (circ < best) {
      best = circ;
      best_i = i;
    }
  }
  // the winner sits at the node closest to tau = -pi/2
  Real dist = 1e300;
  int want = -1;
  for (int i = 0; i < g.size(); ++i)
    if (std::abs(g.xi[i] + kPi / 2) < dist) {
      dist = std::abs(g.xi[i] + kPi / 2);
      want = i;
    }
  CHECK(best_i == want);
  CHECK(best == doctest::Approx(2 * kPi * chart.u).epsilon(1e-4));
}

TEST_CASE("poincare model density") {
  CHECK(poincare_model_density(Complex(std::exp(-1.0), 0)) ==
        doctest::Approx(std::exp(2.0) / 4.0).epsilon(1e-12));
  const Real lg = 6.0 * std::log(10.0);
  CHECK(poincare_model_density(Complex(1e-6, 0)) ==
        doctest::Approx(1.0 / (4e-12 * lg * lg)).epsilon(1e-12));
  // blows up toward 0 like the closed form
  CHECK(poincare_model_density(Complex(1e-8, 0)) > poincare_model_density(Complex(1e-4, 0)));
  CHECK_THROWS_AS(poincare_model_density(Complex(1.2, 0)), domain_error);
}

TEST_CASE("grid quadrature reproduces the closed-form area") {
  for (Real u : {0.5, 0.2, 0.05, 0.025}) {
    CollarChart chart(u, 0.5);
    const CollarGrid g = grid_build(chart, 512, 2);
    const Real area = g.w_dv.sum();
    const Real exact = collar_area_closed_form(g);
    CHECK(std::abs(area / exact - 1.0) < 1e-12);  // cell weights are antiderivative-exact
  }
  // zero-width interval has zero area: two adjacent cells of a tiny band
  CollarChart chart(0.2, 0.5);
  CollarGrid g = grid_build(chart, 512, 0);
  CHECK(collar_area_closed_form(g) == doctest::Approx(g.w_dv.sum()).epsilon(1e-12));

  // a straight integrand converges at second order under refinement
  auto sin4_err = [&](int n) {
    const CollarGrid gr = grid_build(chart, n, 0);
    Real acc = 0.0;
    for (int i = 0; i < gr.size(); ++i) acc += std::pow(std::sin(gr.xi[i]), 4) * gr.w_dv[i];
    // closed form: pi u int sin^2 = pi u (range/2 - sin(2 tau)/4 |)
    const Real a = gr.xi_lo, b = gr.xi_hi;
    const Real exact =
        kPi * chart.u * (0.5 * (b - a) - 0.25 * (std::sin(2 * b) - std::sin(2 * a)));
    return std::abs(acc - exact) / exact;
  };
  const Real e1 = sin4_err(128), e2 = sin4_err(256), e3 = sin4_err(512);
  CHECK(e2 < e1);
  CHECK(e3 < e2);
}

TEST_CASE("cusp grid area") {
  CuspChart cusp(0.7);
  const CollarGrid g = grid_build_cusp(cusp, 0.05, 0.6, 256, 0);
  CHECK(std::abs(g.w_dv.sum() / collar_area_closed_form(g) - 1.0) < 1e-12);
  CHECK_THROWS_AS(grid_build_cusp(cusp, 0.6, 0.05, 256, 0), config_error);
}

TEST_CASE("ke residual vanishes on the model densities") {
  CollarChart chart(1.5, 0.8);
  const CollarGrid g512 = grid_build(chart, 512, 0, -2.40, chart.tau_max());
  const CollarGrid g256 = grid_build(chart, 256, 0, -2.40, chart.tau_max());
  const Real r512 = ke_residual(density_at_nodes(g512), g512);
  const Real r256 = ke_residual(density_at_nodes(g256), g256);
  CHECK(r512 < 1e-8);
  CHECK(r256 / r512 >= 3.5);

  CuspChart cusp(0.9);
  const CollarGrid c512 = grid_build_cusp(cusp, 0.10, 0.75, 512, 0);
  const CollarGrid c256 = grid_build_cusp(cusp, 0.10, 0.75, 256, 0);
  CHECK(ke_residual(density_at_nodes(c512), c512) < 1e-8);
  CHECK(ke_residual(density_at_nodes(c256), c256) /
            ke_residual(density_at_nodes(c512), c512) >=
        3.5);
  CHECK_THROWS_AS(grid_build(chart, 128, 0, chart.tau_min() - 1.0, chart.tau_max()),
                  config_error);
}

TEST_CASE("ke residual of a constant density is 1") {
  CollarChart chart(0.3, 0.4);
  const CollarGrid g = grid_build(chart, 128, 0);
  const VectorXd ones = VectorXd::Ones(g.size());
  CHECK(ke_residual(ones, g) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ke residual configuration errors") {
  CollarChart chart(0.3, 0.4);
  const CollarGrid g = grid_build(chart, 8, 0);
  CHECK_THROWS_AS(ke_residual(VectorXd::Ones(4), g), config_error);
  CHECK_THROWS_AS(ke_residual(VectorXd::Ones(g.size()), g, 3), config_error);
  CHECK_THROWS_AS(ke_residual(-VectorXd::Ones(g.size()), g), domain_error);
}

TEST_CASE("chart invariants") {
  CollarChart chart(0.2, 0.5);
  CHECK(chart.tau_min() > -kPi);
  CHECK(chart.tau_max() < 0.0);
  CHECK(chart.tau_of_r(chart.geodesic_radius()) == doctest::Approx(-kPi / 2).epsilon(1e-14));
  CHECK(chart.rho() == doctest::Approx(std::exp(-kPi / chart.u)).epsilon(1e-15));
  // tau strictly increasing in r
  Real prev = -1e9;
  for (Real r = chart.r_inner() * 1.01; r < chart.r_outer(); r *= 1.3) {
    CHECK(chart.tau_of_r(r) > prev);
    prev = chart.tau_of_r(r);
  }
  CHECK_THROWS_AS(CollarChart(-0.1, 0.5), domain_error);
  CHECK_THROWS_AS(CollarChart(0.1, 1.5), domain_error);
}

TEST_CASE("pinching point bookkeeping") {
  PinchingPoint pt;
  pt.t = {Complex(1e-6, 0), Complex(1e-8, 0)};
  pt.s = {Complex(0.01, 0)};
  CHECK(pt.m() == 2);
  CHECK(pt.n() == 3);
  CHECK(pt.u0() == doctest::Approx(u_from_t(pt.t[0]) + u_from_t(pt.t[1]) + 0.01));
  pt.validate(0.9);
  pt.t[0] = Complex(0, 0);
  CHECK_THROWS_AS(pt.validate(0.9), domain_error);
}

TEST_CASE("near-zero-width band has near-zero area") {
  CollarChart chart(0.2, 0.5);
  const Real mid = -kPi / 2;
  const CollarGrid g = grid_build(chart, 8, 0, mid, mid + 1e-9);
  CHECK(g.w_dv.sum() < 1e-8);
  CHECK(g.w_dv.sum() == doctest::Approx(collar_area_closed_form(g)).epsilon(1e-9));
}
