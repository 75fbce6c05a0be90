#include <doctest.h>

#include <cmath>
#include <functional>

#include "collarlab/sections.hpp"

using namespace collarlab;

namespace {

std::shared_ptr<const CollarGrid> make_grid(Real u, Real c, int n, int K) {
  return std::make_shared<const CollarGrid>(grid_build(CollarChart(u, c), n, K));
}

Section radial_section(std::shared_ptr<const CollarGrid> g, int mode, int weight,
                       std::function<Complex(Real)> f) {
  Section s(weight, g);
  const int K = g->n_modes;
  for (int i = 0; i < g->size(); ++i) s.coef(mode + K, i) = f(g->xi[i]);
  return s;
}

// interior max-abs difference, skipping nodes near the ends where the
// one-sided stencils live
Real interior_diff(const Section& got, int mode, std::function<Complex(Real)> expect,
                   int margin = 4) {
  const CollarGrid& g = *got.grid;
  const int K = got.K();
  Real worst = 0.0;
  for (int i = margin; i < g.size() - margin; ++i)
    worst = std::max(worst, std::abs(got.coef(mode + K, i) - expect(g.xi[i])));
  return worst;
}

}  // namespace

TEST_CASE("maass K kills constants and is linear") {
  auto g = make_grid(0.2, 0.5, 256, 3);
  Section one = radial_section(g, 0, 0, [](Real) { return 1.0; });
  Section k0 = maass_K(0, one);
  CHECK(k0.weight == 1);
  CHECK(k0.coef.cwiseAbs().maxCoeff() < 1e-12);
  Section l0 = maass_L(0, one);
  CHECK(l0.weight == -1);
  CHECK(l0.coef.cwiseAbs().maxCoeff() < 1e-12);

  Section f = radial_section(g, 1, 0, [](Real t) { return std::sin(t) * std::sin(t); });
  Section lhs = maass_K(0, Complex(2.5, 0.5) * f);
  Section rhs = Complex(2.5, 0.5) * maass_K(0, f);
  CHECK((lhs.coef - rhs.coef).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(maass_K(1, f), config_error);
}

TEST_CASE("maass K matches the chain-rule closed form and a finite-difference oracle") {
  auto g = make_grid(0.2, 0.5, 4096, 2);
  const Real u = g->scale;
  Section f = radial_section(g, 0, 0, [](Real t) { return std::sin(t) * std::sin(t); });
  Section K0f = maass_K(0, f);
  const VectorXd rho = rho_at_nodes(*g);

  // closed form: rho^{-1} (u/(2z)) sin(2 tau) lives at mode -1
  Real worst = 0.0;
  for (int i = 4; i < g->size() - 4; ++i) {
    const Complex expect = u * std::sin(2.0 * g->xi[i]) / (2.0 * g->r[i] * rho[i]);
    worst = std::max(worst, std::abs(K0f.coef(-1 + K0f.K(), i) - expect));
  }
  CHECK(worst < 1e-6);

  // independent oracle: 4th-order finite differences of the sampled field
  Real worst_fd = 0.0;
  const Real h = g->h;
  for (int i = 4; i < g->size() - 4; ++i) {
    const Real d1 = (f.coef(f.K(), i - 2).real() - 8 * f.coef(f.K(), i - 1).real() +
                     8 * f.coef(f.K(), i + 1).real() - f.coef(f.K(), i + 2).real()) /
                    (12 * h);
    const Complex expect = u * d1 / (2.0 * g->r[i] * rho[i]);
    worst_fd = std::max(worst_fd, std::abs(K0f.coef(-1 + K0f.K(), i) - expect));
  }
  CHECK(worst_fd < 1e-6);
}

TEST_CASE("conjugation pairs K and L on real radial data") {
  auto g = make_grid(0.25, 0.4, 512, 2);
  Section f = radial_section(g, 0, 0, [](Real t) { return std::cos(t); });
  Section lhs = maass_L(0, f);
  Section rhs = conj_section(maass_K(0, f));
  CHECK((lhs.coef - rhs.coef).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("L1 K0 composition reduces to the weighted Laplacian") {
  auto g = make_grid(0.2, 0.5, 8192, 1);
  Section f = radial_section(g, 0, 0, [](Real t) { return std::sin(t) * std::sin(t); });
  Section comp = maass_L(1, maass_K(0, f));
  // rho^{-2} dzbar dz sin^2 = (sin^2 tau / 2) * 2cos(2 tau)
  const Real err = interior_diff(comp, 0, [](Real t) {
    const Real s = std::sin(t);
    return Complex(s * s * std::cos(2 * t), 0.0);
  });
  CHECK(err < 2e-5);
}

TEST_CASE("box matches the exact radial reduction") {
  auto g = make_grid(0.2, 0.5, 2048, 1);
  Section f = radial_section(g, 0, 0, [](Real t) { return std::sin(t) * std::sin(t); });
  Section bf = box(f);
  // Box(sin^2) = -(sin^2/2) * 2 cos 2tau = -sin^2 cos 2tau
  const Real err = interior_diff(bf, 0, [](Real t) {
    const Real s = std::sin(t);
    return Complex(-s * s * std::cos(2 * t), 0.0);
  });
  CHECK(err < 1e-8);

  Section one = radial_section(g, 0, 0, [](Real) { return 1.0; });
  CHECK(box(one).coef.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("box decouples angular modes") {
  auto g = make_grid(0.2, 0.5, 512, 4);
  Section f = radial_section(g, 3, 0, [](Real t) { return std::sin(t); });
  Section bf = box(f);
  Real off = 0.0;
  for (int k = -4; k <= 4; ++k)
    if (k != 3) off = std::max(off, mode_energy(bf, k));
  CHECK(off < 1e-24 * mode_energy(bf, 3));
}

TEST_CASE("green solve: exact interior solution and manufactured solution") {
  auto g = make_grid(0.2, 0.5, 4096, 1);
  auto exact1 = [](Real t) { return Complex(0.5 * std::sin(t) * std::sin(t), 0); };
  GreenProblem p1(radial_section(g, 0, 0, [](Real t) { return std::pow(std::sin(t), 4); }));
  p1.bc_lo[p1.f.K()] = exact1(g->xi[0]);
  p1.bc_hi[p1.f.K()] = exact1(g->xi[g->size() - 1]);
  GreenResult r1 = green_solve(p1);
  CHECK(r1.residual < 1e-12);
  Real err1 = 0.0;
  for (int i = 0; i < g->size(); ++i)
    err1 = std::max(err1, std::abs(r1.e.coef(r1.e.K(), i) - exact1(g->xi[i])));
  CHECK(err1 < 1e-6);

  auto exact2 = [](Real t) { return Complex(std::pow(std::sin(t), 3), 0); };
  GreenProblem p2(radial_section(g, 0, 0, [](Real t) {
    const Real s = std::sin(t);
    return -2.0 * s * s * s + 4.5 * std::pow(s, 5);
  }));
  p2.bc_lo[p2.f.K()] = exact2(g->xi[0]);
  p2.bc_hi[p2.f.K()] = exact2(g->xi[g->size() - 1]);
  GreenResult r2 = green_solve(p2);
  Real err2 = 0.0;
  for (int i = 0; i < g->size(); ++i)
    err2 = std::max(err2, std::abs(r2.e.coef(r2.e.K(), i) - exact2(g->xi[i])));
  CHECK(err2 < 1e-6);
}

TEST_CASE("green solve: zero data gives zero, modes decouple") {
  auto g = make_grid(0.3, 0.5, 256, 3);
  GreenProblem p(Section(0, g));
  GreenResult r = green_solve(p);
  CHECK(r.e.coef.cwiseAbs().maxCoeff() == 0.0);

  Section f = radial_section(g, 2, 0, [](Real t) { return std::sin(t); });
  GreenResult rm = green_solve(GreenProblem(f));
  for (int k = -3; k <= 3; ++k)
    if (k != 2) CHECK(mode_energy(rm.e, k) == 0.0);
  CHECK(mode_energy(rm.e, 2) > 0.0);
}

TEST_CASE("green solve discrete maximum principle") {
  auto g = make_grid(0.2, 0.5, 512, 1);
  Section f = radial_section(g, 0, 0, [](Real t) {
    const Real s = std::sin(t);
    return s * s * (1.0 + 0.3 * std::sin(3 * t)) * s * s;
  });
  GreenResult r = green_solve(GreenProblem(f));
  Real fmax = 0.0, emax = 0.0, emin = 1e300;
  for (int i = 0; i < g->size(); ++i) {
    fmax = std::max(fmax, std::abs(f.coef(f.K(), i)));
    emax = std::max(emax, std::abs(r.e.coef(r.e.K(), i)));
    emin = std::min(emin, r.e.coef(r.e.K(), i).real());
  }
  CHECK(emax <= fmax * (1 + 1e-12));  // T contracts sup norms
  CHECK(emin >= -1e-14 * fmax);       // and preserves positivity
}

TEST_CASE("box is self-adjoint on compactly supported data") {
  auto g = make_grid(0.2, 0.5, 2048, 1);
  // bump profiles vanishing identically near both ends
  auto bump = [&](Real t0, Real w) {
    return [t0, w](Real t) {
      const Real x = (t - t0) / w;
      return std::abs(x) < 1.0 ? Complex(std::pow(1 - x * x, 3), 0) : Complex(0, 0);
    };
  };
  Section f = radial_section(g, 0, 0, bump(-1.8, 0.5));
  Section h = radial_section(g, 0, 0, bump(-1.4, 0.5));
  const Complex lhs = inner_dv(box(f), h);
  const Complex rhs = inner_dv(f, box(h));
  CHECK(std::abs(lhs - rhs) < 1e-4 * std::abs(lhs));
}

TEST_CASE("xi kills constants, is linear, and matches the leading closed form") {
  auto g = make_grid(0.2, 0.5, 16384, 3);
  const Complex bbar(0.4, -0.7);
  Section A(-2, g);
  for (int i = 0; i < g->size(); ++i) {
    const Real s = std::sin(g->xi[i]);
    A.coef(2 + A.K(), i) = s * s * bbar;
  }
  Section one = radial_section(g, 0, 0, [](Real) { return 1.0; });
  CHECK(xi_apply(A, one).coef.cwiseAbs().maxCoeff() < 1e-12);

  Section f = radial_section(g, 0, 0, [](Real t) { return 0.5 * std::sin(t) * std::sin(t); });
  Section x = xi_apply(A, f);
  // xi(A, sin^2/2) = -(bbar/2) sin^4 (3cos^2 - sin^2), a pure radial function
  const Real err = interior_diff(x, 0, [bbar](Real t) {
    const Real s = std::sin(t), c = std::cos(t);
    return -0.5 * bbar * s * s * s * s * (3 * c * c - s * s);
  });
  CHECK(err < 1e-6 * std::abs(bbar));

  Section fg = f + radial_section(g, 0, 0, [](Real t) { return std::cos(t); });
  Section both = xi_apply(A, fg);
  Section sum = xi_apply(A, f) + xi_apply(A, radial_section(g, 0, 0, [](Real t) {
                                             return std::cos(t);
                                           }));
  CHECK((both.coef - sum.coef).cwiseAbs().maxCoeff() <
        1e-8 * (1.0 + both.coef.cwiseAbs().maxCoeff()));
}

TEST_CASE("Q operator: structure and term-wise closed form") {
  auto g = make_grid(0.2, 0.5, 4096, 3);
  const Real a = 0.8, b = 1.3;
  Section e_kl = radial_section(g, 0, 0, [a](Real t) { return 0.5 * a * std::sin(t) * std::sin(t); });
  Section f_kl = radial_section(g, 0, 0, [a](Real t) { return a * std::pow(std::sin(t), 4); });
  Section f = radial_section(g, 0, 0, [b](Real t) { return 0.5 * b * std::sin(t) * std::sin(t); });

  Section one = radial_section(g, 0, 0, [](Real) { return 1.0; });
  CHECK(q_apply(e_kl, f_kl, one).coef.cwiseAbs().maxCoeff() < 1e-10);

  // homogeneity degree 1 in f
  Section q1 = q_apply(e_kl, f_kl, f);
  Section q2 = q_apply(e_kl, f_kl, Complex(2, 0) * f);
  CHECK((q2.coef - 2.0 * q1.coef).cwiseAbs().maxCoeff() <
        1e-10 * q1.coef.cwiseAbs().maxCoeff());

  // closed form: Q = a b ((9/4) sin^4 - 3 sin^6)
  const Real err = interior_diff(q1, 0, [a, b](Real t) {
    const Real s = std::sin(t);
    return Complex(a * b * (2.25 * std::pow(s, 4) - 3.0 * std::pow(s, 6)), 0);
  });
  CHECK(err < 1e-5 * a * b);
}

TEST_CASE("ck norms") {
  auto g = make_grid(0.2, 0.5, 2048, 2);
  Section zero(0, g);
  CHECK(ck_norm(zero, 2, g->xi_lo, g->xi_hi) == 0.0);

  Section f = radial_section(g, 0, 0, [](Real t) { return std::sin(t) * std::sin(t); });
  CHECK(ck_norm(f, 0, g->xi_lo, g->xi_hi) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(ck_norm(f, 0, -kPi / 4, 0.0) == doctest::Approx(0.5).epsilon(1e-3));

  // |Q| <= 1 sums the identity word and the two one-letter words
  const Real manual = ck_norm(f, 0, g->xi_lo, g->xi_hi) +
                      sup_abs(maass_K(0, f), g->xi_lo, g->xi_hi) +
                      sup_abs(maass_L(0, f), g->xi_lo, g->xi_hi);
  CHECK(ck_norm(f, 1, g->xi_lo, g->xi_hi) == doctest::Approx(manual).epsilon(1e-12));

  CHECK_THROWS_AS(ck_norm(f, 3, g->xi_lo, g->xi_hi), config_error);
}

TEST_CASE("section multiply convolves modes and conj flips them") {
  auto g = make_grid(0.3, 0.5, 128, 4);
  Section a = radial_section(g, 2, -2, [](Real t) { return Complex(std::sin(t), 0.3); });
  Section b = conj_section(a);
  CHECK(b.weight == 2);
  // conj moved mode 2 to mode -2 with conjugated values
  CHECK(std::abs(b.coef(-2 + b.K(), 7) - std::conj(a.coef(2 + a.K(), 7))) < 1e-15);

  Section prod = multiply(a, b);
  CHECK(prod.weight == 0);
  // |a|^2 lands in mode 0 and is real nonnegative
  for (int i = 0; i < g->size(); ++i) {
    CHECK(prod.coef(prod.K(), i).imag() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(prod.coef(prod.K(), i).real() >= 0.0);
  }
}
