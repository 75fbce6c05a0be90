#include "collarlab/collar.hpp"

#include <algorithm>
#include <cmath>

namespace collarlab {

void CollarChart::validate() const {
  if (!(u > 0.0)) throw domain_error("CollarChart: modulus u must be positive");
  if (!(c > 0.0 && c < 1.0)) throw domain_error("CollarChart: collar constant c must lie in (0,1)");
  if (!(tau_min() < tau_max()))
    throw domain_error("CollarChart: empty annulus (u log c <= -pi/2)");
}

void CuspChart::validate() const {
  if (!(c > 0.0 && c < 1.0)) throw domain_error("CuspChart: radius bound c must lie in (0,1)");
}

Real PinchingPoint::u0() const {
  Real acc = 0.0;
  for (const Complex& ti : t) acc += u_from_t(ti);
  for (const Complex& sj : s) acc += std::abs(sj);
  return acc;
}

void PinchingPoint::validate(Real delta) const {
  Real norm2 = 0.0;
  for (const Complex& ti : t) {
    Real a = std::abs(ti);
    if (!(a > 0.0 && a < 1.0))
      throw domain_error("PinchingPoint: |t_i| must lie in (0,1)");
    norm2 += a * a;
  }
  for (const Complex& sj : s) norm2 += std::norm(sj);
  if (!(std::sqrt(norm2) < delta))
    throw domain_error("PinchingPoint: |(t,s)| exceeds configured delta");
}

Real collar_density(const CollarChart& chart, Real r) {
  if (!chart.contains_r(r))
    throw domain_error("collar_density: radius outside annulus (rho/c, c)");
  const Real tau = chart.tau_of_r(r);
  const Real s = std::sin(tau);
  return 0.5 * chart.u * chart.u / (r * r * s * s);
}

Real cusp_density(const CuspChart& chart, Complex u_coord) {
  const Real a = std::abs(u_coord);
  if (!(a > 0.0 && a < chart.c))
    throw domain_error("cusp_density: point outside punctured disk 0 < |u| < c");
  const Real lg = std::log(a);
  return 1.0 / (2.0 * a * a * lg * lg);
}

Real u_from_t(Complex t) {
  const Real a = std::abs(t);
  if (!(a > 0.0 && a < 1.0)) throw domain_error("u_from_t: |t| must lie in (0,1)");
  return -kPi / std::log(a);
}

Complex plumbing_map(Complex eta, Complex t, Real c) {
  const Real a = std::abs(eta);
  const Real tb = std::abs(t);
  if (!(c > 0.0 && c < 1.0)) throw domain_error("plumbing_map: invalid collar constant");
  if (!(a > tb / c && a < c))
    throw domain_error("plumbing_map: eta outside plumbing collar |t|/c < |eta| < c");
  return t / eta;
}

Real geodesic_length_numeric(const CollarChart& chart, int n_samples) {
  if (n_samples < 16) throw config_error("geodesic_length_numeric: need n_samples >= 16");
  const Real r = chart.geodesic_radius();
  // ds = sqrt(2 lambda) |dz|; on |z| = r the integrand is constant in theta.
  Real acc = 0.0;
  const Real dtheta = 2.0 * kPi / n_samples;
  for (int i = 0; i < n_samples; ++i) {
    const Real lam = collar_density(chart, r);
    acc += std::sqrt(2.0 * lam) * r * dtheta;
  }
  return acc;
}

Real poincare_model_density(Complex t) {
  const Real a = std::abs(t);
  if (!(a > 0.0 && a < 1.0)) throw domain_error("poincare_model_density: |t| must lie in (0,1)");
  const Real lg = std::log(a);
  return 1.0 / (4.0 * a * a * lg * lg);
}

namespace {

// Clenshaw-Curtis nodes/weights on [-1,1], exactness degree ~ n.
void clenshaw_curtis(int n, VectorXd& x, VectorXd& w) {
  x.resize(n);
  w.resize(n);
  if (n == 1) {
    x[0] = 0.0;
    w[0] = 2.0;
    return;
  }
  const int m = n - 1;
  for (int j = 0; j < n; ++j) x[j] = -std::cos(kPi * j / m);
  for (int j = 0; j < n; ++j) {
    Real acc = 1.0;
    for (int k = 1; k <= m / 2; ++k) {
      const Real bk = (2 * k == m) ? 1.0 : 2.0;
      acc -= bk * std::cos(2.0 * k * kPi * j / m) / (4.0 * k * k - 1.0);
    }
    Real wj = 2.0 * acc / m;
    if (j == 0 || j == m) wj *= 0.5;
    w[j] = wj;
  }
}

// Fill a grid given xi-bounds, the density antiderivatives and the scale.
// dv cell weight: 2*pi * integral of the dv radial density over the cell,
// dA likewise; both from exact antiderivatives.
template <class AntiDv, class AntiDA, class DvDensity, class DADensity>
CollarGrid make_grid(CollarGrid::Kind kind, Real scale, Real xi_lo, Real xi_hi, int n,
                     int n_modes, AntiDv Fdv, AntiDA FdA, DvDensity fdv, DADensity fdA) {
  if (n < 8) throw config_error("grid_build: need at least 8 radial nodes");
  if (n_modes < 0) throw config_error("grid_build: negative mode count");
  CollarGrid g;
  g.kind = kind;
  g.scale = scale;
  g.xi_lo = xi_lo;
  g.xi_hi = xi_hi;
  g.n_modes = n_modes;
  g.h = (xi_hi - xi_lo) / n;
  g.xi.resize(n);
  g.r.resize(n);
  g.w_dv.resize(n);
  g.w_dA.resize(n);
  for (int i = 0; i < n; ++i) {
    const Real a = xi_lo + i * g.h;
    const Real b = a + g.h;
    g.xi[i] = 0.5 * (a + b);
    g.r[i] = std::exp(g.xi[i] / scale);
    g.w_dv[i] = 2.0 * kPi * (Fdv(b) - Fdv(a));
    g.w_dA[i] = 2.0 * kPi * (FdA(b) - FdA(a));
  }

  // metric-data integrals converge exponentially on these analytic
  // integrands, so the CC node count saturates well below the fd resolution
  VectorXd cx, cw;
  clenshaw_curtis(std::min(n + 1, 513), cx, cw);
  const Real mid = 0.5 * (xi_lo + xi_hi), half = 0.5 * (xi_hi - xi_lo);
  g.cc_xi.resize(cx.size());
  g.cc_r.resize(cx.size());
  g.cc_w_dv.resize(cx.size());
  g.cc_w_dA.resize(cx.size());
  for (int j = 0; j < cx.size(); ++j) {
    const Real xi = mid + half * cx[j];
    g.cc_xi[j] = xi;
    g.cc_r[j] = std::exp(xi / scale);
    g.cc_w_dv[j] = 2.0 * kPi * cw[j] * half * fdv(xi);
    g.cc_w_dA[j] = 2.0 * kPi * cw[j] * half * fdA(xi);
  }
  return g;
}

}  // namespace

CollarGrid grid_build(const CollarChart& chart, int n_tau, int n_modes, Real band_lo,
                      Real band_hi) {
  chart.validate();
  const Real u = chart.u;
  const Real lo = std::isnan(band_lo) ? chart.tau_min() : band_lo;
  const Real hi = std::isnan(band_hi) ? chart.tau_max() : band_hi;
  if (!(lo >= chart.tau_min() - 1e-15 && hi <= chart.tau_max() + 1e-15 && lo < hi))
    throw config_error("grid_build: band outside the collar tau-range");
  // dv radial density: (u/2) csc^2(tau); antiderivative -(u/2) cot(tau).
  // dA radial density: r^2 / u;         antiderivative (u/2) e^{2 tau/u} / u... = r^2/2.
  auto Fdv = [u](Real tau) { return -0.5 * u / std::tan(tau); };
  auto FdA = [u](Real tau) { return 0.5 * std::exp(2.0 * tau / u); };
  auto fdv = [u](Real tau) {
    const Real s = std::sin(tau);
    return 0.5 * u / (s * s);
  };
  auto fdA = [u](Real tau) { return std::exp(2.0 * tau / u) / u; };
  return make_grid(CollarGrid::Kind::collar, u, lo, hi, n_tau, n_modes, Fdv, FdA, fdv, fdA);
}

CollarGrid grid_build_cusp(const CuspChart& chart, Real r_lo, Real r_hi, int n_tau, int n_modes) {
  chart.validate();
  if (!(r_lo > 0.0 && r_lo < r_hi && r_hi < chart.c))
    throw config_error("grid_build_cusp: need 0 < r_lo < r_hi < c");
  // xi = log r; dv radial density lambda r^2 = 1/(2 xi^2), antiderivative -1/(2 xi).
  auto Fdv = [](Real x) { return -0.5 / x; };
  auto FdA = [](Real x) { return 0.5 * std::exp(2.0 * x); };
  auto fdv = [](Real x) { return 0.5 / (x * x); };
  auto fdA = [](Real x) { return std::exp(2.0 * x); };
  return make_grid(CollarGrid::Kind::cusp, 1.0, std::log(r_lo), std::log(r_hi), n_tau,
                   n_modes, Fdv, FdA, fdv, fdA);
}

Real collar_area_closed_form(const CollarGrid& grid) {
  if (grid.kind == CollarGrid::Kind::cusp)
    return kPi * (1.0 / grid.xi_lo - 1.0 / grid.xi_hi);
  const Real u = grid.scale;
  return kPi * u * (1.0 / std::tan(grid.xi_lo) - 1.0 / std::tan(grid.xi_hi));
}

Real ke_residual(const VectorXd& density, const CollarGrid& grid, int stencil_order) {
  const int n = grid.size();
  if (density.size() != n) throw config_error("ke_residual: field/grid size mismatch");
  int half = 0;
  // Centered second-derivative weights; accumulated in long double because the
  // second difference of a slowly varying log-field cancels catastrophically.
  static const long double w2[] = {1.0L, -2.0L, 1.0L};
  static const long double w4[] = {-1.0L / 12, 16.0L / 12, -30.0L / 12, 16.0L / 12, -1.0L / 12};
  static const long double w6[] = {1.0L / 90,   -13.5L / 90, 135.0L / 90, -245.0L / 90,
                                   135.0L / 90, -13.5L / 90, 1.0L / 90};
  const long double* w = nullptr;
  switch (stencil_order) {
    case 2: w = w2; half = 1; break;
    case 4: w = w4; half = 2; break;
    case 6: w = w6; half = 3; break;
    default: throw config_error("ke_residual: stencil_order must be 2, 4 or 6");
  }
  if (n < 2 * half + 1) throw config_error("ke_residual: grid too coarse for stencil");

  std::vector<long double> logd(n);
  for (int i = 0; i < n; ++i) {
    if (!(density[i] > 0.0)) throw domain_error("ke_residual: density must be positive");
    logd[i] = std::log(static_cast<long double>(density[i]));
  }
  const long double h2 = static_cast<long double>(grid.h) * grid.h;
  const Real u = grid.scale;
  Real worst = 0.0;
  for (int i = half; i < n - half; ++i) {
    long double acc = 0.0L;
    for (int j = -half; j <= half; ++j) acc += w[j + half] * logd[i + j];
    const long double d2 = acc / h2;
    const Real lap = 0.25 * u * u / (grid.r[i] * grid.r[i]) * static_cast<Real>(d2);
    worst = std::max(worst, std::abs(lap - density[i]));
  }
  return worst;
}

}  // namespace collarlab
