#include "collarlab/sections.hpp"

#include <cmath>

namespace collarlab {

namespace {

void require_same_grid(const Section& a, const Section& b, const char* who) {
  if (a.grid.get() != b.grid.get())
    throw config_error(std::string(who) + ": sections live on different grids");
}

using ComplexL = std::complex<long double>;

inline ComplexL cl(const Complex& z) { return {z.real(), z.imag()}; }
inline Complex cd(const ComplexL& z) {
  return {static_cast<Real>(z.real()), static_cast<Real>(z.imag())};
}

// d/dxi on each mode row: 4th-order centered in the interior, degrading to
// 2nd-order near the ends.  Differences accumulate in extended precision; the
// cancellation otherwise sets a noise floor of eps/h on fine grids.
MatrixXcd d_xi(const MatrixXcd& g, Real h) {
  const int m = static_cast<int>(g.rows());
  const int n = static_cast<int>(g.cols());
  MatrixXcd out(m, n);
  const long double hl = h;
  for (int r = 0; r < m; ++r) {
    for (int i = 2; i + 2 < n; ++i)
      out(r, i) = cd((cl(g(r, i - 2)) - 8.0L * cl(g(r, i - 1)) + 8.0L * cl(g(r, i + 1)) -
                      cl(g(r, i + 2))) /
                     (12.0L * hl));
    for (int i : {1, n - 2})
      out(r, i) = cd((cl(g(r, i + 1)) - cl(g(r, i - 1))) / (2.0L * hl));
    out(r, 0) = cd((-3.0L * cl(g(r, 0)) + 4.0L * cl(g(r, 1)) - cl(g(r, 2))) / (2.0L * hl));
    out(r, n - 1) =
        cd((3.0L * cl(g(r, n - 1)) - 4.0L * cl(g(r, n - 2)) + cl(g(r, n - 3))) / (2.0L * hl));
  }
  return out;
}

// d^2/dxi^2, same stencil policy.
MatrixXcd d2_xi(const MatrixXcd& g, Real h) {
  const int m = static_cast<int>(g.rows());
  const int n = static_cast<int>(g.cols());
  MatrixXcd out(m, n);
  const long double h2 = static_cast<long double>(h) * h;
  for (int r = 0; r < m; ++r) {
    for (int i = 2; i + 2 < n; ++i)
      out(r, i) = cd((-cl(g(r, i - 2)) + 16.0L * cl(g(r, i - 1)) - 30.0L * cl(g(r, i)) +
                      16.0L * cl(g(r, i + 1)) - cl(g(r, i + 2))) /
                     (12.0L * h2));
    for (int i : {1, n - 2})
      out(r, i) = cd((cl(g(r, i + 1)) - 2.0L * cl(g(r, i)) + cl(g(r, i - 1))) / h2);
    out(r, 0) =
        cd((2.0L * cl(g(r, 0)) - 5.0L * cl(g(r, 1)) + 4.0L * cl(g(r, 2)) - cl(g(r, 3))) / h2);
    out(r, n - 1) = cd((2.0L * cl(g(r, n - 1)) - 5.0L * cl(g(r, n - 2)) +
                        4.0L * cl(g(r, n - 3)) - cl(g(r, n - 4))) /
                       h2);
  }
  return out;
}

}  // namespace

VectorXd density_at_nodes(const CollarGrid& grid) {
  const int n = grid.size();
  VectorXd lam(n);
  if (grid.kind == CollarGrid::Kind::collar) {
    const Real u = grid.scale;
    for (int i = 0; i < n; ++i) {
      const Real s = std::sin(grid.xi[i]);
      lam[i] = 0.5 * u * u / (grid.r[i] * grid.r[i] * s * s);
    }
  } else {
    for (int i = 0; i < n; ++i)
      lam[i] = 1.0 / (2.0 * grid.r[i] * grid.r[i] * grid.xi[i] * grid.xi[i]);
  }
  return lam;
}

VectorXd rho_at_nodes(const CollarGrid& grid) {
  return density_at_nodes(grid).array().sqrt().matrix();
}

Section operator+(const Section& a, const Section& b) {
  require_same_grid(a, b, "Section::operator+");
  if (a.weight != b.weight) throw config_error("Section::operator+: weight mismatch");
  Section out = a;
  out.coef += b.coef;
  return out;
}

Section operator-(const Section& a, const Section& b) {
  require_same_grid(a, b, "Section::operator-");
  if (a.weight != b.weight) throw config_error("Section::operator-: weight mismatch");
  Section out = a;
  out.coef -= b.coef;
  return out;
}

Section operator*(Complex s, const Section& a) {
  Section out = a;
  out.coef *= s;
  return out;
}

Section multiply(const Section& a, const Section& b) {
  require_same_grid(a, b, "multiply");
  Section out(a.weight + b.weight, a.grid);
  const int K = a.K();
  for (int ka = -K; ka <= K; ++ka) {
    if (a.mode(ka).isZero(0.0)) continue;
    for (int kb = -K; kb <= K; ++kb) {
      const int k = ka + kb;
      if (k < -K || k > K) continue;  // Fourier truncation
      out.mode(k) += a.mode(ka).cwiseProduct(b.mode(kb));
    }
  }
  return out;
}

Section conj_section(const Section& a) {
  Section out(-a.weight, a.grid);
  const int K = a.K();
  for (int k = -K; k <= K; ++k) out.mode(k) = a.mode(-k).conjugate();
  return out;
}

Section scale_radial(const Section& a, const VectorXd& profile) {
  if (profile.size() != a.points()) throw config_error("scale_radial: size mismatch");
  Section out = a;
  for (int c = 0; c < out.points(); ++c) out.coef.col(c) *= profile[c];
  return out;
}

Section deriv_z(const Section& a) {
  const CollarGrid& g = *a.grid;
  const MatrixXcd dg = d_xi(a.coef, g.h);
  Section out(a.weight, a.grid);  // caller adjusts weight semantics
  const int K = a.K();
  for (int k = -K; k <= K; ++k) {
    if (k - 1 < -K) continue;
    // d_z [e^{ik theta} g] = e^{i(k-1) theta} (scale g' + k g) / (2 r)
    for (int i = 0; i < g.size(); ++i)
      out.coef(k - 1 + K, i) +=
          (g.scale * dg(k + K, i) + static_cast<Real>(k) * a.coef(k + K, i)) / (2.0 * g.r[i]);
  }
  return out;
}

Section deriv_zbar(const Section& a) {
  const CollarGrid& g = *a.grid;
  const MatrixXcd dg = d_xi(a.coef, g.h);
  Section out(a.weight, a.grid);
  const int K = a.K();
  for (int k = -K; k <= K; ++k) {
    if (k + 1 > K) continue;
    for (int i = 0; i < g.size(); ++i)
      out.coef(k + 1 + K, i) +=
          (g.scale * dg(k + K, i) - static_cast<Real>(k) * a.coef(k + K, i)) / (2.0 * g.r[i]);
  }
  return out;
}

Section maass_K(int p, const Section& sigma) {
  if (sigma.weight != p) throw config_error("maass_K: section is not of the stated weight");
  const VectorXd rho = rho_at_nodes(*sigma.grid);
  const VectorXd rho_mp = rho.array().pow(-p).matrix();
  const VectorXd rho_pm1 = rho.array().pow(p - 1).matrix();
  Section out = deriv_z(scale_radial(sigma, rho_mp));
  out = scale_radial(out, rho_pm1);
  out.weight = p + 1;
  return out;
}

Section maass_L(int p, const Section& sigma) {
  if (sigma.weight != p) throw config_error("maass_L: section is not of the stated weight");
  const VectorXd rho = rho_at_nodes(*sigma.grid);
  const VectorXd rho_p = rho.array().pow(p).matrix();
  const VectorXd rho_mpm1 = rho.array().pow(-p - 1).matrix();
  Section out = deriv_zbar(scale_radial(sigma, rho_p));
  out = scale_radial(out, rho_mpm1);
  out.weight = p - 1;
  return out;
}

Section operator_P(const Section& f) {
  if (f.weight != 0) throw config_error("operator_P: expects a weight-0 section");
  return maass_K(1, maass_K(0, f));
}

Section box(const Section& f) {
  if (f.weight != 0) throw config_error("box: expects a weight-0 section");
  const CollarGrid& g = *f.grid;
  const VectorXd lam = density_at_nodes(g);
  const MatrixXcd d2 = d2_xi(f.coef, g.h);
  Section out(0, f.grid);
  const int K = f.K();
  const Real s2 = g.scale * g.scale;
  for (int k = -K; k <= K; ++k) {
    // Box[e^{ik theta} g] = -(scale^2 g'' - k^2 g) / (4 r^2 lambda) e^{ik theta};
    // on a collar this reduces to -(sin^2 tau / 2)(g'' - k^2 g / u^2).
    for (int i = 0; i < g.size(); ++i) {
      const Complex num = s2 * d2(k + K, i) - static_cast<Real>(k) * k * f.coef(k + K, i);
      out.coef(k + K, i) = -num / (4.0 * g.r[i] * g.r[i] * lam[i]);
    }
  }
  return out;
}

Section xi_apply(const Section& A_k, const Section& f) {
  if (f.weight != 0) throw config_error("xi_apply: expects a weight-0 section");
  return Complex(-1.0, 0.0) * multiply(A_k, operator_P(f));
}

Section q_apply(const Section& e_kl, const Section& f_kl, const Section& f) {
  require_same_grid(e_kl, f, "q_apply");
  require_same_grid(f_kl, f, "q_apply");
  const VectorXd lam_inv = density_at_nodes(*f.grid).cwiseInverse();
  const Section Pbar_e = conj_section(operator_P(conj_section(e_kl)));
  Section term1 = multiply(Pbar_e, operator_P(f));
  Section term2 = Complex(-2.0, 0.0) * multiply(f_kl, box(f));
  Section term3 = scale_radial(multiply(deriv_z(f_kl), deriv_zbar(f)), lam_inv);
  term3.weight = 0;
  Section out = term1 + term2 + term3;
  out.weight = 0;
  return out;
}

GreenResult green_solve(const GreenProblem& problem) {
  const Section& f = problem.f;
  if (f.weight != 0) throw config_error("green_solve: RHS must have weight 0");
  const CollarGrid& g = *f.grid;
  const int n = g.size();
  const int K = f.K();
  if (n < 4) throw config_error("green_solve: grid too coarse");

  GreenResult res;
  res.e = Section(0, f.grid);
  const Real u = g.scale;
  const Real stiff = kPi * u / (2.0 * g.h);  // P1 stiffness scale of (Box f, g)_dv

  const int ni = n - 2;  // interior unknowns; first/last node carry Dirichlet data
  VectorXd diag(ni), d(ni);
  VectorXcd rhs(ni), z(ni), x(ni);
  for (int k = -K; k <= K; ++k) {
    const Real mass_k = kPi * k * k * g.h / (2.0 * u);
    for (int i = 0; i < ni; ++i) diag[i] = 2.0 * stiff + mass_k + g.w_dv[i + 1];
    const Complex blo = problem.bc_lo[k + K];
    const Complex bhi = problem.bc_hi[k + K];
    for (int i = 0; i < ni; ++i) rhs[i] = g.w_dv[i + 1] * f.coef(k + K, i + 1);
    rhs[0] += stiff * blo;
    rhs[ni - 1] += stiff * bhi;

    // Thomas sweep on the SPD tridiagonal (off-diagonal entries are -stiff).
    d[0] = diag[0];
    z[0] = rhs[0];
    for (int i = 1; i < ni; ++i) {
      if (!(d[i - 1] > 0.0))
        throw numeric_error("green_solve: lost positive definiteness at mode " +
                            std::to_string(k));
      const Real m = -stiff / d[i - 1];
      d[i] = diag[i] - m * (-stiff);
      z[i] = rhs[i] - m * z[i - 1];
    }
    if (!(d[ni - 1] > 0.0))
      throw numeric_error("green_solve: lost positive definiteness at mode " + std::to_string(k));
    x[ni - 1] = z[ni - 1] / d[ni - 1];
    for (int i = ni - 2; i >= 0; --i) x[i] = (z[i] + stiff * x[i + 1]) / d[i];

    res.e.coef(k + K, 0) = blo;
    res.e.coef(k + K, n - 1) = bhi;
    for (int i = 0; i < ni; ++i) res.e.coef(k + K, i + 1) = x[i];

    Real worst = 0.0, scale_r = 1.0;
    for (int i = 0; i < ni; ++i) {
      Complex Ax = diag[i] * x[i];
      if (i > 0) Ax += -stiff * x[i - 1];
      if (i + 1 < ni) Ax += -stiff * x[i + 1];
      worst = std::max(worst, std::abs(Ax - rhs[i]));
      scale_r = std::max(scale_r, std::abs(rhs[i]));
    }
    res.residual = std::max(res.residual, worst / scale_r);
  }
  return res;
}

Complex integrate_dv(const Section& f) {
  const CollarGrid& g = *f.grid;
  Complex acc = 0.0;
  const auto m0 = f.mode(0);
  for (int i = 0; i < g.size(); ++i) acc += m0(0, i) * g.w_dv[i];
  return acc;
}

Complex inner_dv(const Section& a, const Section& b) {
  require_same_grid(a, b, "inner_dv");
  const CollarGrid& g = *a.grid;
  const int K = a.K();
  Complex acc = 0.0;
  for (int ka = -K; ka <= K; ++ka) {
    const int kb = -ka;  // only opposite modes survive the angular integral
    Complex dot = 0.0;
    for (int i = 0; i < g.size(); ++i) dot += a.mode(ka)(0, i) * b.mode(kb)(0, i) * g.w_dv[i];
    acc += dot;
  }
  return acc;
}

Complex integrate_dA(const Section& f) {
  const CollarGrid& g = *f.grid;
  Complex acc = 0.0;
  const auto m0 = f.mode(0);
  for (int i = 0; i < g.size(); ++i) acc += m0(0, i) * g.w_dA[i];
  return acc;
}

Real abs_at_node(const Section& s, int i, int n_theta) {
  const int K = s.K();
  if (n_theta <= 0) n_theta = std::max(64, 8 * K + 8);
  Real best = 0.0;
  for (int j = 0; j < n_theta; ++j) {
    const Real th = 2.0 * kPi * j / n_theta;
    Complex v = 0.0;
    for (int k = -K; k <= K; ++k)
      v += s.mode(k)(0, i) * std::polar(1.0, k * th);
    best = std::max(best, std::abs(v));
  }
  return best;
}

Real sup_abs(const Section& s, Real xi_a, Real xi_b) {
  const CollarGrid& g = *s.grid;
  Real best = 0.0;
  for (int i = 0; i < g.size(); ++i)
    if (g.xi[i] >= xi_a && g.xi[i] <= xi_b) best = std::max(best, abs_at_node(s, i));
  return best;
}

Real mode_energy(const Section& s, int k) {
  if (!s.has_mode(k)) return 0.0;
  const CollarGrid& g = *s.grid;
  Real acc = 0.0;
  for (int i = 0; i < g.size(); ++i) acc += std::norm(s.mode(k)(0, i)) * g.w_dv[i];
  return acc;
}

namespace {

void collect_words(const Section& s, int depth, Real xi_a, Real xi_b, Real& acc) {
  acc += sup_abs(s, xi_a, xi_b);
  if (depth == 0) return;
  collect_words(maass_K(s.weight, s), depth - 1, xi_a, xi_b, acc);
  collect_words(maass_L(s.weight, s), depth - 1, xi_a, xi_b, acc);
}

}  // namespace

Real ck_norm(const Section& sigma, int k, Real xi_a, Real xi_b) {
  if (k < 0 || k > 2) throw config_error("ck_norm: order must be 0, 1 or 2");
  // Words over {K_*, L_*} with subscripts following the running weight; every
  // word of length <= k is weight-consistent, so the sum has 2^{k+1}-1 terms.
  Real acc = 0.0;
  collect_words(sigma, k, xi_a, xi_b, acc);
  return acc;
}

}  // namespace collarlab
