#include "collarlab/family.hpp"

#include <algorithm>
#include <cmath>

namespace collarlab {

namespace {

Real quintic_smoothstep(Real y) {
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return 1.0;
  return y * y * y * (10.0 + y * (-15.0 + 6.0 * y));
}

// Scaled b-coefficient of direction i on collar ell (diagonal or mixed).
Complex co(const BeltramiFamily& fam, int i, int ell) { return fam.belt.b_hat(i, ell); }

// sum |a| c^{|k|} over one side of a tail list
Real tail_sum(const TailList& tl, Real c, bool negative_side) {
  Real acc = 0.0;
  for (const TailTerm& t : tl)
    if ((t.k < 0) == negative_side) acc += std::abs(t.a) * std::pow(c, std::abs(t.k));
  return acc;
}

}  // namespace

BeltramiFamily make_model_family(int m, int n, const std::vector<Complex>& t,
                                 const std::vector<Complex>& s, const FamilyOptions& opt) {
  if (m < 1 || n < m) throw config_error("make_model_family: need 1 <= m <= n");
  if (static_cast<int>(t.size()) != m || static_cast<int>(s.size()) != n - m)
    throw config_error("make_model_family: (t,s) sizes do not match (m,n)");

  BeltramiFamily fam;
  fam.point.t = t;
  fam.point.s = s;
  fam.point.validate(opt.delta);
  fam.opt = opt;
  if (fam.opt.thick_h.size() == 0) fam.opt.thick_h = VectorXd::Ones(n - m);
  if (fam.opt.thick_r.size() == 0) fam.opt.thick_r = VectorXd::Ones(n - m);
  if (fam.opt.thick_h.size() != n - m || fam.opt.thick_r.size() != n - m)
    throw config_error("make_model_family: thick block size must equal n - m");

  fam.u.resize(m);
  fam.t_phase.resize(m);
  for (int j = 0; j < m; ++j) {
    fam.u[j] = u_from_t(t[j]);
    fam.t_phase[j] = t[j] / std::abs(t[j]);
    fam.charts.emplace_back(fam.u[j], opt.collar_c);
  }

  fam.quad.M = opt.M;
  fam.quad.eps = opt.eps;
  fam.quad.beta = MatrixXcd::Zero(n, m);
  fam.quad.alpha.assign(n, std::vector<TailList>(m));
  fam.belt.b_hat = MatrixXcd::Zero(n, m);
  fam.belt.a_hat.assign(n, std::vector<TailList>(m));

  for (int j = 0; j < m; ++j) {
    fam.quad.beta(j, j) = 1.0;  // representative of 1 + O(u0)
    fam.belt.b_hat(j, j) = -fam.u[j] / (kPi * std::conj(fam.t_phase[j]));
  }

  if (opt.profile == FamilyProfile::decorated) {
    for (int j = 0; j < m; ++j) {
      for (int k = 1; k <= opt.tail_kmax; ++k) {
        const Real geo = std::pow(0.5, k + 1) * std::pow(opt.collar_c, -k);
        if (opt.tail_amp != 0.0) {
          fam.quad.alpha[j][j].push_back({k, opt.tail_amp * opt.M * geo});
          fam.quad.alpha[j][j].push_back({-k, opt.tail_amp * opt.M * geo});
          fam.belt.a_hat[j][j].push_back({k, opt.tail_amp * opt.M * fam.u[j] * geo});
          fam.belt.a_hat[j][j].push_back({-k, opt.tail_amp * opt.M * fam.u[j] * geo});
        }
      }
      if (opt.bmix_amp != 0.0) {
        for (int i = 0; i < n; ++i) {
          if (i == j) continue;
          const Real ui3 = (i < m) ? std::pow(fam.u[i], 3) : 1.0;
          fam.belt.b_hat(i, j) = opt.bmix_amp * opt.M * fam.u[j] * ui3;
        }
      }
    }
  }
  validate_family(fam);
  return fam;
}

void validate_family(const BeltramiFamily& fam) {
  const int n = fam.n(), m = fam.m();
  const Real M = fam.opt.M, c = fam.opt.collar_c, eps = fam.opt.eps;
  const Real u0 = fam.u0();
  auto fail = [](const std::string& what, Real have, Real bound) {
    throw validation_error(what + ": sum " + std::to_string(have) + " exceeds bound " +
                           std::to_string(bound));
  };
  for (int j = 0; j < m; ++j) {
    const Real tj = std::abs(fam.point.t[j]);
    for (int i = 0; i < n; ++i) {
      for (bool neg : {true, false}) {
        const Real sq = tail_sum(fam.quad.alpha[i][j], c, neg);
        if (sq > M * (1 + 1e-12))
          fail("quadratic tail sum (" + std::string(neg ? "k<0" : "k>0") + ") for direction " +
                   std::to_string(i) + " on collar " + std::to_string(j),
               sq, M);
        // harmonic Beltrami tail bounds, scaled frame
        const Real sa = tail_sum(fam.belt.a_hat[i][j], c, neg);
        Real bound;
        if (i == j)
          bound = M * fam.u[j];
        else if (i < m)
          bound = M * std::pow(fam.u[i], 3) / (fam.u[j] * fam.u[j]);
        else
          bound = M / (fam.u[j] * fam.u[j]);
        if (sa > bound * (1 + 1e-12))
          fail("beltrami tail sum (" + std::string(neg ? "k<0" : "k>0") + ") for direction " +
                   std::to_string(i) + " on collar " + std::to_string(j),
               sa, bound);
      }
      if (i != j) {
        const Real bb = std::abs(fam.quad.beta(i, j));
        const Real bound = M * std::pow(tj, 0.5 - eps);
        if (bb > bound * (1 + 1e-12))
          fail("quadratic beta bound for direction " + std::to_string(i) + " on collar " +
                   std::to_string(j),
               bb, bound);
        const Real bh = std::abs(fam.belt.b_hat(i, j));
        const Real bbound = (i < m) ? M * fam.u[j] * std::pow(fam.u[i], 3) : M * fam.u[j];
        if (bh > bbound * (1 + 1e-12))
          fail("beltrami b bound for direction " + std::to_string(i) + " on collar " +
                   std::to_string(j),
               bh, bbound);
      }
    }
    const Real dq = std::abs(fam.quad.beta(j, j) - 1.0);
    if (dq > M * u0 * (1 + 1e-12))
      fail("quadratic beta diagonal deviation on collar " + std::to_string(j), dq, M * u0);
    const Complex lead = -fam.u[j] / (kPi * std::conj(fam.t_phase[j]));
    const Real db = std::abs(fam.belt.b_hat(j, j) - lead);
    if (db > M * u0 * std::abs(lead) * (1 + 1e-12))
      fail("beltrami b diagonal deviation on collar " + std::to_string(j), db,
           M * u0 * std::abs(lead));
  }
}

FamilyGrids make_family_grids(const BeltramiFamily& fam, int n_tau, int n_modes) {
  if (n_modes < 2 + fam.opt.tail_kmax)
    throw config_error("make_family_grids: need modes K >= 2 + tail_kmax");
  FamilyGrids grids;
  for (const CollarChart& chart : fam.charts)
    grids.push_back(std::make_shared<CollarGrid>(grid_build(chart, n_tau, n_modes)));
  return grids;
}

Complex quadratic_eval(const BeltramiFamily& fam, int i, int j, Complex z) {
  if (j < 0 || j >= fam.m()) throw domain_error("quadratic_eval: no such collar");
  const CollarChart& chart = fam.charts[j];
  if (!chart.contains_r(std::abs(z))) throw domain_error("quadratic_eval: z outside annulus");
  const Complex tj = fam.point.t[j];
  Complex pref;
  if (i == j)
    pref = -tj / kPi;
  else if (i < fam.m())
    pref = -fam.point.t[i] / kPi;
  else
    pref = 1.0;
  Complex q = 0.0;
  for (const TailTerm& tt : fam.quad.alpha[i][j]) {
    if (tt.k < 0)
      q += tt.a * std::pow(tj / z, -tt.k);
    else
      q += tt.a * std::pow(z, tt.k);
  }
  return pref / (z * z) * (q + fam.quad.beta(i, j));
}

Complex beltrami_eval(const BeltramiFamily& fam, int i, int j, Complex z) {
  if (j < 0 || j >= fam.m()) throw domain_error("beltrami_eval: no such collar");
  const CollarChart& chart = fam.charts[j];
  const Real r = std::abs(z);
  if (!chart.contains_r(r)) throw domain_error("beltrami_eval: z outside annulus");
  const Real tau = chart.tau_of_r(r);
  const Real s2 = std::sin(tau) * std::sin(tau);
  const Real rho = chart.rho();
  const Real scale_i = fam.direction_scale(i);
  Complex p = 0.0;
  for (const TailTerm& tt : fam.belt.a_hat[i][j]) {
    const Complex a_raw = tt.a / scale_i;
    if (tt.k < 0)
      p += a_raw * std::pow(rho / z, -tt.k);
    else
      p += a_raw * std::pow(z, tt.k);
  }
  const Complex b_raw = fam.belt.b_hat(i, j) / scale_i;
  return (z / std::conj(z)) * s2 * std::conj(p + b_raw);
}

void quadratic_modes_at(const BeltramiFamily& fam, int i, int j, Real r, int K, VectorXcd& out) {
  out.setZero(2 * K + 1);
  const Real tj_abs = std::abs(fam.point.t[j]);
  Complex pref;
  if (i == j)
    pref = -fam.t_phase[j] / kPi;
  else if (i < fam.m())
    pref = -fam.t_phase[i] / kPi;
  else
    pref = 1.0;
  const Real inv_r2 = 1.0 / (r * r);
  if (-2 + K >= 0 && -2 + K <= 2 * K) out[-2 + K] += pref * fam.quad.beta(i, j) * inv_r2;
  for (const TailTerm& tt : fam.quad.alpha[i][j]) {
    const int mode = tt.k - 2;
    if (mode < -K || mode > K) continue;
    Complex val;
    if (tt.k < 0)
      val = tt.a * std::pow(tj_abs / r, -tt.k) * std::pow(fam.t_phase[j], -tt.k);
    else
      val = tt.a * std::pow(r, tt.k);
    out[mode + K] += pref * val * inv_r2;
  }
}

void beltrami_modes_at(const BeltramiFamily& fam, int i, int j, Real r, int K, VectorXcd& out) {
  out.setZero(2 * K + 1);
  const CollarChart& chart = fam.charts[j];
  const Real tau = chart.tau_of_r(r);
  const Real s2 = std::sin(tau) * std::sin(tau);
  const Real rho = chart.rho();
  if (2 <= K) out[2 + K] += s2 * std::conj(fam.belt.b_hat(i, j));
  for (const TailTerm& tt : fam.belt.a_hat[i][j]) {
    const int mode = 2 - tt.k;
    if (mode < -K || mode > K) continue;
    Real mag;
    if (tt.k < 0)
      mag = std::pow(rho / r, -tt.k);
    else
      mag = std::pow(r, tt.k);
    out[mode + K] += s2 * std::conj(tt.a) * mag;
  }
}

Section beltrami_section(const BeltramiFamily& fam, int i, int ell, const FamilyGrids& grids) {
  const auto& grid = grids.at(static_cast<size_t>(ell));
  Section s(-2, grid);
  VectorXcd buf;
  for (int p = 0; p < grid->size(); ++p) {
    beltrami_modes_at(fam, i, ell, grid->r[p], grid->n_modes, buf);
    s.coef.col(p) = buf;
  }
  return s;
}

PairField f_pair(const BeltramiFamily& fam, int i, int j, const FamilyGrids& grids) {
  PairField pf;
  pf.i = i;
  pf.j = j;
  for (int ell = 0; ell < fam.m(); ++ell) {
    Section Ai = beltrami_section(fam, i, ell, grids);
    Section Aj = beltrami_section(fam, j, ell, grids);
    Section f = multiply(Ai, conj_section(Aj));
    f.weight = 0;
    pf.on_collar.push_back(std::move(f));
  }
  return pf;
}

PairField e_green(const BeltramiFamily& fam, int i, int j, const FamilyGrids& grids) {
  PairField ef;
  ef.i = i;
  ef.j = j;
  PairField f = f_pair(fam, i, j, grids);
  for (int ell = 0; ell < fam.m(); ++ell) {
    GreenProblem prob(std::move(f.on_collar[static_cast<size_t>(ell)]));
    const CollarGrid& g = *grids[static_cast<size_t>(ell)];
    // Dirichlet data from the uncut interior formula (1/2) sin^2(tau) b-product;
    // the cut-off variant vanishes at the ends, the uncut one tracks e itself.
    const Complex kappa = std::conj(co(fam, i, ell)) * co(fam, j, ell);
    const int K = g.n_modes;
    auto s2 = [&](int node) {
      const Real s = std::sin(g.xi[node]);
      return s * s;
    };
    prob.bc_lo[0 + K] = 0.5 * s2(0) * kappa;
    prob.bc_hi[0 + K] = 0.5 * s2(g.size() - 1) * kappa;
    GreenResult res = green_solve(prob);
    ef.green_residual = std::max(ef.green_residual, res.residual);
    ef.on_collar.push_back(std::move(res.e));
  }
  return ef;
}

PairField e_tilde(const BeltramiFamily& fam, int i, int j, const FamilyGrids& grids, Real c,
                  Real c1) {
  if (!(0.0 < c1 && c1 < c && c < 1.0)) throw domain_error("e_tilde: need 0 < c1 < c < 1");
  PairField ef;
  ef.i = i;
  ef.j = j;
  const int m = fam.m();
  // Support collars per the approximation case list.
  std::vector<int> support;
  if (i < m && j < m)
    support = (i == j) ? std::vector<int>{i} : std::vector<int>{i, j};
  else if (i < m)
    support = {i};
  else if (j < m)
    support = {j};
  for (int ell = 0; ell < m; ++ell) {
    const auto& grid = grids[static_cast<size_t>(ell)];
    Section s(0, grid);
    const bool active = std::find(support.begin(), support.end(), ell) != support.end();
    if (active) {
      const Complex kappa = std::conj(co(fam, i, ell)) * co(fam, j, ell);
      const Real u = fam.u[ell];
      const int K = grid->n_modes;
      for (int p = 0; p < grid->size(); ++p) {
        const Real tau = grid->xi[p];
        const Real sn = std::sin(tau);
        const Real outer = cutoff_eta(tau / u, c, c1);
        const Real inner = cutoff_eta((-kPi - tau) / u, c, c1);
        s.coef(0 + K, p) = 0.5 * sn * sn * kappa * outer * inner;
      }
    }
    ef.on_collar.push_back(std::move(s));
  }
  return ef;
}

Real cutoff_eta(Real x, Real c, Real c1) {
  if (!(0.0 < c1 && c1 < c)) throw domain_error("cutoff_eta: need 0 < c1 < c");
  const Real lo = std::log(c1), hi = std::log(c);
  if (x <= lo) return 1.0;
  if (x >= hi) return 0.0;
  return 1.0 - quintic_smoothstep((x - lo) / (hi - lo));
}

void cutoff_eta_deriv_bounds(Real c, Real c1, Real& d1_max, Real& d2_max) {
  const Real w = std::log(c) - std::log(c1);
  d1_max = 1.875 / w;                  // max |S'| = 15/8
  d2_max = (10.0 / std::sqrt(3.0)) / (w * w);  // max |S''| = 10/sqrt(3)
}

ApproxResidual approx_residual(const BeltramiFamily& fam, int i, int j,
                               const FamilyGrids& grids) {
  PairField e = e_green(fam, i, j, grids);
  PairField et = e_tilde(fam, i, j, grids, fam.opt.collar_c, fam.opt.collar_c1);
  ApproxResidual out;
  for (int ell = 0; ell < fam.m(); ++ell) {
    Section diff = e.on_collar[static_cast<size_t>(ell)] - et.on_collar[static_cast<size_t>(ell)];
    const CollarGrid& g = *grids[static_cast<size_t>(ell)];
    out.sup_raw = std::max(out.sup_raw, sup_abs(diff, g.xi_lo, g.xi_hi));
  }
  const int m = fam.m();
  Real order;
  if (i < m && j < m)
    order = (i == j) ? std::pow(fam.u[i], 4)
                     : std::pow(fam.u[i], 3) * std::pow(fam.u[j], 3);
  else if (i < m)
    order = std::pow(fam.u[i], 3);
  else if (j < m)
    order = std::pow(fam.u[j], 3);
  else
    order = 1.0;
  out.normalized = out.sup_raw / order;
  return out;
}

namespace {

int collar_of(const Section& f, const FamilyGrids& grids, const char* who) {
  for (size_t ell = 0; ell < grids.size(); ++ell)
    if (grids[ell].get() == f.grid.get()) return static_cast<int>(ell);
  throw config_error(std::string(who) + ": section does not live on a family grid");
}

}  // namespace

Section xi_direction(const BeltramiFamily& fam, int k, const Section& f,
                     const FamilyGrids& grids) {
  if (k < 0 || k >= fam.n()) throw domain_error("xi_direction: no such direction");
  const int ell = collar_of(f, grids, "xi_direction");
  return xi_apply(beltrami_section(fam, k, ell, grids), f);
}

Section q_direction(const BeltramiFamily& fam, int k, int l, const Section& f,
                    const FamilyGrids& grids) {
  if (k < 0 || k >= fam.n() || l < 0 || l >= fam.n())
    throw domain_error("q_direction: no such direction");
  const int ell = collar_of(f, grids, "q_direction");
  PairField fkl = f_pair(fam, k, l, grids);
  PairField ekl = e_green(fam, k, l, grids);
  return q_apply(ekl.on_collar[static_cast<size_t>(ell)],
                 fkl.on_collar[static_cast<size_t>(ell)], f);
}

Complex wp_duality_pairing(const BeltramiFamily& fam, int i, int j, const FamilyGrids& grids) {
  Complex acc = 0.0;
  VectorXcd a_modes, q_modes;
  for (int ell = 0; ell < fam.m(); ++ell) {
    const CollarGrid& g = *grids[static_cast<size_t>(ell)];
    const int K = g.n_modes;
    for (int p = 0; p < g.cc_xi.size(); ++p) {
      beltrami_modes_at(fam, i, ell, g.cc_r[p], K, a_modes);
      quadratic_modes_at(fam, j, ell, g.cc_r[p], K, q_modes);
      Complex prod0 = 0.0;
      for (int k = -K; k <= K; ++k) prod0 += a_modes[k + K] * q_modes[-k + K];
      acc += prod0 * g.cc_w_dA[p];
    }
  }
  return acc;
}

}  // namespace collarlab
