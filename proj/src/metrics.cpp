#include "collarlab/metrics.hpp"

#include <cmath>
#include <sstream>

namespace collarlab {

namespace {

Real quintic_smoothstep(Real y) {
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return 1.0;
  return y * y * y * (10.0 + y * (-15.0 + 6.0 * y));
}

Real quintic_smoothstep_d1(Real y) {
  if (y <= 0.0 || y >= 1.0) return 0.0;
  return 30.0 * y * y * (y - 1.0) * (y - 1.0);
}

Real quintic_smoothstep_d2(Real y) {
  if (y <= 0.0 || y >= 1.0) return 0.0;
  return 60.0 * y * (y - 1.0) * (2.0 * y - 1.0);
}

}  // namespace

HermitianForm HermitianForm::make(MatrixXcd m, const std::string& who) {
  const Real scale = std::max(1e-300, m.cwiseAbs().maxCoeff());
  const Real herm_defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm_defect > 1e-10 * scale)
    throw numeric_error(who + ": matrix is not Hermitian (defect " + std::to_string(herm_defect) +
                        ")");
  HermitianForm out;
  out.mat = 0.5 * (m + m.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(out.mat);
  if (es.info() != Eigen::Success) throw numeric_error(who + ": eigensolver failed");
  if (es.eigenvalues().minCoeff() <= 0.0) {
    std::ostringstream os;
    os << who << ": form is not positive definite; eigenvalues:";
    for (int i = 0; i < es.eigenvalues().size(); ++i) os << " " << es.eigenvalues()[i];
    throw numeric_error(os.str());
  }
  out.inv = out.mat.inverse();
  const Real id_defect =
      (out.mat * out.inv - MatrixXcd::Identity(out.dim(), out.dim())).cwiseAbs().maxCoeff();
  if (id_defect > 1e-10)
    throw numeric_error(who + ": inverse validation failed (|g g^-1 - I| = " +
                        std::to_string(id_defect) + ")");
  return out;
}

Real HermitianForm::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(mat);
  return es.eigenvalues().minCoeff();
}

Real CurvatureTensor::symmetry_defect() const {
  const Real scale = std::max(1e-300, data.cwiseAbs().maxCoeff());
  Real worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const Complex v = at(i, j, k, l);
          worst = std::max(worst, std::abs(v - at(k, j, i, l)));
          worst = std::max(worst, std::abs(v - at(i, l, k, j)));
          worst = std::max(worst, std::abs(v - std::conj(at(j, i, l, k))));
        }
  return worst / scale;
}

const std::array<std::array<int, 3>, 6>& Symmetrizer::perms3() {
  static const std::array<std::array<int, 3>, 6> p = {
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  return p;
}

FamilyFields assemble_fields(const BeltramiFamily& fam, const FamilyGrids& grids) {
  const int n = fam.n();
  const int m = fam.m();
  FamilyFields F;
  F.grids = grids;
  F.e.assign(n, std::vector<PairField>(n));
  F.f.assign(n, std::vector<PairField>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      F.f[i][j] = f_pair(fam, i, j, grids);
      F.e[i][j] = e_green(fam, i, j, grids);
      F.green_residual = std::max(F.green_residual, F.e[i][j].green_residual);
    }

  // xi_k(e_{ij}) = -A_k P(e_{ij}) and its zero-Dirichlet (Box+1)^{-1} image.
  F.xie.assign(n, std::vector<std::vector<std::vector<Section>>>(
                      n, std::vector<std::vector<Section>>(n)));
  F.t_xie = F.xie;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::vector<std::vector<Section>> Pe(m);
      for (int ell = 0; ell < m; ++ell)
        Pe[ell] = {operator_P(F.e[i][j].on_collar[static_cast<size_t>(ell)])};
      for (int k = 0; k < n; ++k) {
        F.xie[i][j][k].resize(m);
        F.t_xie[i][j][k].resize(m);
        for (int ell = 0; ell < m; ++ell) {
          Section Ak = beltrami_section(fam, k, ell, grids);
          Section x = Complex(-1.0, 0.0) * multiply(Ak, Pe[ell][0]);
          x.weight = 0;
          GreenProblem prob(x);
          GreenResult res = green_solve(prob);
          F.green_residual = std::max(F.green_residual, res.residual);
          F.xie[i][j][k][ell] = std::move(x);
          F.t_xie[i][j][k][ell] = std::move(res.e);
        }
      }
    }
  return F;
}

HermitianForm wp_metric(const BeltramiFamily& fam, const FamilyGrids& grids) {
  const int n = fam.n(), m = fam.m();
  MatrixXcd H = MatrixXcd::Zero(n, n);
  VectorXcd ai, aj;
  for (int ell = 0; ell < m; ++ell) {
    const CollarGrid& g = *grids[static_cast<size_t>(ell)];
    const int K = g.n_modes;
    std::vector<VectorXcd> modes(static_cast<size_t>(n));
    for (int p = 0; p < g.cc_xi.size(); ++p) {
      for (int i = 0; i < n; ++i) beltrami_modes_at(fam, i, ell, g.cc_r[p], K, modes[i]);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Complex dot = 0.0;
          for (int k = 0; k < 2 * K + 1; ++k) dot += modes[i][k] * std::conj(modes[j][k]);
          H(i, j) += dot * g.cc_w_dv[p];
        }
    }
  }
  for (int i = m; i < n; ++i) H(i, i) += fam.opt.thick_h[i - m];
  return HermitianForm::make(std::move(H), "wp_metric");
}

HermitianForm wp_cometric(const BeltramiFamily& fam, const FamilyGrids& grids) {
  const int n = fam.n(), m = fam.m();
  MatrixXcd H = MatrixXcd::Zero(n, n);
  for (int ell = 0; ell < m; ++ell) {
    const CollarGrid& g = *grids[static_cast<size_t>(ell)];
    const int K = g.n_modes;
    const Real u = g.scale;
    std::vector<VectorXcd> modes(static_cast<size_t>(n));
    for (int p = 0; p < g.cc_xi.size(); ++p) {
      const Real s = std::sin(g.cc_xi[p]);
      const Real lam = 0.5 * u * u / (g.cc_r[p] * g.cc_r[p] * s * s);
      for (int i = 0; i < n; ++i) quadratic_modes_at(fam, i, ell, g.cc_r[p], K, modes[i]);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Complex dot = 0.0;
          for (int k = 0; k < 2 * K + 1; ++k) dot += modes[i][k] * std::conj(modes[j][k]);
          H(i, j) += dot / (lam * lam) * g.cc_w_dv[p];
        }
    }
  }
  for (int i = m; i < n; ++i) H(i, i) += 1.0 / fam.opt.thick_h[i - m];
  return HermitianForm::make(std::move(H), "wp_cometric");
}

CurvatureTensor wp_curvature(const BeltramiFamily& fam, const FamilyFields& F, Real sym_tol) {
  const int n = fam.n(), m = fam.m();
  CurvatureTensor R(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Complex acc = 0.0;
          for (int ell = 0; ell < m; ++ell) {
            const size_t e = static_cast<size_t>(ell);
            acc += inner_dv(F.e[i][j].on_collar[e], F.f[k][l].on_collar[e]);
            acc += inner_dv(F.e[i][l].on_collar[e], F.f[k][j].on_collar[e]);
          }
          R.at(i, j, k, l) = acc;
        }
  for (int i = m; i < n; ++i) R.at(i, i, i, i) += fam.opt.thick_r[i - m];
  const Real defect = R.symmetry_defect();
  if (defect > sym_tol)
    throw numeric_error("wp_curvature: Kaehler symmetry defect " + std::to_string(defect));
  return R;
}

HermitianForm ricci_metric(const CurvatureTensor& R, const HermitianForm& cometric) {
  const int n = R.n;
  MatrixXcd T = MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex acc = 0.0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) acc += cometric.mat(k, l) * R.at(i, j, k, l);
      T(i, j) = acc;
    }
  return HermitianForm::make(std::move(T), "ricci_metric");
}

HermitianForm perturbed_metric(const HermitianForm& tau, const HermitianForm& h, Real C) {
  if (!(C > 0.0)) throw domain_error("perturbed_metric: C must be positive");
  return HermitianForm::make(tau.mat + C * h.mat, "perturbed_metric");
}

namespace {

// Shared implementation of the four-block curvature formula.
CurvatureTensor curvature_blocks(const BeltramiFamily& fam, const FamilyFields& F,
                                 const HermitianForm& h, const CurvatureTensor& R,
                                 const HermitianForm& tau, const MatrixXcd& tau_inv_like,
                                 CurvatureBlocks* blocks) {
  const int n = fam.n(), m = fam.m();
  const MatrixXcd& Hinv = h.inv;
  const auto& P3 = Symmetrizer::perms3();

  auto e_sec = [&](int a, int b, int ell) -> const Section& {
    return F.e[a][b].on_collar[static_cast<size_t>(ell)];
  };
  const size_t nn = static_cast<size_t>(n);
  auto idx6 = [nn](int a, int b, int c, int d, int e, int f) {
    return ((((static_cast<size_t>(a) * nn + b) * nn + c) * nn + d) * nn + e) * nn + f;
  };

  // J(a,b,c; d,e,f) = sum_ell < T0(xi_b e_{a dbar}), conj(xi_e e_{f cbar}) >_dv
  // U2(a,b,c; d,e,f) = sum_ell < Q_{b ebar}(e_{a dbar}), e_{c fbar} >_dv
  std::vector<Complex> Jtab(nn * nn * nn * nn * nn * nn, Complex(0, 0));
  std::vector<Complex> U2tab(nn * nn * nn * nn * nn * nn, Complex(0, 0));
  for (int a = 0; a < n; ++a)
    for (int d = 0; d < n; ++d)
      for (int b = 0; b < n; ++b)
        for (int e = 0; e < n; ++e)
          for (int ell = 0; ell < m; ++ell) {
            const Section q_be = q_apply(e_sec(b, e, ell),
                                         F.f[b][e].on_collar[static_cast<size_t>(ell)],
                                         e_sec(a, d, ell));
            for (int c = 0; c < n; ++c)
              for (int f = 0; f < n; ++f) {
                Jtab[idx6(a, b, c, d, e, f)] +=
                    inner_dv(F.t_xie[a][d][b][static_cast<size_t>(ell)],
                             conj_section(F.xie[f][c][e][static_cast<size_t>(ell)]));
                U2tab[idx6(a, b, c, d, e, f)] += inner_dv(q_be, e_sec(c, f, ell));
              }
          }
  auto J = [&](int a, int b, int c, int d, int e, int f) { return Jtab[idx6(a, b, c, d, e, f)]; };
  auto U2 = [&](int a, int b, int c, int d, int e, int f) {
    return U2tab[idx6(a, b, c, d, e, f)];
  };

  // V(a,b,c; q,beta) = sum_ell < xi_b(e_{a qbar}), e_{c betabar} >_dv
  std::vector<Complex> Vtab(nn * nn * nn * nn * nn, Complex(0, 0));
  auto vidx = [nn](int a, int b, int c, int q, int be) {
    return (((static_cast<size_t>(a) * nn + b) * nn + c) * nn + q) * nn + be;
  };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int q = 0; q < n; ++q)
          for (int be = 0; be < n; ++be) {
            Complex acc = 0.0;
            for (int ell = 0; ell < m; ++ell)
              acc += inner_dv(F.xie[a][q][b][static_cast<size_t>(ell)], e_sec(c, be, ell));
            Vtab[vidx(a, b, c, q, be)] = acc;
          }

  // SV(x,y,z; q,beta): sigma1 sum over the six slot orders of (x,y,z).
  auto SV = [&](int x, int y, int z, int q, int be) {
    const int v[3] = {x, y, z};
    Complex acc = 0.0;
    for (const auto& p : P3) acc += Vtab[vidx(v[p[0]], v[p[1]], v[p[2]], q, be)];
    return acc;
  };

  // M1(x,y; q) = sum_{alpha,beta} Hinv(alpha,beta) SV(x,y,alpha; q,beta);
  // block 3 reduces to -tau^{p qbar} M1(i,k;q) conj(M1(j,l;p)).
  std::vector<Complex> M1(nn * nn * nn, Complex(0, 0));
  auto m1idx = [nn](int x, int y, int q) { return (static_cast<size_t>(x) * nn + y) * nn + q; };
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int q = 0; q < n; ++q) {
        Complex acc = 0.0;
        for (int al = 0; al < n; ++al)
          for (int be = 0; be < n; ++be) acc += Hinv(al, be) * SV(x, y, al, q, be);
        M1[m1idx(x, y, q)] = acc;
      }

  CurvatureTensor out(n);
  if (blocks) {
    blocks->b1 = VectorXcd::Zero(out.data.size());
    blocks->b2 = VectorXcd::Zero(out.data.size());
    blocks->b3 = VectorXcd::Zero(out.data.size());
    blocks->b4 = VectorXcd::Zero(out.data.size());
  }

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Complex b1 = 0.0, b2 = 0.0, b3 = 0.0, b4 = 0.0;

          for (int al = 0; al < n; ++al)
            for (int be = 0; be < n; ++be) {
              const Complex w = Hinv(al, be);
              if (w == Complex(0.0, 0.0)) continue;
              const int trip[3] = {i, k, al};
              Complex s1 = 0.0, s2 = 0.0;
              for (const auto& p : P3) {
                const int a = trip[p[0]], b = trip[p[1]], c = trip[p[2]];
                // braces hold the two xi-slot terms; sigma2 swaps jbar <-> betabar
                s1 += J(a, b, c, j, l, be) + J(a, b, c, j, be, l);
                s1 += J(a, b, c, be, l, j) + J(a, b, c, be, j, l);
                s2 += U2(a, b, c, j, l, be);
              }
              b1 += w * s1;
              b2 += w * s2;
            }

          for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
              b3 -= tau_inv_like(p, q) * M1[m1idx(i, k, q)] * std::conj(M1[m1idx(j, l, p)]);
              b4 += tau.mat(p, j) * Hinv(p, q) * R.at(i, q, k, l);
            }

          out.at(i, j, k, l) = b1 + b2 + b3 + b4;
          if (blocks) {
            const int idx = ((i * n + j) * n + k) * n + l;
            blocks->b1[idx] = b1;
            blocks->b2[idx] = b2;
            blocks->b3[idx] = b3;
            blocks->b4[idx] = b4;
          }
        }

  if (blocks) {
    // Contraction-order diagnostic on the (0,0,0,0) block-1 entry: literal
    // sigma1 under the contraction (the contracted index alpha permuted
    // through all three slots) versus the collapsed reading that pins alpha
    // to the third slot and multiplies the (i,k) orders by 3.
    Complex lit = 0.0, alt = 0.0;
    for (int al = 0; al < n; ++al)
      for (int be = 0; be < n; ++be) {
        const Complex w = Hinv(al, be);
        const int trip[3] = {0, 0, al};
        for (const auto& p : P3) {
          const int a = trip[p[0]], b = trip[p[1]], c = trip[p[2]];
          lit += w * (J(a, b, c, 0, 0, be) + J(a, b, c, 0, be, 0) + J(a, b, c, be, 0, 0) +
                      J(a, b, c, be, 0, 0));
        }
        alt += w * 6.0 *
               (J(0, 0, al, 0, 0, be) + J(0, 0, al, 0, be, 0) + 2.0 * J(0, 0, al, be, 0, 0));
      }
    blocks->sigma_order_diff = std::abs(lit - alt);
  }
  return out;
}

}  // namespace

CurvatureTensor ricci_curvature(const BeltramiFamily& fam, const FamilyFields& F,
                                const HermitianForm& h, const CurvatureTensor& R,
                                const HermitianForm& tau, const HermitianForm& tau_inv_like,
                                CurvatureBlocks* blocks) {
  return curvature_blocks(fam, F, h, R, tau, tau_inv_like.inv, blocks);
}

CurvatureTensor perturbed_curvature(const BeltramiFamily& fam, const FamilyFields& F,
                                    const HermitianForm& h, const CurvatureTensor& R,
                                    const HermitianForm& tau, const HermitianForm& tau_tilde,
                                    Real C, CurvatureBlocks* blocks) {
  CurvatureTensor out = curvature_blocks(fam, F, h, R, tau, tau_tilde.inv, blocks);
  out.data += C * R.data;
  return out;
}

Real holomorphic_sectional(const CurvatureTensor& T, const HermitianForm& g, const VectorXcd& v) {
  if (v.size() != T.n) throw domain_error("holomorphic_sectional: dimension mismatch");
  if (v.cwiseAbs().maxCoeff() == 0.0) throw domain_error("holomorphic_sectional: zero vector");
  Complex tv = 0.0;
  for (int i = 0; i < T.n; ++i)
    for (int j = 0; j < T.n; ++j)
      for (int k = 0; k < T.n; ++k)
        for (int l = 0; l < T.n; ++l)
          tv += T.at(i, j, k, l) * v[i] * std::conj(v[j]) * v[k] * std::conj(v[l]);
  const Complex nrm2 = (v.adjoint() * g.mat * v)(0, 0);
  return -tv.real() / (nrm2.real() * nrm2.real());
}

MatrixXcd ricci_contract(const CurvatureTensor& T, const HermitianForm& g) {
  const int n = T.n;
  MatrixXcd out = MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex acc = 0.0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) acc += g.inv(k, l) * T.at(i, j, k, l);
      out(i, j) = -acc;
    }
  return out;
}

Real mcmullen_log(Real x) {
  if (!(x > 0.0)) throw domain_error("mcmullen_log: x must be positive");
  if (x >= 2.0) return std::log(x);
  if (x <= 1.0) return 0.0;
  return quintic_smoothstep(x - 1.0) * std::log(x);
}

Real mcmullen_log_d2(Real x) {
  if (!(x > 0.0)) throw domain_error("mcmullen_log_d2: x must be positive");
  if (x >= 2.0) return -1.0 / (x * x);
  if (x <= 1.0) return 0.0;
  const Real y = x - 1.0;
  return quintic_smoothstep_d2(y) * std::log(x) + 2.0 * quintic_smoothstep_d1(y) / x -
         quintic_smoothstep(y) / (x * x);
}

HermitianForm mcmullen_correction(const BeltramiFamily& fam, const HermitianForm& h_wp, Real eps,
                                  Real delta) {
  if (!(eps > 0.0 && delta > 0.0)) throw domain_error("mcmullen_correction: eps, delta > 0");
  MatrixXcd H = h_wp.mat;
  for (int i = 0; i < fam.m(); ++i) {
    const Real l = 2.0 * kPi * fam.u[i];
    const Real x = eps / l;
    // scaled-frame Hessian of -delta Log(eps/l(t)):   -delta (eps/2 pi^2)^2 Log''(x) / 4
    const Real pref = eps / (2.0 * kPi * kPi);
    H(i, i) += -delta * pref * pref * mcmullen_log_d2(x) / 4.0;
  }
  return HermitianForm::make(std::move(H), "mcmullen_correction");
}

HermitianForm poincare_model_form(const BeltramiFamily& fam) {
  const int n = fam.n(), m = fam.m();
  MatrixXcd H = MatrixXcd::Zero(n, n);
  for (int i = 0; i < m; ++i) {
    const Real ratio = fam.u[i] / kPi;  // 1/L with L = -log|t_i|
    H(i, i) = 0.25 * ratio * ratio;
  }
  for (int i = m; i < n; ++i) H(i, i) = 1.0;
  return HermitianForm::make(std::move(H), "poincare_model_form");
}

}  // namespace collarlab
