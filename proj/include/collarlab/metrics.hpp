#ifndef COLLARLAB_METRICS_HPP
#define COLLARLAB_METRICS_HPP

#include <array>

#include "collarlab/family.hpp"

namespace collarlab {

/// Hermitian positive-definite n x n form with a validated cached inverse.
struct HermitianForm {
  MatrixXcd mat;
  MatrixXcd inv;

  int dim() const { return static_cast<int>(mat.rows()); }
  /// Validate Hermitian-ness and positivity, cache the inverse.  `who` names
  /// the producer in error messages; eigenvalues are reported on failure.
  static HermitianForm make(MatrixXcd m, const std::string& who);
  Real min_eigenvalue() const;
};

/// Curvature tensor R_{i jbar k lbar}, index-major storage.
struct CurvatureTensor {
  int n = 0;
  VectorXcd data;

  explicit CurvatureTensor(int n_ = 0) : n(n_), data(VectorXcd::Zero(n_ * n_ * n_ * n_)) {}
  Complex& at(int i, int j, int k, int l) { return data[((i * n + j) * n + k) * n + l]; }
  Complex at(int i, int j, int k, int l) const { return data[((i * n + j) * n + k) * n + l]; }

  /// Max relative defect of the Kaehler symmetries R_{ijkl} = R_{kjil} =
  /// R_{ilkj} and the conjugation symmetry R_{ijkl} = conj(R_{jilk}).
  Real symmetry_defect() const;
};

/// The index symmetrizers of the curvature formulas: sigma1 sums the six
/// orders of the unbarred triple, sigma2 the two orders of (jbar, betabar),
/// sigma1-tilde the six orders of the barred triple.
enum class SymmetrizerKind { sigma1, sigma2, sigma1_tilde };

struct Symmetrizer {
  SymmetrizerKind kind;
  int term_count() const { return kind == SymmetrizerKind::sigma2 ? 2 : 6; }
  /// The six slot orders of a triple (rows of the S3 table).
  static const std::array<std::array<int, 3>, 6>& perms3();
};

/// Everything the curvature formulas need, assembled once per family/grid.
struct FamilyFields {
  FamilyGrids grids;
  // e[i][j], f[i][j]; per-collar sections inside
  std::vector<std::vector<PairField>> e;
  std::vector<std::vector<PairField>> f;
  // xi_k(e_{ij}) and its zero-Dirichlet Green transform, per collar:
  // xie[i][j][k][ell], t_xie[i][j][k][ell]
  std::vector<std::vector<std::vector<std::vector<Section>>>> xie;
  std::vector<std::vector<std::vector<std::vector<Section>>>> t_xie;
  Real green_residual = 0.0;
};

FamilyFields assemble_fields(const BeltramiFamily& family, const FamilyGrids& grids);

/// Weil-Petersson metric h_{i jbar} = sum of collar quadratures of A_i conj(A_j)
/// against dv plus the configured thick-part block (scaled frame throughout).
HermitianForm wp_metric(const BeltramiFamily& family, const FamilyGrids& grids);

/// Cotangent metric h^{i jbar} = integral of lambda^{-2} phi_i conj(phi_j) dv
/// plus the inverse thick block.
HermitianForm wp_cometric(const BeltramiFamily& family, const FamilyGrids& grids);

/// Wolpert's formula R_{ijkl} = integral of (e_ij f_kl + e_il f_kj) dv, plus
/// the configured thick-part diagonal entries.  Throws if the Kaehler
/// symmetries fail beyond tol.
CurvatureTensor wp_curvature(const BeltramiFamily& family, const FamilyFields& fields,
                             Real sym_tol = 1e-8);

/// Ricci metric tau_{ij} = h^{kl} R_{ijkl}, contracted with the *computed*
/// cometric per the pipeline definition.
HermitianForm ricci_metric(const CurvatureTensor& R, const HermitianForm& cometric);

/// Perturbed Ricci metric tau + C h.
HermitianForm perturbed_metric(const HermitianForm& tau, const HermitianForm& h, Real C);

/// Per-entry values of the four blocks of the curvature formula.
struct CurvatureBlocks {
  VectorXcd b1, b2, b3, b4;
  /// Literal-minus-collapsed sigma1 ordering difference on the diagonal
  /// (the contraction-order diagnostic).
  Real sigma_order_diff = 0.0;
};

/// Curvature of the Ricci metric (the four-block formula).  `metric_inv`
/// supplies h^{alpha betabar} (inverse WP metric), `tau` the Ricci metric and
/// `tau_inv_like` the tensor used in block 3 (tau^{-1} for the Ricci
/// curvature, tau-tilde^{-1} for the perturbed one).
CurvatureTensor ricci_curvature(const BeltramiFamily& family, const FamilyFields& fields,
                                const HermitianForm& h, const CurvatureTensor& R,
                                const HermitianForm& tau, const HermitianForm& tau_inv_like,
                                CurvatureBlocks* blocks = nullptr);

/// Curvature of the perturbed Ricci metric: same blocks with tau-tilde^{-1}
/// in block 3 plus C R.
CurvatureTensor perturbed_curvature(const BeltramiFamily& family, const FamilyFields& fields,
                                    const HermitianForm& h, const CurvatureTensor& R,
                                    const HermitianForm& tau, const HermitianForm& tau_tilde,
                                    Real C, CurvatureBlocks* blocks = nullptr);

/// Holomorphic sectional curvature -T(v, vbar, v, vbar) / |v|_g^4.
Real holomorphic_sectional(const CurvatureTensor& T, const HermitianForm& g, const VectorXcd& v);

/// Ricci contraction R_{ij} = -g^{kl} T_{ijkl} (uses g's cached inverse).
MatrixXcd ricci_contract(const CurvatureTensor& T, const HermitianForm& g);

/// McMullen's Log: log x for x >= 2, 0 for x <= 1, quintic-smoothstep blend
/// in between (C^2, monotone).
Real mcmullen_log(Real x);
/// Second derivative of mcmullen_log (closed form per branch).
Real mcmullen_log_d2(Real x);

/// McMullen-model metric: wp + delta * Hessian of Log(eps/l_gamma) in the
/// degeneration directions, l_i = 2 pi u_i (scaled frame).
HermitianForm mcmullen_correction(const BeltramiFamily& family, const HermitianForm& h_wp,
                                  Real eps, Real delta);

/// Asymptotic-Poincare local model as a diagonal form: 1/4 (u_i/pi)^2 in the
/// degeneration directions (the scaled 1/(4 |t|^2 log^2|t|)), 1 on the thick
/// block.
HermitianForm poincare_model_form(const BeltramiFamily& family);

}  // namespace collarlab

#endif
