#ifndef COLLARLAB_SECTIONS_HPP
#define COLLARLAB_SECTIONS_HPP

#include <memory>
#include <vector>

#include "collarlab/collar.hpp"

namespace collarlab {

/// A weight-p tensor field on one collar, stored as angular Fourier modes
/// times radial samples on the grid's fd nodes.
///
/// coef(row, col) is the mode k = row - K at radial node col.  Sections on
/// different grids never mix; all operators preserve the grid.
struct Section {
  int weight = 0;
  std::shared_ptr<const CollarGrid> grid;
  MatrixXcd coef;

  Section() = default;
  Section(int w, std::shared_ptr<const CollarGrid> g)
      : weight(w), grid(std::move(g)), coef(MatrixXcd::Zero(grid->modes(), grid->size())) {}

  int modes() const { return static_cast<int>(coef.rows()); }
  int points() const { return static_cast<int>(coef.cols()); }
  int K() const { return grid->n_modes; }

  MatrixXcd::RowXpr mode(int k) { return coef.row(k + K()); }
  MatrixXcd::ConstRowXpr mode(int k) const { return coef.row(k + K()); }
  bool has_mode(int k) const { return k >= -K() && k <= K(); }
};

/// Model density lambda at the grid's fd nodes.
VectorXd density_at_nodes(const CollarGrid& grid);
/// Conformal factor rho = sqrt(lambda) at fd nodes (the Maass-operator choice
/// rho^2 = lambda, under which Box = -lambda^{-1} d_z d_zbar).
VectorXd rho_at_nodes(const CollarGrid& grid);

Section operator+(const Section& a, const Section& b);
Section operator-(const Section& a, const Section& b);
Section operator*(Complex s, const Section& a);

/// Pointwise product; weights add, modes convolve (truncated to the grid's K).
Section multiply(const Section& a, const Section& b);
/// Complex conjugate; weight flips sign, modes reflect.
Section conj_section(const Section& a);
/// Multiply by a rotationally invariant radial profile (weight unchanged).
Section scale_radial(const Section& a, const VectorXd& profile);

/// Raw d/dz in the polar mode representation (mode k -> k-1); helper shared
/// by the Maass operators and the curvature formulas.
Section deriv_z(const Section& a);
/// Raw d/dzbar (mode k -> k+1).
Section deriv_zbar(const Section& a);

/// K_p : S(p) -> S(p+1),  K_p(s) = rho^{p-1} d_z (rho^{-p} s).
Section maass_K(int p, const Section& sigma);
/// L_p : S(p) -> S(p-1),  L_p(s) = rho^{-p-1} d_zbar (rho^{p} s).
Section maass_L(int p, const Section& sigma);
/// P = K_1 K_0 on weight-0 sections.
Section operator_P(const Section& f);
/// Box = -L_1 K_0 = -lambda^{-1} d_z d_zbar on weight-0 sections.  On a
/// rotationally invariant f(tau) this is exactly -(sin^2 tau / 2) f''(tau).
Section box(const Section& f);

/// xi_k = -A_k P applied to a weight-0 section (A_k supplied by the family).
Section xi_apply(const Section& A_k, const Section& f);

/// Q_{k lbar}(f) = conj(P)(e_kl) P(f) - 2 f_kl Box f + lambda^{-1} d_z f_kl d_zbar f.
Section q_apply(const Section& e_kl, const Section& f_kl, const Section& f);

/// Two-point boundary-value problem for the Green operator T = (Box+1)^{-1}:
/// per-mode Dirichlet data at the first and last fd node.
struct GreenProblem {
  Section f;          ///< weight-0 right-hand side
  VectorXcd bc_lo;    ///< per-mode values at the first node (size modes())
  VectorXcd bc_hi;    ///< per-mode values at the last node

  explicit GreenProblem(Section rhs)
      : f(std::move(rhs)),
        bc_lo(VectorXcd::Zero(f.modes())),
        bc_hi(VectorXcd::Zero(f.modes())) {}
};

struct GreenResult {
  Section e;
  Real residual = 0.0;  ///< max over modes of the algebraic solve residual
};

/// Solve (Box + 1) e = f with the problem's Dirichlet data.
///
/// Each angular mode decouples into a symmetric positive-definite tridiagonal
/// system (the P1/finite-volume form of the collar Laplacian, in which the
/// csc^2 volume weight cancels exactly); solved by LDL^T.  The discrete
/// solve is self-adjoint with respect to the dv quadrature pairing, which is
/// what transfers the Green-operator symmetry to the curvature tensors.
GreenResult green_solve(const GreenProblem& problem);

/// Quadrature of a weight-0 section against dv (mode 0 only survives).
Complex integrate_dv(const Section& f);
/// Quadrature of the pointwise product a*b against dv (bilinear, no conjugation).
Complex inner_dv(const Section& a, const Section& b);
/// Quadrature against the coordinate area element dz dzbar = dx dy.
Complex integrate_dA(const Section& f);

/// Pointwise absolute value at fd node i (max over an angular sample set).
Real abs_at_node(const Section& s, int i, int n_theta = 0);
/// sup |sigma| over fd nodes with xi in [xi_a, xi_b].
Real sup_abs(const Section& s, Real xi_a, Real xi_b);
/// Energy sum_i |mode_k(i)|^2 w_dv(i), used by the decoupling checks.
Real mode_energy(const Section& s, int k);

/// C^k norm: sum over all weight-consistent Maass words Q with |Q| <= k of
/// sup |Q sigma| over the region.  k in {0,1,2}.
Real ck_norm(const Section& sigma, int k, Real xi_a, Real xi_b);

}  // namespace collarlab

#endif
