#ifndef COLLARLAB_FAMILY_HPP
#define COLLARLAB_FAMILY_HPP

#include <vector>

#include "collarlab/sections.hpp"

namespace collarlab {

/// One Laurent-tail coefficient (mode k, value); k != 0.
struct TailTerm {
  int k = 0;
  Complex a;
};

using TailList = std::vector<TailTerm>;

/// Coefficient data of the holomorphic quadratic differentials on the collars:
/// phi_i(z_j) = pref_i(t) z_j^{-2} (q_i^j(z_j) + beta(i,j)) with the diagonal
/// prefactor -t_j/pi, off-diagonal -t_i/pi, and 1 for non-degenerate i.
struct QuadraticCoeffs {
  MatrixXcd beta;                           // n x m
  std::vector<std::vector<TailList>> alpha; // [i][j] tails of q_i^j
  Real M = 10.0;                            // uniform tail-sum bound
  Real eps = 0.25;                          // off-diagonal beta exponent 1/2 - eps
};

/// Coefficient data of the harmonic Beltrami differentials on the collars,
/// stored in the scaled frame: b_hat(i,j) = scale_i * b_i^j with
/// scale_i = |t_i| for degeneration directions and 1 otherwise.
struct BeltramiCoeffs {
  MatrixXcd b_hat;                          // n x m
  std::vector<std::vector<TailList>> a_hat; // [i][j] scaled tails of p_i^j
};

enum class FamilyProfile { leading, decorated };

struct FamilyOptions {
  FamilyProfile profile = FamilyProfile::leading;
  Real collar_c = 0.5;
  Real collar_c1 = 0.25;
  Real delta = 0.9;        // admissible |(t,s)| bound
  Real M = 10.0;           // validation constant
  Real eps = 0.25;         // Theorem-imp beta exponent
  Real tail_amp = 0.0;     // decorated: Laurent tail amplitude (fraction of bound)
  int tail_kmax = 2;       // decorated: highest tail |k|
  Real bmix_amp = 0.0;     // decorated: off-diagonal b constants (fraction of bound)
  VectorXd thick_h;        // diagonal O(1) metric block for directions > m
  VectorXd thick_r;        // diagonal O(1) curvature block for directions > m
};

/// A model degenerating family at one pinching point.
///
/// All coefficient data is held in the scaled frame t_i -> t_i/|t_i| (unit
/// pinching parameters with the true moduli remembered), which keeps every
/// intermediate quantity polynomial in the u_i; raw-frame evaluations are
/// provided for moderate |t| where they are representable.
struct BeltramiFamily {
  PinchingPoint point;
  std::vector<Real> u;              // moduli, u_i = -pi/log|t_i|
  std::vector<Complex> t_phase;     // unit-modulus t_i / |t_i|
  std::vector<CollarChart> charts;  // one per degeneration direction
  QuadraticCoeffs quad;
  BeltramiCoeffs belt;
  FamilyOptions opt;

  int m() const { return point.m(); }
  int n() const { return point.n(); }
  Real u0() const { return point.u0(); }
  /// Frame scale of direction i (|t_i| for i < m, 1 otherwise).
  Real direction_scale(int i) const {
    return i < m() ? std::abs(point.t[static_cast<size_t>(i)]) : 1.0;
  }
  /// Scaled-frame b coefficient of direction i on collar ell.
  Complex b_coef(int i, int ell) const { return belt.b_hat(i, ell); }
};

/// Per-collar grids for a family (index matches family.charts).
using FamilyGrids = std::vector<std::shared_ptr<const CollarGrid>>;

/// Weight-0 field attached to an index pair, one section per collar.
struct PairField {
  int i = 0, j = 0;
  std::vector<Section> on_collar;
  Real green_residual = 0.0;
};

/// Build a model family at the pinching point (t, s).
BeltramiFamily make_model_family(int m, int n, const std::vector<Complex>& t,
                                 const std::vector<Complex>& s, const FamilyOptions& opt);

/// Validate all Theorem-imp / harmonic-Beltrami coefficient bounds; throws
/// validation_error naming the first violated sum.
void validate_family(const BeltramiFamily& family);

/// Build the fd/quadrature grids for all collars of the family.
FamilyGrids make_family_grids(const BeltramiFamily& family, int n_tau, int n_modes);

/// phi_i(z) on collar j, raw frame.  Throws if z is outside the annulus.
Complex quadratic_eval(const BeltramiFamily& family, int i, int j, Complex z);
/// A_i(z) on collar j, raw frame.
Complex beltrami_eval(const BeltramiFamily& family, int i, int j, Complex z);

/// Scaled-frame angular-mode decomposition of phi_i on collar j at radius r;
/// fills modes -K..K.
void quadratic_modes_at(const BeltramiFamily& family, int i, int j, Real r, int K,
                        VectorXcd& out);
/// Scaled-frame mode decomposition of A_i on collar j at radius r.
void beltrami_modes_at(const BeltramiFamily& family, int i, int j, Real r, int K,
                       VectorXcd& out);

/// Scaled-frame A_i as a Section on collar ell's grid.
Section beltrami_section(const BeltramiFamily& family, int i, int ell, const FamilyGrids& grids);

/// f_{i jbar} = A_i conj(A_j) on every collar (scaled frame).
PairField f_pair(const BeltramiFamily& family, int i, int j, const FamilyGrids& grids);

/// e_{i jbar} = T(f_{i jbar}): per-collar Green solve with Dirichlet data from
/// the uncut interior approximation formula.
PairField e_green(const BeltramiFamily& family, int i, int j, const FamilyGrids& grids);

/// The cut-off approximation field on its support collars, zero elsewhere.
PairField e_tilde(const BeltramiFamily& family, int i, int j, const FamilyGrids& grids, Real c,
                  Real c1);

/// Smooth cut-off ramp: 1 for x <= log(c1), 0 for x >= log(c), quintic
/// smoothstep in between.
Real cutoff_eta(Real x, Real c, Real c1);
/// Bounds of the ramp derivatives (closed form of the quintic smoothstep).
void cutoff_eta_deriv_bounds(Real c, Real c1, Real& d1_max, Real& d2_max);

struct ApproxResidual {
  Real sup_raw = 0.0;   ///< sup_z |e - etilde| over the support collars (scaled frame)
  Real normalized = 0.0;///< sup divided by the Lemma order for the index case
};

/// Compare e_green with e_tilde; normalization is u_i^4 (diagonal),
/// u_i^3 u_j^3 (two degenerate directions) or u_i^3 (mixed case), which are
/// the scaled-frame versions of the paper's O(u^4/|t|^2)-type orders.
ApproxResidual approx_residual(const BeltramiFamily& family, int i, int j,
                               const FamilyGrids& grids);

/// Duality pairing [mu : phi] = integral of A_i phi_j over the collars against
/// the coordinate area element (scaled frame; scale-invariant for i == j).
Complex wp_duality_pairing(const BeltramiFamily& family, int i, int j, const FamilyGrids& grids);

/// xi_k(f) = -A_k P(f) with the family's Beltrami datum of direction k on the
/// collar f lives on.
Section xi_direction(const BeltramiFamily& family, int k, const Section& f,
                     const FamilyGrids& grids);

/// Q_{k lbar}(f) with the family's pair fields e_{k lbar}, f_{k lbar} on the
/// collar f lives on.
Section q_direction(const BeltramiFamily& family, int k, int l, const Section& f,
                    const FamilyGrids& grids);

}  // namespace collarlab

#endif
