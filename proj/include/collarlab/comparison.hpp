#ifndef COLLARLAB_COMPARISON_HPP
#define COLLARLAB_COMPARISON_HPP

#include <string>
#include <vector>

#include "collarlab/metrics.hpp"

namespace collarlab {

/// Model domains on which the classical invariant metrics are evaluated.
struct DomainModel {
  enum class Kind { ball, disk, annulus, sandwich };
  Kind kind = Kind::disk;
  int dim = 1;
  Real r = 1.0;              // ball radius
  Real r0 = 0.5, r1 = 1.0;   // annulus radii
  Real r_in = 2.0, r_out = 6.0;  // sandwich radii

  static DomainModel ball(Real radius, int n = 1);
  static DomainModel disk();
  static DomainModel annulus(Real inner, Real outer);
  static DomainModel sandwich(Real inner, Real outer);
};

/// Kobayashi norm of v at the center of the ball B_r: (2/r) |v|.
Real kobayashi_ball(Real r, Complex v);
/// Caratheodory norm at the center of B_r; equals the Kobayashi norm there.
Real caratheodory_ball(Real r, Complex v);

/// Two-sided Kobayashi bounds at the center of any domain sandwiched between
/// B_2 and B_6 (inclusion monotonicity): [ |v|/3, |v| ].
std::pair<Real, Real> bers_pinch_bounds(Complex v);

/// Partial-sum Bergman kernel of a 1-D model domain by quadrature
/// Gram-Schmidt over monomials (z^0..z^{N-1} on disks, z^{-N}..z^{N} on
/// annuli); monotone nondecreasing in N.
Real bergman_kernel_numeric(const DomainModel& domain, Complex z, int basis_size);

/// Bergman metric d^2 log BE / dz dzbar by a 5-point numerical Laplacian of
/// the log kernel.
Real bergman_metric_numeric(const DomainModel& domain, Complex z, int basis_size);

/// Teichmueller conorm of a quadratic differential: integral of |phi| against
/// the coordinate area element over the family's collars (scaled frame).
Real teichmuller_conorm(const BeltramiFamily& family, int i, const FamilyGrids& grids);

/// One sweep point of a metric field: the pinched parameter modulus, the
/// modulus u and the (scaled-frame) Hermitian form of a metric.
struct SweepPoint {
  Real t_abs = 0.0;
  Real u = 0.0;
  MatrixXcd g;
};

using MetricField = std::vector<SweepPoint>;

struct SchwarzReport {
  Real sup_ratio = 0.0;
  bool bounded = false;
  Real fitted_exponent = 0.0;  ///< slope of log(max ratio) vs log u
  Real fit_residual = 0.0;
};

/// Yau-Schwarz check: per-point max generalized eigenvalue of h against g,
/// the sup over the sweep, and a power-law fit of the ratio in u.
SchwarzReport schwarz_check(const MetricField& g, const MetricField& h);

struct EquivalenceReport {
  std::string metric_a, metric_b;
  std::vector<Real> t_abs, u, lam_min, lam_max;
  Real global_min = 0.0, global_max = 0.0;
  Real fitted_exponent = 0.0, fit_residual = 0.0;
  std::string verdict;  ///< "equivalent" / "not_equivalent" / "insufficient sweep"

  static constexpr const char* kEquivalent = "equivalent";
  static constexpr const char* kNotEquivalent = "not_equivalent";
  static constexpr const char* kInsufficient = "insufficient sweep";
};

/// Two-sided comparability of metric fields A and B over a degeneration sweep:
/// generalized eigenvalue range per point, global constants, log-log fit of
/// the ratio against u and the verdict.  Equivalent means the constants stay
/// within [1/c_max, c_max] and |fitted exponent| < exp_max (a ratio drifting
/// like u^p is a degeneration even when the constants fit on a short sweep).
EquivalenceReport equivalence_report(const MetricField& A, const MetricField& B, Real c_max,
                                     Real exp_max, const std::string& name_a,
                                     const std::string& name_b);

}  // namespace collarlab

#endif
