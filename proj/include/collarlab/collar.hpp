#ifndef COLLARLAB_COLLAR_HPP
#define COLLARLAB_COLLAR_HPP

#include <limits>
#include <memory>

#include "collarlab/types.hpp"

namespace collarlab {

/// A genuine hyperbolic collar in rs-coordinates.
///
/// The chart is the annulus rho/c < |z| < c carrying the model density
///   lambda = (1/2) u^2 r^{-2} csc^2(tau),   tau = u log r,
/// with modulus u = l/(2 pi) and inner scale rho = exp(-pi/u).  Lengths use
/// ds^2 = 2 lambda |dz|^2 and areas dv = lambda dx dy, so that
/// d_z d_zbar log(lambda) = lambda holds exactly.
struct CollarChart {
  Real u = 0.1;  ///< collar modulus, l / (2 pi)
  Real c = 0.5;  ///< collar constant in (0,1)

  CollarChart() = default;
  CollarChart(Real u_, Real c_) : u(u_), c(c_) { validate(); }

  void validate() const;

  Real rho() const { return std::exp(-kPi / u); }
  Real r_inner() const { return rho() / c; }
  Real r_outer() const { return c; }
  Real tau_of_r(Real r) const { return u * std::log(r); }
  Real r_of_tau(Real tau) const { return std::exp(tau / u); }
  /// tau-range of the annulus: (-pi - u log c, u log c), inside (-pi, 0).
  Real tau_min() const { return -kPi - u * std::log(c); }
  Real tau_max() const { return u * std::log(c); }
  /// Radius of the core geodesic |z| = e^{-pi^2/l}, i.e. tau = -pi/2.
  Real geodesic_radius() const { return std::exp(-kPi / (2.0 * u)); }

  bool contains_r(Real r) const { return r > r_inner() && r < r_outer(); }
};

/// Punctured-disk chart 0 < |u| < c with cusp model density
/// 1 / (2 |u|^2 (log|u|)^2).
struct CuspChart {
  Real c = 0.5;

  CuspChart() = default;
  explicit CuspChart(Real c_) : c(c_) { validate(); }
  void validate() const;
};

/// A boundary point of the compactified parameter space: m pinching
/// parameters t (|t_i| small, nonzero) and n-m non-degenerate parameters s.
struct PinchingPoint {
  std::vector<Complex> t;
  std::vector<Complex> s;

  int m() const { return static_cast<int>(t.size()); }
  int n() const { return static_cast<int>(t.size() + s.size()); }
  /// u0 = sum u_i + sum |s_j|, the combined smallness parameter.
  Real u0() const;
  void validate(Real delta) const;
};

/// Quadrature + finite-difference grid on a collar (or cusp annulus).
///
/// Nodes are uniform in xi, cell-centered and strictly inside (xi_lo, xi_hi);
/// xi = tau on collars and xi = log r on cusp annuli (scale = 1 there).
/// Two node sets are kept: the uniform fd set used by the operators and
/// solvers, and a Clenshaw-Curtis set used to integrate closed-form data.
/// Cell weights for the fd set use exact antiderivatives of the area
/// elements, so quadrature of unity reproduces the area exactly.
struct CollarGrid {
  enum class Kind { collar, cusp };
  Kind kind = Kind::collar;
  Real scale = 1.0;  ///< u for collar grids, 1 for cusp grids
  Real xi_lo = 0.0, xi_hi = 0.0;
  Real h = 0.0;      ///< fd node spacing
  int n_modes = 0;   ///< angular modes k = -K..K

  VectorXd xi;       ///< fd nodes (cell midpoints), size N
  VectorXd r;        ///< radii exp(xi/scale)
  VectorXd w_dv;     ///< hyperbolic-area cell weights (includes 2 pi)
  VectorXd w_dA;     ///< coordinate-area cell weights (includes 2 pi)

  VectorXd cc_xi;    ///< Clenshaw-Curtis nodes on [xi_lo, xi_hi]
  VectorXd cc_r;
  VectorXd cc_w_dv;  ///< CC weights times area density (includes 2 pi)
  VectorXd cc_w_dA;

  int size() const { return static_cast<int>(xi.size()); }
  int modes() const { return 2 * n_modes + 1; }

  /// sin(tau) at fd nodes for collar grids; used by every collar operator.
  VectorXd sin_tau() const { return xi.array().sin().matrix(); }
};

/// Model density of a genuine collar at radius r.  Throws outside the annulus.
Real collar_density(const CollarChart& chart, Real r);

/// Cusp model density 1/(2|u|^2 (log|u|)^2).  Throws at 0 or outside |u| < c.
Real cusp_density(const CuspChart& chart, Complex u_coord);

/// Leading-order modulus -pi / log|t|.
Real u_from_t(Complex t);

/// Plumbing identification eta * zeta = t.  Throws if eta is outside the
/// plumbing collar |t|/c < |eta| < c.
Complex plumbing_map(Complex eta, Complex t, Real c);

/// Hyperbolic circumference of the circle tau = -pi/2, by quadrature of
/// sqrt(2 lambda) |dz|; equals l = 2 pi u to quadrature accuracy.
Real geodesic_length_numeric(const CollarChart& chart, int n_samples);

/// Single-factor local model of the asymptotic Poincare metric,
/// 1 / (4 |t|^2 (log|t|)^2).
Real poincare_model_density(Complex t);

/// Build the quadrature/FD grid for a collar.  An optional xi-band
/// [band_lo, band_hi] restricts the grid to a sub-annulus (defaults to the
/// full collar range); the residual and quadrature machinery is unchanged.
CollarGrid grid_build(const CollarChart& chart, int n_tau, int n_modes,
                      Real band_lo = std::numeric_limits<Real>::quiet_NaN(),
                      Real band_hi = std::numeric_limits<Real>::quiet_NaN());

/// Build a grid on the cusp annulus r_lo < |u| < r_hi (both < chart.c).
CollarGrid grid_build_cusp(const CuspChart& chart, Real r_lo, Real r_hi, int n_tau, int n_modes);

/// Closed-form collar area pi*u*(cot(tau_min) - cot(tau_max)) between the
/// grid's xi bounds; the oracle for the quadrature weights.
Real collar_area_closed_form(const CollarGrid& grid);

/// Max over interior fd nodes of |d_z d_zbar log(density) - density| for a
/// rotationally invariant density sampled at the fd nodes.  The mixed
/// derivative is (scale^2 / 4 r^2) d^2/dxi^2 on log(density), evaluated with
/// a centered stencil of the given even order (2, 4, or 6); the second
/// difference is accumulated in extended precision.
Real ke_residual(const VectorXd& density, const CollarGrid& grid, int stencil_order = 6);

}  // namespace collarlab

#endif
