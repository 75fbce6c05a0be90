#include "collarlab/comparison.hpp"

#include <algorithm>
#include <cmath>

namespace collarlab {

DomainModel DomainModel::ball(Real radius, int n) {
  if (!(radius > 0.0)) throw domain_error("DomainModel::ball: radius must be positive");
  DomainModel d;
  d.kind = Kind::ball;
  d.dim = n;
  d.r = radius;
  return d;
}

DomainModel DomainModel::disk() { return ball(1.0, 1); }

DomainModel DomainModel::annulus(Real inner, Real outer) {
  if (!(0.0 < inner && inner < outer)) throw domain_error("DomainModel::annulus: bad radii");
  DomainModel d;
  d.kind = Kind::annulus;
  d.r0 = inner;
  d.r1 = outer;
  return d;
}

DomainModel DomainModel::sandwich(Real inner, Real outer) {
  if (!(0.0 < inner && inner < outer)) throw domain_error("DomainModel::sandwich: bad radii");
  DomainModel d;
  d.kind = Kind::sandwich;
  d.r_in = inner;
  d.r_out = outer;
  return d;
}

Real kobayashi_ball(Real r, Complex v) {
  if (!(r > 0.0)) throw domain_error("kobayashi_ball: radius must be positive");
  return 2.0 * std::abs(v) / r;
}

Real caratheodory_ball(Real r, Complex v) { return kobayashi_ball(r, v); }

std::pair<Real, Real> bers_pinch_bounds(Complex v) {
  return {std::abs(v) / 3.0, std::abs(v)};
}

namespace {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration.
void gauss_legendre(int n, VectorXd& x, VectorXd& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Real z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    Real pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      Real p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const Real p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const Real dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

struct MonomialBasis {
  std::vector<int> exps;     // monomial exponents
  Real r_lo = 0.0, r_hi = 1.0;
};

MonomialBasis basis_for(const DomainModel& d, int N) {
  MonomialBasis b;
  switch (d.kind) {
    case DomainModel::Kind::ball:
    case DomainModel::Kind::disk:
      b.r_lo = 0.0;
      b.r_hi = (d.kind == DomainModel::Kind::disk) ? 1.0 : d.r;
      for (int k = 0; k < N; ++k) b.exps.push_back(k);
      break;
    case DomainModel::Kind::annulus:
      b.r_lo = d.r0;
      b.r_hi = d.r1;
      for (int k = -N; k <= N; ++k) b.exps.push_back(k);
      break;
    case DomainModel::Kind::sandwich:
      throw domain_error("bergman: no kernel model for sandwich domains");
  }
  return b;
}

// Orthonormal coefficients C (rows = sections) over the monomials by
// modified Gram-Schmidt under the quadrature L2 pairing.
MatrixXcd gram_schmidt_coeffs(const MonomialBasis& b, int n_rad) {
  const int N = static_cast<int>(b.exps.size());
  VectorXd gx, gw;
  gauss_legendre(n_rad, gx, gw);
  // Gram matrix: (z^a, z^b) = 2 pi delta_ab Int r^{a+b+1} dr (theta integral exact)
  MatrixXcd G = MatrixXcd::Zero(N, N);
  for (int a = 0; a < N; ++a)
    for (int c = 0; c < N; ++c) {
      if (b.exps[a] != b.exps[c]) continue;  // rotational orthogonality
      Real acc = 0.0;
      for (int q = 0; q < n_rad; ++q) {
        const Real r = 0.5 * (b.r_hi + b.r_lo) + 0.5 * (b.r_hi - b.r_lo) * gx[q];
        acc += gw[q] * 0.5 * (b.r_hi - b.r_lo) * std::pow(r, b.exps[a] + b.exps[c] + 1);
      }
      G(a, c) = 2.0 * kPi * acc;
    }
  MatrixXcd C = MatrixXcd::Identity(N, N);
  for (int j = 0; j < N; ++j) {
    for (int p = 0; p < j; ++p) {
      const Complex proj = (C.row(p) * G * C.row(j).adjoint())(0, 0);
      C.row(j) -= std::conj(proj) * C.row(p);
    }
    const Real nrm2 = ((C.row(j) * G * C.row(j).adjoint())(0, 0)).real();
    if (!(nrm2 > 0.0)) throw numeric_error("bergman: Gram-Schmidt breakdown");
    C.row(j) /= std::sqrt(nrm2);
  }
  return C;
}

}  // namespace

Real bergman_kernel_numeric(const DomainModel& domain, Complex z, int basis_size) {
  if (basis_size < 4) throw config_error("bergman_kernel_numeric: need basis_size >= 4");
  if (domain.dim != 1) throw config_error("bergman_kernel_numeric: 1-D model domains only");
  const MonomialBasis b = basis_for(domain, basis_size);
  const int n_rad = std::max(64, basis_size + 8);
  const MatrixXcd C = gram_schmidt_coeffs(b, n_rad);
  const Real az = std::abs(z);
  if (!(az < b.r_hi && az >= b.r_lo)) throw domain_error("bergman_kernel_numeric: z outside domain");
  Real kernel = 0.0;
  for (int j = 0; j < C.rows(); ++j) {
    Complex sig = 0.0;
    for (int a = 0; a < C.cols(); ++a) {
      if (C(j, a) == Complex(0, 0)) continue;
      sig += C(j, a) * std::pow(z, b.exps[static_cast<size_t>(a)]);
    }
    kernel += std::norm(sig);
  }
  return kernel;
}

Real bergman_metric_numeric(const DomainModel& domain, Complex z, int basis_size) {
  const Real h = 1e-3;
  auto lk = [&](Complex w) {
    const Real K = bergman_kernel_numeric(domain, w, basis_size);
    if (!(K > 0.0)) throw numeric_error("bergman_metric_numeric: vanishing kernel");
    return std::log(K);
  };
  // d_z d_zbar = 1/4 Laplacian, 5-point stencil
  const Real lap = (lk(z + h) + lk(z - h) + lk(z + Complex(0, h)) + lk(z - Complex(0, h)) -
                    4.0 * lk(z)) /
                   (h * h);
  return 0.25 * lap;
}

Real teichmuller_conorm(const BeltramiFamily& family, int i, const FamilyGrids& grids) {
  Real acc = 0.0;
  const int n_theta = 64;
  VectorXcd modes;
  for (int ell = 0; ell < family.m(); ++ell) {
    const CollarGrid& g = *grids[static_cast<size_t>(ell)];
    const int K = g.n_modes;
    for (int p = 0; p < g.cc_xi.size(); ++p) {
      quadratic_modes_at(family, i, ell, g.cc_r[p], K, modes);
      Real mean = 0.0;
      for (int jt = 0; jt < n_theta; ++jt) {
        const Real th = 2.0 * kPi * jt / n_theta;
        Complex v = 0.0;
        for (int k = -K; k <= K; ++k) v += modes[k + K] * std::polar(1.0, k * th);
        mean += std::abs(v);
      }
      mean /= n_theta;
      acc += mean * g.cc_w_dA[p];
    }
  }
  return acc;
}

namespace {

void loglog_fit(const std::vector<Real>& u, const std::vector<Real>& y, Real& slope,
                Real& residual) {
  const int n = static_cast<int>(u.size());
  Real sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const Real x = std::log(u[static_cast<size_t>(i)]);
    const Real yy = std::log(y[static_cast<size_t>(i)]);
    sx += x;
    sy += yy;
    sxx += x * x;
    sxy += x * yy;
  }
  const Real det = n * sxx - sx * sx;
  slope = (n * sxy - sx * sy) / det;
  const Real icept = (sy * sxx - sx * sxy) / det;
  residual = 0.0;
  for (int i = 0; i < n; ++i) {
    const Real x = std::log(u[static_cast<size_t>(i)]);
    const Real yy = std::log(y[static_cast<size_t>(i)]);
    residual = std::max(residual, std::abs(yy - slope * x - icept));
  }
}

void generalized_range(const MatrixXcd& A, const MatrixXcd& B, Real& lmin, Real& lmax) {
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXcd> es(A, B);
  if (es.info() != Eigen::Success)
    throw numeric_error("equivalence: generalized eigensolver failed");
  lmin = es.eigenvalues().minCoeff();
  lmax = es.eigenvalues().maxCoeff();
}

}  // namespace

SchwarzReport schwarz_check(const MetricField& g, const MetricField& h) {
  if (g.size() != h.size() || g.empty())
    throw config_error("schwarz_check: sweeps must match and be nonempty");
  SchwarzReport rep;
  std::vector<Real> us, ratios;
  for (size_t p = 0; p < g.size(); ++p) {
    Real lmin, lmax;
    generalized_range(h[p].g, g[p].g, lmin, lmax);
    rep.sup_ratio = std::max(rep.sup_ratio, lmax);
    us.push_back(g[p].u);
    ratios.push_back(lmax);
  }
  if (g.size() >= 2) {
    loglog_fit(us, ratios, rep.fitted_exponent, rep.fit_residual);
    // ratio ~ u^p blows up toward the boundary (u -> 0) only for p < 0
    rep.bounded = rep.fitted_exponent > -0.2;
  } else {
    rep.bounded = true;
  }
  return rep;
}

EquivalenceReport equivalence_report(const MetricField& A, const MetricField& B, Real c_max,
                                     Real exp_max, const std::string& name_a,
                                     const std::string& name_b) {
  if (A.size() != B.size()) throw config_error("equivalence_report: mismatched sweeps");
  EquivalenceReport rep;
  rep.metric_a = name_a;
  rep.metric_b = name_b;
  for (size_t p = 0; p < A.size(); ++p) {
    Real lmin, lmax;
    generalized_range(A[p].g, B[p].g, lmin, lmax);
    rep.t_abs.push_back(A[p].t_abs);
    rep.u.push_back(A[p].u);
    rep.lam_min.push_back(lmin);
    rep.lam_max.push_back(lmax);
  }
  if (A.size() < 2) {
    rep.verdict = EquivalenceReport::kInsufficient;
    return rep;
  }
  rep.global_min = *std::min_element(rep.lam_min.begin(), rep.lam_min.end());
  rep.global_max = *std::max_element(rep.lam_max.begin(), rep.lam_max.end());
  std::vector<Real> mid(rep.u.size());
  for (size_t p = 0; p < mid.size(); ++p) mid[p] = std::sqrt(rep.lam_min[p] * rep.lam_max[p]);
  loglog_fit(rep.u, mid, rep.fitted_exponent, rep.fit_residual);
  const bool within = rep.global_min >= 1.0 / c_max && rep.global_max <= c_max;
  const bool flat = std::abs(rep.fitted_exponent) < exp_max;
  rep.verdict = (within && flat) ? EquivalenceReport::kEquivalent
                                 : EquivalenceReport::kNotEquivalent;
  return rep;
}

}  // namespace collarlab
