#ifndef COLLARLAB_CONFIG_HPP
#define COLLARLAB_CONFIG_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "collarlab/types.hpp"

namespace collarlab {

/// Flat key=value run configuration.  Unknown keys are rejected; every run
/// embeds the fully resolved form (resolved_text) in its outputs.
struct Config {
  // discretization
  int n_tau = 512;
  int modes_k = 8;
  // collar constants
  Real collar_c = 0.5;
  Real collar_c1 = 0.25;
  // family shape
  std::string profile = "leading";
  int m = 1;
  int n_dirs = 1;
  std::vector<Real> t_abs{1e-6};
  std::vector<Real> t_phase;     // radians; defaults to 0
  std::vector<Real> s_abs;       // n_dirs - m values; defaults to 0.01
  Real tail_amp = 0.0;
  int tail_kmax = 2;
  Real bmix_amp = 0.0;
  std::vector<Real> thick_h;     // defaults to 1
  std::vector<Real> thick_r;
  Real delta_max = 0.9;
  Real bound_M = 10.0;
  Real bound_eps = 0.25;
  // sweep: list of u values, or a log10|t| range
  std::vector<Real> sweep_u;
  Real sweep_logt_start = 0.0, sweep_logt_stop = 0.0;
  int sweep_logt_count = 0;
  // metric parameters
  Real pert_C = 1.0;
  Real mcmullen_eps = 5.0;
  Real mcmullen_delta = 5.0;
  Real c_max = 32.0;
  Real eq_exp_max = 0.7;  ///< |fitted exponent| above this flags degeneration
  // outputs / execution
  std::string out_dir = "out";
  int threads = 1;
  unsigned seed = 12345;
  // tolerances
  Real tol_solver = 1e-10;
  Real tol_sym = 1e-8;
  Real tol_area_rel = 1e-6;

  static Config from_file(const std::string& path);
  static Config parse(std::istream& in);
  /// Apply one key=value override (CLI flags route through this).
  void set(const std::string& key, const std::string& value);
  void validate() const;

  /// The resolved sweep as a list of u values (largest first).  Throws
  /// config_error when no sweep is configured.
  std::vector<Real> sweep_points_u() const;

  /// Canonical key=value dump embedded in every output bundle.
  std::string resolved_text() const;
};

}  // namespace collarlab

#endif
