#ifndef COLLARLAB_PIPELINE_HPP
#define COLLARLAB_PIPELINE_HPP

#include "collarlab/comparison.hpp"
#include "collarlab/config.hpp"

namespace collarlab {

/// Full per-point pipeline output (scaled frame; see README on frames).
struct PointResult {
  Real t_abs = 0.0;
  Real u = 0.0;
  BeltramiFamily family;
  HermitianForm h, cometric, tau, tau_tilde, mcmullen, poincare;
  CurvatureTensor R{0}, Rt{0}, P{0};
  CurvatureBlocks rt_blocks, p_blocks;
  Real green_residual = 0.0;
  Real sym_defect_R = 0.0, sym_defect_Rt = 0.0;
  Real hsc_wp = 0.0, hsc_pert = 0.0;
};

/// Run the whole metric/curvature pipeline at one sweep point (u value).
PointResult run_point(const Config& cfg, Real u_value);

struct SweepResult {
  std::vector<PointResult> points;
};

/// Run the sweep, parallel over points when cfg.threads > 1; the result is
/// deterministic and independent of the thread count.
SweepResult run_sweep(const Config& cfg);

/// Extract a per-point metric field by name: wp, ricci, perturbed, mcmullen,
/// poincare.
MetricField metric_field(const SweepResult& sweep, const std::string& name);
const std::vector<std::string>& metric_field_names();

/// report.csv content for the sweep (17 significant digits, self-describing
/// normalization names in the header).
std::string sweep_csv(const SweepResult& sweep);
/// bundle.json content: schema, resolved config, versions, per-point tensors.
std::string sweep_json(const Config& cfg, const SweepResult& sweep);
/// equivalence_<A>_<B>.json content.
std::string equivalence_json(const Config& cfg, const EquivalenceReport& rep);

/// sweep subcommand: run + write report.csv and bundle.json under out_dir.
void cmd_sweep(const Config& cfg, std::ostream& log);
/// equivalence subcommand: pairwise reports over all metric fields.
void cmd_equivalence(const Config& cfg, std::ostream& log);

}  // namespace collarlab

#endif
