#include "collarlab/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>

#include "collarlab/report.hpp"

namespace collarlab {

namespace {

FamilyOptions options_from(const Config& cfg) {
  FamilyOptions fo;
  fo.profile =
      cfg.profile == "leading" ? FamilyProfile::leading : FamilyProfile::decorated;
  fo.collar_c = cfg.collar_c;
  fo.collar_c1 = cfg.collar_c1;
  fo.delta = cfg.delta_max;
  fo.M = cfg.bound_M;
  fo.eps = cfg.bound_eps;
  fo.tail_amp = cfg.tail_amp;
  fo.tail_kmax = cfg.tail_kmax;
  fo.bmix_amp = cfg.bmix_amp;
  const int nt = cfg.n_dirs - cfg.m;
  if (!cfg.thick_h.empty())
    fo.thick_h = Eigen::Map<const VectorXd>(cfg.thick_h.data(), nt);
  if (!cfg.thick_r.empty())
    fo.thick_r = Eigen::Map<const VectorXd>(cfg.thick_r.data(), nt);
  return fo;
}

}  // namespace

PointResult run_point(const Config& cfg, Real u_value) {
  PointResult out;
  out.u = u_value;
  out.t_abs = std::exp(-kPi / u_value);
  std::vector<Complex> t(static_cast<size_t>(cfg.m));
  for (int j = 0; j < cfg.m; ++j) {
    const Real phase = cfg.t_phase.empty() ? 0.0 : cfg.t_phase[static_cast<size_t>(j)];
    t[static_cast<size_t>(j)] = std::polar(out.t_abs, phase);
  }
  std::vector<Complex> s(static_cast<size_t>(cfg.n_dirs - cfg.m));
  for (size_t j = 0; j < s.size(); ++j) s[j] = cfg.s_abs.empty() ? 0.01 : cfg.s_abs[j];

  out.family = make_model_family(cfg.m, cfg.n_dirs, t, s, options_from(cfg));
  const FamilyGrids grids = make_family_grids(out.family, cfg.n_tau, cfg.modes_k);

  out.h = wp_metric(out.family, grids);
  out.cometric = wp_cometric(out.family, grids);

  FamilyFields fields = assemble_fields(out.family, grids);
  out.green_residual = fields.green_residual;
  if (out.green_residual > cfg.tol_solver)
    throw numeric_error("run_point: green residual " + std::to_string(out.green_residual) +
                        " above tol_solver");

  out.R = wp_curvature(out.family, fields, cfg.tol_sym);
  out.sym_defect_R = out.R.symmetry_defect();
  out.tau = ricci_metric(out.R, out.cometric);
  out.tau_tilde = perturbed_metric(out.tau, out.h, cfg.pert_C);
  out.Rt = ricci_curvature(out.family, fields, out.h, out.R, out.tau, out.tau, &out.rt_blocks);
  out.P = perturbed_curvature(out.family, fields, out.h, out.R, out.tau, out.tau_tilde,
                              cfg.pert_C, &out.p_blocks);
  out.sym_defect_Rt = out.Rt.symmetry_defect();
  out.mcmullen = mcmullen_correction(out.family, out.h, cfg.mcmullen_eps, cfg.mcmullen_delta);
  out.poincare = poincare_model_form(out.family);

  VectorXcd v = VectorXcd::Zero(cfg.n_dirs);
  v[0] = 1.0;
  out.hsc_wp = holomorphic_sectional(out.R, out.h, v);
  out.hsc_pert = holomorphic_sectional(out.P, out.tau_tilde, v);
  return out;
}

SweepResult run_sweep(const Config& cfg) {
  const std::vector<Real> us = cfg.sweep_points_u();
  SweepResult sweep;
  sweep.points.resize(us.size());
  std::vector<std::exception_ptr> errs(us.size());

  const int workers = std::min<int>(cfg.threads, static_cast<int>(us.size()));
  if (workers <= 1) {
    for (size_t i = 0; i < us.size(); ++i) sweep.points[i] = run_point(cfg, us[i]);
    return sweep;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w]() {
      for (size_t i = static_cast<size_t>(w); i < us.size(); i += static_cast<size_t>(workers)) {
        try {
          sweep.points[i] = run_point(cfg, us[i]);
        } catch (...) {
          errs[i] = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  for (const auto& e : errs)
    if (e) std::rethrow_exception(e);
  return sweep;
}

const std::vector<std::string>& metric_field_names() {
  static const std::vector<std::string> names = {"wp", "ricci", "perturbed", "mcmullen",
                                                 "poincare"};
  return names;
}

MetricField metric_field(const SweepResult& sweep, const std::string& name) {
  MetricField field;
  for (const PointResult& p : sweep.points) {
    SweepPoint sp;
    sp.t_abs = p.t_abs;
    sp.u = p.u;
    if (name == "wp") sp.g = p.h.mat;
    else if (name == "ricci") sp.g = p.tau.mat;
    else if (name == "perturbed") sp.g = p.tau_tilde.mat;
    else if (name == "mcmullen") sp.g = p.mcmullen.mat;
    else if (name == "poincare") sp.g = p.poincare.mat;
    else throw config_error("metric_field: unknown metric '" + name + "'");
    field.push_back(std::move(sp));
  }
  return field;
}

std::string sweep_csv(const SweepResult& sweep) {
  std::string csv =
      "t_abs,log10_t,u,"
      "h11*|t|^2/u^3,hinv11*u^3/|t|^2,tau11*|t|^2/u^2,"
      "R1111*|t|^4/u^5,Rt1111*|t|^4/u^4,P1111*|t|^4/u^4,"
      "HSC_wp,HSC_pert,"
      "ratio_h11/tau11,ratio_tau11/poincare11,ratio_mcmullen11/tau11,ratio_taut11/tau11,"
      "green_residual,sym_defect_R,sym_defect_Rt,"
      "block1*|t|^4/u^4,block2*|t|^4/u^4,block3*|t|^4/u^4,block4*|t|^4/u^4\n";
  for (const PointResult& p : sweep.points) {
    const Real u = p.u;
    const Real u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
    const Real h11 = p.h.mat(0, 0).real();
    const Real hinv11 = p.cometric.mat(0, 0).real();
    const Real tau11 = p.tau.mat(0, 0).real();
    const Real r1111 = p.R.at(0, 0, 0, 0).real();
    const Real rt1111 = p.Rt.at(0, 0, 0, 0).real();
    const Real p1111 = p.P.at(0, 0, 0, 0).real();
    const std::vector<Real> cols = {
        p.t_abs, std::log10(p.t_abs), u,
        h11 / u3, hinv11 * u3, tau11 / u2,
        r1111 / u5, rt1111 / u4, p1111 / u4,
        p.hsc_wp, p.hsc_pert,
        h11 / tau11, tau11 / p.poincare.mat(0, 0).real(),
        p.mcmullen.mat(0, 0).real() / tau11, p.tau_tilde.mat(0, 0).real() / tau11,
        p.green_residual, p.sym_defect_R, p.sym_defect_Rt,
        p.rt_blocks.b1[0].real() / u4, p.rt_blocks.b2[0].real() / u4,
        p.rt_blocks.b3[0].real() / u4, p.rt_blocks.b4[0].real() / u4};
    for (size_t c = 0; c < cols.size(); ++c) {
      if (c) csv += ",";
      csv += g17(cols[c]);
    }
    csv += "\n";
  }
  return csv;
}

std::string sweep_json(const Config& cfg, const SweepResult& sweep) {
  nlohmann::json root;
  root["schema"] = 1;
  root["tool"] = {{"name", "collarlab"},
                  {"version", "0.1.0"},
                  {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                std::to_string(EIGEN_MINOR_VERSION)}};
  root["config"] = cfg.resolved_text();
  root["frame"] =
      "scaled: every tensor index in a degeneration direction i carries a factor |t_i| "
      "(covariant) or 1/|t_i| (contravariant) relative to the raw t-coordinates";
  nlohmann::json pts = nlohmann::json::array();
  for (const PointResult& p : sweep.points) {
    nlohmann::json jp;
    jp["t_abs"] = p.t_abs;
    jp["log10_t"] = std::log10(p.t_abs);
    jp["u"] = p.u;
    jp["h"] = matrix_json(p.h.mat);
    jp["cometric"] = matrix_json(p.cometric.mat);
    jp["tau"] = matrix_json(p.tau.mat);
    jp["tau_tilde"] = matrix_json(p.tau_tilde.mat);
    jp["mcmullen"] = matrix_json(p.mcmullen.mat);
    jp["poincare"] = matrix_json(p.poincare.mat);
    jp["R"] = tensor_json(p.R);
    jp["Rt"] = tensor_json(p.Rt);
    jp["P"] = tensor_json(p.P);
    jp["blocks_Rt"] = {{"b1", complex_json(p.rt_blocks.b1[0])},
                       {"b2", complex_json(p.rt_blocks.b2[0])},
                       {"b3", complex_json(p.rt_blocks.b3[0])},
                       {"b4", complex_json(p.rt_blocks.b4[0])},
                       {"sigma_order_diff", p.rt_blocks.sigma_order_diff}};
    jp["residuals"] = {{"green", p.green_residual},
                       {"sym_R", p.sym_defect_R},
                       {"sym_Rt", p.sym_defect_Rt}};
    jp["diagnostics"] = {{"hsc_wp", p.hsc_wp}, {"hsc_pert", p.hsc_pert}};
    pts.push_back(std::move(jp));
  }
  root["points"] = std::move(pts);
  return root.dump(2) + "\n";
}

std::string equivalence_json(const Config& cfg, const EquivalenceReport& rep) {
  nlohmann::json root;
  root["schema"] = 1;
  root["config"] = cfg.resolved_text();
  root["metric_a"] = rep.metric_a;
  root["metric_b"] = rep.metric_b;
  root["t_abs"] = rep.t_abs;
  root["u"] = rep.u;
  root["lambda_min"] = rep.lam_min;
  root["lambda_max"] = rep.lam_max;
  root["global_min"] = rep.global_min;
  root["global_max"] = rep.global_max;
  root["fitted_exponent"] = rep.fitted_exponent;
  root["fit_residual"] = rep.fit_residual;
  root["verdict"] = rep.verdict;
  return root.dump(2) + "\n";
}

namespace {

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw config_error("cannot open output file " + p.string());
  out << content;
}

}  // namespace

void cmd_sweep(const Config& cfg, std::ostream& log) {
  const SweepResult sweep = run_sweep(cfg);
  std::filesystem::create_directories(cfg.out_dir);
  write_file(std::filesystem::path(cfg.out_dir) / "report.csv", sweep_csv(sweep));
  write_file(std::filesystem::path(cfg.out_dir) / "bundle.json", sweep_json(cfg, sweep));
  log << "sweep: " << sweep.points.size() << " points -> " << cfg.out_dir << "/report.csv, "
      << cfg.out_dir << "/bundle.json\n";
}

void cmd_equivalence(const Config& cfg, std::ostream& log) {
  const SweepResult sweep = run_sweep(cfg);
  std::filesystem::create_directories(cfg.out_dir);
  const auto& names = metric_field_names();
  for (size_t a = 0; a < names.size(); ++a)
    for (size_t b = a + 1; b < names.size(); ++b) {
      const EquivalenceReport rep = equivalence_report(
          metric_field(sweep, names[a]), metric_field(sweep, names[b]), cfg.c_max,
          cfg.eq_exp_max, names[a], names[b]);
      const std::string fname = "equivalence_" + names[a] + "_" + names[b] + ".json";
      write_file(std::filesystem::path(cfg.out_dir) / fname, equivalence_json(cfg, rep));
      log << names[a] << " vs " << names[b] << ": " << rep.verdict;
      if (rep.verdict != EquivalenceReport::kInsufficient)
        log << "  constants [" << rep.global_min << ", " << rep.global_max << "]  exponent "
            << rep.fitted_exponent;
      log << "\n";
    }
}

}  // namespace collarlab
