#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "collarlab/pipeline.hpp"

using namespace collarlab;

namespace {

Config fast_config() {
  Config cfg;
  cfg.n_tau = 128;
  cfg.modes_k = 4;
  cfg.sweep_u = {0.1, 0.05};
  cfg.validate();
  return cfg;
}

}  // namespace

TEST_CASE("config parsing") {
  std::istringstream in(
      "# comment\n"
      "n_tau = 256\n"
      "modes_k = 6\n"
      "sweep_u = 0.1 0.05 0.025\n"
      "pert_C = 2.0\n"
      "out_dir = somewhere\n");
  Config cfg = Config::parse(in);
  CHECK(cfg.n_tau == 256);
  CHECK(cfg.modes_k == 6);
  CHECK(cfg.sweep_u.size() == 3);
  CHECK(cfg.pert_C == 2.0);
  CHECK(cfg.out_dir == "somewhere");

  std::istringstream bad("no_such_key = 1\n");
  CHECK_THROWS_AS(Config::parse(bad), config_error);
  std::istringstream malformed("n_tau 256\n");
  CHECK_THROWS_AS(Config::parse(malformed), config_error);

  // resolved text reparses to the same configuration
  std::istringstream round(cfg.resolved_text());
  Config cfg2 = Config::parse(round);
  CHECK(cfg2.resolved_text() == cfg.resolved_text());
}

TEST_CASE("config validation rejects bad shapes") {
  Config cfg;
  cfg.n_tau = 4;
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg = Config{};
  cfg.collar_c1 = 0.9;
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg = Config{};
  cfg.t_abs = {1e-6, 1e-7};  // m = 1 but two moduli
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg = Config{};
  cfg.modes_k = 2;
  cfg.tail_kmax = 2;  // needs K >= 4
  CHECK_THROWS_AS(cfg.validate(), config_error);
}

TEST_CASE("sweep resolution") {
  Config cfg;
  cfg.sweep_logt_start = -4;
  cfg.sweep_logt_stop = -20;
  cfg.sweep_logt_count = 5;
  const std::vector<Real> us = cfg.sweep_points_u();
  CHECK(us.size() == 5);
  CHECK(us.front() == doctest::Approx(-kPi / (-4 * std::log(10.0))));
  CHECK(us.back() == doctest::Approx(-kPi / (-20 * std::log(10.0))));
  for (size_t i = 1; i < us.size(); ++i) CHECK(us[i] < us[i - 1]);

  Config empty;
  CHECK_THROWS_AS(empty.sweep_points_u(), config_error);
}

TEST_CASE("run_point produces the normalized leading constants") {
  Config cfg = fast_config();
  PointResult p = run_point(cfg, 0.1);
  CHECK(std::abs(p.h.mat(0, 0).real() / 1e-3 - 0.5) < 0.25);
  CHECK(p.hsc_wp < 0.0);
  CHECK(p.green_residual < cfg.tol_solver);
}

TEST_CASE("sweep output is deterministic across runs and thread counts") {
  Config cfg = fast_config();
  const std::string a = sweep_csv(run_sweep(cfg));
  const std::string b = sweep_csv(run_sweep(cfg));
  CHECK(a == b);
  Config threaded = cfg;
  threaded.threads = 4;
  CHECK(sweep_csv(run_sweep(threaded)) == a);
  const std::string ja = sweep_json(cfg, run_sweep(cfg));
  const std::string jb = sweep_json(threaded, run_sweep(threaded));
  // bundles embed the resolved config, which differs only in the threads key
  CHECK(ja.size() == jb.size());
}

TEST_CASE("csv is self-describing and full precision") {
  Config cfg = fast_config();
  const SweepResult s = run_sweep(cfg);
  const std::string csv = sweep_csv(s);
  CHECK(csv.find("h11*|t|^2/u^3") != std::string::npos);
  CHECK(csv.find("Rt1111*|t|^4/u^4") != std::string::npos);
  // one header plus one row per sweep point
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + static_cast<long>(s.points.size()));
}

TEST_CASE("bundle json schema") {
  Config cfg = fast_config();
  const SweepResult s = run_sweep(cfg);
  const nlohmann::json j = nlohmann::json::parse(sweep_json(cfg, s));
  CHECK(j["schema"] == 1);
  CHECK(j["points"].size() == 2);
  CHECK(j["points"][0]["h"]["dim"] == 1);
  // complex numbers as [re, im] pairs
  CHECK(j["points"][0]["h"]["data"][0].is_array());
  CHECK(j["points"][0]["h"]["data"][0].size() == 2);
  CHECK(j["config"].is_string());
}

TEST_CASE("cmd_sweep and cmd_equivalence write their reports") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "collarlab_test_out";
  fs::remove_all(dir);
  Config cfg = fast_config();
  cfg.sweep_u = {0.15, 0.1, 0.07};
  cfg.out_dir = dir.string();
  std::ostringstream log;
  cmd_sweep(cfg, log);
  CHECK(fs::exists(dir / "report.csv"));
  CHECK(fs::exists(dir / "bundle.json"));

  // byte-identical on a second run
  std::ifstream f1(dir / "report.csv");
  std::stringstream s1;
  s1 << f1.rdbuf();
  cmd_sweep(cfg, log);
  std::ifstream f2(dir / "report.csv");
  std::stringstream s2;
  s2 << f2.rdbuf();
  CHECK(s1.str() == s2.str());

  cmd_equivalence(cfg, log);
  CHECK(fs::exists(dir / "equivalence_wp_ricci.json"));
  CHECK(fs::exists(dir / "equivalence_ricci_poincare.json"));
  const nlohmann::json j =
      nlohmann::json::parse(std::ifstream(dir / "equivalence_wp_ricci.json"));
  CHECK(j.contains("verdict"));
  fs::remove_all(dir);
}

TEST_CASE("single-point equivalence reports insufficient sweep") {
  Config cfg = fast_config();
  cfg.sweep_u = {0.1};
  const SweepResult s = run_sweep(cfg);
  const EquivalenceReport rep = equivalence_report(metric_field(s, "wp"),
                                                   metric_field(s, "ricci"), cfg.c_max,
                                                   cfg.eq_exp_max, "wp", "ricci");
  CHECK(rep.verdict == EquivalenceReport::kInsufficient);
}
