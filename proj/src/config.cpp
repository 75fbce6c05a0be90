#include "collarlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <fstream>
#include <map>
#include <sstream>

namespace collarlab {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<Real> parse_list(const std::string& v) {
  std::vector<Real> out;
  std::istringstream is(v);
  Real x;
  while (is >> x) out.push_back(x);
  return out;
}

std::string fmt(Real x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmt_list(const std::vector<Real>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += " ";
    out += fmt(v[i]);
  }
  return out;
}

}  // namespace

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open " + path);
  return parse(in);
}

Config Config::parse(std::istream& in) {
  Config cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("config: line " + std::to_string(lineno) + " is not key = value");
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

void Config::set(const std::string& key, const std::string& value) {
  auto as_real = [&](Real& slot) { slot = std::stod(value); };
  auto as_int = [&](int& slot) { slot = std::stoi(value); };
  if (key == "n_tau") as_int(n_tau);
  else if (key == "modes_k") as_int(modes_k);
  else if (key == "collar_c") as_real(collar_c);
  else if (key == "collar_c1") as_real(collar_c1);
  else if (key == "profile") profile = value;
  else if (key == "m") as_int(m);
  else if (key == "n_dirs") as_int(n_dirs);
  else if (key == "t_abs") t_abs = parse_list(value);
  else if (key == "t_phase") t_phase = parse_list(value);
  else if (key == "s_abs") s_abs = parse_list(value);
  else if (key == "tail_amp") as_real(tail_amp);
  else if (key == "tail_kmax") as_int(tail_kmax);
  else if (key == "bmix_amp") as_real(bmix_amp);
  else if (key == "thick_h") thick_h = parse_list(value);
  else if (key == "thick_r") thick_r = parse_list(value);
  else if (key == "delta_max") as_real(delta_max);
  else if (key == "bound_M") as_real(bound_M);
  else if (key == "bound_eps") as_real(bound_eps);
  else if (key == "sweep_u") sweep_u = parse_list(value);
  else if (key == "sweep_logt") {
    const std::vector<Real> v = parse_list(value);
    if (v.size() != 3) throw config_error("config: sweep_logt wants 'start stop count'");
    sweep_logt_start = v[0];
    sweep_logt_stop = v[1];
    sweep_logt_count = static_cast<int>(v[2]);
  } else if (key == "pert_C") as_real(pert_C);
  else if (key == "mcmullen_eps") as_real(mcmullen_eps);
  else if (key == "mcmullen_delta") as_real(mcmullen_delta);
  else if (key == "c_max") as_real(c_max);
  else if (key == "eq_exp_max") as_real(eq_exp_max);
  else if (key == "out_dir") out_dir = value;
  else if (key == "threads") as_int(threads);
  else if (key == "seed") seed = static_cast<unsigned>(std::stoul(value));
  else if (key == "tol_solver") as_real(tol_solver);
  else if (key == "tol_sym") as_real(tol_sym);
  else if (key == "tol_area_rel") as_real(tol_area_rel);
  else throw config_error("config: unknown key '" + key + "'");
}

void Config::validate() const {
  if (n_tau < 8) throw config_error("config: n_tau must be >= 8");
  if (modes_k < 2 + tail_kmax)
    throw config_error("config: modes_k must be >= 2 + tail_kmax");
  if (!(collar_c > 0 && collar_c < 1 && collar_c1 > 0 && collar_c1 < collar_c))
    throw config_error("config: need 0 < collar_c1 < collar_c < 1");
  if (profile != "leading" && profile != "decorated")
    throw config_error("config: profile must be 'leading' or 'decorated'");
  if (m < 1 || n_dirs < m) throw config_error("config: need 1 <= m <= n_dirs");
  if (static_cast<int>(t_abs.size()) != m)
    throw config_error("config: t_abs must list m moduli");
  for (Real t : t_abs)
    if (!(t > 0 && t < 1)) throw config_error("config: t_abs entries must lie in (0,1)");
  if (!t_phase.empty() && static_cast<int>(t_phase.size()) != m)
    throw config_error("config: t_phase must list m phases when given");
  if (!s_abs.empty() && static_cast<int>(s_abs.size()) != n_dirs - m)
    throw config_error("config: s_abs must list n_dirs - m values when given");
  if (!thick_h.empty() && static_cast<int>(thick_h.size()) != n_dirs - m)
    throw config_error("config: thick_h must list n_dirs - m values when given");
  if (!thick_r.empty() && static_cast<int>(thick_r.size()) != n_dirs - m)
    throw config_error("config: thick_r must list n_dirs - m values when given");
  for (Real v : thick_h)
    if (!(v > 0)) throw config_error("config: thick_h entries must be positive");
  if (sweep_logt_count < 0 || sweep_logt_count == 1)
    throw config_error("config: sweep_logt count must be 0 or >= 2");
  if (sweep_logt_count > 0 && !(sweep_logt_start < 0 && sweep_logt_stop < 0))
    throw config_error("config: sweep_logt range must be negative (log10 |t|)");
  for (Real u : sweep_u)
    if (!(u > 0 && u < 1)) throw config_error("config: sweep_u entries must lie in (0,1)");
  if (!(pert_C > 0)) throw config_error("config: pert_C must be positive");
  if (!(mcmullen_eps > 0 && mcmullen_delta > 0))
    throw config_error("config: mcmullen_eps/mcmullen_delta must be positive");
  if (!(c_max > 1)) throw config_error("config: c_max must exceed 1");
  if (threads < 1) throw config_error("config: threads must be >= 1");
}

std::vector<Real> Config::sweep_points_u() const {
  std::vector<Real> us = sweep_u;
  if (us.empty() && sweep_logt_count >= 2) {
    for (int i = 0; i < sweep_logt_count; ++i) {
      const Real lg =
          sweep_logt_start +
          (sweep_logt_stop - sweep_logt_start) * i / static_cast<Real>(sweep_logt_count - 1);
      us.push_back(-kPi / (lg * std::log(10.0)));
    }
  }
  if (us.empty()) throw config_error("config: empty sweep (set sweep_u or sweep_logt)");
  std::sort(us.begin(), us.end(), std::greater<Real>());
  return us;
}

std::string Config::resolved_text() const {
  std::ostringstream os;
  os << "n_tau = " << n_tau << "\n";
  os << "modes_k = " << modes_k << "\n";
  os << "collar_c = " << fmt(collar_c) << "\n";
  os << "collar_c1 = " << fmt(collar_c1) << "\n";
  os << "profile = " << profile << "\n";
  os << "m = " << m << "\n";
  os << "n_dirs = " << n_dirs << "\n";
  os << "t_abs = " << fmt_list(t_abs) << "\n";
  if (!t_phase.empty()) os << "t_phase = " << fmt_list(t_phase) << "\n";
  if (!s_abs.empty()) os << "s_abs = " << fmt_list(s_abs) << "\n";
  os << "tail_amp = " << fmt(tail_amp) << "\n";
  os << "tail_kmax = " << tail_kmax << "\n";
  os << "bmix_amp = " << fmt(bmix_amp) << "\n";
  if (!thick_h.empty()) os << "thick_h = " << fmt_list(thick_h) << "\n";
  if (!thick_r.empty()) os << "thick_r = " << fmt_list(thick_r) << "\n";
  os << "delta_max = " << fmt(delta_max) << "\n";
  os << "bound_M = " << fmt(bound_M) << "\n";
  os << "bound_eps = " << fmt(bound_eps) << "\n";
  if (!sweep_u.empty()) os << "sweep_u = " << fmt_list(sweep_u) << "\n";
  if (sweep_logt_count > 0)
    os << "sweep_logt = " << fmt(sweep_logt_start) << " " << fmt(sweep_logt_stop) << " "
       << sweep_logt_count << "\n";
  os << "pert_C = " << fmt(pert_C) << "\n";
  os << "mcmullen_eps = " << fmt(mcmullen_eps) << "\n";
  os << "mcmullen_delta = " << fmt(mcmullen_delta) << "\n";
  os << "c_max = " << fmt(c_max) << "\n";
  os << "eq_exp_max = " << fmt(eq_exp_max) << "\n";
  os << "out_dir = " << out_dir << "\n";
  os << "threads = " << threads << "\n";
  os << "seed = " << seed << "\n";
  os << "tol_solver = " << fmt(tol_solver) << "\n";
  os << "tol_sym = " << fmt(tol_sym) << "\n";
  os << "tol_area_rel = " << fmt(tol_area_rel) << "\n";
  return os.str();
}

}  // namespace collarlab
