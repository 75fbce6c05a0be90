#include <CLI11.hpp>
#include <iostream>

#include "collarlab/verify.hpp"

using namespace collarlab;

namespace {

Config load_config(const std::string& path, const std::string& out_dir, int threads) {
  Config cfg = path.empty() ? Config{} : Config::from_file(path);
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (threads > 0) cfg.threads = threads;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"collarlab: collar-model metrics on degenerating surfaces"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int threads = 0;
  std::vector<std::string> only;
  app.add_option("--config", config_path, "key=value configuration file");
  app.add_option("--out", out_dir, "output directory (overrides config)");
  app.add_option("--threads", threads, "worker threads (affects speed, never results)");

  CLI::App* sweep = app.add_subcommand("sweep", "run the pipeline over the sweep, write CSV/JSON");
  CLI::App* verify = app.add_subcommand("verify", "run the acceptance criteria");
  verify->add_option("--only", only, "run only the named criteria");
  CLI::App* equiv = app.add_subcommand("equivalence", "pairwise metric-equivalence reports");

  CLI11_PARSE(app, argc, argv);

  try {
    const Config cfg = load_config(config_path, out_dir, threads);
    if (sweep->parsed()) {
      cmd_sweep(cfg, std::cout);
      return 0;
    }
    if (equiv->parsed()) {
      cmd_equivalence(cfg, std::cout);
      return 0;
    }
    if (verify->parsed()) {
      const auto results = run_acceptance(cfg, only);
      std::cout << format_table(results);
      return all_passed(results) ? 0 : 1;
    }
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const validation_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
