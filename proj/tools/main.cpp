#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ritznet/commands.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = ".";
  bool has_seed = false;
  std::uint64_t seed = 0;
  bool has_jobs = false;
  int jobs = 0;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "JSON config file");
  cmd->add_option("--set", opts.overrides, "Override config entries as key=value (repeatable)");
  cmd->add_option("--out", opts.out_dir, "Output directory");
  cmd->add_option("--seed", opts.seed, "Master seed (overrides config)")
      ->each([&opts](const std::string&) { opts.has_seed = true; });
  cmd->add_option("--jobs", opts.jobs, "Worker parallelism for sweep cells")
      ->each([&opts](const std::string&) { opts.has_jobs = true; });
}

nlohmann::json build_config(const CommonOptions& opts) {
  nlohmann::json config = nlohmann::json::object();
  if (!opts.config_path.empty()) config = ritznet::cli::load_config_file(opts.config_path);
  for (const auto& kv : opts.overrides) ritznet::cli::apply_override(config, kv);
  if (opts.has_seed) config["seed"] = opts.seed;
  if (opts.has_jobs) config["jobs"] = opts.jobs;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shallow-network Ritz/PINN experiments: constructive approximants, ERM "
               "training, and verification suites"};
  app.require_subcommand(1);

  CommonOptions approx_opts, train_opts, sweep_opts, verify_opts;
  CLI::App* approx = app.add_subcommand("approx-check",
                                        "Certified interpolation error over a curve corpus");
  add_common(approx, approx_opts);
  CLI::App* train = app.add_subcommand("train", "One ERM training run");
  add_common(train, train_opts);
  CLI::App* sweep = app.add_subcommand("rate-sweep", "Energy-excess sweep over sample sizes");
  add_common(sweep, sweep_opts);
  CLI::App* verify = app.add_subcommand("verify", "Invariant verification suites");
  add_common(verify, verify_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ritznet::cli::kExitConfig;
  }

  try {
    if (approx->parsed())
      return ritznet::cli::run_approx_check(build_config(approx_opts), approx_opts.out_dir);
    if (train->parsed())
      return ritznet::cli::run_train(build_config(train_opts), train_opts.out_dir);
    if (sweep->parsed())
      return ritznet::cli::run_rate_sweep(build_config(sweep_opts), sweep_opts.out_dir);
    if (verify->parsed())
      return ritznet::cli::run_verify(build_config(verify_opts), verify_opts.out_dir);
  } catch (const ritznet::cli::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return ritznet::cli::kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return ritznet::cli::kExitFailure;
  }
  return ritznet::cli::kExitConfig;
}
