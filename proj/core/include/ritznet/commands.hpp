#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace ritznet::cli {

inline constexpr int kExitSuccess = 0;   // all checks passed
inline constexpr int kExitFailure = 1;   // an assertion or criterion failed
inline constexpr int kExitConfig = 2;    // configuration or usage error

/// Configuration problems map to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parse JSON config text; parse failures carry the line/column diagnostic.
nlohmann::json parse_config_text(const std::string& text);
nlohmann::json load_config_file(const std::string& path);

/// Apply a --set override "key=value" or "a.b=value". The value is parsed as
/// JSON when possible and kept as a string otherwise.
void apply_override(nlohmann::json& config, const std::string& key_value);

/// Certified-approximation run over a curve corpus: CSV columns
/// curve,m,bound,measured,pass; exit 0 iff every measured error stays within
/// its certificate. An empty corpus is a usage error.
int run_approx_check(nlohmann::json config, const std::string& out_dir);

/// One ERM run; writes train_report.json and train_trace.csv.
int run_train(nlohmann::json config, const std::string& out_dir);

/// Sample-size sweep; writes rate_report.json and rate_cells.csv.
int run_rate_sweep(nlohmann::json config, const std::string& out_dir);

/// Invariant suites (sandwich, gradients, Rademacher enumeration,
/// concentration audit); writes verify_report.json; exit 0 iff all pass.
int run_verify(nlohmann::json config, const std::string& out_dir);

}  // namespace ritznet::cli
