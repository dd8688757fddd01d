#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "whq/grid.hpp"

namespace whq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalError = 3;

/// Name of the environment variable overriding the output directory
/// (the --output flag still wins over it).
inline constexpr const char* kOutputDirEnvVar = "WHQUANT_OUTPUT_DIR";

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command {
  window,
  quantize,
  spectrum,
  deficiency,
  portrait,
  evolve,
  validate_apodization,
};

/// Flat key = value experiment description. Unknown keys are rejected; every
/// command validates the numeric fields it feeds into the modules.
struct RunConfig {
  Command command = Command::window;
  double x_min = -16.0, x_max = 16.0;
  int n = 256;
  std::string apod_kind = "pure_state";      // pure_state | weyl_wigner
  std::string psi_preset = "gaussian_ground";  // gaussian_ground | hermite_1 | file:<path>
  std::optional<double> alpha, beta;
  std::vector<double> sigma_sweep;           // one entry for plain `sigma`
  std::string scheme = "spectral";           // spectral | central_diff
  std::string output_dir = "out";
  bool emit_plots = false;
  std::string weight = "smooth_indicator";   // one | example16 | indicator | smooth_indicator
  std::string domain = "whole_line";         // whole_line | interval
  std::string observable = "window";         // portrait presets
  int eigen_count = 8;
  std::vector<double> times;
  std::optional<double> psi0_center, psi0_width;
  std::map<std::string, double> tolerances;
  std::string raw_text;                      // hashed into the manifest
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Executes the configured command, writing CSV artifacts, a manifest.json
/// and optional SVG plots into the output directory. Returns a process exit
/// status (0 ok, 2 config error, 3 numerical/environment error).
int run(const RunConfig& config, bool quiet = false);

/// Like run() but rethrows nothing and maps exceptions to exit codes; used
/// by the command-line tool after flag handling.
int run_config_file(const std::string& config_path,
                    const std::optional<std::string>& output_override, bool quiet);

/// One table row; every cell is already formatted text.
using CsvRow = std::vector<std::string>;

/// CSV with one header row, '.' decimals, LF endings; written atomically.
void emit_csv(const std::string& path, const CsvRow& header,
              const std::vector<CsvRow>& rows);

/// 17-significant-digit scientific notation, locale-independent.
std::string format_double(double v);

struct Series {
  std::string label;
  std::vector<double> y;
};

/// Standalone SVG line plot.
void emit_line_plot(const std::string& path, const std::string& title,
                    const std::vector<double>& x, const std::vector<Series>& series);

/// Standalone SVG heatmap of a 2-D field (row index = q, column index = p).
void emit_heatmap(const std::string& path, const std::string& title,
                  const std::vector<double>& q, const std::vector<double>& p,
                  const std::vector<std::vector<double>>& values);

/// FNV-1a 64-bit hash of the raw config text, hex encoded.
std::string config_hash(const std::string& text);

}  // namespace whq::cli
