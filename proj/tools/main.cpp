#include <optional>
#include <string>

#include <CLI11.hpp>

#include "whq/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"whquant: Weyl-Heisenberg covariant quantization toolkit"};

  std::string config_path;
  std::string output_dir;
  bool seedless = false;
  bool quiet = false;

  app.add_option("--config", config_path, "experiment config file")->required();
  app.add_option("--output", output_dir, "output directory (overrides config and env)");
  app.add_flag("--seedless", seedless,
               "accepted for compatibility; all computation is deterministic");
  app.add_flag("--quiet", quiet, "suppress progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : whq::cli::kExitConfigError;
  }

  std::optional<std::string> override;
  if (!output_dir.empty()) override = output_dir;
  return whq::cli::run_config_file(config_path, override, quiet);
}
