#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "weylstrip_cli/scenario.hpp"

namespace {

constexpr int kExitSchema = 2;
constexpr int kExitNumerical = 3;

// Logs go to stderr so a report written to stdout stays machine-readable.
void configure_logging() {
  auto logger = spdlog::stderr_color_mt("weylstrip");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("WEYLSTRIP_LOG")) {
    const auto parsed = spdlog::level::from_str(level);
    // from_str maps unknown names to off; only honour names it really knows.
    if (parsed != spdlog::level::off || std::string(level) == "off") spdlog::set_level(parsed);
  }
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  namespace ws = weylstrip;

  CLI::App app{"Weyl functions and boundary-data recovery for the matrix defocusing NLS on a semi-strip"};
  app.require_subcommand(1);
  std::string config_path, out_path, format;
  int workers = 1;
  for (const char* mode : {"weyl", "evolve", "quarterplane", "recover", "verify"}) {
    auto* sub = app.add_subcommand(mode, std::string("run a ") + mode + " scenario");
    sub->add_option("--config", config_path, "scenario json")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "report path (default: config output.path, else stdout)");
    sub->add_option("--format", format, "json or csv (default: config output.format, else json)")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--workers", workers, "threads over z_list")->check(CLI::PositiveNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitSchema;
  }
  const std::string mode = app.get_subcommands().front()->get_name();

  try {
    const auto config = ws::cli::load_config(config_path, mode);
    const auto report = ws::cli::run_scenario(config, workers);
    ws::cli::emit_report(report, format.empty() ? config.format : format,
                         out_path.empty() ? config.out_path : out_path);
  } catch (const ws::cli::ConfigError& e) {
    std::cerr << "error [config]: " << e.what() << "\n";
    return kExitSchema;
  } catch (const ws::PreconditionError& e) {
    std::cerr << "error [precondition]: " << e.what() << "\n";
    return kExitSchema;
  } catch (const ws::DimensionError& e) {
    std::cerr << "error [dimensions]: " << e.what() << "\n";
    return kExitSchema;
  } catch (const ws::NumericalError& e) {
    std::cerr << "error [" << e.stage() << "]: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error [" << mode << "]: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
