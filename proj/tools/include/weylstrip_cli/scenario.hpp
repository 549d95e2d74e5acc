#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "weylstrip/types.hpp"

namespace weylstrip::cli {

/// Schema violations in a scenario config; mapped to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { weyl, evolve, quarterplane, recover, verify };

Mode parse_mode(const std::string& name);
std::string mode_name(Mode mode);

struct Grids {
  double x_max = 50.0;
  double t_max = 1.0;
  int steps = 1;
};

struct Tolerances {
  double ode_tol = 1e-10;
  double accept_tol = 1e-4;
};

/// Parsed and validated scenario. The original document is kept verbatim for
/// the report's config echo.
struct ScenarioConfig {
  Mode mode = Mode::weyl;
  Signature sig{1, 1};
  std::optional<nlohmann::json> potential;
  std::optional<nlohmann::json> boundary;
  std::vector<cplx> z_list;
  Grids grids;
  Tolerances tol;
  /// Weyl sweeps stop once the uncertainty drops below this.
  std::optional<double> stop_below;
  /// Jet order for recover mode.
  int jet_order = 8;
  std::string out_path;
  std::string format = "json";
  nlohmann::json source;
};

/// Validates `doc`. `mode_override` (from the command line) must agree with
/// a mode given in the document.
ScenarioConfig parse_config(const nlohmann::json& doc, const std::optional<std::string>& mode_override = {});
ScenarioConfig load_config(const std::string& path, const std::optional<std::string>& mode_override = {});

struct Record {
  cplx z;
  /// x depth, time, or jet order depending on the mode.
  double coord = 0.0;
  /// Empty when the mode produces no Weyl value.
  Mat phi;
  double uncertainty = 0.0;
  /// Named residuals; insertion order is kept for stable output.
  std::vector<std::pair<std::string, double>> residuals;
  std::vector<std::pair<std::string, bool>> flags;
};

struct Report {
  ScenarioConfig config;
  std::vector<Record> records;
  std::vector<std::pair<std::string, double>> summary;
};

/// Runs the pipeline for config.mode, spreading z values over `workers`
/// threads. Records follow z_list order.
Report run_scenario(const ScenarioConfig& config, int workers = 1);

nlohmann::json report_json(const Report& report);
/// One row per record; header only when there are no records.
std::string report_csv(const Report& report);
/// Writes the report to `path`, or to stdout when path is empty or "-".
void emit_report(const Report& report, const std::string& format, const std::string& path);

}  // namespace weylstrip::cli
