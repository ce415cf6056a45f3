#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlhj/grid.hpp"
#include "nlhj/hamiltonian.hpp"
#include "nlhj/levy.hpp"

namespace nlhj::cli {

using json = nlohmann::json;

/// Bad or inconsistent configuration; maps to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Check {
  std::string criterion;  // acceptance criterion id, e.g. "C6"
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string comparison;  // "<=", ">=", "=="
  bool pass = false;
};

struct Summary {
  std::string experiment;
  std::vector<Check> checks;
  double runtime_s = 0.0;

  bool pass() const;
  json to_json() const;
};

const std::vector<std::string>& experiment_names();

json load_config(const std::filesystem::path& path);

PeriodicGrid parse_grid(const json& cfg);
LevyMeasureSpec parse_measure_spec(const json& cfg, int dim);
QuadratureMeasure parse_measure(const json& cfg, const PeriodicGrid& grid);
GridField parse_field(const json& j, const PeriodicGrid& grid, const std::string& what);
JumpFunction parse_jump(const json& cfg, const PeriodicGrid& grid);
HamiltonianSpec parse_hamiltonian(const json& cfg, const PeriodicGrid& grid);

/// Runs one experiment, writes summary.json and CSVs under `out`.
Summary run_experiment(const json& cfg, const std::string& experiment, const std::filesystem::path& out);

/// 0 = every check passes, 1 = some check fails, 2 = config or runtime error.
int run(const std::filesystem::path& config, const std::string& experiment, const std::filesystem::path& out,
        std::ostream& log);

struct ValidationReport {
  std::vector<std::string> errors;
  json derived;
  bool ok() const { return errors.empty(); }
};

ValidationReport validate_config(const json& cfg);
int validate(const std::filesystem::path& config, std::ostream& log);

}  // namespace nlhj::cli
