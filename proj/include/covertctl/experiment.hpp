// Declarative experiment configs: TOML documents mapped onto scenarios,
// named bound checks evaluated against empirical rates, and stable
// JSON/CSV rendering of results.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "covertctl/montecarlo.hpp"
#include "covertctl/output.hpp"
#include "covertctl/toml.hpp"

namespace covertctl {

struct OutputSpec {
  enum class Format { Json, Csv };
  Format format = Format::Json;
  std::string path;  // empty: render only, write nothing
};

struct SweepSpec {
  SweepAxis axis = SweepAxis::Window;
  std::vector<double> values;
};

struct ExperimentConfig {
  Scenario scenario;
  OutputSpec output;
  std::vector<std::string> bound_checks;
  std::optional<SweepSpec> sweep;
};

/// Names accepted in [checks].names.
const std::vector<std::string>& known_checks();

/// Builds a config from a parsed document ([scenario], [output], [checks],
/// [sweep] tables). Throws std::invalid_argument on unknown keys, unknown
/// check names, or invalid combinations.
ExperimentConfig experiment_from_document(const toml::Document& doc);

/// Evaluates one named check. Throws std::invalid_argument for names not in
/// known_checks() or checks inapplicable to the scenario.
BoundCheck evaluate_check(const std::string& name, const Scenario& scenario,
                          const ErrorRates& rates);

struct ExperimentResult {
  ErrorRates rates;
  std::vector<BoundCheck> checks;  // the requested checks, in request order
  std::vector<SweepRow> sweep_rows;
  bool swept = false;
  std::string rendered;

  bool any_check_failed() const;
};

/// Runs the scenario (or sweep), evaluates the requested checks, renders the
/// result, and writes the output file when a path is configured.
ExperimentResult run_experiment(const ExperimentConfig& config);

// --- rendering -------------------------------------------------------------

/// Compact "key=value ..." scenario summary (used in CSV rows).
std::string scenario_summary(const Scenario& scenario);

/// Scenario echo with every effective field, so outputs are reproducible
/// from the file alone. Thread count is deliberately omitted: it does not
/// affect results.
void append_scenario_json(JsonWriter& w, const Scenario& scenario);

std::string render_rates_json(const Scenario& scenario, const ErrorRates& rates,
                              const std::vector<BoundCheck>& checks);
std::string render_rates_csv(const Scenario& scenario, const ErrorRates& rates,
                             const std::vector<BoundCheck>& checks);
std::string render_sweep_json(const Scenario& scenario, SweepAxis axis,
                              const std::vector<SweepRow>& rows);
std::string render_sweep_csv(SweepAxis axis, const std::vector<SweepRow>& rows);
std::string render_matrix_json(const std::string& kind, const CovMatrix& m);
std::string render_matrix_csv(const CovMatrix& m);
std::string render_trajectory_json(const Trajectory& t);
std::string render_trajectory_csv(const Trajectory& t);

/// Writes content to path, throwing std::runtime_error on I/O failure.
void write_file(const std::string& path, const std::string& content);

}  // namespace covertctl
