#include "covertctl/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace covertctl {
namespace {

[[noreturn]] void config_error(const std::string& what) {
  throw std::invalid_argument("config: " + what);
}

double get_number(const toml::Table& t, const std::string& key, double fallback) {
  const auto it = t.find(key);
  if (it == t.end()) return fallback;
  if (!it->second.is_number()) config_error("'" + key + "' must be a number");
  return it->second.as_number();
}

std::int64_t get_integer(const toml::Table& t, const std::string& key,
                         std::int64_t fallback) {
  const auto it = t.find(key);
  if (it == t.end()) return fallback;
  if (it->second.kind != toml::Value::Kind::Integer) {
    config_error("'" + key + "' must be an integer");
  }
  return it->second.integer;
}

std::string get_string(const toml::Table& t, const std::string& key,
                       const std::string& fallback) {
  const auto it = t.find(key);
  if (it == t.end()) return fallback;
  if (it->second.kind != toml::Value::Kind::String) {
    config_error("'" + key + "' must be a string");
  }
  return it->second.text;
}

bool get_bool(const toml::Table& t, const std::string& key, bool fallback) {
  const auto it = t.find(key);
  if (it == t.end()) return fallback;
  if (it->second.kind != toml::Value::Kind::Boolean) {
    config_error("'" + key + "' must be a boolean");
  }
  return it->second.boolean;
}

bool has(const toml::Table& t, const std::string& key) {
  return t.find(key) != t.end();
}

NoiseModel noise_from_table(const toml::Table& t) {
  const std::string kind = get_string(t, "noise", "gaussian");
  const double sigma = get_number(t, "sigma", 1.0);
  if (kind == "gaussian") return NoiseModel::gaussian(sigma);
  const double bound = get_number(t, "noise_bound", 0.0);
  if (kind == "uniform") return NoiseModel::uniform_bounded(bound);
  if (kind == "truncated_gaussian") {
    return has(t, "noise_bound") ? NoiseModel::truncated_gaussian(sigma, bound)
                                 : NoiseModel::truncated_gaussian(sigma);
  }
  config_error("unknown noise kind '" + kind + "'");
}

ControllerSpec controller_from_table(const toml::Table& t, double gain,
                                     const NoiseModel& noise) {
  const std::string kind = get_string(t, "controller", "none");
  if (kind == "none") return ControllerSpec::none();
  if (kind == "one_bit") {
    if (!noise.has_bounded_support()) {
      config_error("one_bit controller requires bounded noise");
    }
    if (has(t, "c1")) {
      return ControllerSpec::one_bit(get_number(t, "c1", 0.0), noise.bound, gain);
    }
    return ControllerSpec::one_bit_fixed_point(noise.bound, gain);
  }
  if (kind == "threshold") {
    return ControllerSpec::threshold_reset(get_number(t, "D", 0.0), gain);
  }
  if (kind == "gain_change") {
    return ControllerSpec::gain_change(gain, get_number(t, "b", 0.0),
                                       get_bool(t, "relaxed", false));
  }
  config_error("unknown controller '" + kind + "'");
}

DetectorSpec::Kind detector_kind_from_name(const std::string& name) {
  if (name == "magnitude") return DetectorSpec::Kind::Magnitude;
  if (name == "control_energy") return DetectorSpec::Kind::ControlEnergy;
  if (name == "residual_energy") return DetectorSpec::Kind::ResidualEnergy;
  if (name == "reset_lrt") return DetectorSpec::Kind::ResetLrt;
  if (name == "gaussian_lrt") return DetectorSpec::Kind::GaussianLrt;
  config_error("unknown detector '" + name + "'");
}

const char* detector_name(DetectorSpec::Kind k) {
  switch (k) {
    case DetectorSpec::Kind::Magnitude: return "magnitude";
    case DetectorSpec::Kind::ControlEnergy: return "control_energy";
    case DetectorSpec::Kind::ResidualEnergy: return "residual_energy";
    case DetectorSpec::Kind::ResetLrt: return "reset_lrt";
    case DetectorSpec::Kind::GaussianLrt: return "gaussian_lrt";
  }
  return "?";
}

const char* controller_name(ControllerSpec::Kind k) {
  switch (k) {
    case ControllerSpec::Kind::None: return "none";
    case ControllerSpec::Kind::OneBit: return "one_bit";
    case ControllerSpec::Kind::Threshold: return "threshold";
    case ControllerSpec::Kind::GainChange: return "gain_change";
  }
  return "?";
}

const char* noise_name(NoiseModel::Kind k) {
  switch (k) {
    case NoiseModel::Kind::Gaussian: return "gaussian";
    case NoiseModel::Kind::UniformBounded: return "uniform";
    case NoiseModel::Kind::TruncatedGaussian: return "truncated_gaussian";
  }
  return "?";
}

/// True when the scenario sits in the regime where the detector's
/// (1-delta)-detection guarantee applies.
bool detection_guaranteed(const Scenario& sc) {
  switch (sc.detector.kind) {
    case DetectorSpec::Kind::ControlEnergy: {
      const double e_u = one_bit_energy_bounds(sc.controller.c1,
                                               sc.controller.gain,
                                               sc.controller.noise_bound)
                             .lower;
      const double snr = e_u / (sc.detector.sigma_v * sc.detector.sigma_v);
      return sc.detector.window >=
             std::ceil(k0_control_energy(snr, sc.detector.delta));
    }
    case DetectorSpec::Kind::ResidualEnergy: {
      const double e_u = one_bit_energy_bounds(sc.controller.c1,
                                               sc.controller.gain,
                                               sc.controller.noise_bound)
                             .lower;
      return sc.detector.window >=
             std::ceil(k0_residual_energy(e_u, sc.params.noise.variance(),
                                          sc.params.noise.fourth_moment(),
                                          sc.detector.delta)
                           .k0);
    }
    case DetectorSpec::Kind::ResetLrt:
      return std::abs(sc.params.gain) >=
             detection_gain_threshold(sc.detector.delta);
    case DetectorSpec::Kind::Magnitude:
      return sc.params.horizon >=
             std::ceil(n0_magnitude(sc.params.gain,
                                    std::sqrt(sc.params.noise.variance()),
                                    sc.detector.magnitude.m,
                                    sc.detector.delta));
    case DetectorSpec::Kind::GaussianLrt:
      return false;  // covertness scenarios carry no detection guarantee
  }
  return false;
}

double required_window(const Scenario& sc) {
  switch (sc.detector.kind) {
    case DetectorSpec::Kind::ControlEnergy: {
      const double e_u = one_bit_energy_bounds(sc.controller.c1,
                                               sc.controller.gain,
                                               sc.controller.noise_bound)
                             .lower;
      const double snr = e_u / (sc.detector.sigma_v * sc.detector.sigma_v);
      return std::ceil(k0_control_energy(snr, sc.detector.delta));
    }
    case DetectorSpec::Kind::ResidualEnergy: {
      const double e_u = one_bit_energy_bounds(sc.controller.c1,
                                               sc.controller.gain,
                                               sc.controller.noise_bound)
                             .lower;
      return std::ceil(k0_residual_energy(e_u, sc.params.noise.variance(),
                                          sc.params.noise.fourth_moment(),
                                          sc.detector.delta)
                           .k0);
    }
    default:
      config_error("window_at_least_k0 applies to the energy detectors only");
  }
}

}  // namespace

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names = {
      "covert_lower_bound",   "epsilon_covertness",
      "detection_within_delta", "must_detect",
      "window_at_least_k0",   "horizon_at_least_n0",
      "gain_above_detection_threshold",
  };
  return names;
}

BoundCheck evaluate_check(const std::string& name, const Scenario& sc,
                          const ErrorRates& rates) {
  BoundCheck out;
  out.name = name;
  const double margin = 4.0 * (rates.std_err_alpha + rates.std_err_beta);
  if (name == "covert_lower_bound") {
    if (sc.detector.kind != DetectorSpec::Kind::GaussianLrt) {
      config_error("covert_lower_bound applies to the gaussian_lrt detector");
    }
    const double kl =
        sc.detector.contrast == DetectorSpec::Contrast::GainChange
            ? kl_gain_change(sc.params.gain, sc.controller.target_gain,
                             sc.params.horizon)
            : kl_reset(sc.params.gain);
    out.value = bound_report(kl).error_sum_lower;
    out.pass = rates.sum >= out.value - margin;
    return out;
  }
  if (name == "epsilon_covertness") {
    if (!(sc.eps > 0.0)) config_error("epsilon_covertness requires scenario eps > 0");
    out.value = 1.0 - sc.eps;
    out.pass = rates.sum >= out.value - margin;
    return out;
  }
  if (name == "detection_within_delta") {
    out.value = sc.detector.delta;
    out.pass = rates.sum <= sc.detector.delta;
    return out;
  }
  if (name == "must_detect") {
    out.value = sc.detector.delta;
    out.pass = detection_guaranteed(sc) && rates.sum <= sc.detector.delta;
    return out;
  }
  if (name == "window_at_least_k0") {
    out.value = required_window(sc);
    out.pass = sc.detector.window >= out.value;
    return out;
  }
  if (name == "horizon_at_least_n0") {
    if (sc.detector.kind != DetectorSpec::Kind::Magnitude) {
      config_error("horizon_at_least_n0 applies to the magnitude detector");
    }
    out.value = std::ceil(n0_magnitude(sc.params.gain,
                                       std::sqrt(sc.params.noise.variance()),
                                       sc.detector.magnitude.m,
                                       sc.detector.delta));
    out.pass = sc.params.horizon >= out.value;
    return out;
  }
  if (name == "gain_above_detection_threshold") {
    if (sc.detector.kind != DetectorSpec::Kind::ResetLrt) {
      config_error("gain_above_detection_threshold applies to the reset detector");
    }
    out.value = detection_gain_threshold(sc.detector.delta);
    out.pass = std::abs(sc.params.gain) >= out.value;
    return out;
  }
  config_error("unknown check '" + name + "'");
}

namespace {

void reject_unknown_keys(const toml::Table& table, const char* table_name,
                         std::initializer_list<const char*> known) {
  for (const auto& [key, value] : table) {
    bool found = false;
    for (const char* k : known) {
      if (key == k) {
        found = true;
        break;
      }
    }
    if (!found) {
      config_error("unknown key '" + key + "' in [" + table_name + "]");
    }
  }
}

}  // namespace

ExperimentConfig experiment_from_document(const toml::Document& doc) {
  ExperimentConfig cfg;
  for (const auto& [name, table] : doc.tables) {
    // The root table is free-form metadata (title, notes); sections are not.
    if (!name.empty() && name != "scenario" && name != "output" &&
        name != "checks" && name != "sweep") {
      config_error("unknown table [" + name + "]");
    }
  }
  const auto sc_it = doc.tables.find("scenario");
  if (sc_it == doc.tables.end()) config_error("missing [scenario] table");
  const toml::Table& t = sc_it->second;
  reject_unknown_keys(
      t, "scenario",
      {"detector", "contrast", "controller", "a", "noise", "sigma",
       "noise_bound", "horizon", "burn_in", "init", "trials", "seed", "delta",
       "window", "sigma_v", "c1", "D", "b", "relaxed", "forced_reset_time",
       "random_reset_time", "reset_style", "eps", "threads", "m", "gamma",
       "c"});

  Scenario& sc = cfg.scenario;
  sc.params.gain = get_number(t, "a", 0.0);
  sc.params.noise = noise_from_table(t);
  sc.params.horizon = static_cast<int>(get_integer(t, "horizon", 1));
  sc.params.burn_in = static_cast<int>(get_integer(t, "burn_in", 0));
  const std::string init = get_string(t, "init", "zero");
  if (init == "zero") sc.params.init_policy = InitPolicy::ZeroStart;
  else if (init == "steady") sc.params.init_policy = InitPolicy::SteadyStateDraw;
  else config_error("init must be 'zero' or 'steady'");

  sc.controller = controller_from_table(t, sc.params.gain, sc.params.noise);

  sc.detector.kind = detector_kind_from_name(get_string(t, "detector", "gaussian_lrt"));
  const std::string contrast = get_string(t, "contrast", "gain_change");
  if (contrast == "gain_change") sc.detector.contrast = DetectorSpec::Contrast::GainChange;
  else if (contrast == "reset") sc.detector.contrast = DetectorSpec::Contrast::Reset;
  else config_error("contrast must be 'gain_change' or 'reset'");
  sc.detector.delta = get_number(t, "delta", 0.1);
  sc.detector.window = static_cast<int>(get_integer(t, "window", 0));
  sc.detector.sigma_v = get_number(t, "sigma_v", 1.0);
  if (sc.detector.kind == DetectorSpec::Kind::Magnitude) {
    MagnitudeConfig& m = sc.detector.magnitude;
    m.gamma = get_number(t, "gamma", 2.0);
    m.c = get_number(t, "c", 0.0);
    m.delta = sc.detector.delta;
    m.m = get_number(t, "m", std::pow(2.0 * m.c / m.delta, 1.0 / m.gamma));
  }

  sc.trials = get_integer(t, "trials", 1000);
  sc.master_seed = static_cast<std::uint64_t>(get_integer(t, "seed", 0));
  if (has(t, "forced_reset_time")) {
    sc.forced_reset_time = static_cast<int>(get_integer(t, "forced_reset_time", 0));
  }
  sc.random_reset_time = get_bool(t, "random_reset_time", false);
  const std::string style = get_string(t, "reset_style", "stationary");
  if (style == "stationary") sc.reset_style = ResetStyle::StationaryRestart;
  else if (style == "fresh_noise") sc.reset_style = ResetStyle::FreshNoise;
  else config_error("reset_style must be 'stationary' or 'fresh_noise'");
  sc.eps = get_number(t, "eps", 0.0);
  sc.threads = static_cast<int>(get_integer(t, "threads", 0));

  if (const auto out_it = doc.tables.find("output"); out_it != doc.tables.end()) {
    reject_unknown_keys(out_it->second, "output", {"format", "path"});
    const std::string fmt = get_string(out_it->second, "format", "json");
    if (fmt == "json") cfg.output.format = OutputSpec::Format::Json;
    else if (fmt == "csv") cfg.output.format = OutputSpec::Format::Csv;
    else config_error("output format must be 'json' or 'csv'");
    cfg.output.path = get_string(out_it->second, "path", "");
  }

  if (const auto ch_it = doc.tables.find("checks"); ch_it != doc.tables.end()) {
    reject_unknown_keys(ch_it->second, "checks", {"names"});
    const auto names_it = ch_it->second.find("names");
    if (names_it != ch_it->second.end()) {
      if (names_it->second.kind != toml::Value::Kind::StringArray) {
        config_error("[checks].names must be an array of strings");
      }
      cfg.bound_checks = names_it->second.strings;
    }
  }
  const auto& known = known_checks();
  for (const std::string& name : cfg.bound_checks) {
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      config_error("unknown check '" + name + "'");
    }
  }

  if (const auto sw_it = doc.tables.find("sweep"); sw_it != doc.tables.end()) {
    reject_unknown_keys(sw_it->second, "sweep", {"axis", "values"});
    SweepSpec sweep_spec;
    sweep_spec.axis = sweep_axis_from_name(get_string(sw_it->second, "axis", ""));
    const auto values_it = sw_it->second.find("values");
    if (values_it == sw_it->second.end() ||
        values_it->second.kind != toml::Value::Kind::NumberArray ||
        values_it->second.numbers.empty()) {
      config_error("[sweep].values must be a non-empty array of numbers");
    }
    sweep_spec.values = values_it->second.numbers;
    cfg.sweep = std::move(sweep_spec);
    if (!cfg.bound_checks.empty()) {
      config_error("bound checks apply to single-scenario runs, not sweeps");
    }
  }

  if (cfg.sweep) {
    // Axis-dependent fields may be unset in the template; validate the
    // scenario as the first sweep row will see it.
    Scenario probe = cfg.scenario;
    apply_sweep_value(probe, cfg.sweep->axis, cfg.sweep->values.front());
    probe.validate();
  } else {
    cfg.scenario.validate();
  }
  return cfg;
}

bool ExperimentResult::any_check_failed() const {
  for (const BoundCheck& c : checks) {
    if (!c.pass) return true;
  }
  return false;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult res;
  if (config.sweep) {
    res.swept = true;
    res.sweep_rows = sweep(config.scenario, config.sweep->axis, config.sweep->values);
    res.rendered = config.output.format == OutputSpec::Format::Json
                       ? render_sweep_json(config.scenario, config.sweep->axis,
                                           res.sweep_rows)
                       : render_sweep_csv(config.sweep->axis, res.sweep_rows);
  } else {
    res.rates = estimate_error_rates(config.scenario);
    for (const std::string& name : config.bound_checks) {
      res.checks.push_back(evaluate_check(name, config.scenario, res.rates));
    }
    std::vector<BoundCheck> render_checks = res.checks;
    if (render_checks.empty()) {
      render_checks.push_back(primary_bound(config.scenario, res.rates));
    }
    res.rendered = config.output.format == OutputSpec::Format::Json
                       ? render_rates_json(config.scenario, res.rates, render_checks)
                       : render_rates_csv(config.scenario, res.rates, render_checks);
  }
  if (!config.output.path.empty()) {
    write_file(config.output.path, res.rendered);
  }
  return res;
}

std::string scenario_summary(const Scenario& sc) {
  std::ostringstream os;
  os << "detector=" << detector_name(sc.detector.kind)
     << " controller=" << controller_name(sc.controller.kind)
     << " a=" << format_double(sc.params.gain)
     << " noise=" << noise_name(sc.params.noise.kind)
     << " horizon=" << sc.params.horizon << " trials=" << sc.trials
     << " delta=" << format_double(sc.detector.delta);
  return os.str();
}

void append_scenario_json(JsonWriter& w, const Scenario& sc) {
  w.begin_object();
  w.field("detector", detector_name(sc.detector.kind));
  w.field("contrast", sc.detector.contrast == DetectorSpec::Contrast::GainChange
                          ? "gain_change"
                          : "reset");
  w.field("controller", controller_name(sc.controller.kind));
  w.field("a", sc.params.gain);
  w.field("noise", noise_name(sc.params.noise.kind));
  w.field("sigma", sc.params.noise.stddev);
  w.field("noise_bound", sc.params.noise.bound);
  w.field("horizon", static_cast<std::int64_t>(sc.params.horizon));
  w.field("init", sc.params.init_policy == InitPolicy::ZeroStart ? "zero" : "steady");
  w.field("burn_in", static_cast<std::int64_t>(sc.params.burn_in));
  w.field("trials", static_cast<std::int64_t>(sc.trials));
  w.field("delta", sc.detector.delta);
  w.field("window", static_cast<std::int64_t>(sc.detector.window));
  w.field("sigma_v", sc.detector.sigma_v);
  w.field("c1", sc.controller.c1);
  w.field("D", sc.controller.threshold);
  w.field("b", sc.controller.target_gain);
  w.field("m", sc.detector.magnitude.m);
  w.field("gamma", sc.detector.magnitude.gamma);
  w.field("c", sc.detector.magnitude.c);
  w.key("forced_reset_time");
  if (sc.forced_reset_time) {
    w.value(static_cast<std::int64_t>(*sc.forced_reset_time));
  } else {
    w.null();
  }
  w.field("random_reset_time", sc.random_reset_time);
  w.field("reset_style", sc.reset_style == ResetStyle::StationaryRestart
                             ? "stationary"
                             : "fresh_noise");
  w.field("eps", sc.eps);
  w.end_object();
}

namespace {

void append_rate_fields(JsonWriter& w, const ErrorRates& r) {
  w.field("alpha_hat", r.alpha_hat);
  w.field("beta_hat", r.beta_hat);
  w.field("sum", r.sum);
  w.field("std_err_alpha", r.std_err_alpha);
  w.field("std_err_beta", r.std_err_beta);
  w.field("trials", static_cast<std::int64_t>(r.trials));
}

}  // namespace

std::string render_rates_json(const Scenario& sc, const ErrorRates& rates,
                              const std::vector<BoundCheck>& checks) {
  JsonWriter w;
  w.begin_object();
  w.key("scenario");
  append_scenario_json(w, sc);
  w.field("seed", static_cast<std::int64_t>(sc.master_seed));
  append_rate_fields(w, rates);
  const BoundCheck& head = checks.front();
  w.field("bound_name", head.name);
  w.field("bound_value", head.value);
  w.field("pass", head.pass);
  w.key("checks").begin_array();
  for (const BoundCheck& c : checks) {
    w.begin_object();
    w.field("bound_name", c.name);
    w.field("bound_value", c.value);
    w.field("pass", c.pass);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str() + "\n";
}

std::string render_rates_csv(const Scenario& sc, const ErrorRates& rates,
                             const std::vector<BoundCheck>& checks) {
  std::ostringstream os;
  os << "scenario,seed,alpha_hat,beta_hat,sum,std_err_alpha,std_err_beta,"
        "trials,bound_name,bound_value,pass\n";
  for (const BoundCheck& c : checks) {
    os << csv_field(scenario_summary(sc)) << ',' << sc.master_seed << ','
       << format_double(rates.alpha_hat) << ',' << format_double(rates.beta_hat)
       << ',' << format_double(rates.sum) << ','
       << format_double(rates.std_err_alpha) << ','
       << format_double(rates.std_err_beta) << ',' << rates.trials << ','
       << csv_field(c.name) << ',' << format_double(c.value) << ','
       << (c.pass ? "true" : "false") << '\n';
  }
  return os.str();
}

std::string render_sweep_json(const Scenario& sc, SweepAxis axis,
                              const std::vector<SweepRow>& rows) {
  JsonWriter w;
  w.begin_object();
  w.key("scenario");
  append_scenario_json(w, sc);
  w.field("seed", static_cast<std::int64_t>(sc.master_seed));
  w.field("axis", sweep_axis_name(axis));
  w.key("rows").begin_array();
  for (const SweepRow& row : rows) {
    w.begin_object();
    w.field("value", row.value);
    append_rate_fields(w, row.rates);
    w.field("bound_name", row.bound_name);
    w.field("bound_value", row.bound_value);
    w.field("pass", row.pass);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str() + "\n";
}

std::string render_sweep_csv(SweepAxis axis, const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "axis,value,alpha_hat,beta_hat,sum,std_err_alpha,std_err_beta,"
        "trials,bound_name,bound_value,pass\n";
  for (const SweepRow& row : rows) {
    os << sweep_axis_name(axis) << ',' << format_double(row.value) << ','
       << format_double(row.rates.alpha_hat) << ','
       << format_double(row.rates.beta_hat) << ','
       << format_double(row.rates.sum) << ','
       << format_double(row.rates.std_err_alpha) << ','
       << format_double(row.rates.std_err_beta) << ',' << row.rates.trials
       << ',' << csv_field(row.bound_name) << ','
       << format_double(row.bound_value) << ','
       << (row.pass ? "true" : "false") << '\n';
  }
  return os.str();
}

std::string render_matrix_json(const std::string& kind, const CovMatrix& m) {
  JsonWriter w;
  w.begin_object();
  w.field("kind", kind);
  w.field("n", static_cast<std::int64_t>(m.size()));
  w.key("entries").begin_array();
  for (int i = 0; i < m.size(); ++i) {
    w.begin_array();
    for (int j = 0; j < m.size(); ++j) w.value(m.entries(i, j));
    w.end_array();
  }
  w.end_array();
  w.end_object();
  return w.str() + "\n";
}

std::string render_matrix_csv(const CovMatrix& m) {
  std::ostringstream os;
  for (int i = 0; i < m.size(); ++i) {
    for (int j = 0; j < m.size(); ++j) {
      if (j) os << ',';
      os << format_double(m.entries(i, j));
    }
    os << '\n';
  }
  return os.str();
}

std::string render_trajectory_json(const Trajectory& t) {
  JsonWriter w;
  w.begin_object();
  w.field("seed", static_cast<std::int64_t>(t.seed));
  w.field("initial_state", t.initial_state);
  w.key("states").begin_array();
  for (double x : t.states) w.value(x);
  w.end_array();
  w.key("controls").begin_array();
  for (double u : t.controls) w.value(u);
  w.end_array();
  w.key("noises").begin_array();
  for (double z : t.noises) w.value(z);
  w.end_array();
  w.end_object();
  return w.str() + "\n";
}

std::string render_trajectory_csv(const Trajectory& t) {
  std::ostringstream os;
  os << "k,state,control,noise\n";
  for (std::size_t i = 0; i < t.states.size(); ++i) {
    os << (i + 1) << ',' << format_double(t.states[i]) << ','
       << format_double(t.controls[i]) << ',' << format_double(t.noises[i])
       << '\n';
  }
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace covertctl
