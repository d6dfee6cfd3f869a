// covertctl: simulate controlled AR(1) plants, evaluate the closed-form
// covertness/detection bounds, and verify them against Monte Carlo runs.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "covertctl/experiment.hpp"

namespace {

using namespace covertctl;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitCheckFailed = 2;

struct CommonOpts {
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string out_path;
  std::string format = "json";
  std::string log_base = "natural";
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--seed", opts.seed, "master seed (fallback: COVERTCTL_SEED)");
  cmd->add_option("--threads", opts.threads, "worker thread cap (0 = all cores)");
  cmd->add_option("--out", opts.out_path, "output file path");
  cmd->add_option("--format", opts.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--log-base", opts.log_base, "log base for the reset covert bound")
      ->check(CLI::IsMember({"natural", "two"}));
}

std::uint64_t resolve_seed(const CommonOpts& opts, std::uint64_t fallback) {
  if (opts.seed) return *opts.seed;
  if (const char* env = std::getenv("COVERTCTL_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return fallback;
}

void emit(const CommonOpts& opts, const std::string& rendered) {
  if (opts.out_path.empty()) {
    std::cout << rendered;
  } else {
    write_file(opts.out_path, rendered);
  }
}

void print_check_line(const BoundCheck& c, const ErrorRates& r) {
  std::printf("%s %s: bound=%.6g alpha=%.6g beta=%.6g sum=%.6g\n",
              c.pass ? "[PASS]" : "[FAIL]", c.name.c_str(), c.value,
              r.alpha_hat, r.beta_hat, r.sum);
}

NoiseModel noise_from_flags(const std::string& kind, double sigma, double bound) {
  if (kind == "gaussian") return NoiseModel::gaussian(sigma);
  if (kind == "uniform") return NoiseModel::uniform_bounded(bound);
  if (kind == "truncated_gaussian") {
    return bound > 0.0 ? NoiseModel::truncated_gaussian(sigma, bound)
                       : NoiseModel::truncated_gaussian(sigma);
  }
  throw std::invalid_argument("unknown noise kind '" + kind + "'");
}

// ---- subcommand implementations -------------------------------------------

int cmd_simulate(const CommonOpts& opts, double a, int horizon,
                 const std::string& noise, double sigma, double bound,
                 const std::string& controller, double c1, double d, double b,
                 const std::string& init, int burn_in) {
  Ar1Params params;
  params.gain = a;
  params.horizon = horizon;
  params.noise = noise_from_flags(noise, sigma, bound);
  params.burn_in = burn_in;
  params.init_policy = init == "steady" ? InitPolicy::SteadyStateDraw
                                        : InitPolicy::ZeroStart;
  ControllerSpec spec = ControllerSpec::none();
  if (controller == "one_bit") {
    spec = c1 > 0.0 ? ControllerSpec::one_bit(c1, params.noise.bound, a)
                    : ControllerSpec::one_bit_fixed_point(params.noise.bound, a);
  } else if (controller == "threshold") {
    spec = ControllerSpec::threshold_reset(d, a);
  } else if (controller == "gain_change") {
    spec = ControllerSpec::gain_change(a, b);
  } else if (controller != "none") {
    throw std::invalid_argument("unknown controller '" + controller + "'");
  }
  const Trajectory t = simulate(params, spec, resolve_seed(opts, 0));
  emit(opts, opts.format == "csv" ? render_trajectory_csv(t)
                                  : render_trajectory_json(t));
  return kExitOk;
}

int cmd_covariance(const CommonOpts& opts, const std::string& kind, double a,
                   double sigma, int n, int tau, long trials) {
  CovMatrix m;
  if (kind == "transient") {
    m = transient_covariance(a, sigma, n);
  } else if (kind == "steady") {
    m = steady_covariance(a, sigma, n);
  } else if (kind == "precision") {
    m = steady_precision(a, sigma, n);
  } else if (kind == "reset") {
    m = reset_covariance(a, sigma, n, tau);
  } else if (kind == "empirical") {
    Ar1Params params;
    params.gain = a;
    params.horizon = n;
    params.noise = NoiseModel::gaussian(sigma);
    params.init_policy = std::abs(a) < 1.0 ? InitPolicy::SteadyStateDraw
                                           : InitPolicy::ZeroStart;
    std::optional<ResetEvent> reset;
    if (tau > 0) reset = ResetEvent{tau, ResetStyle::StationaryRestart};
    m = empirical_covariance(params, trials, resolve_seed(opts, 0),
                             opts.threads, reset);
  } else {
    throw std::invalid_argument("unknown covariance kind '" + kind + "'");
  }
  emit(opts, opts.format == "csv" ? render_matrix_csv(m)
                                  : render_matrix_json(kind, m));
  return kExitOk;
}

int cmd_kl(const CommonOpts& opts, const std::string& kind, double a, double b,
           int n) {
  double kl = 0.0;
  if (kind == "gain_change") {
    kl = kl_gain_change(a, b, n);
  } else if (kind == "reset") {
    kl = kl_reset(a);
  } else if (kind == "gaussian") {
    kl = kl_gaussian(steady_covariance(a, 1.0, n), steady_covariance(b, 1.0, n));
  } else {
    throw std::invalid_argument("unknown kl kind '" + kind + "'");
  }
  const BoundReport r = bound_report(std::max(kl, 0.0));
  std::printf("kl=%.6g tv_upper=%.6g error_sum_lower=%.6g\n", r.kl, r.tv_upper,
              r.error_sum_lower);
  JsonWriter w;
  w.begin_object();
  w.field("kind", kind);
  w.field("a", a);
  w.field("b", b);
  w.field("n", static_cast<std::int64_t>(n));
  w.field("kl", r.kl);
  w.field("tv_upper", r.tv_upper);
  w.field("error_sum_lower", r.error_sum_lower);
  w.end_object();
  if (!opts.out_path.empty()) write_file(opts.out_path, w.str() + "\n");
  return kExitOk;
}

int cmd_bounds(const CommonOpts& opts, double a, double eps, double delta,
               double snr, double sigma, double noise_bound, double m,
               double gamma, double c) {
  const LogBase base = opts.log_base == "two" ? LogBase::Two : LogBase::Natural;
  JsonWriter w;
  w.begin_object();
  auto line = [&](const char* name, bool ok, double value,
                  const char* requires_what) {
    if (ok) {
      std::printf("%s: %.5f\n", name, value);
      w.field(name, value);
    } else {
      std::printf("%s: n/a (requires %s)\n", name, requires_what);
      w.key(name).null();
    }
  };

  double n0 = 0.0;
  bool n0_ok = std::abs(a) > 1.0 && delta > 0.0 && delta < 1.0;
  double m_eff = m;
  if (n0_ok && m_eff <= 0.0 && c > 0.0) {
    m_eff = std::pow(2.0 * c / delta, 1.0 / gamma);
  }
  n0_ok = n0_ok && m_eff > 0.0;
  if (n0_ok) n0 = n0_magnitude(a, sigma, m_eff, delta);
  line("magnitude_n0", n0_ok, n0, "|a| > 1, delta, and m or (c, gamma)");

  const bool gc_ok = std::abs(a) < 1.0 && eps > 0.0;
  line("gain_change_covert_bound", gc_ok,
       gc_ok ? covert_gain_bound_gain_change(a, eps) : 0.0, "|a| < 1 and eps");

  const bool ce_ok = snr > 0.0 && delta > 0.0 && delta < 1.0;
  line("control_energy_k0", ce_ok, ce_ok ? k0_control_energy(snr, delta) : 0.0,
       "snr and delta");

  bool re_ok = delta > 0.0 && delta < 1.0 && noise_bound > 0.0 && a > 0.0 &&
               a < 2.0;
  double re_k0 = 0.0;
  if (re_ok) {
    const NoiseModel noise = NoiseModel::uniform_bounded(noise_bound);
    const double e_u = one_bit_energy_bounds(
                           noise_bound / (1.0 - a / 2.0), a, noise_bound)
                           .lower;
    re_k0 = k0_residual_energy(e_u, noise.variance(), noise.fourth_moment(),
                               delta)
                .k0;
  }
  line("residual_energy_k0", re_ok, re_k0,
       "0 < a < 2, uniform noise_bound, delta");

  const bool rc_ok = eps > 0.0;
  line("reset_covert_bound", rc_ok,
       rc_ok ? covert_gain_bound_reset(eps, base) : 0.0, "eps");

  const bool rd_ok = delta > 0.0 && delta < 1.0;
  line("reset_detection_gain", rd_ok,
       rd_ok ? detection_gain_threshold(delta) : 0.0, "delta");

  w.end_object();
  if (!opts.out_path.empty()) write_file(opts.out_path, w.str() + "\n");
  return kExitOk;
}

ExperimentConfig config_from_flags(
    const CommonOpts& opts, const std::string& detector,
    const std::string& contrast, const std::string& controller, double a,
    const std::string& noise, double sigma, double bound, int horizon,
    const std::string& init, long trials, double delta, double sigma_v,
    int window, double c1, double d, double b, int forced_reset_time,
    bool random_reset_time, const std::string& reset_style, double eps,
    double m, double gamma, double c, const std::string& sweep_axis = "",
    const std::vector<double>& sweep_values = {}) {
  toml::Document doc;
  toml::Table& t = doc.tables["scenario"];
  auto put_num = [&](const char* key, double v) {
    toml::Value val;
    val.kind = toml::Value::Kind::Float;
    val.real = v;
    t[key] = val;
  };
  auto put_int = [&](const char* key, std::int64_t v) {
    toml::Value val;
    val.kind = toml::Value::Kind::Integer;
    val.integer = v;
    t[key] = val;
  };
  auto put_str = [&](const char* key, const std::string& v) {
    toml::Value val;
    val.kind = toml::Value::Kind::String;
    val.text = v;
    t[key] = val;
  };
  auto put_bool = [&](const char* key, bool v) {
    toml::Value val;
    val.kind = toml::Value::Kind::Boolean;
    val.boolean = v;
    t[key] = val;
  };
  put_str("detector", detector);
  put_str("contrast", contrast);
  put_str("controller", controller);
  put_num("a", a);
  put_str("noise", noise);
  put_num("sigma", sigma);
  if (bound > 0.0) put_num("noise_bound", bound);
  put_int("horizon", horizon);
  put_str("init", init);
  put_int("trials", trials);
  put_int("seed", static_cast<std::int64_t>(resolve_seed(opts, 0)));
  put_num("delta", delta);
  put_num("sigma_v", sigma_v);
  put_int("window", window);
  if (c1 > 0.0) put_num("c1", c1);
  if (d > 0.0) put_num("D", d);
  put_num("b", b);
  if (forced_reset_time > 0) put_int("forced_reset_time", forced_reset_time);
  put_bool("random_reset_time", random_reset_time);
  put_str("reset_style", reset_style);
  put_num("eps", eps);
  put_int("threads", opts.threads);
  if (m > 0.0) put_num("m", m);
  put_num("gamma", gamma);
  put_num("c", c);
  if (!sweep_axis.empty()) {
    toml::Table& sw = doc.tables["sweep"];
    toml::Value axis_val;
    axis_val.kind = toml::Value::Kind::String;
    axis_val.text = sweep_axis;
    sw["axis"] = axis_val;
    toml::Value values_val;
    values_val.kind = toml::Value::Kind::NumberArray;
    values_val.numbers = sweep_values;
    sw["values"] = values_val;
  }
  return experiment_from_document(doc);
}

int finish_detect(const CommonOpts& opts, const Scenario& sc,
                  const std::vector<std::string>& checks) {
  const ErrorRates rates = estimate_error_rates(sc);
  std::vector<BoundCheck> evaluated;
  for (const std::string& name : checks) {
    evaluated.push_back(evaluate_check(name, sc, rates));
  }
  std::vector<BoundCheck> render_checks = evaluated;
  if (render_checks.empty()) render_checks.push_back(primary_bound(sc, rates));
  for (const BoundCheck& c : render_checks) print_check_line(c, rates);
  emit(opts, opts.format == "csv" ? render_rates_csv(sc, rates, render_checks)
                                  : render_rates_json(sc, rates, render_checks));
  for (const BoundCheck& c : evaluated) {
    if (!c.pass) return kExitCheckFailed;
  }
  return kExitOk;
}

int cmd_run(const CommonOpts& opts, const std::string& config_path,
            const std::vector<std::string>& overrides) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot read config file: " << config_path << "\n";
    return kExitConfig;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  toml::Document doc = toml::parse(buffer.str());
  for (const std::string& assignment : overrides) {
    toml::apply_override(doc, assignment);
  }
  if (opts.seed) {
    toml::apply_override(doc, "scenario.seed=" + std::to_string(*opts.seed));
  }
  if (opts.threads > 0) {
    toml::apply_override(doc, "scenario.threads=" + std::to_string(opts.threads));
  }
  ExperimentConfig cfg = experiment_from_document(doc);
  if (!opts.out_path.empty()) cfg.output.path = opts.out_path;

  const ExperimentResult res = run_experiment(cfg);
  if (res.swept) {
    for (const SweepRow& row : res.sweep_rows) {
      std::printf("%s %s=%.6g: %s=%.6g alpha=%.6g beta=%.6g sum=%.6g\n",
                  row.pass ? "[PASS]" : "[FAIL]",
                  sweep_axis_name(cfg.sweep->axis).c_str(), row.value,
                  row.bound_name.c_str(), row.bound_value, row.rates.alpha_hat,
                  row.rates.beta_hat, row.rates.sum);
    }
  } else {
    std::vector<BoundCheck> shown = res.checks;
    if (shown.empty()) shown.push_back(primary_bound(cfg.scenario, res.rates));
    for (const BoundCheck& c : shown) print_check_line(c, res.rates);
  }
  if (cfg.output.path.empty()) std::cout << res.rendered;
  return res.any_check_failed() ? kExitCheckFailed : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"covert control workbench for scalar autoregressive plants"};
  app.require_subcommand(1);

  CommonOpts opts;

  // simulate
  auto* sim = app.add_subcommand("simulate", "run one trajectory");
  double sim_a = 0.5, sim_sigma = 1.0, sim_bound = 0.0, sim_c1 = 0.0,
         sim_d = 0.0, sim_b = 0.0;
  int sim_horizon = 10, sim_burn = 0;
  std::string sim_noise = "gaussian", sim_controller = "none", sim_init = "zero";
  sim->add_option("--a", sim_a, "plant gain")->required();
  sim->add_option("--horizon", sim_horizon, "recorded samples");
  sim->add_option("--noise", sim_noise, "gaussian|uniform|truncated_gaussian");
  sim->add_option("--sigma", sim_sigma, "noise std");
  sim->add_option("--noise-bound", sim_bound, "noise support half-width");
  sim->add_option("--controller", sim_controller,
                  "none|one_bit|threshold|gain_change");
  sim->add_option("--c1", sim_c1, "one-bit series start (default: fixed point)");
  sim->add_option("--D", sim_d, "threshold level");
  sim->add_option("--b", sim_b, "gain-change target");
  sim->add_option("--init", sim_init, "zero|steady");
  sim->add_option("--burn-in", sim_burn, "discarded leading steps");
  add_common(sim, opts);

  // covariance
  auto* cov = app.add_subcommand("covariance", "covariance builders and oracle");
  std::string cov_kind = "steady";
  double cov_a = 0.5, cov_sigma = 1.0;
  int cov_n = 4, cov_tau = 0;
  long cov_trials = 10000;
  cov->add_option("--kind", cov_kind, "transient|steady|precision|reset|empirical");
  cov->add_option("--a", cov_a, "gain")->required();
  cov->add_option("--sigma", cov_sigma, "noise std");
  cov->add_option("--n", cov_n, "dimension");
  cov->add_option("--tau", cov_tau, "reset time (reset/empirical kinds)");
  cov->add_option("--trials", cov_trials, "trajectories (empirical kind)");
  add_common(cov, opts);

  // kl
  auto* kl = app.add_subcommand("kl", "divergences and the Pinsker chain");
  std::string kl_kind = "gain_change";
  double kl_a = 0.0, kl_b = 0.0;
  int kl_n = 1;
  kl->add_option("--kind", kl_kind, "gain_change|reset|gaussian");
  kl->add_option("--a", kl_a, "null gain")->required();
  kl->add_option("--b", kl_b, "alternative gain");
  kl->add_option("--n", kl_n, "window length");
  add_common(kl, opts);

  // bounds
  auto* bounds = app.add_subcommand("bounds", "all six threshold formulas");
  double bd_a = 0.0, bd_eps = 0.0, bd_delta = 0.0, bd_snr = 0.0,
         bd_sigma = 1.0, bd_noise_bound = 0.0, bd_m = 0.0, bd_gamma = 2.0,
         bd_c = 0.0;
  bounds->add_option("--a", bd_a, "plant gain");
  bounds->add_option("--eps", bd_eps, "covertness target");
  bounds->add_option("--delta", bd_delta, "detection target");
  bounds->add_option("--snr", bd_snr, "control-to-channel-noise energy ratio");
  bounds->add_option("--sigma", bd_sigma, "noise std");
  bounds->add_option("--noise-bound", bd_noise_bound, "uniform noise bound");
  bounds->add_option("--m", bd_m, "magnitude decision level");
  bounds->add_option("--gamma", bd_gamma, "moment order");
  bounds->add_option("--c", bd_c, "moment bound");
  add_common(bounds, opts);

  // detect
  auto* detect = app.add_subcommand("detect", "Monte Carlo error rates");
  std::string dt_detector = "gaussian_lrt", dt_contrast = "gain_change",
              dt_controller = "none", dt_noise = "gaussian", dt_init = "zero",
              dt_reset_style = "stationary";
  double dt_a = 0.0, dt_sigma = 1.0, dt_bound = 0.0, dt_delta = 0.1,
         dt_sigma_v = 1.0, dt_c1 = 0.0, dt_d = 0.0, dt_b = 0.0, dt_eps = 0.0,
         dt_m = 0.0, dt_gamma = 2.0, dt_c = 0.0;
  int dt_horizon = 1, dt_window = 0, dt_tau = 0;
  long dt_trials = 1000;
  bool dt_random_tau = false;
  std::vector<std::string> dt_checks;
  detect->add_option("--detector", dt_detector,
                     "magnitude|control_energy|residual_energy|reset_lrt|gaussian_lrt");
  detect->add_option("--contrast", dt_contrast, "gain_change|reset");
  detect->add_option("--controller", dt_controller,
                     "none|one_bit|threshold|gain_change");
  detect->add_option("--a", dt_a, "plant gain")->required();
  detect->add_option("--noise", dt_noise, "gaussian|uniform|truncated_gaussian");
  detect->add_option("--sigma", dt_sigma, "noise std");
  detect->add_option("--noise-bound", dt_bound, "noise support half-width");
  detect->add_option("--horizon", dt_horizon, "recorded samples");
  detect->add_option("--init", dt_init, "zero|steady");
  detect->add_option("--trials", dt_trials, "trials per hypothesis");
  detect->add_option("--delta", dt_delta, "detection target");
  detect->add_option("--sigma-v", dt_sigma_v, "channel noise std");
  detect->add_option("--window", dt_window, "energy window K");
  detect->add_option("--c1", dt_c1, "one-bit series start");
  detect->add_option("--D", dt_d, "threshold level");
  detect->add_option("--b", dt_b, "gain-change target");
  detect->add_option("--tau", dt_tau, "forced reset time");
  detect->add_flag("--random-tau", dt_random_tau, "draw tau per trial");
  detect->add_option("--reset-style", dt_reset_style, "stationary|fresh_noise");
  detect->add_option("--eps", dt_eps, "covertness target (reporting)");
  detect->add_option("--m", dt_m, "magnitude decision level");
  detect->add_option("--gamma", dt_gamma, "moment order");
  detect->add_option("--c", dt_c, "moment bound");
  detect->add_option("--check", dt_checks,
                     "named bound check, repeatable: covert_lower_bound, "
                     "epsilon_covertness, detection_within_delta, must_detect, "
                     "window_at_least_k0, horizon_at_least_n0, "
                     "gain_above_detection_threshold");
  add_common(detect, opts);

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "sweep one scenario parameter");
  std::string sw_axis;
  std::vector<double> sw_values;
  std::string sw_detector = "gaussian_lrt", sw_contrast = "gain_change",
              sw_controller = "none", sw_noise = "gaussian", sw_init = "zero",
              sw_reset_style = "stationary";
  double sw_a = 0.0, sw_sigma = 1.0, sw_bound = 0.0, sw_delta = 0.1,
         sw_sigma_v = 1.0, sw_c1 = 0.0, sw_d = 0.0, sw_b = 0.0, sw_eps = 0.0,
         sw_m = 0.0, sw_gamma = 2.0, sw_c = 0.0;
  int sw_horizon = 1, sw_window = 0, sw_tau = 0;
  long sw_trials = 1000;
  bool sw_random_tau = false;
  sweep_cmd->add_option("--axis", sw_axis, "a|b|D|delta|K|snr|eps")->required();
  sweep_cmd->add_option("--values", sw_values, "axis values")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--detector", sw_detector, "detector kind");
  sweep_cmd->add_option("--contrast", sw_contrast, "gain_change|reset");
  sweep_cmd->add_option("--controller", sw_controller, "controller kind");
  sweep_cmd->add_option("--a", sw_a, "plant gain")->required();
  sweep_cmd->add_option("--noise", sw_noise, "noise kind");
  sweep_cmd->add_option("--sigma", sw_sigma, "noise std");
  sweep_cmd->add_option("--noise-bound", sw_bound, "noise support half-width");
  sweep_cmd->add_option("--horizon", sw_horizon, "recorded samples");
  sweep_cmd->add_option("--init", sw_init, "zero|steady");
  sweep_cmd->add_option("--trials", sw_trials, "trials per hypothesis");
  sweep_cmd->add_option("--delta", sw_delta, "detection target");
  sweep_cmd->add_option("--sigma-v", sw_sigma_v, "channel noise std");
  sweep_cmd->add_option("--window", sw_window, "energy window K");
  sweep_cmd->add_option("--c1", sw_c1, "one-bit series start");
  sweep_cmd->add_option("--D", sw_d, "threshold level");
  sweep_cmd->add_option("--b", sw_b, "gain-change target");
  sweep_cmd->add_option("--tau", sw_tau, "forced reset time");
  sweep_cmd->add_flag("--random-tau", sw_random_tau, "draw tau per trial");
  sweep_cmd->add_option("--reset-style", sw_reset_style, "stationary|fresh_noise");
  sweep_cmd->add_option("--eps", sw_eps, "covertness target");
  sweep_cmd->add_option("--m", sw_m, "magnitude decision level");
  sweep_cmd->add_option("--gamma", sw_gamma, "moment order");
  sweep_cmd->add_option("--c", sw_c, "moment bound");
  add_common(sweep_cmd, opts);

  // run
  auto* run = app.add_subcommand("run", "execute a config file");
  std::string run_config;
  std::vector<std::string> run_overrides;
  run->add_option("--config", run_config, "TOML experiment config")->required();
  run->add_option("overrides", run_overrides, "table.key=value overrides");
  add_common(run, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (sim->parsed()) {
      return cmd_simulate(opts, sim_a, sim_horizon, sim_noise, sim_sigma,
                          sim_bound, sim_controller, sim_c1, sim_d, sim_b,
                          sim_init, sim_burn);
    }
    if (cov->parsed()) {
      return cmd_covariance(opts, cov_kind, cov_a, cov_sigma, cov_n, cov_tau,
                            cov_trials);
    }
    if (kl->parsed()) return cmd_kl(opts, kl_kind, kl_a, kl_b, kl_n);
    if (bounds->parsed()) {
      return cmd_bounds(opts, bd_a, bd_eps, bd_delta, bd_snr, bd_sigma,
                        bd_noise_bound, bd_m, bd_gamma, bd_c);
    }
    if (detect->parsed()) {
      const Scenario sc =
          config_from_flags(opts, dt_detector, dt_contrast, dt_controller,
                            dt_a, dt_noise, dt_sigma, dt_bound, dt_horizon,
                            dt_init, dt_trials, dt_delta, dt_sigma_v,
                            dt_window, dt_c1, dt_d, dt_b, dt_tau,
                            dt_random_tau, dt_reset_style, dt_eps, dt_m,
                            dt_gamma, dt_c)
              .scenario;
      return finish_detect(opts, sc, dt_checks);
    }
    if (sweep_cmd->parsed()) {
      const ExperimentConfig cfg = config_from_flags(
          opts, sw_detector, sw_contrast, sw_controller, sw_a, sw_noise,
          sw_sigma, sw_bound, sw_horizon, sw_init, sw_trials, sw_delta,
          sw_sigma_v, sw_window, sw_c1, sw_d, sw_b, sw_tau, sw_random_tau,
          sw_reset_style, sw_eps, sw_m, sw_gamma, sw_c, sw_axis, sw_values);
      const Scenario& sc = cfg.scenario;
      const SweepAxis axis = cfg.sweep->axis;
      const std::vector<SweepRow> rows = sweep(sc, axis, sw_values);
      for (const SweepRow& row : rows) {
        std::printf("%s %s=%.6g: %s=%.6g alpha=%.6g beta=%.6g sum=%.6g\n",
                    row.pass ? "[PASS]" : "[FAIL]", sw_axis.c_str(), row.value,
                    row.bound_name.c_str(), row.bound_value,
                    row.rates.alpha_hat, row.rates.beta_hat, row.rates.sum);
      }
      emit(opts, opts.format == "csv" ? render_sweep_csv(axis, rows)
                                      : render_sweep_json(sc, axis, rows));
      return kExitOk;
    }
    if (run->parsed()) return cmd_run(opts, run_config, run_overrides);
  } catch (const toml::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
