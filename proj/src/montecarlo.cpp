#include "covertctl/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace covertctl {
namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Stream components hanging off one trial seed.
constexpr std::uint64_t kPlantStream = 1;
constexpr std::uint64_t kChannelStream = 2;
constexpr std::uint64_t kAuxStream = 3;

// Trials are accumulated in fixed-size blocks so floating-point reductions
// combine in a thread-count-independent order.
constexpr long kBlock = 1024;

int effective_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs per_block(block_index) for every block of `total` items.
template <typename Fn>
void for_each_block(long total, int threads, Fn&& per_block) {
  const long blocks = (total + kBlock - 1) / kBlock;
  threads = static_cast<int>(
      std::min<long>(effective_threads(threads), blocks));
  if (threads <= 1) {
    for (long b = 0; b < blocks; ++b) per_block(b);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const long b = next.fetch_add(1);
        if (b >= blocks) return;
        per_block(b);
      }
    });
  }
  for (auto& th : pool) th.join();
}

int draw_tau(const Scenario& sc, SplitMix64& aux) {
  if (sc.random_reset_time) {
    return 1 + static_cast<int>(aux.next_below(sc.params.horizon - 1));
  }
  return *sc.forced_reset_time;
}

// Prepared state shared by all trials of one scenario.
struct RunContext {
  const Scenario& sc;
  std::optional<GaussianLrt> lrt_gain;
  std::vector<GaussianLrt> lrt_reset;  // index tau - 1

  explicit RunContext(const Scenario& scenario) : sc(scenario) {
    if (sc.detector.kind != DetectorSpec::Kind::GaussianLrt) return;
    const int n = sc.params.horizon;
    const double a = sc.params.gain;
    const double sigma = std::sqrt(sc.params.noise.variance());
    if (sc.detector.contrast == DetectorSpec::Contrast::GainChange) {
      lrt_gain.emplace(steady_covariance(a, sigma, n),
                       steady_covariance(sc.controller.target_gain, sigma, n));
    } else {
      lrt_reset.reserve(n - 1);
      for (int tau = 1; tau <= n - 1; ++tau) {
        lrt_reset.emplace_back(steady_covariance(a, sigma, n),
                               reset_covariance(a, sigma, n, tau));
      }
    }
  }
};

Decision classify_trial(const RunContext& ctx, int hypothesis, long trial) {
  const Scenario& sc = ctx.sc;
  const std::uint64_t trial_seed =
      derive_stream(sc.master_seed, static_cast<std::uint64_t>(hypothesis),
                    static_cast<std::uint64_t>(trial));
  SplitMix64 plant(derive_stream(trial_seed, kPlantStream, 0));
  SplitMix64 channel(derive_stream(trial_seed, kChannelStream, 0));
  SplitMix64 aux(derive_stream(trial_seed, kAuxStream, 0));

  const bool controlled = hypothesis == 1;
  const ControllerSpec open_loop = ControllerSpec::none();
  const NoiseModel& noise = sc.params.noise;

  switch (sc.detector.kind) {
    case DetectorSpec::Kind::Magnitude: {
      Trajectory t =
          simulate(sc.params, controlled ? sc.controller : open_loop, plant);
      return magnitude_detector(t.states.back(), sc.detector.magnitude).decision;
    }
    case DetectorSpec::Kind::ControlEnergy: {
      const int k = sc.detector.window;
      std::vector<double> w(k);
      if (controlled) {
        Ar1Params p = sc.params;
        p.horizon = k + 1;
        Trajectory t = simulate(p, sc.controller, plant);
        // controls[0] is the controller's inactive first step; the observed
        // window starts where the control signal is live.
        for (int i = 0; i < k; ++i) {
          w[i] = t.controls[i + 1] + channel.next_gaussian(sc.detector.sigma_v);
        }
      } else {
        for (int i = 0; i < k; ++i) {
          w[i] = channel.next_gaussian(sc.detector.sigma_v);
        }
      }
      return control_energy_detector(w, sc.detector.sigma_v, sc.detector.delta)
          .decision;
    }
    case DetectorSpec::Kind::ResidualEnergy: {
      Ar1Params p = sc.params;
      p.horizon = sc.detector.window + 1;
      Trajectory t =
          simulate(p, controlled ? sc.controller : open_loop, plant);
      return residual_energy_detector(t.states, sc.params.gain,
                                      noise.variance(), noise.fourth_moment(),
                                      sc.detector.delta)
          .decision;
    }
    case DetectorSpec::Kind::ResetLrt: {
      const int tau = draw_tau(sc, aux);
      Trajectory t = controlled
                         ? simulate_with_reset(sc.params, {tau, sc.reset_style},
                                               plant)
                         : simulate(sc.params, open_loop, plant);
      return reset_lrt_detector(t.states[tau], sc.params.gain,
                                std::sqrt(noise.variance()), sc.detector.delta)
          .decision;
    }
    case DetectorSpec::Kind::GaussianLrt: {
      Trajectory t;
      const GaussianLrt* lrt = nullptr;
      if (sc.detector.contrast == DetectorSpec::Contrast::GainChange) {
        t = simulate(sc.params, controlled ? sc.controller : open_loop, plant);
        lrt = &*ctx.lrt_gain;
      } else {
        const int tau = draw_tau(sc, aux);
        t = controlled ? simulate_with_reset(sc.params, {tau, sc.reset_style},
                                             plant)
                       : simulate(sc.params, open_loop, plant);
        lrt = &ctx.lrt_reset[tau - 1];
      }
      const Eigen::Map<const Eigen::VectorXd> x(t.states.data(),
                                                t.states.size());
      return lrt->decide(x).decision;
    }
  }
  throw std::invalid_argument("unknown detector kind");
}

ErrorRates count_rates(const Scenario& sc, const TrialClassifier& classify) {
  long false_alarms = 0;  // H1 decisions under the null
  long misses = 0;        // H0 decisions under the alternative
  for (int hyp = 0; hyp <= 1; ++hyp) {
    std::atomic<long> wrong{0};
    for_each_block(sc.trials, sc.threads, [&](long block) {
      const long lo = block * kBlock;
      const long hi = std::min(sc.trials, lo + kBlock);
      long local = 0;
      for (long trial = lo; trial < hi; ++trial) {
        const Decision d = classify(hyp, trial);
        if (hyp == 0 && d == Decision::H1_Controlled) ++local;
        if (hyp == 1 && d == Decision::H0_Uncontrolled) ++local;
      }
      wrong.fetch_add(local);
    });
    (hyp == 0 ? false_alarms : misses) = wrong.load();
  }
  ErrorRates r;
  r.trials = sc.trials;
  const double t = static_cast<double>(sc.trials);
  r.alpha_hat = static_cast<double>(false_alarms) / t;
  r.beta_hat = static_cast<double>(misses) / t;
  r.sum = r.alpha_hat + r.beta_hat;
  r.std_err_alpha = std::sqrt(r.alpha_hat * (1.0 - r.alpha_hat) / t);
  r.std_err_beta = std::sqrt(r.beta_hat * (1.0 - r.beta_hat) / t);
  return r;
}

}  // namespace

void Scenario::validate() const {
  params.validate();
  controller.validate();
  require(trials >= 1, "scenario: trials must be >= 1");
  if (forced_reset_time) {
    require(*forced_reset_time >= 1 && *forced_reset_time <= params.horizon - 1,
            "scenario: forced_reset_time must lie in [1, horizon-1]");
  }
  if (random_reset_time) {
    require(params.horizon >= 2,
            "scenario: random reset time needs horizon >= 2");
  }
  switch (detector.kind) {
    case DetectorSpec::Kind::Magnitude:
      detector.magnitude.validate();
      break;
    case DetectorSpec::Kind::ControlEnergy:
      require(detector.window >= 1, "scenario: energy window must be >= 1");
      require(detector.sigma_v > 0.0, "scenario: sigma_v must be > 0");
      require(controller.kind == ControllerSpec::Kind::OneBit,
              "scenario: the control-energy experiment needs the one-bit law");
      break;
    case DetectorSpec::Kind::ResidualEnergy:
      require(detector.window >= 1, "scenario: energy window must be >= 1");
      break;
    case DetectorSpec::Kind::ResetLrt:
      require(forced_reset_time.has_value() || random_reset_time,
              "scenario: reset detector needs a reset time");
      break;
    case DetectorSpec::Kind::GaussianLrt:
      if (detector.contrast == DetectorSpec::Contrast::GainChange) {
        require(controller.kind == ControllerSpec::Kind::GainChange,
                "scenario: gain-change contrast needs the gain-change law");
      } else {
        require(forced_reset_time.has_value() || random_reset_time,
                "scenario: reset contrast needs a reset time");
      }
      break;
  }
  require(detector.delta > 0.0 && detector.delta < 1.0,
          "scenario: delta must be in (0, 1)");
}

ErrorRates estimate_error_rates(const Scenario& scenario) {
  scenario.validate();
  RunContext ctx(scenario);
  return count_rates(scenario, [&](int hyp, long trial) {
    return classify_trial(ctx, hyp, trial);
  });
}

ErrorRates estimate_error_rates_with(const Scenario& scenario,
                                     const TrialClassifier& classify) {
  require(scenario.trials >= 1, "scenario: trials must be >= 1");
  return count_rates(scenario, classify);
}

Trajectory simulate_with_reset(const Ar1Params& params, const ResetEvent& event,
                               SplitMix64& rng, std::uint64_t seed_label) {
  params.validate();
  require(event.time >= 1 && event.time <= params.horizon - 1,
          "simulate_with_reset: reset time must lie in [1, horizon-1]");
  const double a = params.gain;
  const double stationary_sd =
      std::abs(a) < 1.0
          ? std::sqrt(params.noise.variance() / (1.0 - a * a))
          : 0.0;
  if (event.style == ResetStyle::StationaryRestart) {
    require(std::abs(a) < 1.0, "simulate_with_reset: stationary restart requires |gain| < 1");
  }

  double x = 0.0;
  if (params.init_policy == InitPolicy::SteadyStateDraw) {
    x = rng.next_gaussian(stationary_sd);
  }

  Trajectory out;
  out.seed = seed_label;
  out.initial_state = x;
  out.states.reserve(params.horizon);
  out.controls.reserve(params.horizon);
  out.noises.reserve(params.horizon);
  for (int k = 1; k <= params.horizon; ++k) {
    const double z = params.noise.sample(rng);
    double u = 0.0;
    if (k == event.time + 1) {
      if (event.style == ResetStyle::FreshNoise) {
        u = a * x;  // the new state becomes this step's noise sample
      } else {
        const double fresh = rng.next_gaussian(stationary_sd);
        u = a * x + z - fresh;  // the new state becomes an independent stationary draw
      }
    }
    x = step(x, a, z, u);
    out.states.push_back(x);
    out.controls.push_back(u);
    out.noises.push_back(z);
  }
  return out;
}

Trajectory simulate_with_reset(const Ar1Params& params, const ResetEvent& event,
                               std::uint64_t seed) {
  SplitMix64 rng(seed);
  return simulate_with_reset(params, event, rng, seed);
}

CovMatrix empirical_covariance(const Ar1Params& params, long trials,
                               std::uint64_t seed, int threads,
                               std::optional<ResetEvent> reset) {
  params.validate();
  require(trials >= 2, "empirical_covariance: trials must be >= 2");
  const int n = params.horizon;

  struct Partial {
    Eigen::VectorXd sum;
    Eigen::MatrixXd outer;
  };
  const long blocks = (trials + kBlock - 1) / kBlock;
  std::vector<Partial> partials(blocks);

  for_each_block(trials, threads, [&](long block) {
    Partial p{Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n)};
    const long lo = block * kBlock;
    const long hi = std::min(trials, lo + kBlock);
    const ControllerSpec open_loop = ControllerSpec::none();
    for (long trial = lo; trial < hi; ++trial) {
      SplitMix64 rng(derive_stream(seed, kPlantStream, trial));
      Trajectory t = reset ? simulate_with_reset(params, *reset, rng)
                           : simulate(params, open_loop, rng);
      const Eigen::Map<const Eigen::VectorXd> x(t.states.data(), n);
      p.sum += x;
      p.outer.selfadjointView<Eigen::Lower>().rankUpdate(x);
    }
    partials[block] = std::move(p);
  });

  Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(n, n);
  for (const Partial& p : partials) {
    sum += p.sum;
    lower += p.outer;
  }
  const Eigen::MatrixXd outer = lower.selfadjointView<Eigen::Lower>();

  const double t = static_cast<double>(trials);
  const Eigen::VectorXd mean = sum / t;
  CovMatrix out;
  out.provenance = CovMatrix::Provenance::Empirical;
  out.entries = (outer - t * mean * mean.transpose()) / (t - 1.0);
  return out;
}

BoundCheck primary_bound(const Scenario& sc, const ErrorRates& rates) {
  BoundCheck b;
  const double margin = 4.0 * (rates.std_err_alpha + rates.std_err_beta);
  switch (sc.detector.kind) {
    case DetectorSpec::Kind::GaussianLrt: {
      const double kl =
          sc.detector.contrast == DetectorSpec::Contrast::GainChange
              ? kl_gain_change(sc.params.gain, sc.controller.target_gain,
                               sc.params.horizon)
              : kl_reset(sc.params.gain);
      b.name = "covert_error_sum_lower";
      b.value = bound_report(kl).error_sum_lower;
      b.pass = rates.sum >= b.value - margin;
      return b;
    }
    case DetectorSpec::Kind::ControlEnergy: {
      const double e_u = one_bit_energy_bounds(sc.controller.c1,
                                               sc.controller.gain,
                                               sc.controller.noise_bound)
                             .lower;
      const double snr = e_u / (sc.detector.sigma_v * sc.detector.sigma_v);
      const double k0 = k0_control_energy(snr, sc.detector.delta);
      b.name = "detection_within_delta";
      b.value = sc.detector.delta;
      const bool guaranteed = sc.detector.window >= std::ceil(k0);
      b.pass = guaranteed ? rates.sum <= sc.detector.delta : true;
      return b;
    }
    case DetectorSpec::Kind::ResidualEnergy: {
      const double e_u = one_bit_energy_bounds(sc.controller.c1,
                                               sc.controller.gain,
                                               sc.controller.noise_bound)
                             .lower;
      const double k0 =
          k0_residual_energy(e_u, sc.params.noise.variance(),
                             sc.params.noise.fourth_moment(), sc.detector.delta)
              .k0;
      b.name = "detection_within_delta";
      b.value = sc.detector.delta;
      const bool guaranteed = sc.detector.window >= std::ceil(k0);
      b.pass = guaranteed ? rates.sum <= sc.detector.delta : true;
      return b;
    }
    case DetectorSpec::Kind::ResetLrt: {
      b.name = "detection_within_delta";
      b.value = sc.detector.delta;
      const bool guaranteed =
          std::abs(sc.params.gain) >= detection_gain_threshold(sc.detector.delta);
      b.pass = guaranteed ? rates.sum <= sc.detector.delta : true;
      return b;
    }
    case DetectorSpec::Kind::Magnitude: {
      b.name = "detection_within_delta";
      b.value = sc.detector.delta;
      const double n0 =
          n0_magnitude(sc.params.gain, std::sqrt(sc.params.noise.variance()),
                       sc.detector.magnitude.m, sc.detector.delta);
      const bool guaranteed = sc.params.horizon >= std::ceil(n0);
      b.pass = guaranteed ? rates.sum <= sc.detector.delta : true;
      return b;
    }
  }
  throw std::invalid_argument("unknown detector kind");
}

SweepAxis sweep_axis_from_name(const std::string& name) {
  if (name == "a") return SweepAxis::Gain;
  if (name == "b") return SweepAxis::TargetGain;
  if (name == "D") return SweepAxis::Threshold;
  if (name == "delta") return SweepAxis::Delta;
  if (name == "K") return SweepAxis::Window;
  if (name == "snr") return SweepAxis::Snr;
  if (name == "eps") return SweepAxis::Eps;
  throw std::invalid_argument("unknown sweep axis: " + name +
                              " (expected a, b, D, delta, K, snr, eps)");
}

std::string sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Gain: return "a";
    case SweepAxis::TargetGain: return "b";
    case SweepAxis::Threshold: return "D";
    case SweepAxis::Delta: return "delta";
    case SweepAxis::Window: return "K";
    case SweepAxis::Snr: return "snr";
    case SweepAxis::Eps: return "eps";
  }
  return "?";
}

void apply_sweep_value(Scenario& sc, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::Gain:
      sc.params.gain = value;
      if (sc.controller.kind != ControllerSpec::Kind::None) {
        sc.controller.gain = value;
      }
      return;
    case SweepAxis::TargetGain:
      sc.controller.target_gain = value;
      return;
    case SweepAxis::Threshold:
      sc.controller.threshold = value;
      return;
    case SweepAxis::Delta:
      sc.detector.delta = value;
      sc.detector.magnitude.delta = value;
      return;
    case SweepAxis::Window:
      sc.detector.window = static_cast<int>(value);
      return;
    case SweepAxis::Snr: {
      const double e_u = one_bit_energy_bounds(sc.controller.c1,
                                               sc.controller.gain,
                                               sc.controller.noise_bound)
                             .lower;
      sc.detector.sigma_v = std::sqrt(e_u / value);
      return;
    }
    case SweepAxis::Eps:
      sc.eps = value;
      return;
  }
  throw std::invalid_argument("unknown sweep axis");
}

std::vector<SweepRow> sweep(const Scenario& base, SweepAxis axis,
                            std::span<const double> values) {
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (double value : values) {
    Scenario sc = base;
    apply_sweep_value(sc, axis, value);
    SweepRow row;
    row.value = value;
    row.rates = estimate_error_rates(sc);
    if (axis == SweepAxis::Eps) {
      row.bound_name = "epsilon_error_sum_target";
      row.bound_value = 1.0 - value;
      const double margin =
          4.0 * (row.rates.std_err_alpha + row.rates.std_err_beta);
      row.pass = row.rates.sum >= row.bound_value - margin;
    } else {
      const BoundCheck b = primary_bound(sc, row.rates);
      row.bound_name = b.name;
      row.bound_value = b.value;
      row.pass = b.pass;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace covertctl
