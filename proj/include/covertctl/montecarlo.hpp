// Scenario runner: estimates false-alarm and miss probabilities for a
// detector against a controlled/uncontrolled plant pair, with deterministic
// parallel seeding (per-trial streams derived from the master seed, so
// serial and threaded runs agree bit for bit).
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "covertctl/analytics.hpp"
#include "covertctl/ar1.hpp"
#include "covertctl/detectors.hpp"

namespace covertctl {

/// How a forced reset re-seeds the plant at sample time + 1.
///  - FreshNoise: the next state equals that step's noise sample, the reset
///    law's own mechanics.
///  - StationaryRestart: the next state is an independent stationary draw,
///    the block-covariance model the closed-form analysis assumes.
enum class ResetStyle { FreshNoise, StationaryRestart };

struct ResetEvent {
  int time = 1;  // tau; the reset lands on sample tau + 1
  ResetStyle style = ResetStyle::FreshNoise;
};

struct DetectorSpec {
  enum class Kind {
    Magnitude,
    ControlEnergy,
    ResidualEnergy,
    ResetLrt,
    GaussianLrt,
  };
  /// Which pair of laws the Gaussian LRT discriminates.
  enum class Contrast { GainChange, Reset };

  Kind kind = Kind::GaussianLrt;
  double delta = 0.1;
  int window = 0;        // K for the energy detectors
  double sigma_v = 1.0;  // channel noise std for ControlEnergy
  MagnitudeConfig magnitude{};
  Contrast contrast = Contrast::GainChange;
};

struct Scenario {
  Ar1Params params;
  ControllerSpec controller;  // behavior under the alternative hypothesis
  DetectorSpec detector;
  long trials = 1;
  std::uint64_t master_seed = 0;
  std::optional<int> forced_reset_time;  // fixed tau in [1, horizon-1]
  bool random_reset_time = false;        // tau uniform over [1, horizon-1] per trial
  ResetStyle reset_style = ResetStyle::StationaryRestart;
  double eps = 0.0;  // covertness target, used only for reporting
  int threads = 0;   // 0 = machine parallelism

  void validate() const;
};

struct ErrorRates {
  double alpha_hat = 0.0;
  double beta_hat = 0.0;
  double sum = 0.0;
  long trials = 0;
  double std_err_alpha = 0.0;
  double std_err_beta = 0.0;
};

/// Runs `trials` simulations under each hypothesis and applies the
/// configured detector. Deterministic in (scenario, master_seed) regardless
/// of the thread count.
ErrorRates estimate_error_rates(const Scenario& scenario);

/// Same counting harness but with an arbitrary per-trial classifier;
/// hypothesis is 0 (null) or 1 (alternative). Test seam.
using TrialClassifier = std::function<Decision(int hypothesis, long trial)>;
ErrorRates estimate_error_rates_with(const Scenario& scenario,
                                     const TrialClassifier& classify);

/// Open-loop run with a forced reset at event.time.
Trajectory simulate_with_reset(const Ar1Params& params, const ResetEvent& event,
                               SplitMix64& rng, std::uint64_t seed_label = 0);
Trajectory simulate_with_reset(const Ar1Params& params, const ResetEvent& event,
                               std::uint64_t seed);

/// Unbiased sample covariance of the recorded state vector over independent
/// open-loop trajectories (optionally carrying a forced reset). Fixed-size
/// accumulation blocks keep the reduction order, and hence the result,
/// independent of the thread count.
CovMatrix empirical_covariance(const Ar1Params& params, long trials,
                               std::uint64_t seed, int threads = 1,
                               std::optional<ResetEvent> reset = std::nullopt);

struct BoundCheck {
  std::string name;
  double value = 0.0;
  bool pass = true;
};

/// The closed-form bound applicable to the scenario's detector, evaluated
/// against the empirical rates: a Pinsker-type lower bound for the LRT
/// scenarios, the delta detection target for the threshold-driven ones.
BoundCheck primary_bound(const Scenario& scenario, const ErrorRates& rates);

enum class SweepAxis { Gain, TargetGain, Threshold, Delta, Window, Snr, Eps };

/// Parses one of: a, b, D, delta, K, snr, eps. Throws std::invalid_argument.
SweepAxis sweep_axis_from_name(const std::string& name);
std::string sweep_axis_name(SweepAxis axis);

struct SweepRow {
  double value = 0.0;
  ErrorRates rates;
  std::string bound_name;
  double bound_value = 0.0;
  bool pass = true;
};

/// Writes one axis value into a scenario (gain updates reach the controller
/// too; snr re-derives the channel noise from the control energy).
void apply_sweep_value(Scenario& scenario, SweepAxis axis, double value);

/// One estimate_error_rates call per value, the axis applied to a copy of
/// the template scenario; rows are independent and order-stable.
std::vector<SweepRow> sweep(const Scenario& base, SweepAxis axis,
                            std::span<const double> values);

}  // namespace covertctl
