// Scalar first-order autoregressive plant: x_k = a x_{k-1} + z_k - u_k.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "covertctl/controllers.hpp"
#include "covertctl/rng.hpp"

namespace covertctl {

/// Disturbance law for the plant. All variants are zero mean and i.i.d.
struct NoiseModel {
  enum class Kind { Gaussian, UniformBounded, TruncatedGaussian };

  Kind kind = Kind::Gaussian;
  double stddev = 1.0;  // Gaussian / TruncatedGaussian scale
  double bound = 0.0;   // half-width of the support when bounded

  static NoiseModel gaussian(double stddev);
  static NoiseModel uniform_bounded(double bound);
  static NoiseModel truncated_gaussian(double stddev);  // bound = 4 * stddev
  static NoiseModel truncated_gaussian(double stddev, double bound);

  bool has_bounded_support() const { return kind != Kind::Gaussian; }

  double variance() const;
  /// Fourth moment E[Z^4] of the variant.
  double fourth_moment() const;

  double sample(SplitMix64& rng) const;

  void validate() const;
};

enum class InitPolicy { ZeroStart, SteadyStateDraw };

struct Ar1Params {
  double gain = 0.0;
  int horizon = 1;  // number of recorded samples N
  InitPolicy init_policy = InitPolicy::ZeroStart;
  NoiseModel noise = NoiseModel::gaussian(1.0);
  int burn_in = 0;  // extra leading steps discarded before recording

  void validate() const;
};

/// One realized run. states[k-1] = X_k for k = 1..N, and the recursion
/// X_k = gain * X_{k-1} + Z_k - U_k holds with X_0 = initial_state.
struct Trajectory {
  double initial_state = 0.0;
  std::vector<double> states;
  std::vector<double> controls;
  std::vector<double> noises;
  std::uint64_t seed = 0;

  int size() const { return static_cast<int>(states.size()); }
};

/// Single plant update a * x_prev + z - u. Throws std::domain_error on any
/// non-finite input.
double step(double x_prev, double a, double z, double u);

/// Runs the plant for params.horizon steps under the given control law.
/// Identical (params, controller, seed) triples produce bit-identical output.
///
/// A stationary initial draw uses the closed-loop gain (the gain-change law
/// reshapes the stationary variance), so the recorded vector is stationary
/// under the running controller from the first sample.
Trajectory simulate(const Ar1Params& params, const ControllerSpec& controller,
                    std::uint64_t seed);

/// As above but drawing from a caller-owned stream; seed_label is recorded
/// in the trajectory only.
Trajectory simulate(const Ar1Params& params, const ControllerSpec& controller,
                    SplitMix64& rng, std::uint64_t seed_label = 0);

/// State at time k for a zero initial condition, accumulated directly from
/// the noise and control sequences: sum over m of a^(k-m) (z_m - u_m).
double closed_form_state(double a, std::span<const double> noises,
                         std::span<const double> controls, int k);

}  // namespace covertctl
