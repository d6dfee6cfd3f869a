#include "covertctl/ar1.hpp"

#include <cmath>
#include <stdexcept>

namespace covertctl {
namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

NoiseModel NoiseModel::gaussian(double stddev) {
  NoiseModel m;
  m.kind = Kind::Gaussian;
  m.stddev = stddev;
  m.bound = 0.0;
  m.validate();
  return m;
}

NoiseModel NoiseModel::uniform_bounded(double bound) {
  NoiseModel m;
  m.kind = Kind::UniformBounded;
  m.stddev = 0.0;
  m.bound = bound;
  m.validate();
  return m;
}

NoiseModel NoiseModel::truncated_gaussian(double stddev) {
  return truncated_gaussian(stddev, 4.0 * stddev);
}

NoiseModel NoiseModel::truncated_gaussian(double stddev, double bound) {
  NoiseModel m;
  m.kind = Kind::TruncatedGaussian;
  m.stddev = stddev;
  m.bound = bound;
  m.validate();
  return m;
}

void NoiseModel::validate() const {
  switch (kind) {
    case Kind::Gaussian:
      require(stddev > 0.0, "noise stddev must be > 0");
      return;
    case Kind::UniformBounded:
      require(bound > 0.0, "noise bound must be > 0");
      return;
    case Kind::TruncatedGaussian:
      require(stddev > 0.0, "noise stddev must be > 0");
      require(bound > 0.0, "noise bound must be > 0");
      return;
  }
  throw std::invalid_argument("unknown noise kind");
}

double NoiseModel::variance() const {
  switch (kind) {
    case Kind::Gaussian:
      return stddev * stddev;
    case Kind::UniformBounded:
      return bound * bound / 3.0;
    case Kind::TruncatedGaussian: {
      // Second moment of N(0, stddev^2) conditioned on [-bound, bound].
      const double alpha = bound / stddev;
      const double mass = 1.0 - 2.0 * q_function(alpha);
      return stddev * stddev * (1.0 - 2.0 * alpha * normal_pdf(alpha) / mass);
    }
  }
  throw std::invalid_argument("unknown noise kind");
}

double NoiseModel::fourth_moment() const {
  switch (kind) {
    case Kind::Gaussian:
      return 3.0 * std::pow(stddev, 4);
    case Kind::UniformBounded:
      return std::pow(bound, 4) / 5.0;
    case Kind::TruncatedGaussian: {
      const double alpha = bound / stddev;
      const double mass = 1.0 - 2.0 * q_function(alpha);
      const double tail = (6.0 * alpha + 2.0 * alpha * alpha * alpha) *
                          normal_pdf(alpha) / mass;
      return std::pow(stddev, 4) * (3.0 - tail);
    }
  }
  throw std::invalid_argument("unknown noise kind");
}

double NoiseModel::sample(SplitMix64& rng) const {
  switch (kind) {
    case Kind::Gaussian:
      return rng.next_gaussian(stddev);
    case Kind::UniformBounded:
      return rng.next_symmetric(bound);
    case Kind::TruncatedGaussian: {
      for (;;) {
        double z = rng.next_gaussian(stddev);
        if (std::abs(z) <= bound) return z;
      }
    }
  }
  throw std::invalid_argument("unknown noise kind");
}

void Ar1Params::validate() const {
  noise.validate();
  require(horizon >= 1, "horizon must be >= 1");
  require(burn_in >= 0, "burn_in must be >= 0");
  require(std::isfinite(gain), "gain must be finite");
  if (init_policy == InitPolicy::SteadyStateDraw) {
    require(std::abs(gain) < 1.0,
            "stationary initial draw requires |gain| < 1");
  }
}

double step(double x_prev, double a, double z, double u) {
  if (!(std::isfinite(x_prev) && std::isfinite(a) && std::isfinite(z) &&
        std::isfinite(u))) {
    throw std::domain_error("step: non-finite input");
  }
  // Grouped so a control that cancels the carry (u equal to the rounded
  // product a * x_prev) leaves exactly z: reset steps land on the noise
  // sample bit for bit. The named intermediate also blocks FMA contraction.
  const double carry = a * x_prev;
  return (carry - u) + z;
}

Trajectory simulate(const Ar1Params& params, const ControllerSpec& controller,
                    std::uint64_t seed) {
  SplitMix64 rng(seed);
  return simulate(params, controller, rng, seed);
}

Trajectory simulate(const Ar1Params& params, const ControllerSpec& controller,
                    SplitMix64& rng, std::uint64_t seed_label) {
  params.validate();
  controller.validate();
  if (controller.kind == ControllerSpec::Kind::OneBit) {
    require(params.noise.has_bounded_support(),
            "one-bit controller requires bounded-support noise");
    require(params.noise.bound == controller.noise_bound,
            "one-bit controller noise_bound must match the noise model");
  }
  if (controller.kind != ControllerSpec::Kind::None) {
    require(controller.gain == params.gain,
            "controller was built for a different plant gain");
  }

  const double closed_loop = controller.kind == ControllerSpec::Kind::None
                                 ? params.gain
                                 : controller.effective_gain();

  double x = 0.0;
  if (params.init_policy == InitPolicy::SteadyStateDraw) {
    require(std::abs(closed_loop) < 1.0,
            "stationary initial draw requires |closed-loop gain| < 1");
    const double sd =
        std::sqrt(params.noise.variance() / (1.0 - closed_loop * closed_loop));
    x = rng.next_gaussian(sd);
  }

  Trajectory out;
  out.seed = seed_label;
  out.initial_state = x;
  out.states.reserve(params.horizon);
  out.controls.reserve(params.horizon);
  out.noises.reserve(params.horizon);

  ControllerState law(controller);
  const int total = params.burn_in + params.horizon;
  for (int k = 1; k <= total; ++k) {
    if (k == params.burn_in + 1) out.initial_state = x;
    const double u = law.control(x);
    const double z = params.noise.sample(rng);
    x = step(x, params.gain, z, u);
    if (k > params.burn_in) {
      out.states.push_back(x);
      out.controls.push_back(u);
      out.noises.push_back(z);
    }
  }
  return out;
}

double closed_form_state(double a, std::span<const double> noises,
                         std::span<const double> controls, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > noises.size() ||
      static_cast<std::size_t>(k) > controls.size()) {
    throw std::domain_error("closed_form_state: k out of range");
  }
  double acc = 0.0;
  for (int m = 0; m < k; ++m) {
    acc = a * acc + (noises[m] - controls[m]);
  }
  return acc;
}

}  // namespace covertctl
