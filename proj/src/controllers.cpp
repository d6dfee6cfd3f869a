#include "covertctl/controllers.hpp"

#include <cmath>
#include <stdexcept>

namespace covertctl {
namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double sgn(double x) { return x < 0.0 ? -1.0 : 1.0; }

}  // namespace

ControllerSpec ControllerSpec::none() { return {}; }

ControllerSpec ControllerSpec::one_bit(double c1, double noise_bound, double gain) {
  ControllerSpec s;
  s.kind = Kind::OneBit;
  s.c1 = c1;
  s.noise_bound = noise_bound;
  s.gain = gain;
  s.validate();
  return s;
}

ControllerSpec ControllerSpec::one_bit_fixed_point(double noise_bound, double gain) {
  return one_bit(noise_bound / (1.0 - gain / 2.0), noise_bound, gain);
}

ControllerSpec ControllerSpec::threshold_reset(double threshold, double gain) {
  ControllerSpec s;
  s.kind = Kind::Threshold;
  s.threshold = threshold;
  s.gain = gain;
  s.validate();
  return s;
}

ControllerSpec ControllerSpec::gain_change(double gain, double target_gain,
                                           bool relaxed) {
  ControllerSpec s;
  s.kind = Kind::GainChange;
  s.gain = gain;
  s.target_gain = target_gain;
  s.relaxed = relaxed;
  s.validate();
  return s;
}

double ControllerSpec::effective_gain() const {
  return kind == Kind::GainChange ? target_gain : gain;
}

void ControllerSpec::validate() const {
  switch (kind) {
    case Kind::None:
      return;
    case Kind::OneBit:
      require(gain > 0.0 && gain < 2.0, "one-bit controller requires 0 < gain < 2");
      require(noise_bound > 0.0, "one-bit controller requires noise_bound > 0");
      require(c1 >= noise_bound / (1.0 - gain / 2.0) * (1.0 - 1e-12),
              "one-bit controller requires c1 >= noise_bound / (1 - gain/2)");
      return;
    case Kind::Threshold:
      require(threshold > 0.0, "threshold controller requires threshold > 0");
      return;
    case Kind::GainChange:
      if (relaxed) return;
      require(std::abs(gain) > 0.0 && std::abs(gain) < std::abs(target_gain) &&
                  std::abs(target_gain) < 1.0,
              "gain-change controller requires 0 < |gain| < |target_gain| < 1");
      require(sgn(gain) == sgn(target_gain),
              "gain-change controller requires matching signs");
      return;
  }
  throw std::invalid_argument("unknown controller kind");
}

double c_next(double c_prev, double a, double noise_bound) {
  if (!(a > 0.0 && a < 2.0)) throw std::domain_error("c_next requires 0 < a < 2");
  return (a / 2.0) * c_prev + noise_bound;
}

double c_closed_form(double c1, double a, double noise_bound, int n) {
  if (!(a > 0.0 && a < 2.0)) {
    throw std::domain_error("c_closed_form requires 0 < a < 2");
  }
  const double fixed_point = noise_bound / (1.0 - a / 2.0);
  if (!(c1 >= fixed_point * (1.0 - 1e-12))) {
    throw std::domain_error("c_closed_form requires c1 >= noise_bound / (1 - a/2)");
  }
  if (n < 1) throw std::domain_error("c_closed_form requires n >= 1");
  return fixed_point + std::pow(a / 2.0, n - 1) * (c1 - fixed_point);
}

double one_bit_control(double x_prev, double c_prev, double a) {
  if (!(a > 0.0 && a < 2.0)) {
    throw std::domain_error("one_bit_control requires 0 < a < 2");
  }
  return (a / 2.0) * c_prev * sgn(x_prev);
}

EnergyBounds one_bit_energy_bounds(double c1, double a, double noise_bound) {
  ControllerSpec::one_bit(c1, noise_bound, a);  // parameter validation
  EnergyBounds b;
  b.lower = std::pow(a * noise_bound / (2.0 - a), 2);
  b.upper = std::pow(a * c1 / 2.0, 2);
  return b;
}

double threshold_control(double x_prev, double d, double a) {
  if (!(d > 0.0)) throw std::domain_error("threshold_control requires d > 0");
  return std::abs(x_prev) >= d ? a * x_prev : 0.0;
}

double gain_change_control(double x_prev, double a, double b) {
  return (a - b) * x_prev;
}

ControllerState::ControllerState(const ControllerSpec& spec)
    : spec_(spec), c_(spec.c1) {
  spec_.validate();
}

double ControllerState::control(double x_prev) {
  ++step_;
  switch (spec_.kind) {
    case ControllerSpec::Kind::None:
      return 0.0;
    case ControllerSpec::Kind::OneBit: {
      if (step_ == 1) return 0.0;  // the sign feedback starts from step 2
      double u = one_bit_control(x_prev, c_, spec_.gain);
      c_ = c_next(c_, spec_.gain, spec_.noise_bound);
      return u;
    }
    case ControllerSpec::Kind::Threshold:
      return threshold_control(x_prev, spec_.threshold, spec_.gain);
    case ControllerSpec::Kind::GainChange:
      return gain_change_control(x_prev, spec_.gain, spec_.target_gain);
  }
  throw std::invalid_argument("unknown controller kind");
}

}  // namespace covertctl
