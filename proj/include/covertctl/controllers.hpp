// Control laws applied to the scalar plant, with their energy accounting.
#pragma once

#include <cstdint>

namespace covertctl {

/// Declarative description of the control law driving a simulation.
///
/// Variants:
///  - None: the plant runs open loop.
///  - OneBit: sign-feedback law u = (gain/2) * C * sgn(x_prev) with the
///    deterministic gain series C advanced every step; requires bounded
///    noise and 0 < gain < 2.
///  - Threshold: reset law u = gain * x_prev whenever |x_prev| >= threshold.
///  - GainChange: u = (gain - target_gain) * x_prev, turning a gain-`gain`
///    plant into a gain-`target_gain` plant.
struct ControllerSpec {
  enum class Kind { None, OneBit, Threshold, GainChange };

  Kind kind = Kind::None;
  double gain = 0.0;         // plant gain the law was designed for
  double c1 = 0.0;           // OneBit: first element of the C series
  double noise_bound = 0.0;  // OneBit: bound B on the disturbance
  double threshold = 0.0;    // Threshold: reset level D
  double target_gain = 0.0;  // GainChange: closed-loop gain b
  bool relaxed = false;      // GainChange: skip the hypothesis checks

  static ControllerSpec none();
  static ControllerSpec one_bit(double c1, double noise_bound, double gain);
  /// OneBit with c1 pinned to the fixed point B / (1 - gain/2).
  static ControllerSpec one_bit_fixed_point(double noise_bound, double gain);
  static ControllerSpec threshold_reset(double threshold, double gain);
  static ControllerSpec gain_change(double gain, double target_gain,
                                    bool relaxed = false);

  /// Closed-loop gain of the controlled plant (target_gain for GainChange,
  /// the plant gain otherwise). Used for stationary initial draws.
  double effective_gain() const;

  /// Throws std::invalid_argument when the variant's invariants fail.
  void validate() const;
};

/// One step of the C series: (a/2) * c_prev + noise_bound. Requires 0 < a < 2.
double c_next(double c_prev, double a, double noise_bound);

/// C_n in closed form from C_1; equals n-1 iterations of c_next.
double c_closed_form(double c1, double a, double noise_bound, int n);

/// Sign-feedback control value (a/2) * c_prev * sgn(x_prev); sgn(0) = +1.
double one_bit_control(double x_prev, double c_prev, double a);

struct EnergyBounds {
  double lower = 0.0;  // (a B / (2 - a))^2, attained once C reaches its fixed point
  double upper = 0.0;  // (a C1 / 2)^2
};

/// Time-averaged energy bounds of the sign-feedback law.
EnergyBounds one_bit_energy_bounds(double c1, double a, double noise_bound);

/// Reset control: a * x_prev when |x_prev| >= d (inclusive), else 0.
double threshold_control(double x_prev, double d, double a);

/// Gain-change control (a - b) * x_prev.
double gain_change_control(double x_prev, double a, double b);

/// Per-trajectory evaluation state. OneBit's running C value is owned here,
/// so a ControllerState must not be shared across trajectories.
class ControllerState {
 public:
  explicit ControllerState(const ControllerSpec& spec);

  /// Control value for the next step given the previous state. Must be
  /// called exactly once per step, in step order. The first call returns 0
  /// for the one-bit law (its C series only starts driving from step 2).
  double control(double x_prev);

 private:
  ControllerSpec spec_;
  double c_;
  std::uint64_t step_ = 0;
};

}  // namespace covertctl
