#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace qnd {

enum class PulseKind { Delta, Constant, PiecewiseLinear };

// One measurement pulse f_j(t). Amplitudes are required to be nonnegative;
// signed pulses are out of scope.
class PulseShape {
 public:
  // Instantaneous kick at time t_kick (unit weight).
  static PulseShape delta(double t_kick);
  // f(t) = amplitude on [start, stop), 0 elsewhere.
  static PulseShape constant(double start, double stop, double amplitude);
  // Linear interpolation through (time, value) knots; 0 outside the knot span.
  static PulseShape piecewise_linear(std::vector<std::pair<double, double>> knots);

  PulseKind kind() const { return kind_; }
  bool is_delta() const { return kind_ == PulseKind::Delta; }

  // f(t). Not defined for delta pulses.
  double value(double t) const;

  // Integral impact: the running integral of f over [0, t]. Closed form per
  // kind; for the delta kind this is the unit step, taken right-continuous
  // (value 1 at the kick instant itself).
  double phase_integral(double t) const;

  // Latest time at which the pulse acts (kick time, stop, or last knot).
  double end_time() const;

  // Times where f changes analytic form. Empty for delta pulses.
  std::vector<double> breakpoints() const;

  // Delta pulses become finite triangular pulses of unit area supported on
  // [t_kick - width, t_kick + width]; other kinds are returned unchanged.
  // The triangle has compact support, so its integral impact coincides with
  // the ideal unit step everywhere outside that support.
  PulseShape smoothed(double width) const;

  double kick_time() const;  // delta only
  double start() const { return start_; }
  double stop() const { return stop_; }
  double amplitude() const { return amplitude_; }
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }

 private:
  PulseShape() = default;

  PulseKind kind_ = PulseKind::Delta;
  double t_kick_ = 0.0;
  double start_ = 0.0;
  double stop_ = 0.0;
  double amplitude_ = 0.0;
  std::vector<std::pair<double, double>> knots_;
};

// Per-pulse integral impacts at one instant, plus whether they coincide.
struct PhaseProfile {
  std::vector<double> phases;
  bool uniform = true;   // all phases equal within kUniformImpactTol
  double common = 0.0;   // the shared value when uniform
};

// An ordered list of M measurement pulses.
class Protocol {
 public:
  Protocol() = default;
  explicit Protocol(std::vector<PulseShape> pulses);

  std::size_t size() const { return pulses_.size(); }
  bool empty() const { return pulses_.empty(); }
  const PulseShape& pulse(std::size_t j) const { return pulses_.at(j); }
  const std::vector<PulseShape>& pulses() const { return pulses_; }

  // Latest pulse end or kick time; 0 for an empty protocol.
  double last_event_time() const;

  double phase_integral(std::size_t j, double t) const;
  PhaseProfile all_phases(double t) const;

  bool has_delta() const;
  Protocol smoothed(double width) const;

  // Merged, sorted, deduplicated breakpoints of all pulses.
  std::vector<double> breakpoints() const;

  // "instantaneous" (all kicks), "continuous" (single unit-amplitude constant
  // pulse from t = 0), "custom", or "none".
  std::string descriptor() const;

 private:
  std::vector<PulseShape> pulses_;
};

}  // namespace qnd
