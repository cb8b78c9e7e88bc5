#include "qnd/protocol.hpp"

#include <algorithm>
#include <cmath>

#include "qnd/errors.hpp"
#include "qnd/types.hpp"

namespace qnd {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw ValidationError(std::string("pulse parameter not finite: ") + what);
  }
}

void require_time(double t) {
  if (!(t >= 0.0)) {
    throw ValidationError("time must be nonnegative, got " + std::to_string(t));
  }
}

}  // namespace

PulseShape PulseShape::delta(double t_kick) {
  require_finite(t_kick, "kick time");
  if (t_kick < 0.0) {
    throw ValidationError("delta pulse kick time must be >= 0");
  }
  PulseShape p;
  p.kind_ = PulseKind::Delta;
  p.t_kick_ = t_kick;
  return p;
}

PulseShape PulseShape::constant(double start, double stop, double amplitude) {
  require_finite(start, "start");
  require_finite(stop, "stop");
  require_finite(amplitude, "amplitude");
  if (start < 0.0 || !(start < stop)) {
    throw ValidationError("constant pulse requires 0 <= start < stop");
  }
  if (amplitude < 0.0) {
    throw ValidationError("pulse amplitudes must be nonnegative");
  }
  PulseShape p;
  p.kind_ = PulseKind::Constant;
  p.start_ = start;
  p.stop_ = stop;
  p.amplitude_ = amplitude;
  return p;
}

PulseShape PulseShape::piecewise_linear(
    std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) {
    throw ValidationError("piecewise_linear pulse needs at least two knots");
  }
  for (std::size_t i = 0; i < knots.size(); ++i) {
    require_finite(knots[i].first, "knot time");
    require_finite(knots[i].second, "knot value");
    if (knots[i].second < 0.0) {
      throw ValidationError("pulse amplitudes must be nonnegative");
    }
    if (i > 0 && !(knots[i].first > knots[i - 1].first)) {
      throw ValidationError("piecewise_linear knot times must be strictly increasing");
    }
  }
  if (knots.front().first < 0.0) {
    throw ValidationError("piecewise_linear knots must start at t >= 0");
  }
  PulseShape p;
  p.kind_ = PulseKind::PiecewiseLinear;
  p.knots_ = std::move(knots);
  return p;
}

double PulseShape::kick_time() const {
  if (kind_ != PulseKind::Delta) {
    throw ValidationError("kick_time() is only defined for delta pulses");
  }
  return t_kick_;
}

double PulseShape::value(double t) const {
  require_time(t);
  switch (kind_) {
    case PulseKind::Delta:
      throw ValidationError("a delta pulse has no pointwise value; smooth it first");
    case PulseKind::Constant:
      return (t >= start_ && t < stop_) ? amplitude_ : 0.0;
    case PulseKind::PiecewiseLinear: {
      if (t < knots_.front().first || t > knots_.back().first) return 0.0;
      auto it = std::upper_bound(
          knots_.begin(), knots_.end(), t,
          [](double x, const std::pair<double, double>& kn) { return x < kn.first; });
      if (it == knots_.begin()) return knots_.front().second;
      if (it == knots_.end()) return knots_.back().second;
      auto lo = *(it - 1);
      auto hi = *it;
      double s = (t - lo.first) / (hi.first - lo.first);
      return lo.second + s * (hi.second - lo.second);
    }
  }
  return 0.0;
}

double PulseShape::phase_integral(double t) const {
  require_time(t);
  switch (kind_) {
    case PulseKind::Delta:
      return t >= t_kick_ ? 1.0 : 0.0;
    case PulseKind::Constant:
      return amplitude_ * std::max(0.0, std::min(t, stop_) - start_);
    case PulseKind::PiecewiseLinear: {
      // The integrand is piecewise linear, so the running trapezoid is exact.
      double acc = 0.0;
      for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
        const auto& [t0, v0] = knots_[i];
        const auto& [t1, v1] = knots_[i + 1];
        if (t <= t0) break;
        if (t >= t1) {
          acc += 0.5 * (v0 + v1) * (t1 - t0);
        } else {
          double s = (t - t0) / (t1 - t0);
          double vt = v0 + s * (v1 - v0);
          acc += 0.5 * (v0 + vt) * (t - t0);
          break;
        }
      }
      return acc;
    }
  }
  return 0.0;
}

double PulseShape::end_time() const {
  switch (kind_) {
    case PulseKind::Delta:
      return t_kick_;
    case PulseKind::Constant:
      return stop_;
    case PulseKind::PiecewiseLinear:
      return knots_.back().first;
  }
  return 0.0;
}

std::vector<double> PulseShape::breakpoints() const {
  switch (kind_) {
    case PulseKind::Delta:
      return {};
    case PulseKind::Constant:
      return {start_, stop_};
    case PulseKind::PiecewiseLinear: {
      std::vector<double> out;
      out.reserve(knots_.size());
      for (const auto& kn : knots_) out.push_back(kn.first);
      return out;
    }
  }
  return {};
}

PulseShape PulseShape::smoothed(double width) const {
  if (kind_ != PulseKind::Delta) return *this;
  if (!(width > 0.0) || !std::isfinite(width)) {
    throw ValidationError("smoothing width must be positive and finite");
  }
  double peak = 1.0 / width;  // unit area triangle on [t_kick - w, t_kick + w]
  double lo = t_kick_ - width;
  if (lo < 0.0) {
    throw ValidationError("smoothed kick support would extend below t = 0; "
                          "kick at t = " + std::to_string(t_kick_) +
                          " needs width <= that time");
  }
  return piecewise_linear({{lo, 0.0}, {t_kick_, peak}, {t_kick_ + width, 0.0}});
}

Protocol::Protocol(std::vector<PulseShape> pulses) : pulses_(std::move(pulses)) {}

double Protocol::last_event_time() const {
  double t = 0.0;
  for (const auto& p : pulses_) t = std::max(t, p.end_time());
  return t;
}

double Protocol::phase_integral(std::size_t j, double t) const {
  return pulses_.at(j).phase_integral(t);
}

PhaseProfile Protocol::all_phases(double t) const {
  PhaseProfile out;
  out.phases.reserve(pulses_.size());
  for (const auto& p : pulses_) out.phases.push_back(p.phase_integral(t));
  if (out.phases.empty()) {
    out.uniform = true;  // vacuously, with zero common impact
    out.common = 0.0;
    return out;
  }
  out.common = out.phases.front();
  out.uniform = true;
  for (double v : out.phases) {
    if (std::abs(v - out.common) > kUniformImpactTol) {
      out.uniform = false;
      out.common = 0.0;
      break;
    }
  }
  return out;
}

bool Protocol::has_delta() const {
  return std::any_of(pulses_.begin(), pulses_.end(),
                     [](const PulseShape& p) { return p.is_delta(); });
}

Protocol Protocol::smoothed(double width) const {
  std::vector<PulseShape> out;
  out.reserve(pulses_.size());
  for (const auto& p : pulses_) out.push_back(p.smoothed(width));
  return Protocol(std::move(out));
}

std::vector<double> Protocol::breakpoints() const {
  std::vector<double> out;
  for (const auto& p : pulses_) {
    auto b = p.breakpoints();
    out.insert(out.end(), b.begin(), b.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string Protocol::descriptor() const {
  if (pulses_.empty()) return "none";
  bool all_delta = std::all_of(pulses_.begin(), pulses_.end(),
                               [](const PulseShape& p) { return p.is_delta(); });
  if (all_delta) return "instantaneous";
  if (pulses_.size() == 1 && pulses_[0].kind() == PulseKind::Constant &&
      pulses_[0].start() == 0.0 && pulses_[0].amplitude() == 1.0) {
    return "continuous";
  }
  return "custom";
}

}  // namespace qnd
