#include "qnd/decoherence.hpp"

#include <cmath>

#include "qnd/errors.hpp"

namespace qnd {

namespace {

constexpr double kCurveBoundSlack = 1e-12;

void validate_pair(std::size_t m, std::size_t n, std::size_t levels) {
  if (m >= levels || n >= levels) {
    throw ValidationError("pair (" + std::to_string(m) + ", " +
                          std::to_string(n) + ") out of range for " +
                          std::to_string(levels) + " levels");
  }
}

void check_curve_bound(const DecoherenceCurve& curve) {
  for (std::size_t i = 0; i < curve.values.size(); ++i) {
    if (std::abs(curve.values[i]) > 1.0 + kCurveBoundSlack) {
      throw InvariantViolation(
          "decoherence factor bound |D| <= 1 violated at t = " +
          std::to_string(curve.times[i]) + " (|D| = " +
          std::to_string(std::abs(curve.values[i])) +
          "); the pair's device slices mix signs, so the normalized effect "
          "density is not a probability distribution");
    }
  }
}

double uniform_phase_at(const Protocol& protocol, double t) {
  PhaseProfile profile = protocol.all_phases(t);
  if (!profile.uniform) {
    throw NonUniformImpact(t);
  }
  return profile.common;
}

}  // namespace

std::string family_name(DecoherenceFamily family) {
  switch (family) {
    case DecoherenceFamily::Empirical:
      return "empirical";
    case DecoherenceFamily::Gaussian:
      return "gaussian";
    case DecoherenceFamily::Lorentz:
      return "lorentz";
  }
  return "empirical";
}

EffectDensity EffectDensity::empirical(std::size_t m, std::size_t n,
                                       cplx weight,
                                       std::vector<EffectAtom> atoms) {
  if (atoms.empty()) {
    throw ValidationError("empirical effect density needs at least one atom");
  }
  cplx mass = 0.0;
  for (const EffectAtom& a : atoms) {
    if (!std::isfinite(a.position) || !std::isfinite(a.weight.real()) ||
        !std::isfinite(a.weight.imag())) {
      throw ValidationError("effect density atoms must be finite");
    }
    mass += a.weight;
  }
  if (std::abs(mass - cplx(1.0, 0.0)) > kStateTol) {
    throw ValidationError("effect density weights sum to " +
                          std::to_string(mass.real()) + " + " +
                          std::to_string(mass.imag()) + "i, expected 1");
  }
  EffectDensity d;
  d.m_ = m;
  d.n_ = n;
  d.weight_ = weight;
  d.family_ = DecoherenceFamily::Empirical;
  d.atoms_ = std::move(atoms);
  return d;
}

EffectDensity EffectDensity::parametric(std::size_t m, std::size_t n,
                                        cplx weight, DecoherenceFamily family,
                                        double scale) {
  if (family == DecoherenceFamily::Empirical) {
    throw ValidationError("parametric effect density needs a parametric family");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ValidationError("parametric effect density needs scale > 0");
  }
  EffectDensity d;
  d.m_ = m;
  d.n_ = n;
  d.weight_ = weight;
  d.family_ = family;
  d.scale_ = scale;
  return d;
}

double EffectDensity::scale() const {
  if (is_empirical()) {
    throw ValidationError("empirical effect density has no parametric scale");
  }
  return scale_;
}

const std::vector<EffectAtom>& EffectDensity::atoms() const {
  if (!is_empirical()) {
    throw ValidationError("parametric effect density has no atoms");
  }
  return atoms_;
}

EffectDensity effect_density_from_model(const CompositeModel& model,
                                        std::size_t m, std::size_t n) {
  validate_pair(m, n, model.levels());
  if (model.acts() == 0) {
    throw ValidationError("effect density needs at least one measurement act");
  }
  cplx weight = model.rho0().coherence(m, n);
  if (weight == cplx(0.0, 0.0)) {
    throw ZeroWeightError(m, n);
  }
  std::vector<EffectAtom> atoms;
  atoms.reserve(model.device_levels());
  for (std::size_t k = 0; k < model.device_levels(); ++k) {
    atoms.push_back({model.mean_gap(m, n, k),
                     model.rho0().element(m, n, k) / weight});
  }
  return EffectDensity::empirical(m, n, weight, std::move(atoms));
}

cplx decoherence_factor_exact(const EffectDensity& density, std::size_t acts,
                              double phase) {
  if (!density.is_empirical()) {
    throw ValidationError(
        "decoherence_factor_exact needs an empirical density; use the "
        "analytic forms for parametric families");
  }
  const double argument = static_cast<double>(acts) * phase;
  cplx acc = 0.0;
  for (const EffectAtom& a : density.atoms()) {
    acc += a.weight * std::polar(1.0, -a.position * argument);
  }
  return acc;
}

double decoherence_factor_gaussian(double sigma, std::size_t acts,
                                   double phase) {
  if (sigma < 0.0 || !std::isfinite(sigma)) {
    throw ValidationError("sigma must be nonnegative");
  }
  const double u = static_cast<double>(acts) * phase;
  return std::exp(-0.5 * sigma * sigma * u * u);
}

double decoherence_factor_lorentz(double sigma, std::size_t acts,
                                  double phase) {
  if (sigma < 0.0 || !std::isfinite(sigma)) {
    throw ValidationError("sigma must be nonnegative");
  }
  const double u = static_cast<double>(acts) * phase;
  return std::exp(-sigma * std::abs(u));
}

DecoherenceCurve decoherence_curve(const CompositeModel& model, std::size_t m,
                                   std::size_t n,
                                   const std::vector<double>& times) {
  validate_pair(m, n, model.levels());
  DecoherenceCurve curve;
  curve.m = m;
  curve.n = n;
  curve.times = times;
  curve.protocol_kind = model.protocol().descriptor();
  curve.values.reserve(times.size());
  if (model.acts() == 0) {
    curve.values.assign(times.size(), cplx(1.0, 0.0));
    return curve;
  }
  EffectDensity density = effect_density_from_model(model, m, n);
  for (double t : times) {
    double phi = uniform_phase_at(model.protocol(), t);
    curve.values.push_back(
        decoherence_factor_exact(density, model.acts(), phi));
  }
  check_curve_bound(curve);
  return curve;
}

DecoherenceCurve decoherence_curve(DecoherenceFamily family, double sigma,
                                   const Protocol& protocol, std::size_t m,
                                   std::size_t n,
                                   const std::vector<double>& times) {
  if (family == DecoherenceFamily::Empirical) {
    throw ValidationError(
        "the analytic curve needs a parametric family; build empirical curves "
        "from a model");
  }
  DecoherenceCurve curve;
  curve.m = m;
  curve.n = n;
  curve.times = times;
  curve.protocol_kind = protocol.descriptor();
  if (curve.protocol_kind == "continuous" && sigma > 0.0) {
    curve.decoherence_time = 1.0 / sigma;
  }
  curve.values.reserve(times.size());
  for (double t : times) {
    double phi = uniform_phase_at(protocol, t);
    double d = family == DecoherenceFamily::Gaussian
                   ? decoherence_factor_gaussian(sigma, protocol.size(), phi)
                   : decoherence_factor_lorentz(sigma, protocol.size(), phi);
    curve.values.emplace_back(d, 0.0);
  }
  check_curve_bound(curve);
  return curve;
}

std::vector<cplx> factorized_reduced_density(const CompositeModel& model,
                                             std::size_t m, std::size_t n,
                                             const std::vector<double>& times) {
  validate_pair(m, n, model.levels());
  std::vector<cplx> out;
  out.reserve(times.size());
  const cplx weight = model.rho0().coherence(m, n);
  if (weight == cplx(0.0, 0.0)) {
    out.assign(times.size(), cplx(0.0, 0.0));
    return out;
  }
  const double omega = model.transition_frequency(m, n);
  if (model.acts() == 0) {
    for (double t : times) {
      out.push_back(weight * std::polar(1.0, -omega * t));
    }
    return out;
  }
  EffectDensity density = effect_density_from_model(model, m, n);
  for (double t : times) {
    double phi = uniform_phase_at(model.protocol(), t);
    cplx factor = decoherence_factor_exact(density, model.acts(), phi);
    out.push_back(weight * std::polar(1.0, -omega * t) * factor);
  }
  return out;
}

EffectHistogram histogram(const EffectDensity& density, std::size_t bins) {
  if (bins == 0) {
    throw ValidationError("histogram needs at least one bin");
  }
  const std::vector<EffectAtom>& atoms = density.atoms();
  double lo = atoms.front().position;
  double hi = lo;
  for (const EffectAtom& a : atoms) {
    lo = std::min(lo, a.position);
    hi = std::max(hi, a.position);
  }
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  EffectHistogram out;
  out.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) {
    out.edges[b] = lo + (hi - lo) * static_cast<double>(b) /
                            static_cast<double>(bins);
  }
  out.masses.assign(bins, cplx(0.0, 0.0));
  const double width = (hi - lo) / static_cast<double>(bins);
  for (const EffectAtom& a : atoms) {
    auto b = static_cast<std::size_t>((a.position - lo) / width);
    if (b >= bins) b = bins - 1;  // atoms on the top edge
    out.masses[b] += a.weight;
  }
  return out;
}

}  // namespace qnd
