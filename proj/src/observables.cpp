#include "qnd/observables.hpp"

#include <cmath>

#include "qnd/errors.hpp"

namespace qnd {

namespace {

constexpr double kRealnessTol = 1e-10;

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

double require_real(cplx value, double t) {
  if (std::abs(value.imag()) > kRealnessTol) {
    throw InvariantViolation("expectation value has imaginary part " +
                             std::to_string(value.imag()) + " at t = " +
                             std::to_string(t));
  }
  return value.real();
}

}  // namespace

Observable::Observable(Matrix matrix, std::string label)
    : matrix_(std::move(matrix)), label_(std::move(label)) {
  if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
    throw ShapeError("observable must be a nonempty square matrix");
  }
  if (!matrix_.allFinite()) {
    throw ValidationError("observable has non-finite entries");
  }
  double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kStateTol) {
    throw ValidationError("observable '" + label_ +
                          "' is not Hermitian (max deviation " +
                          std::to_string(herm) + ")");
  }
}

double DecoherenceSpec::scale_for(std::size_t m, std::size_t n) const {
  auto it = sigma_overrides.find({m, n});
  if (it != sigma_overrides.end()) return it->second;
  it = sigma_overrides.find({n, m});
  if (it != sigma_overrides.end()) return it->second;
  return sigma;
}

ObservableSeries expectation_direct(const ReducedDensitySeries& series,
                                    const Observable& observable) {
  if (series.rho.empty()) {
    throw ValidationError("series must contain at least one sample");
  }
  const std::size_t levels = series.levels();
  if (observable.dimension() != levels) {
    throw ShapeError("observable dimension " +
                     std::to_string(observable.dimension()) +
                     " does not match series dimension " +
                     std::to_string(levels));
  }
  const Matrix& a = observable.matrix();
  ObservableSeries out;
  out.times = series.times;
  out.values.reserve(series.samples());
  out.diagonal_part.reserve(series.samples());
  out.coherent_part.reserve(series.samples());
  for (std::size_t i = 0; i < series.samples(); ++i) {
    const Matrix& rho = series.rho[i];
    cplx diag = 0.0;
    cplx coherent = 0.0;
    for (std::size_t m = 0; m < levels; ++m) {
      for (std::size_t n = 0; n < levels; ++n) {
        cplx term = rho(idx(m), idx(n)) * a(idx(n), idx(m));
        if (m == n) {
          diag += term;
        } else {
          coherent += term;
        }
      }
    }
    double t = series.times[i];
    out.diagonal_part.push_back(require_real(diag, t));
    out.coherent_part.push_back(require_real(coherent, t));
    out.values.push_back(out.diagonal_part.back() + out.coherent_part.back());
  }
  return out;
}

ObservableSeries expectation_factorized(const CompositeModel& model,
                                        const Observable& observable,
                                        const DecoherenceSpec& spec,
                                        const std::vector<double>& times) {
  const std::size_t levels = model.levels();
  if (observable.dimension() != levels) {
    throw ShapeError("observable dimension does not match model");
  }
  const Matrix& a = observable.matrix();
  const std::size_t acts = model.acts();

  double diag = 0.0;
  for (std::size_t n = 0; n < levels; ++n) {
    diag += model.rho0().population(n) * a(idx(n), idx(n)).real();
  }

  // Pair data reused across the grid. Pairs with zero coherence weight
  // contribute nothing and are skipped.
  struct PairTerm {
    std::size_t m;
    std::size_t n;
    cplx prefactor;  // rho_mn * A_nm
    double omega;
    double scale;                         // parametric sigma
    std::vector<EffectAtom> atoms;        // empirical atoms
  };
  std::vector<PairTerm> pairs;
  for (std::size_t m = 0; m < levels; ++m) {
    for (std::size_t n = 0; n < levels; ++n) {
      if (m == n) continue;
      cplx weight = model.rho0().coherence(m, n);
      cplx prefactor = weight * a(idx(n), idx(m));
      if (prefactor == cplx(0.0, 0.0)) continue;
      PairTerm term{m, n, prefactor, model.transition_frequency(m, n), 0.0, {}};
      if (spec.family == DecoherenceFamily::Empirical) {
        if (acts > 0) {
          term.atoms = effect_density_from_model(model, m, n).atoms();
        }
      } else {
        term.scale = spec.scale_for(m, n);
        if (term.scale < 0.0) {
          throw ValidationError("sigma must be nonnegative");
        }
      }
      pairs.push_back(std::move(term));
    }
  }

  ObservableSeries out;
  out.times = times;
  out.values.reserve(times.size());
  out.diagonal_part.reserve(times.size());
  out.coherent_part.reserve(times.size());
  for (double t : times) {
    PhaseProfile profile = model.protocol().all_phases(t);
    if (!profile.uniform) {
      throw NonUniformImpact(t);
    }
    const double argument = static_cast<double>(acts) * profile.common;
    cplx coherent = 0.0;
    for (const PairTerm& term : pairs) {
      cplx factor;
      switch (spec.family) {
        case DecoherenceFamily::Empirical: {
          if (acts == 0) {
            factor = 1.0;
          } else {
            cplx acc = 0.0;
            for (const EffectAtom& atom : term.atoms) {
              acc += atom.weight * std::polar(1.0, -atom.position * argument);
            }
            factor = acc;
          }
          break;
        }
        case DecoherenceFamily::Gaussian:
          factor = decoherence_factor_gaussian(term.scale, acts, profile.common);
          break;
        case DecoherenceFamily::Lorentz:
          factor = decoherence_factor_lorentz(term.scale, acts, profile.common);
          break;
      }
      coherent += term.prefactor * std::polar(1.0, -term.omega * t) * factor;
    }
    out.diagonal_part.push_back(diag);
    out.coherent_part.push_back(require_real(coherent, t));
    out.values.push_back(diag + out.coherent_part.back());
  }
  return out;
}

double diagonal_ensemble(const CompositeModel& model,
                         const Observable& observable) {
  if (observable.dimension() != model.levels()) {
    throw ShapeError("observable dimension does not match model");
  }
  double acc = 0.0;
  for (std::size_t n = 0; n < model.levels(); ++n) {
    acc += model.rho0().population(n) *
           observable.matrix()(idx(n), idx(n)).real();
  }
  return acc;
}

}  // namespace qnd
