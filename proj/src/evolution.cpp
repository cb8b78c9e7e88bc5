#include "qnd/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "qnd/errors.hpp"

namespace qnd {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

void validate_grid(const std::vector<double>& times) {
  if (times.empty()) {
    throw ValidationError("time grid must not be empty");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || times[i] < 0.0) {
      throw ValidationError("time grid entries must be finite and >= 0");
    }
    if (i > 0 && times[i] < times[i - 1]) {
      throw ValidationError("time grid must be nondecreasing");
    }
  }
}

void validate_indices(const CompositeModel& model, std::size_t m, std::size_t n,
                      std::size_t k) {
  if (m >= model.levels() || n >= model.levels() || k >= model.device_levels()) {
    throw ValidationError("index out of range: (m=" + std::to_string(m) +
                          ", n=" + std::to_string(n) + ", k=" +
                          std::to_string(k) + ") for model of shape (" +
                          std::to_string(model.levels()) + ", " +
                          std::to_string(model.device_levels()) + ")");
  }
}

Matrix reduced_at(const CompositeModel& model, double t) {
  const std::size_t n_count = model.levels();
  const std::size_t k_count = model.device_levels();
  const std::size_t m_count = model.acts();
  std::vector<double> impacts(m_count);
  for (std::size_t j = 0; j < m_count; ++j) {
    impacts[j] = model.protocol().phase_integral(j, t);
  }
  Matrix out(idx(n_count), idx(n_count));
  for (std::size_t m = 0; m < n_count; ++m) {
    for (std::size_t n = 0; n < n_count; ++n) {
      const double free_phase = model.transition_frequency(m, n) * t;
      cplx acc = 0.0;
      for (std::size_t k = 0; k < k_count; ++k) {
        double phase = free_phase;
        for (std::size_t j = 0; j < m_count; ++j) {
          phase += model.eigenvalue_gap(j, m, n, k) * impacts[j];
        }
        acc += model.rho0().element(m, n, k) * std::polar(1.0, -phase);
      }
      out(idx(m), idx(n)) = acc;
    }
  }
  return out;
}

}  // namespace

double SeriesDiagnostics::worst() const {
  return std::max({hermiticity, trace_error, diagonal_drift});
}

SeriesDiagnostics check_series_invariants(const ReducedDensitySeries& series) {
  SeriesDiagnostics diag;
  if (series.rho.empty()) return diag;
  const Matrix& first = series.rho.front();
  for (const Matrix& r : series.rho) {
    diag.hermiticity =
        std::max(diag.hermiticity, (r - r.adjoint()).cwiseAbs().maxCoeff());
    diag.trace_error =
        std::max(diag.trace_error, std::abs(r.trace() - cplx(1.0, 0.0)));
    diag.diagonal_drift = std::max(
        diag.diagonal_drift,
        (r.diagonal() - first.diagonal()).cwiseAbs().maxCoeff());
  }
  return diag;
}

cplx evolve_element(const CompositeModel& model, std::size_t m, std::size_t n,
                    std::size_t k, double t) {
  validate_indices(model, m, n, k);
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw ValidationError("time must be finite and >= 0");
  }
  double phase = model.transition_frequency(m, n) * t;
  for (std::size_t j = 0; j < model.acts(); ++j) {
    phase += model.eigenvalue_gap(j, m, n, k) *
             model.protocol().phase_integral(j, t);
  }
  return model.rho0().element(m, n, k) * std::polar(1.0, -phase);
}

ReducedDensitySeries reduced_density(const CompositeModel& model,
                                     const std::vector<double>& times,
                                     unsigned threads) {
  validate_grid(times);
  ReducedDensitySeries series;
  series.times = times;
  series.rho.resize(times.size());

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      series.rho[i] = reduced_at(model, times[i]);
    }
  };

  if (threads <= 1 || times.size() < 2) {
    work(0, times.size());
    return series;
  }
  unsigned worker_count =
      std::min<unsigned>(threads, static_cast<unsigned>(times.size()));
  std::vector<std::thread> workers;
  workers.reserve(worker_count);
  std::size_t chunk = (times.size() + worker_count - 1) / worker_count;
  for (unsigned w = 0; w < worker_count; ++w) {
    std::size_t begin = static_cast<std::size_t>(w) * chunk;
    std::size_t end = std::min(times.size(), begin + chunk);
    if (begin >= end) break;
    workers.emplace_back(work, begin, end);
  }
  for (auto& th : workers) th.join();
  return series;
}

ReducedDensitySeries oracle_evolve(const CompositeModel& model,
                                   const std::vector<double>& times, double dt,
                                   double smoothing_width) {
  validate_grid(times);
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ValidationError("oracle step size must be positive");
  }
  if (model.protocol().has_delta()) {
    if (!(smoothing_width > 0.0)) {
      throw ValidationError("smoothing width must be positive when kicks are present");
    }
    if (dt > smoothing_width / 10.0) {
      throw ValidationError("oracle step size must satisfy dt <= width/10 when "
                            "kicks are present");
    }
  }
  const Protocol pulses = model.protocol().smoothed(smoothing_width);

  const std::size_t n_count = model.levels();
  const std::size_t k_count = model.device_levels();
  const std::size_t m_count = model.acts();
  const Eigen::Index total = idx(n_count * k_count);

  // Device-off-diagonal entries of the composite state never reach the
  // reduced matrix under a diagonal propagator, so zeros stand in for the
  // unknown ones.
  Matrix state = Matrix::Zero(total, total);
  for (std::size_t m = 0; m < n_count; ++m) {
    for (std::size_t n = 0; n < n_count; ++n) {
      for (std::size_t k = 0; k < k_count; ++k) {
        state(idx(m * k_count + k), idx(n * k_count + k)) =
            model.rho0().element(m, n, k);
      }
    }
  }

  // Composite energies on the joint levels at one instant.
  std::vector<double> pulse_values(m_count);
  auto level_energy = [&](std::size_t n, std::size_t k) {
    double h = model.system().energies[n] + model.device().energies[k];
    for (std::size_t j = 0; j < m_count; ++j) {
      h += model.interaction().coupling(j)(idx(n), idx(k)) * pulse_values[j];
    }
    return h;
  };

  const std::vector<double> marks = pulses.breakpoints();
  Vector phases(total);

  auto advance = [&](double from, double to) {
    if (to <= from) return;
    // Split at pulse breakpoints so every substep sees one analytic piece.
    std::vector<double> cuts{from};
    for (double b : marks) {
      if (b > from && b < to) cuts.push_back(b);
    }
    cuts.push_back(to);
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      double a = cuts[c];
      double b = cuts[c + 1];
      auto steps = static_cast<std::size_t>(std::ceil((b - a) / dt));
      steps = std::max<std::size_t>(steps, 1);
      double h_step = (b - a) / static_cast<double>(steps);
      for (std::size_t s = 0; s < steps; ++s) {
        double mid = a + (static_cast<double>(s) + 0.5) * h_step;
        for (std::size_t j = 0; j < m_count; ++j) {
          pulse_values[j] = pulses.pulse(j).value(mid);
        }
        for (std::size_t n = 0; n < n_count; ++n) {
          for (std::size_t k = 0; k < k_count; ++k) {
            phases(idx(n * k_count + k)) =
                std::polar(1.0, -level_energy(n, k) * h_step);
          }
        }
        state = phases.asDiagonal() * state;
        state = state * phases.conjugate().asDiagonal();
      }
    }
  };

  ReducedDensitySeries series;
  series.times = times;
  series.rho.reserve(times.size());
  double current = 0.0;
  for (double t : times) {
    advance(current, t);
    current = std::max(current, t);
    Matrix reduced(idx(n_count), idx(n_count));
    for (std::size_t m = 0; m < n_count; ++m) {
      for (std::size_t n = 0; n < n_count; ++n) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < k_count; ++k) {
          acc += state(idx(m * k_count + k), idx(n * k_count + k));
        }
        reduced(idx(m), idx(n)) = acc;
      }
    }
    series.rho.push_back(std::move(reduced));
  }
  return series;
}

}  // namespace qnd
