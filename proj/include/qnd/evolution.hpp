#pragma once

#include <cstddef>
#include <vector>

#include "qnd/model.hpp"
#include "qnd/types.hpp"

namespace qnd {

// Reduced system density matrix sampled on a time grid.
struct ReducedDensitySeries {
  std::vector<double> times;
  std::vector<Matrix> rho;  // one N x N matrix per sample

  std::size_t samples() const { return times.size(); }
  std::size_t levels() const {
    return rho.empty() ? 0 : static_cast<std::size_t>(rho.front().rows());
  }
};

// Worst-case deviations from the series contract: Hermiticity, unit trace,
// and time-constant diagonal.
struct SeriesDiagnostics {
  double hermiticity = 0.0;
  double trace_error = 0.0;
  double diagonal_drift = 0.0;

  double worst() const;
};

SeriesDiagnostics check_series_invariants(const ReducedDensitySeries& series);

// Closed-form evolution of one device-diagonal element:
// rho_mnk(t) = rho_mnk(0) * exp(-i [omega_mn t + sum_j x_jmnk phi_j(t)]).
// The modulus is exactly |rho_mnk(0)|.
cplx evolve_element(const CompositeModel& model, std::size_t m, std::size_t n,
                    std::size_t k, double t);

// Device-summed closed form on a grid. Summation over k runs ascending so
// results are bit-reproducible regardless of the worker count.
ReducedDensitySeries reduced_density(const CompositeModel& model,
                                     const std::vector<double>& times,
                                     unsigned threads = 1);

// Independent verification path: steps the full composite density matrix
// with midpoint-sampled diagonal propagators and partial-traces the device.
// Shares only the spectra with the closed form, never its phase assembly.
// Delta kicks are replaced by unit-area triangular pulses of half-width
// smoothing_width; dt must be at most smoothing_width / 10 when kicks are
// present. Substeps snap to pulse breakpoints, so the midpoint rule is exact
// on every smooth piece.
ReducedDensitySeries oracle_evolve(const CompositeModel& model,
                                   const std::vector<double>& times, double dt,
                                   double smoothing_width);

}  // namespace qnd
