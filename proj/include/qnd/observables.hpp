#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qnd/decoherence.hpp"
#include "qnd/evolution.hpp"
#include "qnd/model.hpp"
#include "qnd/types.hpp"

namespace qnd {

// A Hermitian system observable with a display label.
class Observable {
 public:
  explicit Observable(Matrix matrix, std::string label = "");

  const Matrix& matrix() const { return matrix_; }
  const std::string& label() const { return label_; }
  std::size_t dimension() const {
    return static_cast<std::size_t>(matrix_.rows());
  }

 private:
  Matrix matrix_;
  std::string label_;
};

// Expectation values split into the time-constant diagonal part and the
// dephasing coherent part.
struct ObservableSeries {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> diagonal_part;
  std::vector<double> coherent_part;
};

// How the decoherence factors entering the factorized expectation are
// obtained: from the model's own atoms, or from a parametric law with an
// optional per-pair scale.
struct DecoherenceSpec {
  DecoherenceFamily family = DecoherenceFamily::Empirical;
  double sigma = 0.0;
  std::map<std::pair<std::size_t, std::size_t>, double> sigma_overrides;

  double scale_for(std::size_t m, std::size_t n) const;
};

// <A(t)> = sum_mn rho^A_mn(t) A_nm evaluated on a computed series, with the
// m = n and m != n terms reported separately.
ObservableSeries expectation_direct(const ReducedDensitySeries& series,
                                    const Observable& observable);

// Factorized form: sum_n rho_nn A_nn + sum_{m != n} rho_mn(t) A_nm D_mn(t).
// Valid only under the uniform-impact condition.
ObservableSeries expectation_factorized(const CompositeModel& model,
                                        const Observable& observable,
                                        const DecoherenceSpec& spec,
                                        const std::vector<double>& times);

// Protocol-independent long-time limit sum_n rho_nn A_nn.
double diagonal_ensemble(const CompositeModel& model,
                         const Observable& observable);

}  // namespace qnd
