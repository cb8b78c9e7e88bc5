#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qnd/model.hpp"
#include "qnd/protocol.hpp"
#include "qnd/types.hpp"

namespace qnd {

enum class DecoherenceFamily { Empirical, Gaussian, Lorentz };

std::string family_name(DecoherenceFamily family);

// One point mass of an empirical effect density: a mean eigenvalue gap with
// its (generally complex) normalized weight.
struct EffectAtom {
  double position = 0.0;
  cplx weight{0.0, 0.0};
};

// Distribution of coupling-eigenvalue gaps that drives the dephasing of one
// coherence pair, together with its overall weight rho_mn. Either an exact
// collection of weighted atoms, or a parametric Gaussian/Lorentz law.
class EffectDensity {
 public:
  static EffectDensity empirical(std::size_t m, std::size_t n, cplx weight,
                                 std::vector<EffectAtom> atoms);
  static EffectDensity parametric(std::size_t m, std::size_t n, cplx weight,
                                  DecoherenceFamily family, double scale);

  bool is_empirical() const { return family_ == DecoherenceFamily::Empirical; }
  DecoherenceFamily family() const { return family_; }
  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }
  cplx weight() const { return weight_; }
  double scale() const;
  const std::vector<EffectAtom>& atoms() const;

 private:
  EffectDensity() = default;

  std::size_t m_ = 0;
  std::size_t n_ = 0;
  cplx weight_{0.0, 0.0};
  DecoherenceFamily family_ = DecoherenceFamily::Empirical;
  double scale_ = 0.0;
  std::vector<EffectAtom> atoms_;
};

// Atoms at the per-device-level mean gaps, weighted by the normalized initial
// slices. Throws ZeroWeightError when the pair carries no coherence.
EffectDensity effect_density_from_model(const CompositeModel& model,
                                        std::size_t m, std::size_t n);

// Characteristic function of an empirical density at argument acts * phase:
// sum_k w_k exp(-i x_k M phi). Summation runs in stored atom order.
cplx decoherence_factor_exact(const EffectDensity& density, std::size_t acts,
                              double phase);

// exp(-(sigma^2 / 2) M^2 phi^2)
double decoherence_factor_gaussian(double sigma, std::size_t acts, double phase);

// exp(-sigma M |phi|); the modulus guards signed inputs, and coincides with
// the unsigned convention for the nonnegative pulses supported here.
double decoherence_factor_lorentz(double sigma, std::size_t acts, double phase);

struct DecoherenceCurve {
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<double> times;
  std::vector<cplx> values;
  std::string protocol_kind;  // instantaneous | continuous | custom | none
  std::optional<double> decoherence_time;  // 1/sigma, parametric continuous
};

// Exact curve from the model's own atoms. Requires the uniform-impact
// condition at every sampled time (NonUniformImpact otherwise).
DecoherenceCurve decoherence_curve(const CompositeModel& model, std::size_t m,
                                   std::size_t n,
                                   const std::vector<double>& times);

// Analytic curve for a parametric family under the given protocol.
DecoherenceCurve decoherence_curve(DecoherenceFamily family, double sigma,
                                   const Protocol& protocol, std::size_t m,
                                   std::size_t n,
                                   const std::vector<double>& times);

// rho_mn exp(-i omega_mn t) D_mn(t) with the exact empirical factor; equal to
// the direct device sum wherever the uniform-impact condition holds. Pairs
// with zero coherence weight yield identically zero.
std::vector<cplx> factorized_reduced_density(const CompositeModel& model,
                                             std::size_t m, std::size_t n,
                                             const std::vector<double>& times);

// Binned view of an empirical density for plot emission only; every
// computation path keeps the exact weighted atoms.
struct EffectHistogram {
  std::vector<double> edges;  // bins + 1 ascending edges
  std::vector<cplx> masses;   // normalized weight per bin, summing to 1
};

EffectHistogram histogram(const EffectDensity& density, std::size_t bins);

}  // namespace qnd
