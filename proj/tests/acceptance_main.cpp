// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Every tolerance is pinned here, in code.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "qnd/decoherence.hpp"
#include "qnd/errors.hpp"
#include "qnd/evolution.hpp"
#include "qnd/model.hpp"
#include "qnd/observables.hpp"
#include "qnd/random.hpp"

using namespace qnd;

namespace {

std::vector<double> linspace(double a, double b, std::size_t count) {
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(count == 1 ? a
                             : a + (b - a) * static_cast<double>(i) /
                                       static_cast<double>(count - 1));
  }
  return out;
}

Matrix plus_state() {
  Matrix m(2, 2);
  m << 0.5, 0.5, 0.5, 0.5;
  return m;
}

CompositeModel make_model(std::vector<double> system_energies,
                          std::vector<double> device_energies,
                          std::vector<RealMatrix> coupling, Protocol protocol,
                          RhoInitial rho) {
  return build_from_spectral(
      SystemSpec{std::move(system_energies), {}},
      DeviceSpec{std::move(device_energies)},
      InteractionSpec(std::move(coupling), std::move(protocol)),
      std::move(rho));
}

// Two-level model whose (0,1) gap atoms are exactly `gaps` with uniform
// device weights, replicated across all acts of the protocol.
CompositeModel pair_model(const std::vector<double>& gaps, Protocol protocol,
                          double omega = 0.0) {
  const std::size_t device = gaps.size();
  RealMatrix sheet(2, static_cast<Eigen::Index>(device));
  for (std::size_t k = 0; k < device; ++k) {
    sheet(0, static_cast<Eigen::Index>(k)) = 0.5 * gaps[k];
    sheet(1, static_cast<Eigen::Index>(k)) = -0.5 * gaps[k];
  }
  std::vector<RealMatrix> coupling(protocol.size(), sheet);
  std::vector<Matrix> slices(device,
                             plus_state() / static_cast<double>(device));
  return make_model({omega, 0.0}, std::vector<double>(device, 0.0),
                    std::move(coupling), std::move(protocol),
                    rho_from_direct(slices));
}

Matrix random_density(SeededSampler& sampler, Eigen::Index dim) {
  Matrix g(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      g(r, c) = cplx(sampler.normal(), sampler.normal());
    }
  }
  Matrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

Matrix random_hermitian(SeededSampler& sampler, Eigen::Index dim) {
  Matrix g(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      g(r, c) = cplx(sampler.normal(), sampler.normal());
    }
  }
  return 0.5 * (g + g.adjoint());
}

CompositeModel random_model(SeededSampler& sampler, std::size_t levels,
                            std::size_t device, Protocol protocol) {
  std::vector<double> system_energies;
  double e = sampler.uniform_in(-0.5, 0.5);
  for (std::size_t n = 0; n < levels; ++n) {
    system_energies.push_back(e);
    e += sampler.uniform_in(0.3, 1.2);
  }
  std::vector<double> device_energies;
  for (std::size_t k = 0; k < device; ++k) {
    device_energies.push_back(sampler.uniform_in(-1.0, 1.0));
  }
  std::vector<RealMatrix> coupling;
  for (std::size_t j = 0; j < protocol.size(); ++j) {
    RealMatrix sheet(levels, device);
    for (Eigen::Index n = 0; n < sheet.rows(); ++n) {
      for (Eigen::Index k = 0; k < sheet.cols(); ++k) {
        sheet(n, k) = sampler.uniform_in(-1.5, 1.5);
      }
    }
    coupling.push_back(sheet);
  }
  Matrix rho_a = random_density(sampler, static_cast<Eigen::Index>(levels));
  Matrix rho_b = random_density(sampler, static_cast<Eigen::Index>(device));
  return make_model(std::move(system_energies), std::move(device_energies),
                    std::move(coupling), std::move(protocol),
                    rho_from_product(rho_a, rho_b));
}

struct Criterion {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      detail = why;
    }
  }
  void note(const std::string& text) {
    if (pass) detail = text;
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// ---------------------------------------------------------------------------

Criterion criterion_1_gaussian_plateau() {
  Criterion c;
  const double plateau = std::exp(-2.0);  // sigma^2 M^2 / 2 with sigma=1, M=2
  Protocol kicks({PulseShape::delta(1.0), PulseShape::delta(2.0)});
  std::vector<double> grid = linspace(2.05, 6.0, 40);

  DecoherenceCurve analytic =
      decoherence_curve(DecoherenceFamily::Gaussian, 1.0, kicks, 0, 1, grid);
  double analytic_delta = 0.0;
  for (const cplx& v : analytic.values) {
    analytic_delta = std::max(analytic_delta, std::abs(v - cplx(plateau, 0.0)));
  }
  c.require(analytic_delta < 1e-12,
            "analytic plateau off by " + fmt(analytic_delta));

  SeededSampler sampler(1001);
  std::vector<double> gaps(10000);
  for (double& g : gaps) g = sampler.normal(1.0);
  CompositeModel model = pair_model(gaps, kicks);
  DecoherenceCurve empirical = decoherence_curve(model, 0, 1, grid);
  double empirical_delta = 0.0;
  for (const cplx& v : empirical.values) {
    empirical_delta =
        std::max(empirical_delta, std::abs(v - cplx(plateau, 0.0)));
  }
  c.require(empirical_delta < 0.05,
            "empirical plateau off by " + fmt(empirical_delta));
  c.note("analytic " + fmt(analytic_delta) + ", empirical " +
         fmt(empirical_delta));
  return c;
}

Criterion criterion_2_lorentz_plateau() {
  Criterion c;
  const double plateau = std::exp(-3.0);  // sigma M with sigma=1, M=3
  Protocol kicks({PulseShape::delta(1.0), PulseShape::delta(1.5),
                  PulseShape::delta(2.0)});
  std::vector<double> grid = linspace(2.05, 6.0, 40);

  DecoherenceCurve analytic =
      decoherence_curve(DecoherenceFamily::Lorentz, 1.0, kicks, 0, 1, grid);
  double analytic_delta = 0.0;
  for (const cplx& v : analytic.values) {
    analytic_delta = std::max(analytic_delta, std::abs(v - cplx(plateau, 0.0)));
  }
  c.require(analytic_delta < 1e-12,
            "analytic plateau off by " + fmt(analytic_delta));

  SeededSampler sampler(1002);
  std::vector<double> gaps(10000);
  for (double& g : gaps) g = sampler.cauchy(1.0);
  CompositeModel model = pair_model(gaps, kicks);
  DecoherenceCurve empirical = decoherence_curve(model, 0, 1, grid);
  double empirical_delta = 0.0;
  for (const cplx& v : empirical.values) {
    empirical_delta =
        std::max(empirical_delta, std::abs(v - cplx(plateau, 0.0)));
  }
  c.require(empirical_delta < 0.05,
            "empirical plateau off by " + fmt(empirical_delta));
  c.note("analytic " + fmt(analytic_delta) + ", empirical " +
         fmt(empirical_delta));
  return c;
}

Criterion criterion_3_decoherence_time() {
  Criterion c;
  const double sigma = 0.5;
  const double t_dec = 1.0 / sigma;  // 2
  Protocol continuous({PulseShape::constant(0.0, 12.0, 1.0)});
  std::vector<double> grid = linspace(0.0, 10.0, 201);  // step 0.05
  const double step = grid[1] - grid[0];

  DecoherenceCurve lorentz = decoherence_curve(DecoherenceFamily::Lorentz,
                                               sigma, continuous, 0, 1, grid);
  double crossing = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::abs(lorentz.values[i]) < std::exp(-1.0)) {
      crossing = grid[i];
      break;
    }
  }
  c.require(crossing >= 0.0, "Lorentz curve never crossed 1/e");
  c.require(std::abs(crossing - t_dec) <= step + 1e-12,
            "crossing at " + fmt(crossing) + " vs t_dec " + fmt(t_dec));
  c.require(lorentz.decoherence_time.has_value() &&
                std::abs(*lorentz.decoherence_time - t_dec) < 1e-12,
            "reported decoherence time wrong");

  DecoherenceCurve gaussian = decoherence_curve(DecoherenceFamily::Gaussian,
                                                sigma, continuous, 0, 1, grid);
  double at_tdec = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] == t_dec) at_tdec = gaussian.values[i].real();
  }
  c.require(std::abs(at_tdec - std::exp(-0.5)) < 1e-12,
            "Gaussian D(t_dec) = " + fmt(at_tdec));
  c.note("crossing " + fmt(crossing) + ", D_G(t_dec) - e^-1/2 = " +
         fmt(at_tdec - std::exp(-0.5)));
  return c;
}

Criterion criterion_4_equilibration() {
  Criterion c;
  SeededSampler sampler(4004);
  CompositeModel model =
      random_model(sampler, 4, 6, Protocol({PulseShape::constant(0.0, 12.0, 1.0)}));
  Observable obs(random_hermitian(sampler, 4), "A");
  DecoherenceSpec spec{DecoherenceFamily::Gaussian, 1.0, {}};
  std::vector<double> grid = linspace(0.0, 10.0, 101);
  ObservableSeries values = expectation_factorized(model, obs, spec, grid);
  const double limit = diagonal_ensemble(model, obs);
  const double scale = obs.matrix().cwiseAbs().maxCoeff();

  double final_delta = std::abs(values.values.back() - limit);
  c.require(final_delta < 1e-3 * scale,
            "final deviation " + fmt(final_delta) + " vs " + fmt(1e-3 * scale));

  double coherence_mass = 0.0;
  for (std::size_t m = 0; m < 4; ++m) {
    for (std::size_t n = 0; n < 4; ++n) {
      if (m == n) continue;
      coherence_mass +=
          std::abs(model.rho0().coherence(m, n)) *
          std::abs(obs.matrix()(static_cast<Eigen::Index>(n),
                                static_cast<Eigen::Index>(m)));
    }
  }
  double previous_bound = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double bound =
        coherence_mass * decoherence_factor_gaussian(1.0, 1, grid[i]);
    if (grid[i] < 5.0) continue;
    c.require(std::abs(values.values[i] - limit) <= bound + 1e-12,
              "deviation exceeds the decoherence bound at t = " + fmt(grid[i]));
    if (previous_bound >= 0.0) {
      c.require(bound <= previous_bound + 1e-15,
                "bound not monotone at t = " + fmt(grid[i]));
    }
    previous_bound = bound;
  }
  c.note("final deviation " + fmt(final_delta) + " (allowed " +
         fmt(1e-3 * scale) + ")");
  return c;
}

Criterion criterion_5_oracle_equivalence() {
  Criterion c;
  SeededSampler sampler(5005);
  const double width = 1e-2;
  const double dt = 1e-3;
  double worst_kicked = 0.0;
  double worst_free = 0.0;

  for (int rep = 0; rep < 5; ++rep) {
    std::size_t levels = 2 + static_cast<std::size_t>(sampler.uniform_int(0, 2));
    std::size_t device = 2 + static_cast<std::size_t>(sampler.uniform_int(0, 4));
    int acts = sampler.uniform_int(1, 3);
    std::vector<PulseShape> pulses;
    for (int j = 0; j < acts; ++j) {
      pulses.push_back(PulseShape::delta(sampler.uniform_in(0.5, 2.5)));
    }
    CompositeModel model = random_model(sampler, levels, device, Protocol(pulses));
    std::vector<double> grid = linspace(0.0, 3.0, 61);
    ReducedDensitySeries closed = reduced_density(model, grid);
    ReducedDensitySeries stepped = oracle_evolve(model, grid, dt, width);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      bool in_window = false;
      for (const PulseShape& p : model.protocol().pulses()) {
        if (grid[i] >= p.kick_time() - 3.0 * width &&
            grid[i] <= p.kick_time() + 3.0 * width) {
          in_window = true;
        }
      }
      if (in_window) continue;
      worst_kicked = std::max(
          worst_kicked, (closed.rho[i] - stepped.rho[i]).cwiseAbs().maxCoeff());
    }
  }
  c.require(worst_kicked < 1e-6, "kicked delta " + fmt(worst_kicked));

  for (int rep = 0; rep < 2; ++rep) {
    CompositeModel model = random_model(sampler, 3, 4, Protocol{});
    std::vector<double> grid = linspace(0.0, 3.0, 31);
    ReducedDensitySeries closed = reduced_density(model, grid);
    ReducedDensitySeries stepped = oracle_evolve(model, grid, dt, width);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      worst_free = std::max(
          worst_free, (closed.rho[i] - stepped.rho[i]).cwiseAbs().maxCoeff());
    }
  }
  c.require(worst_free < 1e-12, "measurement-free delta " + fmt(worst_free));
  c.note("kicked " + fmt(worst_kicked) + ", free " + fmt(worst_free));
  return c;
}

Criterion criterion_6_factorization_consistency() {
  Criterion c;
  SeededSampler sampler(6006);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    bool continuous = rep % 2 == 0;
    Protocol protocol =
        continuous
            ? Protocol({PulseShape::constant(0.0, 8.0, 1.0)})
            : Protocol({PulseShape::delta(sampler.uniform_in(0.2, 0.6)),
                        PulseShape::delta(sampler.uniform_in(0.7, 1.0))});
    std::size_t levels = 2 + static_cast<std::size_t>(sampler.uniform_int(0, 1));
    std::size_t device = 2 + static_cast<std::size_t>(sampler.uniform_int(0, 2));
    CompositeModel model = random_model(sampler, levels, device, protocol);
    // sample where the impacts are uniform: anywhere for the continuous
    // protocol, past the last kick otherwise
    std::vector<double> grid = continuous ? linspace(0.0, 6.0, 11)
                                          : linspace(1.0, 6.0, 11);
    ReducedDensitySeries direct = reduced_density(model, grid);
    for (std::size_t m = 0; m < levels; ++m) {
      for (std::size_t n = 0; n < levels; ++n) {
        std::vector<cplx> factorized =
            factorized_reduced_density(model, m, n, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
          worst = std::max(worst,
                           std::abs(factorized[i] -
                                    direct.rho[i](static_cast<Eigen::Index>(m),
                                                  static_cast<Eigen::Index>(n))));
        }
      }
    }
  }
  c.require(worst < 1e-12, "max pipeline disagreement " + fmt(worst));
  c.note("max disagreement " + fmt(worst) + " over 100 models");
  return c;
}

Criterion criterion_7_invariant_suite() {
  Criterion c;
  SeededSampler beta_sampler(7007);

  struct Case {
    CompositeModel model;
    std::vector<double> curve_grid;  // uniform-impact samples incl. t = 0
  };
  std::vector<Case> cases;

  {  // criterion 1 scenario (empirical atoms, two kicks)
    SeededSampler sampler(1001);
    std::vector<double> gaps(10000);
    for (double& g : gaps) g = sampler.normal(1.0);
    Protocol kicks({PulseShape::delta(1.0), PulseShape::delta(2.0)});
    std::vector<double> grid = linspace(2.05, 6.0, 20);
    grid.insert(grid.begin(), {0.0, 0.5});
    cases.push_back({pair_model(gaps, kicks, 1.0), grid});
  }
  {  // criterion 3 scenario (continuous measurement, a few atoms)
    std::vector<double> gaps{0.9, -0.4, 1.3, -1.1};
    Protocol continuous({PulseShape::constant(0.0, 12.0, 1.0)});
    cases.push_back({pair_model(gaps, continuous, 0.7), linspace(0.0, 10.0, 41)});
  }
  {  // criterion 4 scenario (random 4x6 model, continuous)
    SeededSampler sampler(4004);
    cases.push_back(
        {random_model(sampler, 4, 6, Protocol({PulseShape::constant(0.0, 12.0, 1.0)})),
         linspace(0.0, 10.0, 41)});
  }

  double worst_series = 0.0;
  double worst_bound = 0.0;
  double worst_origin = 0.0;
  double worst_conjugate = 0.0;
  double worst_beta = 0.0;

  for (const Case& item : cases) {
    ReducedDensitySeries series = reduced_density(item.model, item.curve_grid);
    worst_series =
        std::max(worst_series, check_series_invariants(series).worst());

    std::vector<double> randomized;
    for (std::size_t k = 0; k < item.model.device_levels(); ++k) {
      randomized.push_back(beta_sampler.uniform_in(-5.0, 5.0));
    }
    ReducedDensitySeries shifted = reduced_density(
        item.model.with_device_energies(randomized), item.curve_grid);
    for (std::size_t i = 0; i < series.samples(); ++i) {
      worst_beta = std::max(
          worst_beta, (series.rho[i] - shifted.rho[i]).cwiseAbs().maxCoeff());
    }

    for (std::size_t m = 0; m < item.model.levels(); ++m) {
      for (std::size_t n = m + 1; n < item.model.levels(); ++n) {
        if (item.model.rho0().coherence(m, n) == cplx(0.0, 0.0)) continue;
        DecoherenceCurve forward =
            decoherence_curve(item.model, m, n, item.curve_grid);
        DecoherenceCurve backward =
            decoherence_curve(item.model, n, m, item.curve_grid);
        for (std::size_t i = 0; i < forward.values.size(); ++i) {
          worst_bound =
              std::max(worst_bound, std::abs(forward.values[i]) - 1.0);
          worst_conjugate = std::max(
              worst_conjugate,
              std::abs(backward.values[i] - std::conj(forward.values[i])));
          if (item.curve_grid[i] == 0.0) {
            worst_origin = std::max(
                worst_origin, std::abs(forward.values[i] - cplx(1.0, 0.0)));
          }
        }
      }
    }
  }

  c.require(worst_series < 1e-12, "series invariants " + fmt(worst_series));
  c.require(worst_bound < 1e-12, "|D| bound excess " + fmt(worst_bound));
  c.require(worst_origin < 1e-12, "D(0) deviation " + fmt(worst_origin));
  c.require(worst_conjugate < 1e-12,
            "conjugate symmetry " + fmt(worst_conjugate));
  c.require(worst_beta < 1e-12, "device-energy dependence " + fmt(worst_beta));
  c.note("series " + fmt(worst_series) + ", beta " + fmt(worst_beta) +
         ", conj " + fmt(worst_conjugate));
  return c;
}

Criterion criterion_8_convergence() {
  Criterion c;
  const std::vector<double> phis = linspace(0.0, 3.0, 61);
  for (DecoherenceFamily family :
       {DecoherenceFamily::Gaussian, DecoherenceFamily::Lorentz}) {
    double sup_small = 0.0;
    double sup_large = 0.0;
    for (std::size_t count : {std::size_t{100}, std::size_t{10000}}) {
      SeededSampler sampler(8008);
      std::vector<double> gaps(count);
      for (double& g : gaps) {
        g = family == DecoherenceFamily::Gaussian ? sampler.normal(1.0)
                                                  : sampler.cauchy(1.0);
      }
      CompositeModel model =
          pair_model(gaps, Protocol({PulseShape::delta(1.0)}));
      EffectDensity density = effect_density_from_model(model, 0, 1);
      double sup = 0.0;
      for (double phi : phis) {
        cplx exact = decoherence_factor_exact(density, 1, phi);
        double analytic = family == DecoherenceFamily::Gaussian
                              ? decoherence_factor_gaussian(1.0, 1, phi)
                              : decoherence_factor_lorentz(1.0, 1, phi);
        sup = std::max(sup, std::abs(exact - cplx(analytic, 0.0)));
      }
      (count == 100 ? sup_small : sup_large) = sup;
    }
    double ratio = sup_small / sup_large;
    c.require(ratio >= 5.0, family_name(family) + " shrink factor " + fmt(ratio));
    c.note(c.detail.empty()
               ? family_name(family) + " ratio " + fmt(ratio)
               : c.detail + ", " + family_name(family) + " ratio " + fmt(ratio));
  }
  return c;
}

Criterion criterion_9_matrix_validation() {
  Criterion c;
  Matrix sz(2, 2);
  sz << 1.0, 0.0, 0.0, -1.0;
  Matrix sx(2, 2);
  sx << 0.0, 1.0, 1.0, 0.0;

  {  // commuting triple
    Matrix x = Matrix::Zero(4, 4);
    x.diagonal() << 1.0, -1.0, -1.0, 1.0;  // sigma_z x sigma_z
    MatrixModelInput input;
    input.levels = 2;
    input.device_levels = 2;
    input.system_h = sz;
    input.device_h = sz;
    input.couplings = {x};
    CommutatorCheck check = check_commuting_family(input);
    c.require(check.all_pass && check.worst_relative < 1e-10,
              "commuting triple residual " + fmt(check.worst_relative));
    SpectralDecomposition spectral = joint_diagonalize(input);
    std::vector<double> system_sorted = spectral.system_energies;
    std::sort(system_sorted.begin(), system_sorted.end());
    c.require(std::abs(system_sorted[0] + 1.0) < 1e-9 &&
                  std::abs(system_sorted[1] - 1.0) < 1e-9,
              "recovered system spectrum wrong");
  }

  {  // random spectral-constructed family, spectra recovered as multisets
    SeededSampler sampler(9009);
    std::vector<double> system_energies{1.3, -0.7, 0.4};
    std::vector<double> device_energies{0.9, -1.6};
    RealMatrix sheet(3, 2);
    for (Eigen::Index n = 0; n < 3; ++n) {
      for (Eigen::Index k = 0; k < 2; ++k) {
        sheet(n, k) = sampler.uniform_in(-2.0, 2.0);
      }
    }
    Matrix ha = Matrix::Zero(3, 3);
    for (int n = 0; n < 3; ++n) ha(n, n) = system_energies[n];
    Matrix hb = Matrix::Zero(2, 2);
    for (int k = 0; k < 2; ++k) hb(k, k) = device_energies[k];
    Matrix x = Matrix::Zero(6, 6);
    for (int n = 0; n < 3; ++n) {
      for (int k = 0; k < 2; ++k) {
        x(n * 2 + k, n * 2 + k) = sheet(n, k);
      }
    }
    MatrixModelInput input;
    input.levels = 3;
    input.device_levels = 2;
    input.system_h = ha;
    input.device_h = hb;
    input.couplings = {x};
    CommutatorCheck check = check_commuting_family(input);
    c.require(check.all_pass && check.worst_relative < 1e-10,
              "constructed family residual " + fmt(check.worst_relative));
    SpectralDecomposition spectral = joint_diagonalize(input);
    std::vector<double> got = spectral.system_energies;
    std::vector<double> want = system_energies;
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    for (std::size_t n = 0; n < want.size(); ++n) {
      c.require(std::abs(got[n] - want[n]) < 1e-9,
                "system multiset mismatch at position " + std::to_string(n));
    }
    std::vector<double> got_b = spectral.device_energies;
    std::vector<double> want_b = device_energies;
    std::sort(got_b.begin(), got_b.end());
    std::sort(want_b.begin(), want_b.end());
    for (std::size_t k = 0; k < want_b.size(); ++k) {
      c.require(std::abs(got_b[k] - want_b[k]) < 1e-9,
                "device multiset mismatch at position " + std::to_string(k));
    }
  }

  {  // sigma_z / sigma_x rejection with the hand residual
    MatrixModelInput input;
    input.levels = 2;
    input.device_levels = 1;
    input.system_h = sz;
    input.device_h = Matrix::Zero(1, 1);
    input.couplings = {sx};
    bool rejected = false;
    double reported = 0.0;
    try {
      joint_diagonalize(input);
    } catch (const CommutatorViolation& e) {
      rejected = true;
      reported = e.absolute();
    }
    c.require(rejected, "noncommuting pair was not rejected");
    c.require(std::abs(reported - 2.0 * std::sqrt(2.0)) <= 1e-12,
              "reported residual " + fmt(reported));
    c.note("triple accepted, pair rejected with residual " + fmt(reported));
  }
  return c;
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    std::function<Criterion()> run;
  };
  const std::vector<Entry> criteria{
      {"1 instantaneous Gaussian plateau", criterion_1_gaussian_plateau},
      {"2 instantaneous Lorentz plateau", criterion_2_lorentz_plateau},
      {"3 continuous decoherence time", criterion_3_decoherence_time},
      {"4 complete decoherence and equilibration", criterion_4_equilibration},
      {"5 oracle equivalence", criterion_5_oracle_equivalence},
      {"6 factorization consistency", criterion_6_factorization_consistency},
      {"7 invariant suite", criterion_7_invariant_suite},
      {"8 empirical-to-analytic convergence", criterion_8_convergence},
      {"9 matrix-mode validation", criterion_9_matrix_validation},
  };

  int failures = 0;
  for (const Entry& entry : criteria) {
    Criterion result;
    try {
      result = entry.run();
    } catch (const std::exception& e) {
      result.pass = false;
      result.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %s: %s\n", result.pass ? "PASS" : "FAIL",
                entry.name, result.detail.c_str());
    if (!result.pass) ++failures;
  }
  if (failures == 0) {
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
  } else {
    std::printf("%d acceptance criteria FAILED\n", failures);
  }
  return failures;
}
