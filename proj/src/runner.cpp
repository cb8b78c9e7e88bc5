#include "qnd/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "qnd/decoherence.hpp"
#include "qnd/errors.hpp"
#include "qnd/evolution.hpp"
#include "qnd/io.hpp"
#include "qnd/observables.hpp"
#include "qnd/scenario.hpp"

namespace qnd {

namespace fs = std::filesystem;

namespace {

constexpr double kSeriesInvariantTol = 1e-12;
constexpr double kFactorizedTol = 1e-12;
constexpr std::size_t kOracleSizeGuard = 64;

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

int emit_error(const char* code, const std::string& message, int exit_code) {
  nlohmann::json err{{"error", {{"code", code}, {"message", message}}}};
  std::cerr << err.dump() << '\n';
  return exit_code;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    return emit_error("parse", e.what(), 2);
  } catch (const NonUniformImpact& e) {
    return emit_error("non_uniform_impact", e.what(), 2);
  } catch (const InvariantViolation& e) {
    return emit_error("invariant", e.what(), 1);
  } catch (const ValidationError& e) {
    return emit_error("validation", e.what(), 2);
  } catch (const std::exception& e) {
    return emit_error("internal", e.what(), 2);
  }
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

std::string sanitize_label(const std::string& label, std::size_t fallback) {
  std::string out;
  for (char c : label) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') {
      out += c;
    } else {
      out += '_';
    }
  }
  if (out.empty()) out = "observable_" + std::to_string(fallback);
  return out;
}

OutputSpec resolve_output(const Scenario& scenario, const RunOptions& options) {
  OutputSpec out = scenario.output;
  if (options.out_dir) out.directory = *options.out_dir;
  if (options.format) {
    out.csv = *options.format == "csv" || *options.format == "both";
    out.json = *options.format == "json" || *options.format == "both";
    if (!out.csv && !out.json) {
      throw ValidationError("format must be csv, json, or both");
    }
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> resolve_pairs(
    const Scenario& scenario) {
  const DecoherenceRequest& request = *scenario.decoherence;
  if (!request.pairs.empty()) return request.pairs;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t m = 0; m < scenario.model.levels(); ++m) {
    for (std::size_t n = m + 1; n < scenario.model.levels(); ++n) {
      pairs.emplace_back(m, n);
    }
  }
  return pairs;
}

std::string decoherence_params_json(const Scenario& scenario,
                                    const std::vector<DecoherenceCurve>& curves) {
  const DecoherenceSpec& spec = scenario.decoherence->spec;
  std::ostringstream out;
  out << "{\n";
  out << "  \"family\": \"" << family_name(spec.family) << "\",\n";
  out << "  \"sigma\": " << format_number(spec.sigma) << ",\n";
  out << "  \"M\": " << scenario.model.acts() << ",\n";
  out << "  \"t_dec\": ";
  if (!curves.empty() && curves.front().decoherence_time) {
    out << format_number(*curves.front().decoherence_time);
  } else {
    out << "null";
  }
  if (!spec.sigma_overrides.empty()) {
    out << ",\n  \"overrides\": [";
    bool first = true;
    for (const auto& [pair, sigma] : spec.sigma_overrides) {
      if (!first) out << ", ";
      first = false;
      out << "{\"m\": " << pair.first << ", \"n\": " << pair.second
          << ", \"sigma\": " << format_number(sigma) << "}";
    }
    out << "]";
  }
  out << "\n}\n";
  return out.str();
}

}  // namespace

int run_simulate(const std::string& scenario_path, const RunOptions& options) {
  return guarded([&]() -> int {
    Scenario scenario = load_scenario(scenario_path);
    OutputSpec output = resolve_output(scenario, options);
    const std::vector<double> times = scenario.grid.times();

    ReducedDensitySeries series =
        reduced_density(scenario.model, times, options.threads);
    SeriesDiagnostics diagnostics = check_series_invariants(series);
    if (diagnostics.worst() > kSeriesInvariantTol) {
      throw InvariantViolation("reduced density series violates its contract "
                               "(worst deviation " +
                               std::to_string(diagnostics.worst()) + ")");
    }

    fs::create_directories(output.directory);
    const fs::path dir(output.directory);
    if (output.csv) {
      write_file(dir / "reduced_density.csv", reduced_density_csv(series));
    }
    if (output.json) {
      write_file(dir / "reduced_density.json", reduced_density_json(series));
    }

    if (scenario.decoherence) {
      const DecoherenceSpec& spec = scenario.decoherence->spec;
      std::vector<DecoherenceCurve> curves;
      for (auto [m, n] : resolve_pairs(scenario)) {
        if (spec.family == DecoherenceFamily::Empirical) {
          try {
            curves.push_back(decoherence_curve(scenario.model, m, n, times));
            if (scenario.decoherence->histogram_bins) {
              EffectHistogram bins =
                  histogram(effect_density_from_model(scenario.model, m, n),
                            *scenario.decoherence->histogram_bins);
              write_file(dir / ("effect_density_" + std::to_string(m) + "_" +
                                std::to_string(n) + ".csv"),
                         effect_histogram_csv(bins));
            }
          } catch (const ZeroWeightError&) {
            // Pair carries no coherence; its contribution is identically zero.
          }
        } else {
          curves.push_back(decoherence_curve(spec.family, spec.scale_for(m, n),
                                             scenario.model.protocol(), m, n,
                                             times));
        }
      }
      write_file(dir / "decoherence.csv", decoherence_csv(curves));
      if (spec.family != DecoherenceFamily::Empirical) {
        write_file(dir / "decoherence_params.json",
                   decoherence_params_json(scenario, curves));
      }
    }

    for (std::size_t i = 0; i < scenario.observables.size(); ++i) {
      const Observable& obs = scenario.observables[i];
      std::string stem = sanitize_label(obs.label(), i);
      ObservableSeries direct = expectation_direct(series, obs);
      write_file(dir / ("observable_" + stem + ".csv"), observable_csv(direct));
      if (scenario.decoherence &&
          scenario.decoherence->spec.family != DecoherenceFamily::Empirical) {
        ObservableSeries predicted = expectation_factorized(
            scenario.model, obs, scenario.decoherence->spec, times);
        write_file(dir / ("observable_" + stem + "_predicted.csv"),
                   observable_csv(predicted));
      }
    }
    return 0;
  });
}

int run_compare(const std::string& scenario_path, const RunOptions& options) {
  return guarded([&]() -> int {
    Scenario scenario = load_scenario(scenario_path);
    OutputSpec output = resolve_output(scenario, options);
    const CompositeModel& model = scenario.model;
    if (model.levels() * model.device_levels() > kOracleSizeGuard) {
      throw ValidationError(
          "size guard: the composite-space oracle is limited to N*K <= " +
          std::to_string(kOracleSizeGuard));
    }
    const std::vector<double> times = scenario.grid.times();

    ReducedDensitySeries closed =
        reduced_density(model, times, options.threads);
    ReducedDensitySeries oracle = oracle_evolve(
        model, times, scenario.oracle.dt, scenario.oracle.smoothing_width);

    // Kick neighborhoods are excluded: there the smoothed pulse genuinely
    // differs from the ideal kick.
    std::vector<std::pair<double, double>> windows;
    for (const PulseShape& p : model.protocol().pulses()) {
      if (p.is_delta()) {
        double w = scenario.oracle.smoothing_width;
        windows.emplace_back(p.kick_time() - 3.0 * w, p.kick_time() + 3.0 * w);
      }
    }
    auto excluded = [&windows](double t) {
      return std::any_of(windows.begin(), windows.end(), [t](const auto& w) {
        return t >= w.first && t <= w.second;
      });
    };
    const double oracle_tol = model.protocol().has_delta() ? 1e-6
                              : model.acts() >= 1          ? 1e-9
                                                           : 1e-12;
    double oracle_delta = 0.0;
    std::size_t oracle_compared = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (excluded(times[i])) continue;
      ++oracle_compared;
      oracle_delta = std::max(
          oracle_delta,
          (closed.rho[i] - oracle.rho[i]).cwiseAbs().maxCoeff());
    }
    const bool oracle_pass = oracle_delta < oracle_tol;

    // Factorized path, restricted to the samples where the uniform-impact
    // condition holds.
    std::vector<double> uniform_times;
    std::vector<std::size_t> uniform_index;
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (model.protocol().all_phases(times[i]).uniform) {
        uniform_times.push_back(times[i]);
        uniform_index.push_back(i);
      }
    }
    double factorized_delta = 0.0;
    const bool factorized_applicable = !uniform_times.empty();
    if (factorized_applicable) {
      for (std::size_t m = 0; m < model.levels(); ++m) {
        for (std::size_t n = 0; n < model.levels(); ++n) {
          std::vector<cplx> values =
              factorized_reduced_density(model, m, n, uniform_times);
          for (std::size_t i = 0; i < values.size(); ++i) {
            factorized_delta = std::max(
                factorized_delta,
                std::abs(values[i] -
                         closed.rho[uniform_index[i]](idx(m), idx(n))));
          }
        }
      }
    }
    const bool factorized_pass =
        !factorized_applicable || factorized_delta < kFactorizedTol;

    SeriesDiagnostics diagnostics = check_series_invariants(closed);
    const bool all_pass = oracle_pass && factorized_pass;

    std::ostringstream report;
    report << "{\n";
    report << "  \"scenario\": \"" << json_escape(scenario_path) << "\",\n";
    report << "  \"grid_samples\": " << times.size() << ",\n";
    report << "  \"closed_vs_oracle\": {\n";
    report << "    \"tolerance\": " << format_number(oracle_tol) << ",\n";
    report << "    \"max_abs_delta\": " << format_number(oracle_delta) << ",\n";
    report << "    \"compared_samples\": " << oracle_compared << ",\n";
    report << "    \"excluded_windows\": [";
    for (std::size_t i = 0; i < windows.size(); ++i) {
      if (i) report << ", ";
      report << "[" << format_number(windows[i].first) << ", "
             << format_number(windows[i].second) << "]";
    }
    report << "],\n";
    report << "    \"pass\": " << (oracle_pass ? "true" : "false") << "\n  },\n";
    report << "  \"closed_vs_factorized\": {\n";
    report << "    \"tolerance\": " << format_number(kFactorizedTol) << ",\n";
    if (factorized_applicable) {
      report << "    \"max_abs_delta\": " << format_number(factorized_delta)
             << ",\n";
    } else {
      report << "    \"max_abs_delta\": null,\n";
    }
    report << "    \"compared_samples\": " << uniform_times.size() << ",\n";
    report << "    \"skipped_samples\": " << times.size() - uniform_times.size()
           << ",\n";
    report << "    \"not_applicable\": "
           << (factorized_applicable ? "false" : "true") << ",\n";
    report << "    \"pass\": " << (factorized_pass ? "true" : "false")
           << "\n  },\n";
    report << "  \"series_invariants\": {\n";
    report << "    \"hermiticity\": " << format_number(diagnostics.hermiticity)
           << ",\n";
    report << "    \"trace_error\": " << format_number(diagnostics.trace_error)
           << ",\n";
    report << "    \"diagonal_drift\": "
           << format_number(diagnostics.diagonal_drift) << "\n  },\n";
    report << "  \"pass\": " << (all_pass ? "true" : "false") << "\n}\n";

    fs::create_directories(output.directory);
    write_file(fs::path(output.directory) / "compare_report.json", report.str());
    std::cout << report.str();
    return all_pass ? 0 : 1;
  });
}

int run_validate(const std::string& matrices_path, const RunOptions& options) {
  return guarded([&]() -> int {
    MatrixFile file = load_matrix_file(matrices_path);
    CommutatorCheck check = check_commuting_family(file.input);

    bool accepted = check.all_pass;
    std::string reject_reason;
    std::ostringstream spectra;
    if (check.all_pass) {
      try {
        SpectralDecomposition spectral = joint_diagonalize(file.input);
        spectra << "  \"spectra\": {\n    \"system\": [";
        for (std::size_t n = 0; n < spectral.system_energies.size(); ++n) {
          if (n) spectra << ", ";
          spectra << format_number(spectral.system_energies[n]);
        }
        spectra << "],\n    \"device\": [";
        for (std::size_t k = 0; k < spectral.device_energies.size(); ++k) {
          if (k) spectra << ", ";
          spectra << format_number(spectral.device_energies[k]);
        }
        spectra << "],\n    \"coupling\": [";
        for (std::size_t j = 0; j < spectral.coupling_eigenvalues.size(); ++j) {
          if (j) spectra << ", ";
          const RealMatrix& sheet = spectral.coupling_eigenvalues[j];
          spectra << "[";
          for (Eigen::Index n = 0; n < sheet.rows(); ++n) {
            if (n) spectra << ", ";
            spectra << "[";
            for (Eigen::Index k = 0; k < sheet.cols(); ++k) {
              if (k) spectra << ", ";
              spectra << format_number(sheet(n, k));
            }
            spectra << "]";
          }
          spectra << "]";
        }
        spectra << "]\n  }";
      } catch (const ValidationError& e) {
        accepted = false;
        reject_reason = e.what();
      }
    }

    std::ostringstream report;
    report << "{\n  \"tolerance\": " << format_number(check.tolerance) << ",\n";
    report << "  \"commutators\": [\n";
    for (std::size_t i = 0; i < check.entries.size(); ++i) {
      const auto& e = check.entries[i];
      report << "    {\"first\": \"" << e.first << "\", \"second\": \""
             << e.second << "\", \"absolute\": " << format_number(e.absolute)
             << ", \"relative\": " << format_number(e.relative)
             << ", \"pass\": " << (e.pass ? "true" : "false") << "}"
             << (i + 1 < check.entries.size() ? ",\n" : "\n");
    }
    report << "  ],\n";
    report << "  \"verdict\": \"" << (accepted ? "accept" : "reject") << "\"";
    if (!reject_reason.empty()) {
      report << ",\n  \"reason\": \"" << json_escape(reject_reason) << "\"";
    }
    if (accepted) {
      report << ",\n" << spectra.str();
    }
    report << "\n}\n";

    if (options.out_dir) {
      fs::create_directories(*options.out_dir);
      write_file(fs::path(*options.out_dir) / "validate_report.json",
                 report.str());
    }
    std::cout << report.str();
    return accepted ? 0 : 1;
  });
}

int run_limit(const std::string& scenario_path, const RunOptions& options) {
  (void)options;
  return guarded([&]() -> int {
    Scenario scenario = load_scenario(scenario_path);
    std::ostringstream out;
    out << "[\n";
    for (std::size_t i = 0; i < scenario.observables.size(); ++i) {
      const Observable& obs = scenario.observables[i];
      out << "  {\"label\": \"" << json_escape(obs.label()) << "\", \"value\": "
          << format_number(diagonal_ensemble(scenario.model, obs)) << "}"
          << (i + 1 < scenario.observables.size() ? ",\n" : "\n");
    }
    out << "]\n";
    std::cout << out.str();
    return 0;
  });
}

}  // namespace qnd
