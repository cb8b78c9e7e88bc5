#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qnd/model.hpp"
#include "qnd/observables.hpp"

namespace qnd {

struct TimeGrid {
  double start = 0.0;
  double stop = 0.0;
  std::size_t samples = 1;

  std::vector<double> times() const;
};

struct DecoherenceRequest {
  DecoherenceSpec spec;
  // Pairs to emit curves for; empty means every m < n.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  // When set, empirical effect densities are additionally binned into
  // plot-ready histogram files with this many bins.
  std::optional<std::size_t> histogram_bins;
};

struct OutputSpec {
  std::string directory = "out";
  bool csv = true;
  bool json = false;
};

struct OracleSpec {
  double dt = 1e-3;
  double smoothing_width = 1e-2;
};

struct Scenario {
  CompositeModel model;
  TimeGrid grid;
  std::vector<Observable> observables;
  std::optional<DecoherenceRequest> decoherence;
  OutputSpec output;
  OracleSpec oracle;
  std::optional<std::uint64_t> seed;
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::filesystem::path& path);

// Matrix-mode input file for the validate subcommand / matrix builder.
struct MatrixFile {
  MatrixModelInput input;
  bool has_state = false;
  std::optional<Protocol> protocol;
};

MatrixFile parse_matrix_file(const std::string& json_text);
MatrixFile load_matrix_file(const std::filesystem::path& path);

}  // namespace qnd
