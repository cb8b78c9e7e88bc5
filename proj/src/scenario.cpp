#include "qnd/scenario.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qnd/errors.hpp"
#include "qnd/random.hpp"

namespace qnd {

using nlohmann::json;

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ValidationError(where + ": " + what);
}

const json& require(const json& node, const char* key, const std::string& where) {
  auto it = node.find(key);
  if (it == node.end()) fail(where, std::string("missing key '") + key + "'");
  return *it;
}

double as_number(const json& node, const std::string& where) {
  if (!node.is_number()) fail(where, "expected a number");
  return node.get<double>();
}

std::size_t as_count(const json& node, const std::string& where) {
  if (!node.is_number_unsigned()) fail(where, "expected a nonnegative integer");
  return node.get<std::size_t>();
}

// Complex entries are [re, im]; a bare number is accepted as purely real.
cplx as_complex(const json& node, const std::string& where) {
  if (node.is_number()) return {node.get<double>(), 0.0};
  if (node.is_array() && node.size() == 2 && node[0].is_number() &&
      node[1].is_number()) {
    return {node[0].get<double>(), node[1].get<double>()};
  }
  fail(where, "expected a number or [re, im]");
}

std::vector<double> as_real_list(const json& node, const std::string& where) {
  if (!node.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(node.size());
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(as_number(node[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Matrix as_matrix(const json& node, const std::string& where) {
  if (!node.is_array() || node.empty()) fail(where, "expected a matrix (array of rows)");
  const std::size_t rows = node.size();
  std::size_t cols = 0;
  Matrix out;
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = node[r];
    const std::string row_where = where + "[" + std::to_string(r) + "]";
    if (!row.is_array() || row.empty()) fail(row_where, "expected a row array");
    if (r == 0) {
      cols = row.size();
      out.resize(idx(rows), idx(cols));
    } else if (row.size() != cols) {
      fail(row_where, "ragged matrix rows");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      out(idx(r), idx(c)) =
          as_complex(row[c], row_where + "[" + std::to_string(c) + "]");
    }
  }
  return out;
}

PulseShape parse_pulse(const json& node, const std::string& where) {
  if (!node.is_object()) fail(where, "expected a pulse object");
  std::string kind = require(node, "kind", where).get<std::string>();
  if (kind == "delta") {
    return PulseShape::delta(as_number(require(node, "t", where), where + ".t"));
  }
  if (kind == "constant") {
    return PulseShape::constant(
        as_number(require(node, "start", where), where + ".start"),
        as_number(require(node, "stop", where), where + ".stop"),
        as_number(require(node, "amplitude", where), where + ".amplitude"));
  }
  if (kind == "piecewise_linear") {
    const json& knots = require(node, "knots", where);
    if (!knots.is_array()) fail(where + ".knots", "expected an array of [t, v]");
    std::vector<std::pair<double, double>> parsed;
    parsed.reserve(knots.size());
    for (std::size_t i = 0; i < knots.size(); ++i) {
      const json& kn = knots[i];
      const std::string kn_where = where + ".knots[" + std::to_string(i) + "]";
      if (!kn.is_array() || kn.size() != 2) fail(kn_where, "expected [t, v]");
      parsed.emplace_back(as_number(kn[0], kn_where), as_number(kn[1], kn_where));
    }
    return PulseShape::piecewise_linear(std::move(parsed));
  }
  fail(where + ".kind", "unknown pulse kind '" + kind + "'");
}

Protocol parse_protocol(const json& node, const std::string& where) {
  if (!node.is_array()) fail(where, "expected an array of pulses");
  std::vector<PulseShape> pulses;
  pulses.reserve(node.size());
  for (std::size_t j = 0; j < node.size(); ++j) {
    pulses.push_back(parse_pulse(node[j], where + "[" + std::to_string(j) + "]"));
  }
  return Protocol(std::move(pulses));
}

DecoherenceFamily parse_family(const json& node, const std::string& where) {
  std::string name = node.get<std::string>();
  if (name == "empirical") return DecoherenceFamily::Empirical;
  if (name == "gaussian") return DecoherenceFamily::Gaussian;
  if (name == "lorentz") return DecoherenceFamily::Lorentz;
  fail(where, "unknown family '" + name + "'");
}

struct ParsedInteraction {
  std::vector<RealMatrix> coupling;
  Protocol protocol;
};

ParsedInteraction parse_interaction(const json& node, std::size_t levels,
                                    std::optional<std::uint64_t> seed,
                                    const std::string& where) {
  ParsedInteraction out;
  out.protocol = parse_protocol(require(node, "pulses", where), where + ".pulses");
  const std::size_t acts = out.protocol.size();

  if (node.contains("xi")) {
    const json& xi = node["xi"];
    if (!xi.is_array() || xi.size() != acts) {
      fail(where + ".xi", "expected " + std::to_string(acts) +
                              " coupling sheets (one per pulse)");
    }
    for (std::size_t j = 0; j < acts; ++j) {
      const json& sheet = xi[j];
      const std::string sheet_where = where + ".xi[" + std::to_string(j) + "]";
      if (!sheet.is_array() || sheet.size() != levels) {
        fail(sheet_where, "expected " + std::to_string(levels) + " rows");
      }
      RealMatrix parsed;
      for (std::size_t n = 0; n < levels; ++n) {
        auto row = as_real_list(sheet[n], sheet_where + "[" + std::to_string(n) + "]");
        if (n == 0) {
          parsed.resize(idx(levels), idx(row.size()));
        } else if (row.size() != static_cast<std::size_t>(parsed.cols())) {
          fail(sheet_where, "ragged coupling rows");
        }
        for (std::size_t k = 0; k < row.size(); ++k) {
          parsed(idx(n), idx(k)) = row[k];
        }
      }
      out.coupling.push_back(std::move(parsed));
    }
    return out;
  }

  if (node.contains("sampled_pair")) {
    const json& sp = node["sampled_pair"];
    const std::string sp_where = where + ".sampled_pair";
    if (levels != 2) {
      fail(sp_where, "sampled_pair interactions need a two-level system");
    }
    if (!seed.has_value()) {
      fail(sp_where, "stochastic construction requires a top-level seed");
    }
    DecoherenceFamily family =
        parse_family(require(sp, "family", sp_where), sp_where + ".family");
    double sigma = as_number(require(sp, "sigma", sp_where), sp_where + ".sigma");
    std::size_t count = as_count(require(sp, "count", sp_where), sp_where + ".count");
    if (count == 0) fail(sp_where + ".count", "need at least one sample");
    if (!(sigma > 0.0)) fail(sp_where + ".sigma", "need sigma > 0");
    SeededSampler sampler(*seed);
    RealMatrix sheet(2, idx(count));
    for (std::size_t k = 0; k < count; ++k) {
      double gap = family == DecoherenceFamily::Gaussian ? sampler.normal(sigma)
                   : family == DecoherenceFamily::Lorentz ? sampler.cauchy(sigma)
                                                          : 0.0;
      if (family == DecoherenceFamily::Empirical) {
        fail(sp_where + ".family", "sampled_pair needs gaussian or lorentz");
      }
      sheet(0, idx(k)) = 0.5 * gap;
      sheet(1, idx(k)) = -0.5 * gap;
    }
    out.coupling.assign(acts, sheet);
    return out;
  }

  if (acts != 0) {
    fail(where, "pulses given but neither 'xi' nor 'sampled_pair' present");
  }
  return out;
}

RhoInitial parse_initial_state(const json& node, std::size_t levels,
                               std::size_t device_levels,
                               const std::string& where) {
  if (!node.is_object()) fail(where, "expected an object");
  std::string mode = require(node, "mode", where).get<std::string>();
  if (mode == "direct") {
    const json& rho = require(node, "rho", where);
    const std::string rho_where = where + ".rho";
    if (!rho.is_array() || rho.size() != levels) {
      fail(rho_where, "expected " + std::to_string(levels) + " rows (m index)");
    }
    std::vector<Matrix> slices(device_levels,
                               Matrix::Zero(idx(levels), idx(levels)));
    for (std::size_t m = 0; m < levels; ++m) {
      const json& row = rho[m];
      if (!row.is_array() || row.size() != levels) {
        fail(rho_where, "expected " + std::to_string(levels) + " columns (n index)");
      }
      for (std::size_t n = 0; n < levels; ++n) {
        const json& cell = row[n];
        const std::string cell_where = rho_where + "[" + std::to_string(m) +
                                       "][" + std::to_string(n) + "]";
        if (!cell.is_array() || cell.size() != device_levels) {
          fail(cell_where, "expected " + std::to_string(device_levels) +
                               " device entries (k index)");
        }
        for (std::size_t k = 0; k < device_levels; ++k) {
          slices[k](idx(m), idx(n)) =
              as_complex(cell[k], cell_where + "[" + std::to_string(k) + "]");
        }
      }
    }
    return rho_from_direct(std::move(slices));
  }
  if (mode == "product") {
    Matrix system_state = as_matrix(require(node, "rhoA", where), where + ".rhoA");
    const json& rho_b = require(node, "rhoB", where);
    Matrix device_state;
    if (rho_b.is_string() && rho_b.get<std::string>() == "uniform") {
      device_state = Matrix::Identity(idx(device_levels), idx(device_levels)) /
                     static_cast<double>(device_levels);
    } else {
      device_state = as_matrix(rho_b, where + ".rhoB");
    }
    return rho_from_product(system_state, device_state);
  }
  if (mode == "composite") {
    Matrix composite = as_matrix(require(node, "rho", where), where + ".rho");
    return rho_from_full_composite(composite, levels, device_levels);
  }
  fail(where + ".mode", "unknown mode '" + mode + "'");
}

}  // namespace

std::vector<double> TimeGrid::times() const {
  if (samples == 0) {
    throw ValidationError("time_grid.samples must be >= 1");
  }
  if (!(start <= stop)) {
    throw ValidationError("time_grid requires start <= stop");
  }
  std::vector<double> out;
  out.reserve(samples);
  if (samples == 1) {
    out.push_back(start);
    return out;
  }
  const double step = (stop - start) / static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < samples; ++i) {
    out.push_back(i + 1 == samples ? stop
                                   : start + step * static_cast<double>(i));
  }
  return out;
}

Scenario parse_scenario(const std::string& json_text) {
  json root = json::parse(json_text);
  if (!root.is_object()) {
    throw ValidationError("scenario: top level must be an object");
  }

  std::optional<std::uint64_t> seed;
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned()) {
      throw ValidationError("seed: expected a nonnegative integer");
    }
    seed = root["seed"].get<std::uint64_t>();
  }

  SystemSpec system;
  const json& sys = require(root, "system", "scenario");
  system.energies = as_real_list(require(sys, "energies", "system"),
                                 "system.energies");
  if (sys.contains("labels")) {
    for (const auto& l : sys["labels"]) {
      system.labels.push_back(l.get<std::string>());
    }
  }
  const std::size_t levels = system.energies.size();

  ParsedInteraction interaction;
  if (root.contains("interaction")) {
    interaction =
        parse_interaction(root["interaction"], levels, seed, "interaction");
  }

  std::size_t device_levels = 0;
  DeviceSpec device;
  if (root.contains("device")) {
    device.energies = as_real_list(require(root["device"], "energies", "device"),
                                   "device.energies");
    device_levels = device.energies.size();
  } else if (!interaction.coupling.empty()) {
    device_levels = static_cast<std::size_t>(interaction.coupling.front().cols());
    device.energies.assign(device_levels, 0.0);
  } else {
    throw ValidationError(
        "scenario: device section required when the interaction does not fix "
        "the device dimension");
  }

  RhoInitial rho = parse_initial_state(require(root, "initial_state", "scenario"),
                                       levels, device_levels, "initial_state");

  CompositeModel model = build_from_spectral(
      std::move(system), std::move(device),
      InteractionSpec(std::move(interaction.coupling),
                      std::move(interaction.protocol)),
      std::move(rho));

  const json& grid_node = require(root, "time_grid", "scenario");
  TimeGrid grid;
  grid.start = as_number(require(grid_node, "start", "time_grid"), "time_grid.start");
  grid.stop = as_number(require(grid_node, "stop", "time_grid"), "time_grid.stop");
  grid.samples = as_count(require(grid_node, "samples", "time_grid"),
                          "time_grid.samples");
  (void)grid.times();  // validates start <= stop, samples >= 1

  std::vector<Observable> observables;
  if (root.contains("observables")) {
    const json& obs = root["observables"];
    if (!obs.is_array()) throw ValidationError("observables: expected an array");
    for (std::size_t i = 0; i < obs.size(); ++i) {
      const std::string where = "observables[" + std::to_string(i) + "]";
      std::string label = require(obs[i], "label", where).get<std::string>();
      Matrix matrix = as_matrix(require(obs[i], "matrix", where), where + ".matrix");
      if (matrix.rows() != idx(model.levels())) {
        fail(where, "observable dimension does not match the system");
      }
      observables.emplace_back(std::move(matrix), std::move(label));
    }
  }

  std::optional<DecoherenceRequest> decoherence;
  if (root.contains("decoherence")) {
    const json& dec = root["decoherence"];
    DecoherenceRequest request;
    request.spec.family =
        parse_family(require(dec, "family", "decoherence"), "decoherence.family");
    if (request.spec.family != DecoherenceFamily::Empirical) {
      request.spec.sigma =
          as_number(require(dec, "sigma", "decoherence"), "decoherence.sigma");
      if (!(request.spec.sigma >= 0.0)) {
        fail("decoherence.sigma", "must be nonnegative");
      }
    }
    if (dec.contains("overrides")) {
      for (const auto& ov : dec["overrides"]) {
        std::size_t m = as_count(require(ov, "m", "decoherence.overrides"),
                                 "decoherence.overrides.m");
        std::size_t n = as_count(require(ov, "n", "decoherence.overrides"),
                                 "decoherence.overrides.n");
        request.spec.sigma_overrides[{m, n}] =
            as_number(require(ov, "sigma", "decoherence.overrides"),
                      "decoherence.overrides.sigma");
      }
    }
    if (dec.contains("pairs")) {
      for (const auto& p : dec["pairs"]) {
        if (!p.is_array() || p.size() != 2) {
          fail("decoherence.pairs", "expected [m, n] entries");
        }
        std::size_t m = as_count(p[0], "decoherence.pairs");
        std::size_t n = as_count(p[1], "decoherence.pairs");
        if (m >= model.levels() || n >= model.levels() || m == n) {
          fail("decoherence.pairs", "pair out of range or diagonal");
        }
        request.pairs.emplace_back(m, n);
      }
    }
    if (dec.contains("histogram_bins")) {
      std::size_t bins = as_count(dec["histogram_bins"],
                                  "decoherence.histogram_bins");
      if (bins == 0) fail("decoherence.histogram_bins", "need at least one bin");
      request.histogram_bins = bins;
    }
    decoherence = std::move(request);
  }

  OutputSpec output;
  if (root.contains("output")) {
    const json& o = root["output"];
    if (o.contains("directory")) output.directory = o["directory"].get<std::string>();
    if (o.contains("formats")) {
      output.csv = false;
      output.json = false;
      for (const auto& f : o["formats"]) {
        std::string name = f.get<std::string>();
        if (name == "csv") {
          output.csv = true;
        } else if (name == "json") {
          output.json = true;
        } else {
          fail("output.formats", "unknown format '" + name + "'");
        }
      }
      if (!output.csv && !output.json) {
        fail("output.formats", "need at least one of csv, json");
      }
    }
  }

  OracleSpec oracle;
  if (root.contains("oracle")) {
    const json& o = root["oracle"];
    if (o.contains("dt")) oracle.dt = as_number(o["dt"], "oracle.dt");
    if (o.contains("smoothing_width")) {
      oracle.smoothing_width =
          as_number(o["smoothing_width"], "oracle.smoothing_width");
    }
  }

  return Scenario{std::move(model),  grid,   std::move(observables),
                  std::move(decoherence), output, oracle, seed};
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open scenario file: " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

MatrixFile parse_matrix_file(const std::string& json_text) {
  json root = json::parse(json_text);
  if (!root.is_object()) {
    throw ValidationError("matrices: top level must be an object");
  }
  const json& dims = require(root, "dims", "matrices");
  MatrixFile out;
  out.input.levels = as_count(require(dims, "system", "dims"), "dims.system");
  out.input.device_levels = as_count(require(dims, "device", "dims"), "dims.device");
  out.input.system_h = as_matrix(require(root, "HA", "matrices"), "HA");
  out.input.device_h = as_matrix(require(root, "HB", "matrices"), "HB");
  if (root.contains("X")) {
    const json& x = root["X"];
    if (!x.is_array()) throw ValidationError("X: expected an array of matrices");
    for (std::size_t j = 0; j < x.size(); ++j) {
      out.input.couplings.push_back(
          as_matrix(x[j], "X[" + std::to_string(j) + "]"));
    }
  }
  if (root.contains("rhoAB")) {
    out.input.composite_state = as_matrix(root["rhoAB"], "rhoAB");
    out.has_state = true;
  }
  if (root.contains("pulses")) {
    out.protocol = parse_protocol(root["pulses"], "pulses");
  }
  return out;
}

MatrixFile load_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open matrices file: " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_matrix_file(buffer.str());
}

}  // namespace qnd
