#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qnd/decoherence.hpp"
#include "qnd/evolution.hpp"
#include "qnd/observables.hpp"
#include "qnd/types.hpp"

namespace qnd {

// Every number in an emitted artifact goes through this: 17 significant
// digits, C locale, so diffs across runs and implementations are meaningful.
std::string format_number(double v);

// Fixed column orders; these are part of the output contract.
std::string reduced_density_csv(const ReducedDensitySeries& series);
std::string reduced_density_json(const ReducedDensitySeries& series);
std::string decoherence_csv(const std::vector<DecoherenceCurve>& curves);
std::string observable_csv(const ObservableSeries& series);
std::string effect_histogram_csv(const EffectHistogram& histogram);

void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace qnd
