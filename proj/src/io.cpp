#include "qnd/io.hpp"

#include <cstdio>
#include <fstream>

#include "qnd/errors.hpp"

namespace qnd {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string reduced_density_csv(const ReducedDensitySeries& series) {
  std::string out = "t,m,n,re,im\n";
  const std::size_t levels = series.levels();
  for (std::size_t i = 0; i < series.samples(); ++i) {
    const std::string t = format_number(series.times[i]);
    for (std::size_t m = 0; m < levels; ++m) {
      for (std::size_t n = 0; n < levels; ++n) {
        cplx v = series.rho[i](static_cast<Eigen::Index>(m),
                               static_cast<Eigen::Index>(n));
        out += t;
        out += ',';
        out += std::to_string(m);
        out += ',';
        out += std::to_string(n);
        out += ',';
        out += format_number(v.real());
        out += ',';
        out += format_number(v.imag());
        out += '\n';
      }
    }
  }
  return out;
}

std::string reduced_density_json(const ReducedDensitySeries& series) {
  const std::size_t levels = series.levels();
  std::string out = "{\n  \"levels\": " + std::to_string(levels) +
                    ",\n  \"times\": [";
  for (std::size_t i = 0; i < series.samples(); ++i) {
    if (i) out += ", ";
    out += format_number(series.times[i]);
  }
  out += "],\n  \"rho\": [\n";
  for (std::size_t i = 0; i < series.samples(); ++i) {
    out += "    [";
    for (std::size_t m = 0; m < levels; ++m) {
      if (m) out += ", ";
      out += '[';
      for (std::size_t n = 0; n < levels; ++n) {
        if (n) out += ", ";
        cplx v = series.rho[i](static_cast<Eigen::Index>(m),
                               static_cast<Eigen::Index>(n));
        out += '[';
        out += format_number(v.real());
        out += ", ";
        out += format_number(v.imag());
        out += ']';
      }
      out += ']';
    }
    out += (i + 1 < series.samples()) ? "],\n" : "]\n";
  }
  out += "  ]\n}\n";
  return out;
}

std::string decoherence_csv(const std::vector<DecoherenceCurve>& curves) {
  std::string out = "t,m,n,re_D,im_D,abs_D\n";
  for (const DecoherenceCurve& curve : curves) {
    for (std::size_t i = 0; i < curve.times.size(); ++i) {
      cplx v = curve.values[i];
      out += format_number(curve.times[i]);
      out += ',';
      out += std::to_string(curve.m);
      out += ',';
      out += std::to_string(curve.n);
      out += ',';
      out += format_number(v.real());
      out += ',';
      out += format_number(v.imag());
      out += ',';
      out += format_number(std::abs(v));
      out += '\n';
    }
  }
  return out;
}

std::string observable_csv(const ObservableSeries& series) {
  std::string out = "t,value,diagonal_part,coherent_part\n";
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    out += format_number(series.times[i]);
    out += ',';
    out += format_number(series.values[i]);
    out += ',';
    out += format_number(series.diagonal_part[i]);
    out += ',';
    out += format_number(series.coherent_part[i]);
    out += '\n';
  }
  return out;
}

std::string effect_histogram_csv(const EffectHistogram& histogram) {
  std::string out = "x_lo,x_hi,re_w,im_w\n";
  for (std::size_t b = 0; b < histogram.masses.size(); ++b) {
    out += format_number(histogram.edges[b]);
    out += ',';
    out += format_number(histogram.edges[b + 1]);
    out += ',';
    out += format_number(histogram.masses[b].real());
    out += ',';
    out += format_number(histogram.masses[b].imag());
    out += '\n';
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ValidationError("cannot open output file: " + path.string());
  }
  out << content;
  if (!out) {
    throw ValidationError("failed writing output file: " + path.string());
  }
}

}  // namespace qnd
