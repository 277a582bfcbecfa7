#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mrwspec/density.hpp"
#include "mrwspec/solver.hpp"
#include "mrwspec/spectra.hpp"

namespace mrwspec {

// Shortest decimal string that round-trips the exact double (to_chars).
std::string format_double(double v);

using HeaderMeta = std::vector<std::pair<std::string, std::string>>;

// CSV layout: '#'-prefixed "key = value" metadata lines, one column-name
// line, then data rows. Readers ignore the metadata order.

void write_eigenvalues_csv(const std::filesystem::path& path,
                           std::span<const std::vector<double>> per_sample,
                           const HeaderMeta& meta);
void write_histogram_csv(const std::filesystem::path& path, const EsdHistogram& h,
                         const HeaderMeta& meta);
// column names: first = x_name (e.g. "lambda" or "x"), second = "density"
void write_curve_csv(const std::filesystem::path& path, const DensityCurve& c,
                     const std::string& x_name, const HeaderMeta& meta);
void write_k_csv(const std::filesystem::path& path, const KFunction& k,
                 const HeaderMeta& meta);

struct EigenvaluesFile {
  std::vector<int> sample_ids;
  std::vector<double> eigenvalues;
  HeaderMeta meta;
};
EigenvaluesFile read_eigenvalues_csv(const std::filesystem::path& path);

struct HistogramFile {
  EsdHistogram histogram;
  HeaderMeta meta;
};
HistogramFile read_histogram_csv(const std::filesystem::path& path);

struct CurveFile {
  DensityCurve curve;  // converged = value is finite
  HeaderMeta meta;
};
CurveFile read_curve_csv(const std::filesystem::path& path);

void write_diagnostics_json(const std::filesystem::path& path,
                            std::span<const PointDiag> diags,
                            const HeaderMeta& run_info);

// Flat "key = value" file, loadable back through the CLI's --config.
void write_manifest(const std::filesystem::path& path, const std::string& command,
                    const HeaderMeta& entries);

}  // namespace mrwspec
