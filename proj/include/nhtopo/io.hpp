#pragma once

// CSV writers for every artifact the CLI produces, and a small reader used by
// the plotter. Numbers are written with 17 significant digits so reruns are
// byte-identical.

#include <filesystem>
#include <string>
#include <vector>

#include "nhtopo/bloch.hpp"
#include "nhtopo/disorder.hpp"
#include "nhtopo/gssh.hpp"
#include "nhtopo/response.hpp"
#include "nhtopo/svd.hpp"

namespace nhtopo::io {

namespace fs = std::filesystem;

std::string format_number(double x);

void write_spectrum(const fs::path& path, const BlochSamples& s);
void write_svd(const fs::path& path, const SvdResult& r, const std::vector<MomentumLabel>& labels);
void write_bands(const fs::path& path, const GsshBands& b);
void write_matrix(const fs::path& path, const Matrix& m);
void write_histogram(const fs::path& path, const Histogram2D& h);
void write_eigenvalues(const fs::path& path, const EigenResult& e);
/// Long format (site, mode, abs) for vector magnitude profiles.
void write_profiles(const fs::path& path, const Matrix& columns, int count);
void write_gain(const fs::path& path, const GainScaling& g);
void write_sweep(const fs::path& path, const DetuningSweep& s);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Index of a column; throws SchemaMismatch naming it when absent.
  std::size_t column(const std::string& name) const;
  std::vector<double> values(const std::string& name) const;
};

Table read_csv(const fs::path& path);

}  // namespace nhtopo::io
