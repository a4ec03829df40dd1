#include "nhtopo/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nhtopo::io {

namespace {

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw Error(ErrorCode::ConfigError, "cannot write " + path.string());
    for (std::size_t j = 0; j < header.size(); ++j) out_ << (j ? "," : "") << header[j];
    out_ << '\n';
  }

  template <class... Ts>
  void row(const Ts&... xs) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(xs), first = false), ...);
    out_ << '\n';
  }

 private:
  static std::string cell(double x) { return format_number(x); }
  static std::string cell(int x) { return std::to_string(x); }
  static std::string cell(long x) { return std::to_string(x); }
  static std::string cell(const char* x) { return x; }

  std::ofstream out_;
};

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_spectrum(const fs::path& path, const BlochSamples& s) {
  CsvWriter w(path, {"k", "re_h", "im_h", "sigma", "phi_unwrapped"});
  for (int j = 0; j < s.size(); ++j) {
    const auto i = static_cast<std::size_t>(j);
    w.row(s.k[i], s.h[i].real(), s.h[i].imag(), s.sigma[i], s.phi[i]);
  }
}

void write_svd(const fs::path& path, const SvdResult& r, const std::vector<MomentumLabel>& labels) {
  CsvWriter w(path, {"index", "sigma", "k_label", "edge_flag", "loc_rate_left", "loc_rate_right"});
  for (int j = 0; j < r.size(); ++j) {
    const auto& lab = labels.at(static_cast<std::size_t>(j));
    w.row(j, r.sigma(j), lab.k, lab.edge_mode ? 1 : 0, fit_localization(r.u.col(j)).rate,
          fit_localization(r.v.col(j)).rate);
  }
}

void write_bands(const fs::path& path, const GsshBands& b) {
  CsvWriter w(path, {"k", "E_minus", "E_plus"});
  for (std::size_t j = 0; j < b.k.size(); ++j) w.row(b.k[j], b.e_minus[j], b.e_plus[j]);
}

void write_matrix(const fs::path& path, const Matrix& m) {
  CsvWriter w(path, {"row", "col", "re", "im", "abs"});
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      w.row(static_cast<int>(r + 1), static_cast<int>(c + 1), m(r, c).real(), m(r, c).imag(), std::abs(m(r, c)));
    }
  }
}

void write_histogram(const fs::path& path, const Histogram2D& h) {
  CsvWriter w(path, {"k_bin_center", "sigma_bin_center", "count"});
  for (int kb = 0; kb < h.k_bins; ++kb) {
    for (int sb = 0; sb < h.sigma_bins; ++sb) w.row(h.k_center(kb), h.sigma_center(sb), h.at(kb, sb));
  }
}

void write_eigenvalues(const fs::path& path, const EigenResult& e) {
  CsvWriter w(path, {"index", "re", "im", "ipr_right", "ipr_left", "edge_right", "edge_left"});
  for (Eigen::Index j = 0; j < e.values.size(); ++j) {
    w.row(static_cast<int>(j), e.values(j).real(), e.values(j).imag(), e.ipr_right(j), e.ipr_left(j),
          e.edge_right(j), e.edge_left(j));
  }
}

void write_profiles(const fs::path& path, const Matrix& columns, int count) {
  CsvWriter w(path, {"site", "mode", "abs"});
  const int cols = std::min<int>(count, static_cast<int>(columns.cols()));
  for (int c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < columns.rows(); ++r) w.row(static_cast<int>(r + 1), c, std::abs(columns(r, c)));
  }
}

void write_gain(const fs::path& path, const GainScaling& g) {
  CsvWriter w(path, {"N", "forward_gain", "reverse_gain", "stable"});
  for (const auto& p : g.points) w.row(p.n, p.forward_gain, p.reverse_gain, p.stable ? 1 : 0);
}

void write_sweep(const fs::path& path, const DetuningSweep& s) {
  CsvWriter w(path, {"delta", "state", "winding", "nh_gap", "zsm_count", "gain_slope"});
  for (const auto& r : s.rows) w.row(r.delta, to_string(r.state), r.winding, r.nh_gap, r.zsm_count, r.gain_slope);
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] == name) return j;
  }
  throw Error(ErrorCode::SchemaMismatch, "missing column '" + name + "'");
}

std::vector<double> Table::values(const std::string& name) const {
  const std::size_t j = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.at(j));
  return out;
}

Table read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read " + path.string());
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::SchemaMismatch, path.string() + " is empty");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.columns.push_back(cell);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      row.push_back(end == cell.c_str() ? std::nan("") : v);
    }
    if (row.size() != t.columns.size()) {
      throw Error(ErrorCode::SchemaMismatch, path.string() + ": row width differs from header");
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace nhtopo::io
