#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace nhtopo::cli {

namespace {

constexpr double kWidth = 520, kHeight = 400, kLeft = 70, kRight = 20, kTop = 30, kBottom = 50;

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double x) {
    if (!std::isfinite(x)) return;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  void settle() {
    if (!(lo <= hi)) lo = 0, hi = 1;
    if (hi - lo < 1e-300) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double pad = 0.04 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

class Canvas {
 public:
  Canvas(Range x, Range y, const std::string& title, const std::string& xl, const std::string& yl)
      : x_(x), y_(y) {
    x_.settle();
    y_.settle();
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
         << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out_ << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out_ << "<text x=\"" << kWidth / 2 << "\" y=\"18\" text-anchor=\"middle\">" << title << "</text>\n";
    out_ << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight
         << "\" height=\"" << kHeight - kTop - kBottom << "\" fill=\"none\" stroke=\"black\"/>\n";
    out_ << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">" << xl
         << "</text>\n";
    out_ << "<text x=\"15\" y=\"" << kHeight / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
         << kHeight / 2 << ")\">" << yl << "</text>\n";
    for (double f : {0.0, 0.5, 1.0}) {
      const double xv = x_.lo + f * (x_.hi - x_.lo), yv = y_.lo + f * (y_.hi - y_.lo);
      out_ << "<text x=\"" << px(xv) << "\" y=\"" << kHeight - kBottom + 16 << "\" text-anchor=\"middle\">"
           << num(xv) << "</text>\n";
      out_ << "<text x=\"" << kLeft - 4 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << num(yv)
           << "</text>\n";
    }
  }

  double px(double x) const { return kLeft + (x - x_.lo) / (x_.hi - x_.lo) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y_.lo) / (y_.hi - y_.lo) * (kHeight - kTop - kBottom); }

  void line(const std::vector<double>& x, const std::vector<double>& y, const std::string& colour, bool closed) {
    out_ << "<" << (closed ? "polygon" : "polyline") << " fill=\"none\" stroke=\"" << colour
         << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (std::isfinite(x[j]) && std::isfinite(y[j])) out_ << num(px(x[j])) << ',' << num(py(y[j])) << ' ';
    }
    out_ << "\"/>\n";
  }

  void dots(const std::vector<double>& x, const std::vector<double>& y, const std::string& colour) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (!std::isfinite(x[j]) || !std::isfinite(y[j])) continue;
      out_ << "<circle cx=\"" << num(px(x[j])) << "\" cy=\"" << num(py(y[j])) << "\" r=\"2.5\" fill=\"" << colour
           << "\"/>\n";
    }
  }

  void cell(double x0, double y0, double x1, double y1, double shade) {
    const int g = static_cast<int>(std::lround(255.0 * (1.0 - std::clamp(shade, 0.0, 1.0))));
    const double l = std::min(px(x0), px(x1)), t = std::min(py(y0), py(y1));
    out_ << "<rect x=\"" << num(l) << "\" y=\"" << num(t) << "\" width=\"" << num(std::abs(px(x1) - px(x0)))
         << "\" height=\"" << num(std::abs(py(y1) - py(y0))) << "\" fill=\"rgb(" << g << ',' << g << ",255)\"/>\n";
  }

  void marker(double x, double y) {
    out_ << "<path d=\"M" << num(px(x) - 5) << ' ' << num(py(y)) << "h10M" << num(px(x)) << ' '
         << num(py(y) - 5) << "v10\" stroke=\"red\"/>\n";
  }

  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  Range x_, y_;
  std::ostringstream out_;
};

std::string complex_plane(const std::vector<io::Table>& t, const std::string& title) {
  const auto re = t[0].values("re_h"), im = t[0].values("im_h");
  Range x, y;
  for (double v : re) x.add(v);
  for (double v : im) y.add(v);
  x.add(0.0);
  y.add(0.0);
  std::vector<std::vector<double>> ore, oim;
  for (std::size_t j = 1; j < t.size(); ++j) {
    ore.push_back(t[j].values("re"));
    oim.push_back(t[j].values("im"));
    for (double v : ore.back()) x.add(v);
    for (double v : oim.back()) y.add(v);
  }
  Canvas c(x, y, title, "Re H", "Im H");
  c.line(re, im, "black", true);
  for (std::size_t j = 0; j < ore.size(); ++j) c.dots(ore[j], oim[j], "steelblue");
  c.marker(0.0, 0.0);
  return c.finish();
}

std::string bands(const std::vector<io::Table>& t, const std::string& title) {
  Range x, y;
  x.add(0.0);
  x.add(2.0 * kPi);
  y.add(0.0);
  struct Series {
    std::vector<double> x, y;
    bool dots;
  };
  std::vector<Series> series;
  for (const auto& tab : t) {
    if (std::count(tab.columns.begin(), tab.columns.end(), "E_plus")) {
      series.push_back({tab.values("k"), tab.values("E_plus"), false});
      series.push_back({tab.values("k"), tab.values("E_minus"), false});
    } else if (std::count(tab.columns.begin(), tab.columns.end(), "k_label")) {
      auto k = tab.values("k_label");
      const auto s = tab.values("sigma");
      // Edge modes have no momentum; park them at k = pi, on the axis of the gap.
      for (auto& v : k) {
        if (!std::isfinite(v)) v = kPi;
      }
      series.push_back({k, s, true});
    } else {
      series.push_back({tab.values("k"), tab.values("sigma"), false});
    }
    for (double v : series.back().y) y.add(v);
  }
  Canvas c(x, y, title, "k", "sigma");
  for (const auto& s : series) {
    if (s.dots) c.dots(s.x, s.y, "crimson");
    else c.line(s.x, s.y, "black", false);
  }
  return c.finish();
}

std::string profile(const std::vector<io::Table>& t, const std::string& title) {
  const auto site = t[0].values("site"), mode = t[0].values("mode"), mag = t[0].values("abs");
  Range x, y;
  std::vector<double> logs(mag.size());
  double big = 0.0;
  for (double v : mag) big = std::max(big, v);
  for (std::size_t j = 0; j < mag.size(); ++j) {
    logs[j] = std::log10(std::max(mag[j], big * 1e-16));
    x.add(site[j]);
    y.add(logs[j]);
  }
  Canvas c(x, y, title, "site", "log10 |psi|");
  static const char* colours[] = {"black", "crimson", "steelblue", "darkgreen", "orange"};
  std::size_t start = 0;
  int series = 0;
  for (std::size_t j = 1; j <= mode.size(); ++j) {
    if (j == mode.size() || mode[j] != mode[start]) {
      c.line({site.begin() + static_cast<long>(start), site.begin() + static_cast<long>(j)},
             {logs.begin() + static_cast<long>(start), logs.begin() + static_cast<long>(j)},
             colours[series++ % 5], false);
      start = j;
    }
  }
  return c.finish();
}

std::string heatmap(const std::vector<io::Table>& t, const std::string& title) {
  const auto& tab = t[0];
  const bool hist = std::count(tab.columns.begin(), tab.columns.end(), "count") > 0;
  const auto xs = tab.values(hist ? "k_bin_center" : "col");
  const auto ys = tab.values(hist ? "sigma_bin_center" : "row");
  const auto zs = tab.values(hist ? "count" : "abs");
  auto distinct = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  const auto ux = distinct(xs), uy = distinct(ys);
  const double dx = ux.size() > 1 ? ux[1] - ux[0] : 1.0, dy = uy.size() > 1 ? uy[1] - uy[0] : 1.0;
  Range x, y;
  x.add(ux.front() - dx / 2);
  x.add(ux.back() + dx / 2);
  y.add(uy.front() - dy / 2);
  y.add(uy.back() + dy / 2);
  double zmax = 0.0;
  for (double z : zs) zmax = std::max(zmax, z);
  // Matrices are drawn with row 1 at the top, as matrices are usually printed.
  const bool flip = !hist;
  Canvas c(x, y, title, hist ? "k" : "column n", hist ? "sigma" : "row m");
  for (std::size_t j = 0; j < zs.size(); ++j) {
    if (zs[j] <= 0.0) continue;
    const double shade = hist ? zs[j] / zmax : std::log10(zs[j] / zmax * 1e6) / 6.0;
    const double yc = flip ? uy.front() + uy.back() - ys[j] : ys[j];
    c.cell(xs[j] - dx / 2, yc - dy / 2, xs[j] + dx / 2, yc + dy / 2, shade);
  }
  return c.finish();
}

}  // namespace

std::string render_svg(const std::string& kind, const std::vector<io::Table>& tables, const std::string& title) {
  if (tables.empty()) throw Error(ErrorCode::ConfigError, "plot needs at least one input");
  if (tables[0].rows.empty()) throw Error(ErrorCode::SchemaMismatch, "main input has no rows");
  if (kind == "complex") return complex_plane(tables, title);
  if (kind == "bands") return bands(tables, title);
  if (kind == "profile") return profile(tables, title);
  if (kind == "heatmap") return heatmap(tables, title);
  throw Error(ErrorCode::ConfigError, "unknown plot kind '" + kind + "'");
}

void plot_files(const std::string& kind, const std::vector<std::string>& inputs, const std::string& output,
                const std::string& title) {
  std::vector<io::Table> tables;
  for (const auto& in : inputs) tables.push_back(io::read_csv(in));
  const std::string svg = render_svg(kind, tables, title);
  std::ofstream out(output);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + output);
  out << svg;
}

}  // namespace nhtopo::cli
