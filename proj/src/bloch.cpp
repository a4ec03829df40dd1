#include "nhtopo/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nhtopo {

namespace {

double wrap_to_pi(double x) {
  x = std::remainder(x, 2.0 * kPi);
  return x;
}

// Golden-section minimisation of |H(k)| on [a, b].
double golden_min(const ToeplitzCoefficients& c, double a, double b) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - r * (b - a);
  double x2 = a + r * (b - a);
  double f1 = std::abs(bloch(c, x1));
  double f2 = std::abs(bloch(c, x2));
  for (int it = 0; it < 200 && (b - a) > 1e-14; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = std::abs(bloch(c, x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = std::abs(bloch(c, x2));
    }
  }
  return std::min(f1, f2);
}

}  // namespace

double BlochSamples::min_sigma() const {
  return sigma.empty() ? 0.0 : *std::min_element(sigma.begin(), sigma.end());
}

double BlochSamples::max_sigma() const {
  return sigma.empty() ? 0.0 : *std::max_element(sigma.begin(), sigma.end());
}

int min_grid_size(int range) noexcept { return std::max(64, 8 * (2 * range + 1)); }

int default_grid_size(int n_sites) noexcept { return std::max(1024, 32 * n_sites); }

BlochSamples sample(const ToeplitzCoefficients& c, int nk, const Tolerances& tol) {
  if (nk < min_grid_size(c.range())) {
    std::ostringstream os;
    os << "N_k=" << nk << " below minimum " << min_grid_size(c.range()) << " for L=" << c.range();
    throw Error(ErrorCode::InvalidParameters, os.str());
  }
  BlochSamples s;
  s.coeffs = c;
  const auto n = static_cast<std::size_t>(nk);
  s.k.resize(n);
  s.h.resize(n);
  s.dh.resize(n);
  s.sigma.resize(n);
  s.phi.resize(n);
  s.phase_reliable.assign(n, true);
  const double dk = 2.0 * kPi / nk;
  for (std::size_t j = 0; j < n; ++j) {
    s.k[j] = dk * static_cast<double>(j);
    s.h[j] = bloch(c, s.k[j]);
    s.dh[j] = bloch_derivative(c, s.k[j]);
    s.sigma[j] = std::abs(s.h[j]);
  }
  const double cutoff = tol.zero * s.max_sigma();
  s.phi[0] = std::arg(s.h[0]);
  for (std::size_t j = 1; j < n; ++j) {
    s.phi[j] = s.phi[j - 1] + wrap_to_pi(std::arg(s.h[j]) - std::arg(s.h[j - 1]));
  }
  for (std::size_t j = 0; j < n; ++j) s.phase_reliable[j] = s.sigma[j] >= cutoff;
  return s;
}

int winding(const BlochSamples& s, const Tolerances& tol) {
  const int n = s.size();
  if (n == 0) throw Error(ErrorCode::InvalidParameters, "empty samples");
  const double smin = s.min_sigma();
  const double smax = s.max_sigma();
  if (!(smin > tol.zero * smax)) {
    std::ostringstream os;
    os << "min |H(k)| = " << smin << " (max " << smax << "): band touches the origin";
    throw Error(ErrorCode::OriginOnCurve, os.str());
  }
  // Phase route: continuous lift closed by the wrap step.
  const double closing = wrap_to_pi(std::arg(s.h.front()) - std::arg(s.h.back()));
  const double total = s.phi.back() - s.phi.front() + closing;
  const long nu = std::lround(total / (2.0 * kPi));

  // Quadrature route: (1/2 pi i) * integral of H'/H, trapezoidal rule.
  cplx acc{};
  for (int j = 0; j < n; ++j) acc += s.dh[static_cast<std::size_t>(j)] / s.h[static_cast<std::size_t>(j)];
  const double raw = (acc / cplx{0.0, static_cast<double>(n)}).real();

  if (std::abs(raw - static_cast<double>(nu)) > 1e-6) {
    std::ostringstream os;
    os << "phase winding " << nu << " vs quadrature " << raw << "; increase N_k (" << n << ")";
    throw Error(ErrorCode::NonIntegerWinding, os.str());
  }
  return static_cast<int>(nu);
}

double enclosed_area(const BlochSamples& s) {
  const std::size_t n = s.h.size();
  double twice = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const cplx& a = s.h[j];
    const cplx& b = s.h[(j + 1) % n];
    twice += a.real() * b.imag() - b.real() * a.imag();
  }
  return 0.5 * twice;
}

bool point_gap_open(const BlochSamples& s, const Tolerances& tol) {
  const double smax = s.max_sigma();
  return std::abs(enclosed_area(s)) > tol.area * smax * smax;
}

double min_distance_to_origin(const BlochSamples& s) {
  const int n = s.size();
  if (n == 0) return 0.0;
  const double dk = 2.0 * kPi / n;
  double best = s.min_sigma();
  for (int j = 0; j < n; ++j) {
    const double here = s.sigma[static_cast<std::size_t>(j)];
    const double prev = s.sigma[static_cast<std::size_t>((j + n - 1) % n)];
    const double next = s.sigma[static_cast<std::size_t>((j + 1) % n)];
    if (here <= prev && here <= next) {
      best = std::min(best, golden_min(s.coeffs, s.k[static_cast<std::size_t>(j)] - dk,
                                       s.k[static_cast<std::size_t>(j)] + dk));
    }
  }
  return best;
}

double nh_gap(const BlochSamples& s, const Tolerances& tol) {
  if (!point_gap_open(s, tol)) {
    throw Error(ErrorCode::DegenerateSpectrum, "spectrum has no interior; the NH gap is undefined");
  }
  return min_distance_to_origin(s);
}

NormalityReport normality(const ToeplitzCoefficients& c, const Tolerances& tol) {
  NormalityReport r;
  const int range = c.range();
  const double scale = std::max(c.max_abs() * c.max_abs(), std::numeric_limits<double>::min());
  const double tiny = std::sqrt(tol.norm) * c.max_abs();
  for (int l = 1; l <= range; ++l) {
    for (int lp = 1; lp <= range; ++lp) {
      const cplx a = c[l], b = c[lp], am = c[-l], bm = c[-lp];
      r.product_residual = std::max(
          r.product_residual, std::abs(std::conj(a) * b - am * std::conj(bm)) / scale);
      r.modulus_residual = std::max(
          r.modulus_residual, std::abs(std::abs(a) * std::abs(b) - std::abs(am) * std::abs(bm)) / scale);
      if (std::abs(a) > tiny && std::abs(b) > tiny && std::abs(am) > tiny && std::abs(bm) > tiny) {
        const double mismatch = wrap_to_pi(std::arg(a) + std::arg(am) - std::arg(b) - std::arg(bm));
        r.phase_residual = std::max(r.phase_residual, std::abs(mismatch));
      }
    }
  }
  r.normal = r.product_residual < tol.norm;

  const int n = std::max(4 * range + 4, 12);
  const Matrix h = build_obc(c, n).matrix;
  const Matrix comm = h * h.adjoint() - h.adjoint() * h;
  const double hn = Eigen::BDCSVD<Matrix>(h).singularValues()(0);
  const double cn = Eigen::BDCSVD<Matrix>(comm).singularValues()(0);
  r.commutator_residual = hn > 0.0 ? cn / (hn * hn) : 0.0;
  return r;
}

ReciprocityReport reciprocity(const BlochSamples& s, const Tolerances& tol) {
  const int n = s.size();
  if (n == 0 || n % 2 != 0) {
    throw Error(ErrorCode::InvalidParameters, "reciprocity needs an even, non-empty grid");
  }
  double best = std::numeric_limits<double>::infinity();
  int best_c = 0;
  for (int centre = 0; centre < 2 * n; ++centre) {
    double worst = 0.0;
    for (int j = 0; j < n && worst < best; ++j) {
      const int mirror = ((centre - j) % n + n) % n;
      worst = std::max(worst, std::abs(s.h[static_cast<std::size_t>(j)] - s.h[static_cast<std::size_t>(mirror)]));
    }
    if (worst < best) {
      best = worst;
      best_c = centre;
    }
  }
  ReciprocityReport r;
  const double smax = std::max(s.max_sigma(), std::numeric_limits<double>::min());
  r.asymmetry = best / smax;
  r.k0 = std::fmod(0.5 * best_c * (2.0 * kPi / n), 2.0 * kPi);
  r.reciprocal = r.asymmetry < tol.rec;
  return r;
}

const char* to_string(WindingState s) noexcept {
  switch (s) {
    case WindingState::integer: return "integer";
    case WindingState::degenerate: return "degenerate";
    case WindingState::origin_on_curve: return "origin_on_curve";
    case WindingState::non_integer: return "non_integer";
  }
  return "unknown";
}

TopologyReport analyze(const ToeplitzCoefficients& c, int nk, const Tolerances& tol) {
  if (nk % 2 != 0) ++nk;
  const BlochSamples s = sample(c, nk, tol);
  TopologyReport r;
  r.enclosed_area = enclosed_area(s);
  r.point_gap_open = point_gap_open(s, tol);
  r.normality_detail = normality(c, tol);
  r.normal = r.normality_detail.normal;
  r.reciprocity_detail = reciprocity(s, tol);
  r.reciprocal = r.reciprocity_detail.reciprocal;
  r.k0 = r.reciprocity_detail.k0;
  if (!r.point_gap_open) {
    r.state = WindingState::degenerate;
    return r;
  }
  r.nh_gap = min_distance_to_origin(s);
  try {
    r.winding = winding(s, tol);
    r.state = WindingState::integer;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::OriginOnCurve) {
      r.state = WindingState::origin_on_curve;
    } else if (e.code() == ErrorCode::NonIntegerWinding) {
      r.state = WindingState::non_integer;
    } else {
      throw;
    }
  }
  return r;
}

}  // namespace nhtopo
