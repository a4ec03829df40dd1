#include "nhtopo/response.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "nhtopo/parallel.hpp"

namespace nhtopo {

namespace {

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::BDCSVD<Matrix>(m).singularValues()(0);
}

bool triangular(const Matrix& h) {
  return h.isUpperTriangular(0.0) || h.isLowerTriangular(0.0);
}

ToeplitzCoefficients shifted(ToeplitzCoefficients c, double omega) {
  c.at(0) -= omega;
  return c;
}

// Key identifying the topological phase at one detuning. Close to a
// transition the curve passes near the origin and the grid is refined until
// the winding resolves.
std::pair<WindingState, int> phase_at(const LatticeParams& p, double delta, int nk) {
  LatticeParams q = p;
  q.delta = delta;
  const ToeplitzCoefficients c = coefficients(q);
  // A chord between samples strays at most max|H''| dk^2 / 8 from the curve. Once the curve keeps
  // further than that from the origin, counting argument increments is exact; the quadrature
  // cross-check in winding() converges far too slowly this close to a transition.
  double curvature = 0.0;
  for (int l = 1; l <= c.range(); ++l) curvature += l * l * (std::abs(c[l]) + std::abs(c[-l]));
  for (int grid = nk; grid <= (1 << 22); grid *= 2) {
    const BlochSamples s = sample(c, grid);
    if (!point_gap_open(s)) return {WindingState::degenerate, 0};
    const double dk = 2.0 * kPi / grid;
    const double dist = min_distance_to_origin(s);
    if (!(dist > Tolerances{}.zero * s.max_sigma())) return {WindingState::origin_on_curve, 0};
    if (dist <= curvature * dk * dk / 8.0) continue;
    double turns = 0.0;
    for (int j = 0; j < grid; ++j) {
      const auto a = s.h[static_cast<std::size_t>(j)];
      const auto b = s.h[static_cast<std::size_t>((j + 1) % grid)];
      turns += std::arg(b / a);
    }
    return {WindingState::integer, static_cast<int>(std::lround(turns / (2.0 * kPi)))};
  }
  return {WindingState::non_integer, 0};
}

}  // namespace

Vector eigenvalues(const Matrix& h) {
  if (triangular(h)) return h.diagonal();
  Eigen::ComplexEigenSolver<Matrix> es(h, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalFailure, "complex eigensolver did not converge");
  }
  return es.eigenvalues();
}

int channel_count(const Matrix& chi, double ratio) {
  const RealVector s = Eigen::BDCSVD<Matrix>(chi).singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int n = 0;
  for (Eigen::Index j = 0; j < s.size(); ++j) {
    if (s(j) * ratio >= s(0)) ++n;
  }
  return n;
}

ResponseReport susceptibility(const Matrix& h, double omega, double gamma) {
  const auto n = h.rows();
  if (n == 0 || h.cols() != n) throw Error(ErrorCode::InvalidParameters, "H must be square and non-empty");
  if (!(gamma >= 0.0)) throw Error(ErrorCode::InvalidParameters, "probe coupling must be non-negative");
  const Matrix a = Matrix::Identity(n, n) * omega - h;
  Eigen::PartialPivLU<Matrix> lu(a);
  const double anorm = spectral_norm(a);
  const double pivot_floor = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * anorm;
  const auto pivots = lu.matrixLU().diagonal();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(pivots(i)) <= pivot_floor) {
      std::ostringstream os;
      os << "omega = " << omega << " hits the finite-size spectrum (pivot " << std::abs(pivots(i)) << ")";
      throw Error(ErrorCode::SingularAtProbe, os.str());
    }
  }
  ResponseReport r;
  r.omega = omega;
  r.gamma = gamma;
  const cplx i{0.0, 1.0};
  r.chi = -i * lu.inverse();
  r.s_matrix = Matrix::Identity(n, n) + gamma * r.chi;

  const double chi_norm = spectral_norm(r.chi);
  r.residual = spectral_norm(a * (i * r.chi) - Matrix::Identity(n, n)) / (anorm * chi_norm);

  r.forward_gain = std::norm(r.chi(n - 1, 0));
  r.reverse_gain = std::norm(r.chi(0, n - 1));
  r.s_forward_gain = std::norm(r.s_matrix(n - 1, 0));
  r.s_reverse_gain = std::norm(r.s_matrix(0, n - 1));

  const Eigen::MatrixXd mag = r.chi.cwiseAbs();
  const double big = mag.maxCoeff();
  double asym = 0.0;
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index q = m + 1; q < n; ++q) asym = std::max(asym, std::abs(mag(m, q) - mag(q, m)));
  }
  r.nonreciprocity = big > 0.0 ? asym / big : 0.0;
  r.channels = channel_count(r.chi);

  const StabilityReport st = stability(h);
  r.stable = st.stable;
  r.max_im_eigenvalue = st.max_im;
  return r;
}

Vector steady_state(const ResponseReport& r, const Vector& input) {
  if (input.size() != r.chi.cols()) throw Error(ErrorCode::InvalidParameters, "input length mismatch");
  return -std::sqrt(r.gamma) * (r.chi * input);
}

Vector drive_site(const ResponseReport& r, int site) {
  if (site < 1 || site > r.chi.cols()) throw Error(ErrorCode::InvalidParameters, "site out of range");
  Vector in = Vector::Zero(r.chi.cols());
  in(site - 1) = 1.0;
  return steady_state(r, in);
}

ZsmDecomposition zsm_decomposition(const Matrix& h, double omega, double gap) {
  const auto n = h.rows();
  const Matrix a = Matrix::Identity(n, n) * omega - h;
  const SvdResult s = svd(a);
  ZsmDecomposition d;
  d.zsm = detect_zsm(s, gap);
  if (d.zsm.count == 0) {
    throw Error(ErrorCode::NotApplicable, "no zero singular modes: the truncation is meaningless");
  }
  const cplx i{0.0, 1.0};
  d.chi_full = susceptibility(h, omega).chi;
  d.chi_truncated = Matrix::Zero(n, n);
  for (int j = 0; j < d.zsm.count; ++j) {
    d.chi_truncated += (-i / s.sigma(j)) * s.v.col(j) * s.u.col(j).adjoint();
  }
  d.terms = d.zsm.count;
  d.residual = spectral_norm(d.chi_full - d.chi_truncated) / spectral_norm(d.chi_full);
  return d;
}

ZsmDecomposition zsm_decomposition(const ToeplitzCoefficients& c, int n, double omega) {
  const ToeplitzCoefficients cs = shifted(c, omega);
  const BlochSamples samples = sample(cs, std::max(default_grid_size(n), min_grid_size(c.range())));
  return zsm_decomposition(build_obc(c, n).matrix, omega, nh_gap(samples));
}

GainScaling gain_scaling(const LatticeParams& p, double omega, const std::vector<int>& sizes, double gamma) {
  const ToeplitzCoefficients c = coefficients(p);
  GainScaling g;
  g.points.resize(sizes.size());
  parallel_for(sizes.size(), [&](std::size_t j) {
    GainPoint& pt = g.points[j];
    pt.n = sizes[j];
    const Matrix h = build_obc(c, pt.n).matrix;
    const StabilityReport st = stability(h);
    pt.stable = st.stable;
    if (!pt.stable) return;
    const ResponseReport r = susceptibility(h, omega, gamma);
    pt.forward_gain = r.forward_gain;
    pt.reverse_gain = r.reverse_gain;
  });
  // Least-squares slope of log gain against N; zero gains (exactly
  // unidirectional chains) carry no slope information and are skipped.
  auto slope = [&](auto gain, int* used) {
    double sx = 0, sxx = 0, sy = 0, sxy = 0;
    int m = 0;
    for (const auto& pt : g.points) {
      const double v = gain(pt);
      if (!pt.stable || !(v > 0.0)) continue;
      const double x = pt.n, y = std::log(v);
      sx += x;
      sxx += x * x;
      sy += y;
      sxy += x * y;
      ++m;
    }
    if (used) *used = m;
    return m >= 2 ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;
  };
  g.forward_slope = slope([](const GainPoint& pt) { return pt.forward_gain; }, &g.fitted);
  g.reverse_slope = slope([](const GainPoint& pt) { return pt.reverse_gain; }, nullptr);
  return g;
}

const char* to_string(StabilityClass s) noexcept {
  return s == StabilityClass::stable ? "stable" : "absolute_instability";
}

StabilityReport stability(const Matrix& h) {
  StabilityReport r;
  const Vector ev = eigenvalues(h);
  r.max_im = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < ev.size(); ++j) r.max_im = std::max(r.max_im, ev(j).imag());
  r.stable = r.max_im < 0.0;
  r.classification = r.stable ? StabilityClass::stable : StabilityClass::absolute_instability;
  r.pbc_max_im = std::numeric_limits<double>::quiet_NaN();
  return r;
}

StabilityReport stability(const ToeplitzCoefficients& c, int n) {
  StabilityReport r = stability(build_obc(c, n).matrix);
  const int nk = 4096;
  r.pbc_max_im = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < nk; ++j) r.pbc_max_im = std::max(r.pbc_max_im, bloch(c, 2.0 * kPi * j / nk).imag());
  r.convective = r.stable && r.pbc_max_im > 0.0;
  return r;
}

std::vector<cplx> chain_eigenvalues(const LatticeParams& p, int n) {
  p.validate();
  if (p.range != 1) throw Error(ErrorCode::InvalidParameters, "closed form needs L = 1");
  if (p.lambda[0].imag() != 0.0) throw Error(ErrorCode::InvalidParameters, "closed form needs real Lambda");
  const double lam = p.lambda[0].real();
  const double coop = p.cooperativity[0];
  const cplx i{0.0, 1.0};
  const cplx root = std::sqrt(cplx{coop * coop - lam * lam, 2.0 * coop * lam * flux_phase(p.theta[0]).real()});
  std::vector<cplx> out;
  for (int m = 1; m <= n; ++m) out.push_back(-p.delta - i * (1.0 - root * std::cos(m * kPi / (n + 1))));
  return out;
}

double locate_transition(const LatticeParams& p, double lo, double hi, double resolution, int nk) {
  const auto left = phase_at(p, lo, nk);
  if (left == phase_at(p, hi, nk)) {
    throw Error(ErrorCode::InvalidParameters, "no change of winding inside the bracket");
  }
  while (std::abs(hi - lo) > resolution) {
    const double mid = 0.5 * (lo + hi);
    const auto here = phase_at(p, mid, nk);
    if (here.first == WindingState::origin_on_curve) return mid;
    if (here == left) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

DetuningSweep detuning_sweep(const LatticeParams& p, const std::vector<double>& deltas,
                             const std::vector<int>& sizes, double omega, double resolution, int nk) {
  if (sizes.empty()) throw Error(ErrorCode::InvalidParameters, "need at least one system size");
  DetuningSweep out;
  out.rows.resize(deltas.size());
  const int n_max = *std::max_element(sizes.begin(), sizes.end());
  parallel_for(deltas.size(), [&](std::size_t j) {
    DetuningRow& row = out.rows[j];
    LatticeParams q = p;
    q.delta = deltas[j];
    row.delta = q.delta;
    const ToeplitzCoefficients c = coefficients(q);
    const auto phase = phase_at(p, q.delta, nk);
    row.state = phase.first;
    row.winding = phase.second;
    row.nh_gap = min_distance_to_origin(sample(c, nk));
    row.gain_slope = gain_scaling(q, omega, sizes).forward_slope;
    const ToeplitzCoefficients cs = shifted(c, omega);
    const TopologyReport ts = analyze(cs, nk);
    if (ts.point_gap_open && ts.nh_gap > 0.0) {
      Matrix a = build_obc(cs, n_max).matrix;
      try {
        row.zsm_count = detect_zsm(svd(a), ts.nh_gap).count;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::AmbiguousSeparation) throw;
      }
    } else {
      row.zsm_count = 0;
    }
  });

  const double scale = coefficients(p).max_abs();
  for (std::size_t j = 0; j + 1 < out.rows.size(); ++j) {
    const auto& a = out.rows[j];
    const auto& b = out.rows[j + 1];
    if (a.state == b.state && a.winding == b.winding) continue;
    if (a.state == WindingState::origin_on_curve || b.state == WindingState::origin_on_curve) continue;
    const double at = locate_transition(p, a.delta, b.delta, resolution, nk);
    out.transitions.push_back(at);
    LatticeParams q = p;
    q.delta = at;
    const double gap = min_distance_to_origin(sample(coefficients(q), nk));
    if (gap > resolution + 1e-9 * scale) out.consistent = false;
  }
  return out;
}

}  // namespace nhtopo
