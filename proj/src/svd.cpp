#include "nhtopo/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <tuple>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace nhtopo {

namespace {

// Phase that makes the first significant component of x real positive.
cplx phase_fix(const Vector& x) {
  const double big = x.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double a = std::abs(x(i));
    if (a > 1e-8 * big) return std::conj(x(i)) / a;
  }
  return cplx{1.0, 0.0};
}

bool is_triangular(const Matrix& h) {
  bool upper = true, lower = true;
  for (Eigen::Index c = 0; c < h.cols(); ++c) {
    for (Eigen::Index r = 0; r < h.rows(); ++r) {
      if (r > c && h(r, c) != cplx{}) upper = false;
      if (r < c && h(r, c) != cplx{}) lower = false;
    }
  }
  return upper || lower;
}

Vector eigenvalues_only(const Matrix& h) {
  if (is_triangular(h)) return h.diagonal();
  Eigen::ComplexEigenSolver<Matrix> es(h, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalFailure, "complex eigensolver did not converge");
  }
  return es.eigenvalues();
}

// Inverse iteration at a slightly displaced shift. The Schur back-substitution
// in Eigen divides by eigenvalue differences and returns NaN columns for the
// strongly non-normal matrices met here; a few LU solves do not.
Vector inverse_iteration(const Matrix& h, cplx lambda, double scale) {
  const auto n = h.rows();
  Vector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = cplx{1.0 + 0.1 * std::sin(1.0 + i), 0.05 * std::cos(2.0 * i)};
  x.normalize();
  for (double offset : {1e-10, 1e-8, 1e-6}) {
    const cplx shift = lambda + cplx{offset, offset} * scale;
    Eigen::PartialPivLU<Matrix> lu(h - shift * Matrix::Identity(n, n));
    Vector y = x;
    Vector good;
    for (int it = 0; it < 3; ++it) {
      y = lu.solve(y);
      // Rescale by the largest entry first: near a Jordan block one solve can overflow norm().
      // A later solve may still overflow; the previous iterate is then already converged.
      if (!y.allFinite()) break;
      const double big = y.cwiseAbs().maxCoeff();
      if (big <= 0.0) break;
      y *= 1.0 / big;
      y.normalize();
      if (!y.allFinite()) break;
      good = y;
    }
    if (good.size() == n) return good;
  }
  // Long Jordan chains overflow every shifted solve. The null vector of h - lambda is still well defined.
  Eigen::BDCSVD<Matrix> dec(h - lambda * Matrix::Identity(n, n), Eigen::ComputeFullV);
  if (dec.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalFailure, "inverse iteration failed to produce an eigenvector");
  }
  return dec.matrixV().col(n - 1);
}

}  // namespace

SvdResult svd(const Matrix& h) {
  if (!h.allFinite()) throw Error(ErrorCode::InvalidParameters, "matrix has non-finite entries");
  Eigen::BDCSVD<Matrix> dec(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (dec.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalFailure, "SVD did not converge");
  }
  const Eigen::Index n = dec.singularValues().size();
  SvdResult r;
  r.sigma.resize(n);
  r.u.resize(h.rows(), n);
  r.v.resize(h.cols(), n);
  // Eigen orders descending; flip to ascending and fix phases.
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = n - 1 - j;
    r.sigma(j) = dec.singularValues()(src);
    const cplx ph = phase_fix(dec.matrixV().col(src));
    r.v.col(j) = dec.matrixV().col(src) * ph;
    r.u.col(j) = dec.matrixU().col(src) * ph;
  }
  return r;
}

double smallest_singular_value(const Matrix& h) {
  Eigen::PartialPivLU<Matrix> lu(h);
  const auto diag = lu.matrixLU().diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (diag(i) == cplx{}) return 0.0;
  }
  const Matrix inv = lu.inverse();
  Eigen::BDCSVD<Matrix> dec(inv);
  return 1.0 / dec.singularValues()(0);
}

const char* to_string(Edge e) noexcept { return e == Edge::left ? "left" : "right"; }

Localization fit_localization(const Vector& psi) {
  const auto n = static_cast<int>(psi.size());
  Localization out;
  if (n == 0) return out;
  Eigen::Index imax = 0;
  const double big = psi.cwiseAbs().maxCoeff(&imax);
  out.edge = (2 * imax < n - 1) ? Edge::left : Edge::right;
  if (n < 3 || big == 0.0) return out;

  const int skip = n / 10;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (int m = skip; m < n - skip; ++m) {
    const double a = std::abs(psi(m));
    if (a < 1e-12 * big) continue;
    const double x = m, y = std::log(a);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) return out;
  const double denom = count * sxx - sx * sx;
  if (denom == 0.0) return out;
  out.rate = std::abs((count * sxy - sx * sy) / denom);
  return out;
}

double edge_weight_fraction(const Vector& psi) {
  const auto n = static_cast<Eigen::Index>(psi.size());
  if (n == 0) return 0.0;
  const double total = psi.squaredNorm();
  if (total == 0.0) return 0.0;
  const Eigen::Index w = (n + 4) / 5;
  const double head = psi.head(w).squaredNorm();
  const double tail = psi.tail(w).squaredNorm();
  return std::max(head, tail) / total;
}

double inverse_participation_ratio(const Vector& psi) {
  const double total = psi.squaredNorm();
  if (total == 0.0) return 0.0;
  double s = 0.0;
  for (Eigen::Index i = 0; i < psi.size(); ++i) s += std::norm(psi(i)) * std::norm(psi(i));
  return s / (total * total);
}

ZsmReport classify_zsm(const SvdResult& r, double threshold) {
  ZsmReport rep;
  rep.threshold = threshold;
  for (int j = 0; j < r.size(); ++j) {
    if (!(r.sigma(j) < threshold)) break;
    ZeroMode m;
    m.index = j;
    m.sigma = r.sigma(j);
    m.right = fit_localization(r.v.col(j));
    m.left = fit_localization(r.u.col(j));
    rep.modes.push_back(m);
    rep.zsv.push_back(m.sigma);
  }
  rep.count = static_cast<int>(rep.modes.size());
  if (rep.count > 0 && rep.count < r.size()) {
    rep.gap_ratio = rep.zsv.back() / r.sigma(rep.count);
  }
  return rep;
}

ZsmReport detect_zsm(const SvdResult& r, double gap) {
  if (!(gap > 0.0)) throw Error(ErrorCode::InvalidParameters, "NH gap must be positive");
  for (int j = 0; j < r.size(); ++j) {
    const double s = r.sigma(j);
    if (s >= 0.5 * gap && s < gap) {
      std::ostringstream os;
      os << "sigma_" << j << " = " << s << " lies in [Delta/2, Delta) with Delta = " << gap;
      throw Error(ErrorCode::AmbiguousSeparation, os.str());
    }
  }
  return classify_zsm(r, 0.5 * gap);
}

HatanoNelsonZeroModes analytic_hn_zsm(const ToeplitzCoefficients& c, int n, const Tolerances& tol) {
  if (c.range() != 1) {
    throw Error(ErrorCode::NotAtExceptionalPoint, "closed-form zero modes need L = 1");
  }
  if (n < 2) throw Error(ErrorCode::SizeTooSmall, "need N >= 2");
  const cplx mu0 = c[0];
  cplx forward = c[-1];  // hopping that survives at the EP
  const cplx backward = c[1];
  bool mirrored = false;
  if (std::abs(backward) > tol.zero * std::abs(forward)) {
    if (std::abs(forward) <= tol.zero * std::abs(backward)) {
      mirrored = true;
      forward = backward;
    } else {
      throw Error(ErrorCode::NotAtExceptionalPoint, "both mu_{+1} and mu_{-1} are non-zero");
    }
  }
  if (mu0 == cplx{}) throw Error(ErrorCode::InvalidParameters, "mu_0 = 0");

  const cplx eta = forward / mu0;
  const double a = std::abs(eta);
  if (std::abs(a - 1.0) < 1e-9) {
    throw Error(ErrorCode::EtaUnit, "|eta| = 1: normalisation is singular at the transition");
  }
  // log of the normalisation, stable for either side of |eta| = 1.
  double log_norm;
  const double la = std::log(a);
  if (a > 1.0) {
    log_norm = 0.5 * (std::log(a * a - 1.0) - (2.0 * n * la + std::log1p(-std::exp(-2.0 * n * la))));
  } else {
    log_norm = 0.5 * (std::log1p(-a * a) - std::log1p(-std::exp(2.0 * n * la)));
  }
  const cplx unit = -eta / a;  // phase of -eta
  HatanoNelsonZeroModes z;
  z.eta = eta;
  z.mirrored = mirrored;
  z.v0.resize(n);
  z.u0.resize(n);
  for (int m = 1; m <= n; ++m) {
    z.v0(m - 1) = std::exp(log_norm + (m - 1) * la) * std::pow(unit, m - 1);
    z.u0(m - 1) = std::exp(log_norm + (n - m) * la) * std::pow(std::conj(unit), n - m);
  }
  if (mirrored) {
    z.v0 = z.v0.reverse().eval();
    z.u0 = z.u0.reverse().eval();
  }
  return z;
}

std::vector<MomentumLabel> momentum_label(const SvdResult& r, int zsm_count) {
  const int n = r.size();
  std::vector<MomentumLabel> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    out[static_cast<std::size_t>(j)].sigma = r.sigma(j);
    if (j < zsm_count) {
      out[static_cast<std::size_t>(j)].edge_mode = true;
      out[static_cast<std::size_t>(j)].k = std::numeric_limits<double>::quiet_NaN();
    }
  }
  if (zsm_count >= n) return out;

  // DFT weights |<k_q|v_j>|^2 with <m|k> = e^{i k m} / sqrt(N).
  const int rows = static_cast<int>(r.v.rows());
  Matrix fourier(rows, rows);
  for (int q = 0; q < rows; ++q) {
    for (int m = 0; m < rows; ++m) {
      fourier(q, m) = std::polar(1.0 / std::sqrt(static_cast<double>(rows)), -2.0 * kPi * q * (m + 1) / rows);
    }
  }
  const Eigen::MatrixXd weight = (fourier * r.v.rightCols(n - zsm_count)).cwiseAbs2();

  std::vector<std::tuple<double, int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(weight.size()));
  for (int j = 0; j < weight.cols(); ++j) {
    for (int q = 0; q < weight.rows(); ++q) pairs.emplace_back(weight(q, j), j, q);
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const auto& a, const auto& b) { return std::get<0>(a) > std::get<0>(b); });
  std::vector<bool> vec_done(static_cast<std::size_t>(weight.cols()), false);
  std::vector<bool> k_used(static_cast<std::size_t>(rows), false);
  int assigned = 0;
  for (const auto& [w, j, q] : pairs) {
    if (vec_done[static_cast<std::size_t>(j)] || k_used[static_cast<std::size_t>(q)]) continue;
    vec_done[static_cast<std::size_t>(j)] = true;
    k_used[static_cast<std::size_t>(q)] = true;
    out[static_cast<std::size_t>(j + zsm_count)].k = 2.0 * kPi * q / rows;
    if (++assigned == weight.cols()) break;
  }
  return out;
}

EigenResult eigendecomposition(const Matrix& h) {
  const auto n = h.rows();
  EigenResult out;
  out.values = eigenvalues_only(h);
  out.right.resize(n, n);
  out.left.resize(n, n);
  const double scale = std::max(h.cwiseAbs().maxCoeff(), 1e-300);
  const Matrix ha = h.adjoint();
  for (Eigen::Index j = 0; j < n; ++j) {
    out.right.col(j) = inverse_iteration(h, out.values(j), scale);
    out.left.col(j) = inverse_iteration(ha, std::conj(out.values(j)), scale);
  }

  out.ipr_right.resize(n);
  out.ipr_left.resize(n);
  out.edge_right.resize(n);
  out.edge_left.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.ipr_right(j) = inverse_participation_ratio(out.right.col(j));
    out.ipr_left(j) = inverse_participation_ratio(out.left.col(j));
    out.edge_right(j) = edge_weight_fraction(out.right.col(j));
    out.edge_left(j) = edge_weight_fraction(out.left.col(j));
  }
  const RealVector sv = Eigen::BDCSVD<Matrix>(out.right).singularValues();
  const double smin = sv(sv.size() - 1);
  out.condition = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  out.defective_warning = out.condition > 1e12;
  return out;
}

std::vector<cplx> tridiagonal_toeplitz_eigenvalues(const ToeplitzCoefficients& c, int n) {
  if (c.range() != 1) throw Error(ErrorCode::InvalidParameters, "needs L = 1");
  const cplx root = std::sqrt(c[1] * c[-1]);
  std::vector<cplx> out;
  for (int m = 1; m <= n; ++m) out.push_back(c[0] + 2.0 * root * std::cos(m * kPi / (n + 1)));
  return out;
}

}  // namespace nhtopo
