#include "nhtopo/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nhtopo {

cplx flux_phase(double theta) {
  const double quarter = theta / (0.5 * kPi);
  const double nearest = std::round(quarter);
  if (std::abs(quarter - nearest) < 1e-12) {
    switch (((static_cast<long>(nearest) % 4) + 4) % 4) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  return std::polar(1.0, theta);
}

void LatticeParams::validate() const {
  if (range < 1) {
    throw Error(ErrorCode::InvalidParameters, "range must be >= 1, got " + std::to_string(range));
  }
  const auto n = static_cast<std::size_t>(range);
  if (lambda.size() != n || cooperativity.size() != n || theta.size() != n) {
    std::ostringstream os;
    os << "lambda/cooperativity/theta must each have " << range << " entries (got "
       << lambda.size() << "/" << cooperativity.size() << "/" << theta.size() << ")";
    throw Error(ErrorCode::InvalidParameters, os.str());
  }
  for (double c : cooperativity) {
    if (!(c >= 0.0)) throw Error(ErrorCode::InvalidParameters, "cooperativity must be non-negative");
  }
  if (!(gamma_eff > 0.0)) {
    throw Error(ErrorCode::NonPositiveGammaEff, "gamma_eff must be > 0");
  }
}

double RawRates::gamma_eff() const {
  double sum_reservoir = 0.0;
  for (double g : reservoir) sum_reservoir += g;
  return 0.5 * (waveguide_decay - pump + 2.0 * sum_reservoir);
}

LatticeParams reduce(const RawRates& raw) {
  const std::size_t range = raw.hopping.size();
  if (range == 0 || raw.reservoir.size() != range || raw.theta.size() != range) {
    throw Error(ErrorCode::InvalidParameters, "J, Gamma and theta must have equal, non-zero length");
  }
  for (double g : raw.reservoir) {
    if (!(g >= 0.0)) throw Error(ErrorCode::InvalidParameters, "Gamma must be non-negative");
  }
  const double geff = raw.gamma_eff();
  if (!(geff > 0.0)) {
    std::ostringstream os;
    os << "gamma_eff = (gamma - kappa + 2 sum Gamma)/2 = " << geff << " <= 0";
    throw Error(ErrorCode::NonPositiveGammaEff, os.str());
  }
  LatticeParams p;
  p.range = static_cast<int>(range);
  p.gamma_eff = geff;
  p.delta = (raw.omega_drive - raw.omega_cavity) / geff;
  p.theta = raw.theta;
  for (std::size_t l = 0; l < range; ++l) {
    p.lambda.emplace_back(2.0 * raw.hopping[l] / geff, 0.0);
    p.cooperativity.push_back(raw.reservoir[l] / geff);
  }
  return p;
}

ToeplitzCoefficients::ToeplitzCoefficients(int range)
    : range_(range), mu_(static_cast<std::size_t>(2 * range + 1)) {
  if (range < 0) throw Error(ErrorCode::InvalidParameters, "negative range");
}

ToeplitzCoefficients ToeplitzCoefficients::from_list(const std::vector<cplx>& mu) {
  if (mu.empty() || mu.size() % 2 == 0) {
    throw Error(ErrorCode::InvalidParameters, "coefficient list must have odd length 2L+1");
  }
  ToeplitzCoefficients c(static_cast<int>(mu.size() / 2));
  c.mu_ = mu;
  return c;
}

cplx& ToeplitzCoefficients::at(int ell) {
  if (ell < -range_ || ell > range_) {
    throw Error(ErrorCode::InvalidParameters, "band index " + std::to_string(ell) + " out of range");
  }
  return mu_[static_cast<std::size_t>(ell + range_)];
}

double ToeplitzCoefficients::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& v : mu_) m = std::max(m, std::abs(v));
  return m;
}

ToeplitzCoefficients ToeplitzCoefficients::adjoint() const {
  ToeplitzCoefficients out(range_);
  for (int l = -range_; l <= range_; ++l) out.at(l) = std::conj((*this)[-l]);
  return out;
}

ToeplitzCoefficients coefficients(const LatticeParams& p) {
  p.validate();
  const cplx i{0.0, 1.0};
  ToeplitzCoefficients c(p.range);
  c.at(0) = cplx{-p.delta, -1.0};
  for (int l = 1; l <= p.range; ++l) {
    const auto s = static_cast<std::size_t>(l - 1);
    const double coop = p.cooperativity[s];
    const double th = p.theta[s];
    c.at(l) = 0.5 * (p.lambda[s] - i * coop * flux_phase(-th));
    c.at(-l) = 0.5 * (std::conj(p.lambda[s]) - i * coop * flux_phase(th));
  }
  return c;
}

LatticeHamiltonian build_obc(const ToeplitzCoefficients& c, int n) {
  if (n <= c.range()) {
    throw Error(ErrorCode::SizeTooSmall,
                "OBC needs N >= L+1 (N=" + std::to_string(n) + ", L=" + std::to_string(c.range()) + ")");
  }
  LatticeHamiltonian h;
  h.matrix = Matrix::Zero(n, n);
  for (int l = -c.range(); l <= c.range(); ++l) {
    const cplx mu = c[l];
    for (int m = std::max(0, -l); m < std::min(n, n - l); ++m) h.matrix(m, m + l) = mu;
  }
  return h;
}

LatticeHamiltonian build_pbc(const ToeplitzCoefficients& c, int n) {
  if (n < 2 * c.range() + 1) {
    throw Error(ErrorCode::SizeTooSmall,
                "PBC needs N >= 2L+1 (N=" + std::to_string(n) + ", L=" + std::to_string(c.range()) + ")");
  }
  LatticeHamiltonian h;
  h.boundary = Boundary::periodic;
  h.matrix = Matrix::Zero(n, n);
  for (int l = -c.range(); l <= c.range(); ++l) {
    for (int m = 0; m < n; ++m) h.matrix(m, ((m + l) % n + n) % n) = c[l];
  }
  return h;
}

cplx bloch(const ToeplitzCoefficients& c, double k) noexcept {
  cplx sum = c[0];
  for (int l = 1; l <= c.range(); ++l) {
    const cplx e = std::polar(1.0, k * l);
    sum += c[l] * e + c[-l] * std::conj(e);
  }
  return sum;
}

cplx bloch_derivative(const ToeplitzCoefficients& c, double k) noexcept {
  const cplx i{0.0, 1.0};
  cplx sum{};
  for (int l = 1; l <= c.range(); ++l) {
    const cplx e = std::polar(1.0, k * l);
    sum += i * static_cast<double>(l) * (c[l] * e - c[-l] * std::conj(e));
  }
  return sum;
}

bool is_hermitian(const ToeplitzCoefficients& c, double tol) {
  const double scale = std::max(c.max_abs(), 1e-300);
  for (int l = 0; l <= c.range(); ++l) {
    if (std::abs(c[-l] - std::conj(c[l])) > tol * scale) return false;
  }
  return true;
}

}  // namespace nhtopo
