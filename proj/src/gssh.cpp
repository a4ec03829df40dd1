#include "nhtopo/gssh.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace nhtopo {

Matrix doubled(const Matrix& h) {
  const auto n = h.rows();
  Matrix out = Matrix::Zero(2 * n, 2 * n);
  out.topRightCorner(n, n) = h.adjoint();
  out.bottomLeftCorner(n, n) = h;
  return out;
}

Eigen::Matrix2cd gssh_bloch(const ToeplitzCoefficients& c, double k) {
  const cplx hk = bloch(c, k);
  Eigen::Matrix2cd m;
  m << cplx{}, std::conj(hk), hk, cplx{};
  return m;
}

GsshBands gssh_bands(const ToeplitzCoefficients& c, int nk) {
  if (nk < 1) throw Error(ErrorCode::InvalidParameters, "N_k must be positive");
  GsshBands b;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es;
  for (int j = 0; j < nk; ++j) {
    const double k = 2.0 * kPi * j / nk;
    es.compute(gssh_bloch(c, k));
    b.k.push_back(k);
    b.e_minus.push_back(es.eigenvalues()(0));
    b.e_plus.push_back(es.eigenvalues()(1));
    b.psi_minus.push_back(es.eigenvectors().col(0));
    b.psi_plus.push_back(es.eigenvectors().col(1));
  }
  return b;
}

ZakReport zak_phases(const ToeplitzCoefficients& c, int nk, const Tolerances& tol) {
  const GsshBands b = gssh_bands(c, nk);
  double smax = 0.0;
  for (double e : b.e_plus) smax = std::max(smax, e);
  for (int j = 0; j < nk; ++j) {
    if (!(b.e_plus[static_cast<std::size_t>(j)] > tol.zero * smax)) {
      std::ostringstream os;
      os << "|H(k)| vanishes at k = " << b.k[static_cast<std::size_t>(j)] << "; Zak phase undefined";
      throw Error(ErrorCode::OriginOnCurve, os.str());
    }
  }
  ZakReport z;
  double pair = 0.0;
  for (int j = 0; j < nk; ++j) {
    const auto& p = b.psi_plus[static_cast<std::size_t>(j)];
    const auto& q = b.psi_plus[static_cast<std::size_t>((j + 1) % nk)];
    const cplx la = std::conj(p(0) / std::abs(p(0))) * (q(0) / std::abs(q(0)));
    const cplx lb = std::conj(p(1) / std::abs(p(1))) * (q(1) / std::abs(q(1)));
    z.zak_a += 0.5 * std::arg(la);
    z.zak_b += 0.5 * std::arg(lb);
    pair += 0.5 * std::arg(lb * std::conj(la));
  }
  z.zak_a = std::remainder(z.zak_a, 2.0 * kPi);
  z.zak_b = std::remainder(z.zak_b, 2.0 * kPi);
  z.difference = pair;
  z.invariant = static_cast<int>(std::lround(pair / kPi));
  return z;
}

int zak_invariant(const ToeplitzCoefficients& c, int nk, const Tolerances& tol) {
  return zak_phases(c, nk, tol).invariant;
}

}  // namespace nhtopo
