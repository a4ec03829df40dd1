#pragma once

// Singular value decomposition of finite lattice Hamiltonians, zero singular
// mode detection, the closed-form Hatano-Nelson zero modes at the exceptional
// point, momentum labelling and the (contrasting) eigendecomposition.

#include <optional>
#include <vector>

#include "nhtopo/bloch.hpp"
#include "nhtopo/model.hpp"

namespace nhtopo {

/// H = U diag(sigma) V^dag with sigma ascending. Column j of v (u) is the
/// right (left) singular vector; the first significant component of each
/// v_j is real and positive, and u_j carries the same phase.
struct SvdResult {
  RealVector sigma;
  Matrix u;
  Matrix v;

  int size() const noexcept { return static_cast<int>(sigma.size()); }
};

SvdResult svd(const Matrix& h);
inline SvdResult svd(const LatticeHamiltonian& h) { return svd(h.matrix); }

/// Smallest singular value computed as 1 / sigma_max(H^-1) with the inverse
/// from partial-pivot LU. Stays accurate far below eps * ||H||, where the
/// dense SVD only returns rounding noise. Returns 0 for an exactly singular H.
double smallest_singular_value(const Matrix& h);

enum class Edge { left, right };

const char* to_string(Edge e) noexcept;

struct Localization {
  Edge edge = Edge::left;
  double rate = 0.0;  // fitted |d log|psi_m| / dm| per site
};

/// Least-squares fit of log|psi_m| over the inner 80% of sites, ignoring
/// components below 1e-12 of the maximum. Edge is the side of the largest
/// component.
Localization fit_localization(const Vector& psi);

/// Fraction of |psi|^2 in the outer ceil(N/5) sites of the heavier end.
double edge_weight_fraction(const Vector& psi);
double inverse_participation_ratio(const Vector& psi);

struct ZeroMode {
  int index = 0;  // position in SvdResult (ascending)
  double sigma = 0.0;
  Localization right;  // right singular vector v_j
  Localization left;   // left singular vector u_j
};

struct ZsmReport {
  int count = 0;
  std::vector<double> zsv;
  std::vector<ZeroMode> modes;
  double threshold = 0.0;
  double gap_ratio = 0.0;  // largest ZSV / smallest bulk singular value
};

/// Counts sigma_j < gap/2. Throws AmbiguousSeparation when some sigma_j lies
/// in [gap/2, gap).
ZsmReport detect_zsm(const SvdResult& r, double gap);
/// Counts sigma_j < threshold, without the ambiguity check.
ZsmReport classify_zsm(const SvdResult& r, double threshold);

struct HatanoNelsonZeroModes {
  Vector v0;  // right zero mode
  Vector u0;  // left zero mode
  cplx eta;
  bool mirrored = false;  // true when built from mu_{-1} = 0
};

/// Closed-form zero singular modes of the L = 1 model at the exceptional
/// point mu_{+1} = 0: v0[m] = n (-eta)^(m-1), u0[m] = n (-conj eta)^(N-m),
/// eta = mu_{-1}/mu_0. The mirrored case mu_{-1} = 0 is handled by site
/// reversal.
HatanoNelsonZeroModes analytic_hn_zsm(const ToeplitzCoefficients& c, int n,
                                      const Tolerances& tol = {});

struct MomentumLabel {
  double k = 0.0;  // NaN for edge modes
  double sigma = 0.0;
  bool edge_mode = false;
};

/// Labels each singular value by the quasi-momentum of the dominant Fourier
/// component of its right singular vector. The `zsm_count` smallest values
/// are edge modes. Bulk labels form a one-to-one map onto the grid 2 pi q / N.
std::vector<MomentumLabel> momentum_label(const SvdResult& r, int zsm_count = 0);

struct EigenResult {
  Vector values;
  Matrix right;  // columns, unit norm
  Matrix left;   // columns: eigenvectors of H^dag paired with conj(values)
  RealVector ipr_right, ipr_left;
  RealVector edge_right, edge_left;
  double condition = 1.0;  // of the right eigenvector matrix
  bool defective_warning = false;
};

EigenResult eigendecomposition(const Matrix& h);
inline EigenResult eigendecomposition(const LatticeHamiltonian& h) {
  return eigendecomposition(h.matrix);
}

/// Eigenvalues of the L = 1 OBC chain:
/// mu_0 + 2 sqrt(mu_1 mu_-1) cos(m pi / (N+1)), m = 1..N.
std::vector<cplx> tridiagonal_toeplitz_eigenvalues(const ToeplitzCoefficients& c, int n);

}  // namespace nhtopo
