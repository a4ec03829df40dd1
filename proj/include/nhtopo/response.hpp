#pragma once

// Linear response of the driven array: susceptibility and scattering
// matrices, the zero-mode expansion of chi, gain scaling with system size,
// dynamical stability and detuning sweeps.

#include <vector>

#include "nhtopo/bloch.hpp"
#include "nhtopo/model.hpp"
#include "nhtopo/svd.hpp"

namespace nhtopo {

inline constexpr double kDefaultProbeCoupling = 0.2;

struct ResponseReport {
  double omega = 0.0;
  double gamma = kDefaultProbeCoupling;  // probe coupling, reduced units
  Matrix chi;       // -i (omega - H)^-1
  Matrix s_matrix;  // 1 + gamma chi
  double forward_gain = 0.0;    // |chi_{N,1}|^2
  double reverse_gain = 0.0;    // |chi_{1,N}|^2
  double s_forward_gain = 0.0;  // |S_{N,1}|^2
  double s_reverse_gain = 0.0;  // |S_{1,N}|^2
  double nonreciprocity = 0.0;  // max | |chi_mn| - |chi_nm| | / max |chi|
  double residual = 0.0;        // relative inversion residual
  int channels = 0;             // singular values of chi within 10x of the largest
  bool stable = false;
  double max_im_eigenvalue = 0.0;
};

/// chi is obtained from a partial-pivot LU of (omega - H). Throws
/// SingularAtProbe when a pivot is at rounding level, i.e. omega sits on an
/// eigenvalue of the finite system.
ResponseReport susceptibility(const Matrix& h, double omega, double gamma = kDefaultProbeCoupling);
inline ResponseReport susceptibility(const LatticeHamiltonian& h, double omega,
                                     double gamma = kDefaultProbeCoupling) {
  return susceptibility(h.matrix, omega, gamma);
}

/// Steady-state cavity amplitudes alpha = -sqrt(gamma) chi alpha_in.
Vector steady_state(const ResponseReport& r, const Vector& input);
/// Same for a unit drive on one site (1-based).
Vector drive_site(const ResponseReport& r, int site);

int channel_count(const Matrix& chi, double ratio = 10.0);

struct ZsmDecomposition {
  Matrix chi_full;
  Matrix chi_truncated;  // -i sum over zero modes of v_j u_j^dag / sigma_j
  double residual = 0.0;  // ||chi_full - chi_truncated|| / ||chi_full|| (spectral)
  int terms = 0;
  ZsmReport zsm;
};

/// Zero modes are detected in the SVD of (omega - H) against `gap`, the NH gap
/// of the shifted symbol H(k) - omega. Throws NotApplicable without zero modes.
ZsmDecomposition zsm_decomposition(const Matrix& h, double omega, double gap);
/// Convenience form that builds the OBC matrix and computes the gap itself.
ZsmDecomposition zsm_decomposition(const ToeplitzCoefficients& c, int n, double omega);

struct GainPoint {
  int n = 0;
  double forward_gain = 0.0;
  double reverse_gain = 0.0;
  bool stable = false;
};

struct GainScaling {
  std::vector<GainPoint> points;
  double forward_slope = 0.0;  // d log|chi_N1|^2 / dN over stable points
  double reverse_slope = 0.0;
  int fitted = 0;
};

GainScaling gain_scaling(const LatticeParams& p, double omega, const std::vector<int>& sizes,
                         double gamma = kDefaultProbeCoupling);

enum class StabilityClass { stable, absolute_instability };
const char* to_string(StabilityClass s) noexcept;

struct StabilityReport {
  bool stable = false;
  double max_im = 0.0;      // max Im of the OBC eigenvalues
  StabilityClass classification = StabilityClass::absolute_instability;
  double pbc_max_im = 0.0;  // max_k Im H(k); NaN when no symbol is known
  bool convective = false;  // PBC unstable while OBC stable
};

StabilityReport stability(const Matrix& h);
StabilityReport stability(const ToeplitzCoefficients& c, int n);

/// OBC eigenvalues, exact on the diagonal for triangular matrices.
Vector eigenvalues(const Matrix& h);

/// L = 1 closed form -delta - i [1 - sqrt(C^2 - Lambda^2 + 2 i C Lambda cos theta)
/// cos(m pi/(N+1))], m = 1..N, in reduced units. Needs real Lambda.
std::vector<cplx> chain_eigenvalues(const LatticeParams& p, int n);

struct DetuningRow {
  double delta = 0.0;
  WindingState state = WindingState::degenerate;
  int winding = 0;
  double nh_gap = 0.0;
  int zsm_count = -1;  // -1 when the separation is ambiguous or undefined
  double gain_slope = 0.0;
};

struct DetuningSweep {
  std::vector<DetuningRow> rows;
  std::vector<double> transitions;  // bisected detunings where the winding changes
  bool consistent = true;           // every change of winding sits on a gap closing
};

/// Runs for every detuning in `deltas`; the ZSM count uses the largest size.
/// Between neighbouring rows with different winding the transition is
/// bisected to `resolution` and the gap there must vanish.
DetuningSweep detuning_sweep(const LatticeParams& p, const std::vector<double>& deltas,
                             const std::vector<int>& sizes, double omega = 0.0,
                             double resolution = 1e-9, int nk = 1024);

/// Bisection on delta between two detunings of different winding. Returns the
/// midpoint of the final bracket.
double locate_transition(const LatticeParams& p, double lo, double hi, double resolution, int nk = 1024);

}  // namespace nhtopo
