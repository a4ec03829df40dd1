#pragma once

// Doubled Hermitian (generalised SSH) form of a non-Hermitian chain.
// Sub-lattice ordering: all A sites first, then all B sites.

#include <vector>

#include "nhtopo/bloch.hpp"
#include "nhtopo/model.hpp"

namespace nhtopo {

/// [[0, H^dag], [H, 0]]. Its spectrum is {+-sigma_j(H)}; the A block of an
/// eigenvector carries the right singular vector, the B block the left one.
Matrix doubled(const Matrix& h);
inline Matrix doubled(const LatticeHamiltonian& h) { return doubled(h.matrix); }

struct GsshBands {
  std::vector<double> k;
  std::vector<double> e_minus;
  std::vector<double> e_plus;
  // Normalised eigenvectors (A, B) of the 2x2 Bloch matrix per k.
  std::vector<Eigen::Vector2cd> psi_minus;
  std::vector<Eigen::Vector2cd> psi_plus;
};

Eigen::Matrix2cd gssh_bloch(const ToeplitzCoefficients& c, double k);
GsshBands gssh_bands(const ToeplitzCoefficients& c, int nk);

struct ZakReport {
  double zak_a = 0.0;       // Zak phase carried by sub-lattice A (right vector)
  double zak_b = 0.0;       // same for B (left vector)
  double difference = 0.0;  // zak_b - zak_a, equals pi * nu
  int invariant = 0;        // difference / pi, rounded
};

/// Wilson-loop Zak phases of the upper band. Each sub-lattice component is
/// normalised and contributes with weight 1/2; the per-link phase
/// arg(link_B * conj(link_A)) is gauge invariant, so the difference is too.
/// Throws OriginOnCurve when |H(k)| vanishes on the grid.
ZakReport zak_phases(const ToeplitzCoefficients& c, int nk, const Tolerances& tol = {});
int zak_invariant(const ToeplitzCoefficients& c, int nk, const Tolerances& tol = {});

}  // namespace nhtopo
