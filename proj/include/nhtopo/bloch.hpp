#pragma once

// PBC band analysis: sampling of H(k), winding about the origin, NH gap,
// point-gap detection, normality and reciprocity diagnostics.

#include <vector>

#include "nhtopo/model.hpp"

namespace nhtopo {

/// Relative tolerances shared by the analysis routines.
struct Tolerances {
  double zero = 1e-9;   // origin-on-curve / zero singular value
  double area = 1e-8;   // |area| / max sigma^2 for an open point gap
  double norm = 1e-9;   // normality residuals
  double rec = 1e-8;    // reciprocity asymmetry / max sigma
};

struct BlochSamples {
  ToeplitzCoefficients coeffs;
  std::vector<double> k;      // uniform grid on [0, 2pi)
  std::vector<cplx> h;        // H(k)
  std::vector<cplx> dh;       // dH/dk
  std::vector<double> sigma;  // |H(k)|
  std::vector<double> phi;    // continuous lift of Arg H(k)
  std::vector<bool> phase_reliable;

  int size() const noexcept { return static_cast<int>(k.size()); }
  double min_sigma() const;
  double max_sigma() const;
};

/// Smallest grid accepted by `sample` for coupling range L.
int min_grid_size(int range) noexcept;
/// Default k-grid for a lattice of N sites.
int default_grid_size(int n_sites) noexcept;

BlochSamples sample(const ToeplitzCoefficients& c, int nk, const Tolerances& tol = {});

/// Winding number of H(k) about the origin. Throws OriginOnCurve when the
/// band touches the origin and NonIntegerWinding when the grid is too coarse
/// for the phase steps to be resolved.
int winding(const BlochSamples& s, const Tolerances& tol = {});

/// Signed shoelace area of the sampled curve (negative when clockwise).
double enclosed_area(const BlochSamples& s);
bool point_gap_open(const BlochSamples& s, const Tolerances& tol = {});

/// Delta = min_k |H(k)|, refined by golden-section search around every local
/// minimum of the grid. Throws DegenerateSpectrum if no point gap is open.
double nh_gap(const BlochSamples& s, const Tolerances& tol = {});
/// Same minimisation without the point-gap precondition.
double min_distance_to_origin(const BlochSamples& s);

struct NormalityReport {
  bool normal = false;
  double modulus_residual = 0.0;     // |mu_l||mu_l'| - |mu_-l||mu_-l'|
  double phase_residual = 0.0;       // phase-sum mismatch, radians
  double product_residual = 0.0;     // mu_l^* mu_l' - mu_-l mu_-l'^*
  double commutator_residual = 0.0;  // ||[H,H^dag]|| / ||H||^2 on a finite OBC matrix
};

NormalityReport normality(const ToeplitzCoefficients& c, const Tolerances& tol = {});

struct ReciprocityReport {
  bool reciprocal = false;
  double k0 = 0.0;          // best symmetry centre
  double asymmetry = 0.0;   // max_k |H(k0+k) - H(k0-k)| / max sigma at k0
};

/// Searches grid and half-grid centres k0 for H(k0+k) = H(k0-k).
ReciprocityReport reciprocity(const BlochSamples& s, const Tolerances& tol = {});

enum class WindingState { integer, degenerate, origin_on_curve, non_integer };

const char* to_string(WindingState s) noexcept;

struct TopologyReport {
  WindingState state = WindingState::degenerate;
  int winding = 0;            // meaningful only for WindingState::integer
  double nh_gap = 0.0;        // zero unless a point gap is open
  double enclosed_area = 0.0;
  bool point_gap_open = false;
  bool normal = false;
  bool reciprocal = false;
  double k0 = 0.0;
  NormalityReport normality_detail;
  ReciprocityReport reciprocity_detail;

  bool topological() const noexcept { return state == WindingState::integer && winding != 0; }
};

TopologyReport analyze(const ToeplitzCoefficients& c, int nk, const Tolerances& tol = {});

}  // namespace nhtopo
