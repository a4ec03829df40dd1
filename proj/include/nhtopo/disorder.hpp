#pragma once

// On-site decay-rate disorder and ensemble statistics of the OBC singular
// spectrum.

#include <cstdint>
#include <vector>

#include "nhtopo/bloch.hpp"
#include "nhtopo/model.hpp"
#include "nhtopo/svd.hpp"

namespace nhtopo {

enum class DisorderKind { imaginary_onsite };

struct DisorderSpec {
  DisorderKind kind = DisorderKind::imaginary_onsite;
  double w = 0.0;  // xi_j uniform on [-w, w]
  int realizations = 100;
  std::uint64_t seed = 0;
};

/// H - i diag(xi). Only the diagonal changes.
LatticeHamiltonian apply_disorder(const LatticeHamiltonian& h, const RealVector& xi);

/// Disorder vector of realization `index`. Each realization owns a
/// mt19937_64 stream seeded from (seed, index), so draws do not depend on
/// the order or thread in which realizations run.
RealVector draw_disorder(const DisorderSpec& spec, int n, int index);

struct Histogram2D {
  int k_bins = 0;
  int sigma_bins = 64;
  double sigma_max = 0.0;  // upper edge of the sigma axis
  std::vector<long> counts;  // row-major [k_bin][sigma_bin]
  long edge_modes = 0;       // zero modes carry no momentum and are counted here

  long& at(int kb, int sb) { return counts[static_cast<std::size_t>(kb * sigma_bins + sb)]; }
  long at(int kb, int sb) const { return counts[static_cast<std::size_t>(kb * sigma_bins + sb)]; }
  double k_center(int kb) const { return 2.0 * kPi * kb / k_bins; }
  double sigma_center(int sb) const { return (sb + 0.5) * sigma_max / sigma_bins; }
};

struct EnsembleStats {
  int clean_winding = 0;
  double clean_gap = 0.0;
  int clean_zsm = 0;
  Histogram2D histogram;
  std::vector<int> zsm_counts;       // per realization
  std::vector<double> min_sigma;     // per realization
  std::vector<double> thresholds;    // per realization ZSM threshold
  double zsm_survival = 0.0;         // fraction with count == |clean winding|
  double zsm_localized = 0.0;        // fraction whose zero modes stay at the clean edge
  double weyl_max_deviation = 0.0;   // max_j |sigma_j(dis) - sigma_j(clean)|
  bool weyl_holds = true;            // deviation <= w in every realization
  double mean_bulk_ipr = 0.0;        // over bulk right singular vectors
};

/// Needs an integer clean winding; the clean NH gap sets the ZSM threshold.
EnsembleStats ensemble(const LatticeParams& p, int n, const DisorderSpec& spec);

/// True iff the NH gap exceeds w. Throws DegenerateSpectrum without a point gap.
bool robustness_criterion(const LatticeParams& p, double w, int nk = 4096);

}  // namespace nhtopo
