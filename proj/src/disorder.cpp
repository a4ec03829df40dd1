#include "nhtopo/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nhtopo/parallel.hpp"

namespace nhtopo {

LatticeHamiltonian apply_disorder(const LatticeHamiltonian& h, const RealVector& xi) {
  if (xi.size() != h.matrix.rows()) throw Error(ErrorCode::InvalidParameters, "disorder length must equal N");
  LatticeHamiltonian out = h;
  for (Eigen::Index j = 0; j < xi.size(); ++j) out.matrix(j, j) -= cplx{0.0, xi(j)};
  out.disordered = true;
  return out;
}

RealVector draw_disorder(const DisorderSpec& spec, int n, int index) {
  if (!(spec.w >= 0.0)) throw Error(ErrorCode::InvalidParameters, "disorder strength must be >= 0");
  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> dist(-spec.w, spec.w);
  RealVector xi(n);
  for (int j = 0; j < n; ++j) xi(j) = spec.w > 0.0 ? dist(rng) : 0.0;
  return xi;
}

namespace {

struct Realization {
  int count = 0;
  double min_sigma = 0.0;
  double threshold = 0.0;
  double weyl = 0.0;
  double bulk_ipr = 0.0;
  bool localized = true;
  std::vector<long> counts;
  long edge_modes = 0;
};

}  // namespace

EnsembleStats ensemble(const LatticeParams& p, int n, const DisorderSpec& spec) {
  if (spec.realizations < 1) throw Error(ErrorCode::InvalidParameters, "need at least one realization");
  const ToeplitzCoefficients c = coefficients(p);
  const TopologyReport topo = analyze(c, std::max(default_grid_size(n), min_grid_size(c.range())));
  if (topo.state != WindingState::integer) {
    throw Error(ErrorCode::OriginOnCurve, std::string("clean winding undefined: ") + to_string(topo.state));
  }
  const LatticeHamiltonian clean = build_obc(c, n);
  const SvdResult clean_svd = svd(clean);
  const int expected = std::abs(topo.winding);

  EnsembleStats st;
  st.clean_winding = topo.winding;
  st.clean_gap = topo.nh_gap;
  st.clean_zsm = detect_zsm(clean_svd, topo.nh_gap).count;
  st.histogram.k_bins = n;
  st.histogram.sigma_max = 1.1 * clean_svd.sigma(clean_svd.size() - 1);
  st.histogram.counts.assign(static_cast<std::size_t>(n * st.histogram.sigma_bins), 0);

  // Bulk values move by at most w (Weyl), so they stay above this threshold.
  const double bulk_floor = clean_svd.sigma(std::min(st.clean_zsm, clean_svd.size() - 1));
  double threshold = 0.5 * (std::min(topo.nh_gap, bulk_floor) - spec.w);
  if (!(threshold > 0.0)) threshold = 0.5 * topo.nh_gap;

  std::vector<Edge> clean_edges;
  for (const auto& m : detect_zsm(clean_svd, topo.nh_gap).modes) clean_edges.push_back(m.right.edge);

  const Histogram2D& shape = st.histogram;
  std::vector<Realization> out(static_cast<std::size_t>(spec.realizations));
  parallel_for(out.size(), [&](std::size_t idx) {
    Realization& r = out[idx];
    const RealVector xi = draw_disorder(spec, n, static_cast<int>(idx));
    const SvdResult s = svd(apply_disorder(clean, xi));
    const ZsmReport z = classify_zsm(s, threshold);
    r.count = z.count;
    r.threshold = threshold;
    r.min_sigma = s.sigma(0);
    r.weyl = (s.sigma - clean_svd.sigma).cwiseAbs().maxCoeff();
    if (z.count != static_cast<int>(clean_edges.size())) {
      r.localized = false;
    } else {
      for (int j = 0; j < z.count; ++j) {
        const Vector v = s.v.col(j);
        if (fit_localization(v).edge != clean_edges[static_cast<std::size_t>(j)] ||
            edge_weight_fraction(v) <= 0.5) {
          r.localized = false;
        }
      }
    }
    double ipr = 0.0;
    for (int j = z.count; j < s.size(); ++j) ipr += inverse_participation_ratio(s.v.col(j));
    r.bulk_ipr = s.size() > z.count ? ipr / (s.size() - z.count) : 0.0;

    r.counts.assign(shape.counts.size(), 0);
    for (const auto& lab : momentum_label(s, z.count)) {
      if (lab.edge_mode) {
        ++r.edge_modes;
        continue;
      }
      const int kb = static_cast<int>(std::lround(lab.k / (2.0 * kPi) * shape.k_bins)) % shape.k_bins;
      int sb = static_cast<int>(std::floor(lab.sigma / shape.sigma_max * shape.sigma_bins));
      sb = std::clamp(sb, 0, shape.sigma_bins - 1);
      ++r.counts[static_cast<std::size_t>(kb * shape.sigma_bins + sb)];
    }
  });

  int survived = 0, localized = 0;
  double ipr = 0.0;
  for (const auto& r : out) {
    st.zsm_counts.push_back(r.count);
    st.min_sigma.push_back(r.min_sigma);
    st.thresholds.push_back(r.threshold);
    st.weyl_max_deviation = std::max(st.weyl_max_deviation, r.weyl);
    if (r.weyl > spec.w * (1.0 + 1e-12) + 1e-12 * st.histogram.sigma_max) st.weyl_holds = false;
    if (r.count == expected) ++survived;
    if (r.localized) ++localized;
    ipr += r.bulk_ipr;
    for (std::size_t j = 0; j < r.counts.size(); ++j) st.histogram.counts[j] += r.counts[j];
    st.histogram.edge_modes += r.edge_modes;
  }
  st.zsm_survival = static_cast<double>(survived) / spec.realizations;
  st.zsm_localized = static_cast<double>(localized) / spec.realizations;
  st.mean_bulk_ipr = ipr / spec.realizations;
  return st;
}

bool robustness_criterion(const LatticeParams& p, double w, int nk) {
  const ToeplitzCoefficients c = coefficients(p);
  return nh_gap(sample(c, std::max(nk, min_grid_size(c.range())))) > w;
}

}  // namespace nhtopo
