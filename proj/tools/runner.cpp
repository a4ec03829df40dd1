#include "runner.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "nhtopo/disorder.hpp"
#include "nhtopo/gssh.hpp"
#include "nhtopo/io.hpp"
#include "nhtopo/response.hpp"
#include "nhtopo/svd.hpp"
#include "plot.hpp"

namespace nhtopo::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json complex_json(cplx z) { return json::array({number(z.real()), number(z.imag())}); }

json params_json(const RunConfig& rc, const ToeplitzCoefficients& c) {
  json p;
  const auto& q = rc.params;
  p["L"] = q.range;
  p["lambda"] = json::array();
  for (const auto& l : q.lambda) p["lambda"].push_back(complex_json(l));
  p["cooperativity"] = q.cooperativity;
  p["theta"] = q.theta;
  p["delta"] = q.delta;
  p["gamma_eff"] = q.gamma_eff;
  p["from_raw_rates"] = rc.from_raw;
  p["mu"] = json::object();
  for (int l = -c.range(); l <= c.range(); ++l) p["mu"][std::to_string(l)] = complex_json(c[l]);
  p["N"] = rc.n;
  p["N_k"] = rc.grid();
  p["omega"] = rc.omega;
  p["probe_gamma"] = rc.gamma;
  return p;
}

json tolerances_json(const Tolerances& t) {
  return json{{"zero", t.zero}, {"area", t.area}, {"norm", t.norm}, {"rec", t.rec}};
}

json localization_json(const Localization& l) { return json{{"edge", to_string(l.edge)}, {"rate", l.rate}}; }

class Writer {
 public:
  Writer(const RunConfig& rc, std::ostream& log) : rc_(rc), dir_(rc.out_dir), log_(log) {
    fs::create_directories(dir_);
  }

  bool tables() const { return rc_.format("csv") || rc_.format("svg"); }

  fs::path path(const std::string& name) {
    files_.push_back(name);
    log_ << "  wrote " << (dir_ / name).string() << '\n';
    return dir_ / name;
  }

  void svg(const std::string& kind, const std::vector<std::string>& inputs, const std::string& name,
           const std::string& title) {
    if (!rc_.format("svg")) return;
    std::vector<std::string> full;
    for (const auto& in : inputs) full.push_back((dir_ / in).string());
    plot_files(kind, full, path(name).string(), title);
  }

  void json_file(const std::string& name, const json& j) {
    std::ofstream out(path(name));
    out << j.dump(2) << '\n';
  }

  std::vector<std::string>& files() { return files_; }
  const fs::path& dir() const { return dir_; }

 private:
  const RunConfig& rc_;
  fs::path dir_;
  std::ostream& log_;
  std::vector<std::string> files_;
};

}  // namespace

int exit_code(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidParameters:
    case ErrorCode::NonPositiveGammaEff:
    case ErrorCode::SizeTooSmall:
    case ErrorCode::SchemaMismatch:
      return 2;
    default:
      return 3;
  }
}

std::vector<std::string> execute(const RunConfig& rc, std::ostream& log) {
  const ToeplitzCoefficients c = coefficients(rc.params);
  Writer w(rc, log);
  json report;
  report["parameters"] = params_json(rc, c);

  const int nk = rc.grid();
  const BlochSamples samples = sample(c, nk, rc.tol);
  const TopologyReport topo = analyze(c, nk, rc.tol);
  const LatticeHamiltonian h = build_obc(c, rc.n);

  bool have_spectrum = false;
  if (rc.wants(Task::spectrum) && w.tables()) {
    io::write_spectrum(w.path("spectrum.csv"), samples);
    have_spectrum = true;
  }

  if (rc.wants(Task::spectrum) || rc.wants(Task::winding)) {
    json t;
    t["state"] = to_string(topo.state);
    t["winding"] = topo.state == WindingState::integer ? json(topo.winding) : json(nullptr);
    t["degenerate"] = topo.state == WindingState::degenerate;
    t["nh_gap"] = topo.nh_gap;
    t["enclosed_area"] = topo.enclosed_area;
    t["point_gap_open"] = topo.point_gap_open;
    t["normal"] = topo.normal;
    t["reciprocal"] = topo.reciprocal;
    t["k0"] = topo.k0;
    t["normality"] = {{"product_residual", topo.normality_detail.product_residual},
                      {"modulus_residual", topo.normality_detail.modulus_residual},
                      {"phase_residual", topo.normality_detail.phase_residual},
                      {"commutator_residual", topo.normality_detail.commutator_residual}};
    t["reciprocity_asymmetry"] = topo.reciprocity_detail.asymmetry;
    report["topology"] = t;
  }

  if (rc.wants(Task::gssh)) {
    const GsshBands b = gssh_bands(c, nk);
    if (w.tables()) io::write_bands(w.path("bands.csv"), b);
    json g;
    g["sublattice_ordering"] = "A sites 1..N, then B sites 1..N";
    if (topo.state == WindingState::integer) {
      const ZakReport z = zak_phases(c, nk, rc.tol);
      g["zak_difference"] = z.difference;
      g["zak_invariant"] = z.invariant;
    } else {
      g["zak_invariant"] = nullptr;
    }
    const RealVector dbl = Eigen::SelfAdjointEigenSolver<Matrix>(doubled(h)).eigenvalues();
    g["doubled_min_abs_eigenvalue"] = dbl.cwiseAbs().minCoeff();
    report["gssh"] = g;
    w.svg("bands", {"bands.csv"}, "bands.svg", "GSSH bands");
  }

  int zsm_count = 0;
  if (rc.wants(Task::svd)) {
    const SvdResult s = svd(h);
    json j;
    ZsmReport z;
    bool ambiguous = false;
    if (topo.point_gap_open && topo.nh_gap > 0.0) {
      try {
        z = detect_zsm(s, topo.nh_gap);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::AmbiguousSeparation) throw;
        ambiguous = true;
        z = classify_zsm(s, 0.5 * topo.nh_gap);
      }
    }
    zsm_count = z.count;
    j["zsm_count"] = z.count;
    j["ambiguous_separation"] = ambiguous;
    j["threshold"] = z.threshold;
    j["zsv"] = z.zsv;
    j["smallest_sigma_lu"] = smallest_singular_value(h.matrix);
    j["gap_ratio"] = z.gap_ratio;
    j["modes"] = json::array();
    for (const auto& m : z.modes) {
      j["modes"].push_back({{"index", m.index},
                            {"sigma", m.sigma},
                            {"right", localization_json(m.right)},
                            {"left", localization_json(m.left)}});
    }
    report["svd"] = j;
    if (w.tables()) {
      io::write_svd(w.path("svd.csv"), s, momentum_label(s, z.count));
      io::write_profiles(w.path("sv_profiles.csv"), s.v, std::max(3, z.count + 1));
      std::vector<std::string> inputs{"svd.csv"};
      if (have_spectrum) inputs.insert(inputs.begin(), "spectrum.csv");
      w.svg("bands", inputs, "svd.svg", "OBC singular values over PBC sigma(k)");
      w.svg("profile", {"sv_profiles.csv"}, "sv_profiles.svg", "right singular vectors");
    }
  }

  bool have_eigen = false;
  if (rc.wants(Task::eigen)) {
    const EigenResult e = eigendecomposition(h);
    json j;
    int left_edge = 0, right_edge = 0;
    double max_sv_edge = 0.0;
    for (Eigen::Index m = 0; m < e.values.size(); ++m) {
      left_edge += e.edge_left(m) > 0.9;
      right_edge += e.edge_right(m) > 0.9;
    }
    const SvdResult s = svd(h);
    for (int m = 0; m < s.size(); ++m) {
      max_sv_edge = std::max({max_sv_edge, edge_weight_fraction(s.v.col(m)), edge_weight_fraction(s.u.col(m))});
    }
    j["left_edge_fraction"] = static_cast<double>(left_edge) / static_cast<double>(e.values.size());
    j["right_edge_fraction"] = static_cast<double>(right_edge) / static_cast<double>(e.values.size());
    j["max_singular_vector_edge_weight"] = max_sv_edge;
    j["condition"] = number(e.condition);
    j["defective_warning"] = e.defective_warning;
    report["eigen"] = j;
    if (w.tables()) {
      io::write_eigenvalues(w.path("eigenvalues.csv"), e);
      have_eigen = true;
    }
  }
  if (have_spectrum) {
    std::vector<std::string> inputs{"spectrum.csv"};
    if (have_eigen) inputs.push_back("eigenvalues.csv");
    w.svg("complex", inputs, "spectrum.svg", "H(k) in the complex plane");
  }

  if (rc.wants(Task::response)) {
    const ResponseReport r = susceptibility(h, rc.omega, rc.gamma);
    const StabilityReport st = stability(c, rc.n);
    json j;
    j["omega"] = r.omega;
    j["gamma"] = r.gamma;
    j["forward_gain"] = r.forward_gain;
    j["reverse_gain"] = r.reverse_gain;
    j["s_forward_gain"] = r.s_forward_gain;
    j["s_reverse_gain"] = r.s_reverse_gain;
    j["nonreciprocity"] = r.nonreciprocity;
    j["inversion_residual"] = r.residual;
    j["channels"] = r.channels;
    j["stability"] = {{"stable", st.stable},
                      {"max_im", st.max_im},
                      {"classification", to_string(st.classification)},
                      {"pbc_max_im", st.pbc_max_im},
                      {"convective", st.convective}};
    j["drives"] = json::array();
    for (int site : rc.drive_sites) {
      const Vector a = drive_site(r, site);
      Eigen::Index peak = 0;
      a.cwiseAbs().maxCoeff(&peak);
      j["drives"].push_back({{"site", site}, {"peak_site", peak + 1}, {"peak_amplitude", std::abs(a(peak))}});
    }
    if (zsm_count > 0 || !rc.wants(Task::svd)) {
      try {
        const ZsmDecomposition d = zsm_decomposition(c, rc.n, rc.omega);
        j["zsm_truncation"] = {{"terms", d.terms}, {"residual", d.residual}};
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NotApplicable && e.code() != ErrorCode::AmbiguousSeparation &&
            e.code() != ErrorCode::DegenerateSpectrum) {
          throw;
        }
        j["zsm_truncation"] = {{"terms", 0}, {"note", e.what()}};
      }
    }
    report["response"] = j;
    if (w.tables()) {
      io::write_matrix(w.path("chi.csv"), r.chi);
      io::write_matrix(w.path("s_matrix.csv"), r.s_matrix);
      w.svg("heatmap", {"chi.csv"}, "chi.svg", "|chi(omega)|");
    }
  }

  if (rc.wants(Task::gain)) {
    const GainScaling g = gain_scaling(rc.params, rc.omega, rc.n_list, rc.gamma);
    report["gain"] = {{"forward_slope", g.forward_slope}, {"reverse_slope", g.reverse_slope}, {"fitted", g.fitted}};
    if (w.tables()) io::write_gain(w.path("gain.csv"), g);
  }

  if (rc.wants(Task::sweep)) {
    const DetuningSweep s = detuning_sweep(rc.params, rc.delta_list, rc.n_list, rc.omega, 1e-9, nk);
    report["sweep"] = {{"transitions", s.transitions}, {"consistent", s.consistent}};
    if (w.tables()) io::write_sweep(w.path("sweep.csv"), s);
  }

  if (rc.wants(Task::disorder)) {
    const EnsembleStats e = ensemble(rc.params, rc.n, rc.disorder);
    json j;
    j["w"] = rc.disorder.w;
    j["realizations"] = rc.disorder.realizations;
    j["seed"] = rc.disorder.seed;
    j["clean_winding"] = e.clean_winding;
    j["clean_gap"] = e.clean_gap;
    j["clean_zsm"] = e.clean_zsm;
    j["zsm_survival"] = e.zsm_survival;
    j["zsm_localized"] = e.zsm_localized;
    j["weyl_max_deviation"] = e.weyl_max_deviation;
    j["weyl_holds"] = e.weyl_holds;
    j["mean_bulk_ipr"] = e.mean_bulk_ipr;
    bool robust = false;
    if (topo.point_gap_open) robust = robustness_criterion(rc.params, rc.disorder.w);
    j["robustness_criterion"] = robust;
    j["histogram"] = {{"k_bins", e.histogram.k_bins},
                      {"sigma_bins", e.histogram.sigma_bins},
                      {"sigma_max", e.histogram.sigma_max},
                      {"edge_modes", e.histogram.edge_modes}};
    report["disorder"] = j;
    if (w.tables()) {
      io::write_histogram(w.path("histogram.csv"), e.histogram);
      w.svg("heatmap", {"histogram.csv"}, "histogram.svg", "disordered singular values");
    }
  }

  if (rc.format("json")) w.json_file("report.json", report);

  json manifest;
  manifest["version"] = NHTOPO_VERSION;
  manifest["parameters"] = report["parameters"];
  manifest["tolerances"] = tolerances_json(rc.tol);
  manifest["seed"] = rc.seed;
  manifest["tasks"] = json::array();
  for (Task t : rc.tasks) manifest["tasks"].push_back(to_string(t));
  auto files = w.files();
  files.push_back("manifest.json");
  manifest["files"] = files;
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  manifest["timestamp"] = stamp;
  {
    std::ofstream out(w.dir() / "manifest.json");
    out << manifest.dump(2) << '\n';
  }
  log << "  wrote " << (w.dir() / "manifest.json").string() << '\n';
  return files;
}

int run(const std::string& config_path, const std::vector<std::string>& overrides,
        const std::string& out_dir_override, std::ostream& log) {
  try {
    RawConfig raw = RawConfig::load(config_path);
    for (const auto& o : overrides) raw.apply_override(o);
    if (!out_dir_override.empty()) raw.set("output", "dir", out_dir_override);
    const RunConfig rc = resolve(raw);
    execute(rc, log);
    return 0;
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error [ConfigError]: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace nhtopo::cli
