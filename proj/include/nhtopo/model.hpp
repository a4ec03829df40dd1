#pragma once

// Non-Hermitian Hamiltonian of a driven-dissipative cavity array in
// Toeplitz form. Everything below works in reduced units (gamma_eff = 1);
// gamma_eff is carried along only to restore dimensions on output.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "nhtopo/errors.hpp"

namespace nhtopo {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Reduced parameters of an array with coupling range `range`.
/// lambda may be complex; the coherent part of the hopping is Hermitian, so
/// the leftward band receives conj(lambda).
struct LatticeParams {
  int range = 1;
  std::vector<cplx> lambda;           // 2 J_l / gamma_eff
  std::vector<double> cooperativity;  // Gamma_l / gamma_eff
  std::vector<double> theta;          // gauge-invariant flux per shell
  double delta = 0.0;                 // drive-cavity detuning / gamma_eff
  double gamma_eff = 1.0;             // rate scale

  void validate() const;
};

/// Physical rates, before reduction.
struct RawRates {
  std::vector<double> hopping;    // J_l
  std::vector<double> reservoir;  // Gamma_l
  std::vector<double> theta;
  double waveguide_decay = 0.0;   // gamma
  double pump = 0.0;              // kappa
  double omega_cavity = 0.0;
  double omega_drive = 0.0;

  double gamma_eff() const;
};

/// Band coefficients mu_l for l = -L..L. Out-of-range indices read as zero.
class ToeplitzCoefficients {
 public:
  ToeplitzCoefficients() = default;
  explicit ToeplitzCoefficients(int range);
  /// Coefficients listed from mu_{-L} to mu_{+L}.
  static ToeplitzCoefficients from_list(const std::vector<cplx>& mu_minus_to_plus);

  int range() const noexcept { return range_; }
  cplx operator[](int ell) const noexcept {
    return (ell < -range_ || ell > range_) ? cplx{} : mu_[static_cast<std::size_t>(ell + range_)];
  }
  cplx& at(int ell);
  const std::vector<cplx>& values() const noexcept { return mu_; }
  double max_abs() const noexcept;

  /// Matrix adjoint: mu_l -> conj(mu_{-l}).
  ToeplitzCoefficients adjoint() const;

  friend bool operator==(const ToeplitzCoefficients&, const ToeplitzCoefficients&) = default;

 private:
  int range_ = 0;
  std::vector<cplx> mu_;
};

enum class Boundary { open, periodic };

/// Dense lattice Hamiltonian. Index convention: H(m, m + l) = mu_l, so
/// mu_{+1} sits on the super-diagonal.
struct LatticeHamiltonian {
  Matrix matrix;
  Boundary boundary = Boundary::open;
  bool disordered = false;

  int size() const noexcept { return static_cast<int>(matrix.rows()); }
};

/// e^{i theta}, exact at multiples of pi/2 so that Lambda = C at theta = pi/2
/// cancels to an exactly zero coefficient.
cplx flux_phase(double theta);

LatticeParams reduce(const RawRates& raw);
ToeplitzCoefficients coefficients(const LatticeParams& p);

LatticeHamiltonian build_obc(const ToeplitzCoefficients& c, int n);
LatticeHamiltonian build_pbc(const ToeplitzCoefficients& c, int n);

/// H(k) = sum_l mu_l e^{i k l}.
cplx bloch(const ToeplitzCoefficients& c, double k) noexcept;
/// dH/dk.
cplx bloch_derivative(const ToeplitzCoefficients& c, double k) noexcept;

/// mu_{-l} == conj(mu_l) for every l, to `tol` relative to max |mu|.
bool is_hermitian(const ToeplitzCoefficients& c, double tol = 1e-12);

}  // namespace nhtopo
