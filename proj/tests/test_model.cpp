#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "helpers.hpp"
#include "nhtopo/model.hpp"

using namespace nhtopo;
using testing::chain;

TEST_SUITE("model") {
  TEST_CASE("reduce substitutes rates into the reduced parameters") {
    RawRates r;
    r.hopping = {1};
    r.reservoir = {1};
    r.theta = {kPi / 2};
    r.waveguide_decay = 2;
    const LatticeParams p = reduce(r);
    CHECK(p.gamma_eff == doctest::Approx(2));
    CHECK(p.lambda[0].real() == doctest::Approx(1));
    CHECK(p.cooperativity[0] == doctest::Approx(0.5));
    CHECK(p.delta == 0);
  }

  TEST_CASE("net on-site gain is rejected") {
    RawRates r;
    r.hopping = {1};
    r.reservoir = {1};
    r.theta = {0};
    r.waveguide_decay = 1;
    r.pump = 3;
    try {
      reduce(r);
      FAIL("expected NonPositiveGammaEff");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonPositiveGammaEff);
    }
  }

  TEST_CASE("raw and reduced construction give the same coefficients") {
    // Pump-dominated site loss, gamma_eff = 0.5, two shells.
    const double geff = 0.5;
    RawRates r;
    r.hopping = {0.3 * geff / 2, 2.0 * geff / 2};
    r.reservoir = {0.3 * geff, 1.8 * geff};
    r.pump = 2 * (0.3 + 1.8) * geff - 2 * geff;
    r.theta = {kPi / 2, kPi / 2};
    r.omega_cavity = 1.0;
    r.omega_drive = 1.0;
    const ToeplitzCoefficients a = coefficients(reduce(r));
    const ToeplitzCoefficients b = coefficients(testing::range2(1.8));
    for (int l = -2; l <= 2; ++l) CHECK(std::abs(a[l] - b[l]) < 1e-14);
  }

  TEST_CASE("coefficients of the non-trivial chain") {
    const ToeplitzCoefficients c = coefficients(chain(kPi / 2, 2, 1.8));
    CHECK(std::abs(c[0] - cplx(0, -1)) < 1e-15);
    CHECK(std::abs(c[-1] - cplx(1.9, 0)) < 1e-15);
    CHECK(std::abs(c[1] - cplx(0.1, 0)) < 1e-15);
  }

  TEST_CASE("Lambda = C at theta = pi/2 is exactly unidirectional") {
    for (double v : {0.3, 1.0, 2.7}) CHECK(coefficients(chain(kPi / 2, v, v))[1] == cplx{});
  }

  TEST_CASE("zero flux gives equal hoppings") {
    const ToeplitzCoefficients c = coefficients(chain(0, 2, 0.5));
    CHECK(std::abs(c[1] - cplx(1, -0.25)) < 1e-15);
    CHECK(c[1] == c[-1]);
  }

  TEST_CASE("Im mu_0 is pinned to -1 for any detuning") {
    for (double d : {-2.0, 0.0, 0.7}) CHECK(coefficients(chain(1, 1, 1, d))[0] == cplx(-d, -1));
  }

  TEST_CASE("OBC placement puts mu_+1 on the super-diagonal") {
    const ToeplitzCoefficients c = coefficients(chain(kPi / 2, 2, 1.8));
    const Matrix h = build_obc(c, 3).matrix;
    Matrix expect(3, 3);
    const cplx i{0, 1};
    expect << -i, 0.1, 0, 1.9, -i, 0.1, 0, 1.9, -i;
    CHECK((h - expect).cwiseAbs().maxCoeff() < 1e-15);
  }

  TEST_CASE("OBC equals PBC without the corner blocks") {
    const ToeplitzCoefficients c = coefficients(testing::range2(0.9));
    const int n = 9;
    Matrix pbc = build_pbc(c, n).matrix;
    const Matrix obc = build_obc(c, n).matrix;
    for (int r = 0; r < n; ++r) {
      for (int q = 0; q < n; ++q) {
        if (std::abs(r - q) > 2) pbc(r, q) = 0;
      }
    }
    CHECK((pbc - obc).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("size preconditions") {
    const ToeplitzCoefficients c = coefficients(testing::range2(0.5));
    CHECK_THROWS_AS(build_obc(c, 2), Error);
    CHECK_THROWS_AS(build_pbc(c, 4), Error);
    CHECK_NOTHROW(build_pbc(c, 5));
  }

  TEST_CASE("Bloch function at k = 0 sums the coefficients") {
    const ToeplitzCoefficients c = coefficients(chain(kPi / 2, 2, 1.8));
    CHECK(std::abs(bloch(c, 0) - cplx(2, -1)) < 1e-15);
    CHECK(std::abs(bloch(c, 1.3) - bloch(c, 1.3 + 2 * kPi)) < 1e-13);
  }

  TEST_CASE("circulant eigenvalues are the Bloch function on the grid") {
    for (int n : {4, 50}) {
      const ToeplitzCoefficients c = coefficients(chain(kPi / 2, 2, 0.5));
      const Vector ev = Eigen::ComplexEigenSolver<Matrix>(build_pbc(c, n).matrix, false).eigenvalues();
      double worst = 0;
      for (int m = 0; m < n; ++m) {
        const cplx z = bloch(c, 2 * kPi * m / n);
        double best = 1e9;
        for (Eigen::Index j = 0; j < ev.size(); ++j) best = std::min(best, std::abs(ev(j) - z));
        worst = std::max(worst, best);
      }
      CHECK(worst < 1e-12);
    }
  }

  TEST_CASE("Bloch derivative matches a central difference") {
    const ToeplitzCoefficients c = coefficients(testing::range2(1.8));
    const double h = 1e-6;
    for (double k : {0.1, 1.7, 4.0}) {
      const cplx fd = (bloch(c, k + h) - bloch(c, k - h)) / (2 * h);
      CHECK(std::abs(fd - bloch_derivative(c, k)) < 1e-8);
    }
  }

  TEST_CASE("complex Lambda keeps the coherent part Hermitian") {
    LatticeParams p = chain(0, 0, 0);
    p.lambda = {std::polar(1.2, 0.7)};
    p.cooperativity = {0};
    ToeplitzCoefficients c = coefficients(p);
    c.at(0) = 0;
    CHECK(is_hermitian(c));
  }

  TEST_CASE("parameter validation") {
    LatticeParams p = chain(0, 1, 1);
    p.theta.clear();
    CHECK_THROWS_AS(coefficients(p), Error);
    p = chain(0, 1, -1);
    CHECK_THROWS_AS(coefficients(p), Error);
  }
}
