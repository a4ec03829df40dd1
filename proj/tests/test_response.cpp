#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "nhtopo/response.hpp"

using namespace nhtopo;
using testing::chain;

TEST_SUITE("response") {
  TEST_CASE("single lossy mode responds with -1 on resonance") {
    Matrix h(1, 1);
    h << cplx(0, -1);
    const ResponseReport r = susceptibility(h, 0.0);
    CHECK(std::abs(r.chi(0, 0) - cplx(-1, 0)) < 1e-15);
    CHECK(std::abs(r.s_matrix(0, 0) - cplx(1 - kDefaultProbeCoupling, 0)) < 1e-15);
    CHECK(r.stable);
  }

  TEST_CASE("inversion residual is small") {
    const LatticeHamiltonian h = build_obc(coefficients(chain(kPi / 2, 2, 1.8)), 50);
    CHECK(susceptibility(h, 0.0).residual <= 1e-10);
    CHECK(susceptibility(h, 0.7).residual <= 1e-10);
  }

  TEST_CASE("probing on a real eigenvalue is singular") {
    Matrix h(1, 1);
    h << 0.5;
    try {
      susceptibility(h, 0.5);
      FAIL("expected SingularAtProbe");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SingularAtProbe);
    }
  }

  TEST_CASE("steady state of a site drive is a column of chi") {
    const ResponseReport r = susceptibility(build_obc(coefficients(chain(kPi / 2, 2, 0.5)), 20), 0.0);
    const Vector a = drive_site(r, 3);
    const Vector expect = -std::sqrt(r.gamma) * r.chi.col(2);
    CHECK((a - expect).norm() < 1e-14);
    CHECK_THROWS_AS(drive_site(r, 0), Error);
    CHECK_THROWS_AS(drive_site(r, 21), Error);
  }

  TEST_CASE("non-reciprocity follows the coupling phase") {
    const int n = 20;
    CHECK(susceptibility(build_obc(coefficients(chain(0, 2, 0.5)), n), 0.0).nonreciprocity < 1e-12);
    const ResponseReport r = susceptibility(build_obc(coefficients(chain(kPi / 2, 2, 0.5)), n), 0.0);
    CHECK(r.nonreciprocity > 0.1);
    CHECK(r.forward_gain != doctest::Approx(r.reverse_gain));
  }

  TEST_CASE("channel counting") {
    const ResponseReport one = susceptibility(build_obc(coefficients(chain(kPi / 2, 2, 1.8)), 30), 0.0);
    CHECK(one.channels == 1);
    LatticeParams p = testing::range2(1.9);
    p.lambda = {0.05, 2};
    p.cooperativity = {0.05, 1.9};
    const ResponseReport two = susceptibility(build_obc(coefficients(p), 30), 0.0);
    CHECK(two.channels == 2);
    CHECK(channel_count(Matrix::Identity(4, 4)) == 4);
  }

  TEST_CASE("zero-mode truncation reproduces chi") {
    const ZsmDecomposition d = zsm_decomposition(coefficients(chain(kPi / 2, 2, 1.8)), 50, 0.0);
    CHECK(d.terms == 1);
    CHECK(d.residual < 1e-6);
  }

  TEST_CASE("truncation agrees with the closed-form zero modes") {
    const ToeplitzCoefficients c = coefficients(chain(kPi / 2, 1.5, 1.5));
    const int n = 40;
    const ZsmDecomposition d = zsm_decomposition(c, n, 0.0);
    const HatanoNelsonZeroModes z = analytic_hn_zsm(c, n);
    REQUIRE(d.terms == 1);
    const double s0 = d.zsm.zsv[0];
    const Matrix analytic = cplx(0, -1) * z.v0 * z.u0.adjoint() / s0;
    // The closed forms fix u0 and v0 phases independently, so compare up to a global phase.
    const cplx overlap = (analytic.adjoint() * d.chi_truncated).trace();
    CHECK(std::abs(overlap) / (analytic.norm() * d.chi_truncated.norm()) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(analytic.norm() == doctest::Approx(d.chi_truncated.norm()).epsilon(1e-8));
  }

  TEST_CASE("truncation is not applicable without zero modes") {
    try {
      zsm_decomposition(coefficients(chain(kPi / 2, 2, 0.5)), 50, 0.0);
      FAIL("expected NotApplicable");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotApplicable);
    }
  }

  TEST_CASE("exceptional point is stable") {
    const StabilityReport s = stability(coefficients(chain(kPi / 2, 1.5, 1.5)), 40);
    CHECK(s.stable);
    CHECK(s.max_im == doctest::Approx(-1.0));
    CHECK(s.classification == StabilityClass::stable);
  }

  TEST_CASE("strong amplification is convective") {
    const StabilityReport s = stability(coefficients(chain(kPi / 2, 4, 1.8)), 40);
    CHECK(s.stable);
    CHECK(s.pbc_max_im > 0);
    CHECK(s.convective);
  }

  TEST_CASE("triangular eigenvalues are read off the diagonal") {
    const Vector ev = eigenvalues(build_obc(coefficients(chain(kPi / 2, 1.5, 1.5)), 25).matrix);
    for (Eigen::Index j = 0; j < ev.size(); ++j) CHECK(ev(j) == cplx(0, -1));
  }

  TEST_CASE("chain eigenvalue formula") {
    const LatticeParams p = chain(0.7, 1.3, 0.9, 0.2);
    const int n = 15;
    const auto formula = chain_eigenvalues(p, n);
    const Vector ev = eigenvalues(build_obc(coefficients(p), n).matrix);
    for (const cplx& z : formula) {
      double best = 1e9;
      for (Eigen::Index j = 0; j < ev.size(); ++j) best = std::min(best, std::abs(ev(j) - z));
      CHECK(best < 1e-10);
    }
  }

  TEST_CASE("amplified direction grows with the chain length") {
    const GainScaling g = gain_scaling(chain(kPi / 2, 2, 1.8), 0.0, {10, 20, 30, 40});
    CHECK(g.fitted == 4);
    CHECK(std::max(g.forward_slope, g.reverse_slope) > 0);
    CHECK(std::min(g.forward_slope, g.reverse_slope) < 0);
  }

  TEST_CASE("exceptional-point gain slope is 2 ln|eta|") {
    const GainScaling g = gain_scaling(chain(kPi / 2, 1.5, 1.5), 0.0, {10, 20, 30, 40, 50});
    const double slope = std::max(std::abs(g.forward_slope), std::abs(g.reverse_slope));
    CHECK(slope == doctest::Approx(2 * std::log(1.5)).epsilon(0.05));
  }

  TEST_CASE("detuning sweep is consistent") {
    const DetuningSweep s = detuning_sweep(chain(kPi / 2, 1.5, 1.5), {-2.0, -0.5, 0.0, 0.5, 2.0}, {10, 20});
    CHECK(s.rows.size() == 5);
    CHECK(s.consistent);
    CHECK(s.rows[2].winding == -1);
    CHECK(s.rows[0].winding == 0);
  }
}
