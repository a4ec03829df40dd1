#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "helpers.hpp"
#include "nhtopo/gssh.hpp"
#include "nhtopo/svd.hpp"

using namespace nhtopo;
using testing::chain;

TEST_SUITE("gssh") {
  TEST_CASE("1x1 matrix doubles to +-|h|") {
    Matrix h(1, 1);
    h << 2.0;
    const RealVector ev = Eigen::SelfAdjointEigenSolver<Matrix>(doubled(h)).eigenvalues();
    CHECK(ev(0) == doctest::Approx(-2));
    CHECK(ev(1) == doctest::Approx(2));
  }

  TEST_CASE("doubled matrix is Hermitian and chiral") {
    const Matrix h = build_obc(coefficients(testing::range2(0.9)), 20).matrix;
    const Matrix d = doubled(h);
    CHECK((d - d.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    Eigen::VectorXcd s(40);
    s << Eigen::VectorXcd::Ones(20), -Eigen::VectorXcd::Ones(20);
    const Matrix g = s.asDiagonal();
    CHECK((g * d * g + d).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("EP zero mode appears as a mid-gap pair") {
    const Matrix h = build_obc(coefficients(chain(kPi / 2, 1.5, 1.5)), 100).matrix;
    const RealVector ev = Eigen::SelfAdjointEigenSolver<Matrix>(doubled(h)).eigenvalues();
    CHECK(std::abs(ev(99)) < 1e-10);
    CHECK(std::abs(ev(100)) < 1e-10);
    CHECK(ev(101) > 0.1);
  }

  TEST_CASE("sub-lattice blocks carry the singular vectors") {
    const Matrix h = build_obc(coefficients(chain(kPi / 2, 2, 0.5)), 16).matrix;
    Eigen::SelfAdjointEigenSolver<Matrix> es(doubled(h));
    const SvdResult s = svd(h);
    // Largest eigenvalue pairs with the largest singular triple.
    const Vector top = es.eigenvectors().col(31);
    const Vector a = top.head(16), b = top.tail(16);
    CHECK(std::abs(a.normalized().dot(s.v.col(15))) == doctest::Approx(1.0));
    CHECK(std::abs(b.normalized().dot(s.u.col(15))) == doctest::Approx(1.0));
  }

  TEST_CASE("disordered matrices keep chiral symmetry") {
    Matrix h = build_obc(coefficients(chain(kPi / 2, 2, 1.8)), 10).matrix;
    for (int j = 0; j < 10; ++j) h(j, j) += cplx(0, 0.1 * j);
    const Matrix d = doubled(h);
    CHECK(d.topLeftCorner(10, 10).cwiseAbs().maxCoeff() == 0.0);
    CHECK(d.bottomRightCorner(10, 10).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("bands equal +-sigma(k)") {
    const ToeplitzCoefficients c = coefficients(chain(kPi / 2, 1.5, 1.5));
    const GsshBands b = gssh_bands(c, 256);
    const BlochSamples s = sample(c, 256);
    for (std::size_t j = 0; j < b.k.size(); ++j) {
      CHECK(std::abs(b.e_plus[j] - s.sigma[j]) < 1e-12);
      CHECK(std::abs(b.e_minus[j] + s.sigma[j]) < 1e-12);
    }
  }

  TEST_CASE("on-site loss alone gives flat bands") {
    ToeplitzCoefficients c(1);
    c.at(0) = cplx(0, -1);
    const GsshBands b = gssh_bands(c, 64);
    for (std::size_t j = 0; j < b.k.size(); ++j) {
      CHECK(b.e_plus[j] == doctest::Approx(1));
      CHECK(b.e_minus[j] == doctest::Approx(-1));
    }
  }

  TEST_CASE("upper-band eigenvector has the expected form") {
    const ToeplitzCoefficients c = coefficients(chain(1.0, 1.2, 0.9));
    const GsshBands b = gssh_bands(c, 64);
    for (std::size_t j = 0; j < b.k.size(); ++j) {
      const double phi = std::arg(bloch(c, b.k[j]));
      Eigen::Vector2cd expect(std::polar(1.0, -phi), 1.0);
      expect /= std::sqrt(2.0);
      CHECK(std::abs(expect.dot(b.psi_plus[j])) == doctest::Approx(1.0));
    }
  }

  TEST_CASE("Zak invariant equals the winding") {
    CHECK(zak_invariant(coefficients(chain(kPi / 2, 2, 1.8)), 1024) == -1);
    CHECK(zak_invariant(coefficients(chain(kPi / 2, 2, 0.5)), 1024) == 0);
    CHECK(zak_invariant(coefficients(testing::range2(1.8)), 4096) == -2);
    const ZakReport z = zak_phases(coefficients(testing::range2(1.8)), 4096);
    CHECK(z.difference == doctest::Approx(-2 * kPi));
  }

  TEST_CASE("Zak invariant does not depend on the grid") {
    const ToeplitzCoefficients c = coefficients(testing::range2(0.9));
    for (int nk : {512, 2048, 8192}) CHECK(zak_invariant(c, nk) == -1);
  }

  TEST_CASE("Zak phase needs an open gap") {
    try {
      zak_invariant(coefficients(chain(kPi / 2, 1, 1)), 1024);
      FAIL("expected OriginOnCurve");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::OriginOnCurve);
    }
  }
}
