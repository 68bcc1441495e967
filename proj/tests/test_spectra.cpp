#include <algorithm>
#include <cmath>

#include "test_support.hpp"

using namespace reegeom;
using Catch::Matchers::WithinAbs;

namespace {

Vector4 sorted(Vector4 v) {
  std::sort(v.data(), v.data() + 4);
  return v;
}

}  // namespace

TEST_CASE("closed-form spectrum at the Bell point", "[spectra]") {
  const ZParallelState z{0, 0, 1, -1, 1};
  CHECK((sorted(eigensystem(z).values()) - Vector4(0, 0, 0, 1)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THAT(min_pt_eigenvalue(z), WithinAbs(-0.5, 1e-15));
}

TEST_CASE("closed-form spectrum at a generic point", "[spectra]") {
  const ZParallelState z{0.3, 0.3, 0.2, -0.2, 0.5};
  // Frozen dense-solver values.
  const Vector4 rho(0.125, 0.125, 0.19472243622680052, 0.5552775637731995);
  const Vector4 pt(0.025, 0.225, 0.225, 0.525);
  CHECK((sorted(eigensystem(z).values()) - rho).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((sorted(pt_eigensystem(z).values()) - pt).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((sorted(eigensystem(z).values()) - eigenvalues(z.matrix())).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("VP line spectrum", "[spectra]") {
  // Weights (0.5, 0.3, 0.2): |beta_1> and |00>, |11> overlap, so the spectrum
  // is {0, 0, 1/2 -+ sqrt(0.065)} rather than the weights themselves.
  const ZParallelState z{0.1, 0.1, 0.5, -0.5, 1.0};
  const double h = std::sqrt(0.065);
  CHECK((sorted(eigensystem(z).values()) - Vector4(0, 0, 0.5 - h, 0.5 + h)).cwiseAbs().maxCoeff() < 1e-12);
  // PT minimum on that line is -|q1|/2.
  CHECK_THAT(min_pt_eigenvalue(z), WithinAbs(-0.25, 1e-12));
}

TEST_CASE("diagonal states are invariant under partial transpose", "[spectra]") {
  const ZParallelState z{0.2, -0.1, 0, 0, 0.3};
  CHECK((sorted(eigensystem(z).values()) - sorted(pt_eigensystem(z).values())).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("eigenvectors solve the eigenproblem, degenerate points included", "[spectra]") {
  Rng rng(2);
  std::vector<ZParallelState> points{{0.3, 0.3, 0.2, -0.2, 0.5}, {0.5, 0.5, 0.1, -0.1, 0.0}, {0.0, 0.0, 0.0, 0.0, 0.0}};
  for (int i = 0; i < 200; ++i)
    points.push_back({uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)});
  for (const auto& z : points) {
    const EigenSystem e = eigensystem(z);
    const Matrix4c v = e.vectors();
    CHECK(max_abs(v.adjoint() * v - Matrix4c::Identity()) < 1e-12);
    CHECK(max_abs(z.matrix() * v - v * e.values().cast<Complex>().asDiagonal()) < 1e-12);
  }
}

TEST_CASE("tetrahedron boundary", "[spectra]") {
  SECTION("r = s = 0 gives the four face planes") {
    for (double q1 : {-0.6, -0.1, 0.3}) {
      for (double q2 : {-0.4, 0.2, 0.7}) {
        const auto roots = boundary_T(0, 0, q1, q2);
        REQUIRE(roots.size() == 2);
        CHECK_THAT(roots[0].q3, WithinAbs(1.0 - std::abs(q1 + q2), 1e-15));
        CHECK_THAT(roots[1].q3, WithinAbs(std::abs(q1 - q2) - 1.0, 1e-15));
      }
    }
  }
  SECTION("r = s = 0.3 at the origin") {
    const auto roots = boundary_T(0.3, 0.3, 0, 0);
    REQUIRE(roots.size() == 2);
    CHECK_THAT(roots[0].q3, WithinAbs(1.0, 1e-15));
    CHECK_THAT(roots[1].q3, WithinAbs(-0.4, 1e-15));
  }
  SECTION("r = -s = 0.5 at the origin") {
    const auto roots = boundary_T(0.5, -0.5, 0, 0);
    REQUIRE_FALSE(roots.empty());
    CHECK_THAT(roots[0].q3, WithinAbs(0.0, 1e-15));
    CHECK(roots[0].sheet == Sheet::Mu);
  }
  SECTION("roots are zeros of the minimum eigenvalue") {
    Rng rng(4);
    for (int i = 0; i < 200; ++i) {
      const double r = uniform(rng, -1, 1), s = uniform(rng, -1, 1), q1 = uniform(rng, -1, 1), q2 = uniform(rng, -1, 1);
      for (const auto& root : boundary_T(r, s, q1, q2))
        CHECK(std::abs(min_eigenvalue(ZParallelState{r, s, q1, q2, root.q3}.matrix())) < 1e-10);
    }
  }
  SECTION("invalid Bloch components") { CHECK_THROWS_AS(boundary_T(1.5, 0, 0, 0), Error); }
}

TEST_CASE("octahedron boundary", "[spectra]") {
  SECTION("r = s = 0 gives octahedron faces") {
    for (double q1 = -0.9; q1 < 0.95; q1 += 0.3) {
      for (double q2 = -0.9; q2 < 0.95; q2 += 0.3) {
        for (const auto& root : boundary_L(0, 0, q1, q2)) {
          if (!root.physical) continue;
          CHECK_THAT(std::abs(q1) + std::abs(q2) + std::abs(root.q3), WithinAbs(1.0, 1e-12));
        }
      }
    }
  }
  SECTION("r = s = 0.5 at the origin") {
    const auto roots = boundary_L(0.5, 0.5, 0, 0);
    REQUIRE(roots.size() == 2);
    CHECK_THAT(roots[0].q3, WithinAbs(1.0, 1e-15));
    CHECK_THAT(roots[1].q3, WithinAbs(0.0, 1e-15));
  }
  SECTION("Horodecki line: nu_-^T = q1/2") {
    for (double q1 : {0.0, 0.1, 0.3}) {
      const PtEigenSystem e = pt_eigensystem(ZParallelState{0.2, -0.2, q1, -q1, 2 * q1 - 1});
      CHECK_THAT(e.nu_minus.value, WithinAbs(q1 / 2, 1e-15));
    }
  }
}
