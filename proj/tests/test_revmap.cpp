#include <cmath>

#include "test_support.hpp"

using namespace reegeom;
using Catch::Matchers::WithinAbs;

TEST_CASE("kernel of the partial transpose", "[revmap]") {
  SECTION("the VP state has a two-dimensional kernel") {
    Matrix4c sigma = Matrix4c::Zero();
    sigma(0, 0) = 0.55;
    sigma(3, 3) = 0.45;
    try {
      (void)pt_kernel(sigma);
      FAIL("expected NotEdgeState");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotEdgeState);
    }
  }
  SECTION("Horodecki CSS: vector in the (|01>, |10>) block") {
    const Vector4c k = pt_kernel(css_horodecki(Vector3(0.6, 0.3, 0.1)).css);
    const Vector4c expected(0, 0.5547001962252293, -0.8320502943378437, 0);
    CHECK(std::abs(std::abs(k.dot(expected)) - 1.0) < 1e-12);
  }
  SECTION("crossing-face Bell-diagonal state") {
    const Vector4c k = pt_kernel(bell_diagonal_state(Vector3(1, -1, 1) / 3.0));
    CHECK(std::abs(k(0)) + std::abs(k(3)) < 1e-12);
    CHECK_THAT(std::abs(k(1) + k(2)), WithinAbs(0.0, 1e-12));
  }
}

TEST_CASE("G matrix", "[revmap]") {
  SECTION("logarithmic-mean weights at degenerate pairs") {
    CHECK(logarithmic_mean(0.3, 0.3) == 0.3);
    CHECK_THAT(logarithmic_mean(0.3, 0.3 + 1e-13), WithinAbs(0.3, 1e-13));
    CHECK_THAT(logarithmic_mean(0.2, 0.5), WithinAbs(0.3 / std::log(2.5), 1e-15));
  }
  SECTION("rank-deficient sigma is refused") {
    Matrix4c sigma = Matrix4c::Zero();
    sigma(0, 0) = 0.5;
    sigma(3, 3) = 0.5;
    CHECK_THROWS_AS(g_matrix(sigma), Error);
  }
  SECTION("traceless on random edge states") {
    Rng rng(1);
    for (int i = 0; i < 50; ++i) CHECK(std::abs(g_matrix(random_sigma_z(rng).matrix()).trace()) < 1e-12);
  }
}

TEST_CASE("family coefficients in limiting cases", "[revmap]") {
  SECTION("VP limit of the X-shaped edge state") {
    const double eps = 1e-9;
    const auto p = SigmaZParams::from_diagonal(eps, 0.55 - eps, 0.45 - eps, eps);
    const ZFamilyDerivatives d = z_family_derivatives(p);
    const double l = std::log(0.55 / 0.45);
    CHECK(std::abs(d.rb1) + std::abs(d.rb2) + std::abs(d.rb3) + std::abs(d.rb4) < 1e-7);
    CHECK_THAT(d.yb, WithinAbs(-0.1 / (2 * l), 1e-6));
  }
  SECTION("Bell-diagonal specialization") {
    const double a = 0.1, b = 0.4;
    const SigmaZParams p{a, b, b, a, a};
    const ZFamilyDerivatives d = z_family_derivatives(p);
    CHECK_THAT(d.rb1, WithinAbs(a / 2, 1e-15));
    CHECK_THAT(d.rb4, WithinAbs(a / 2, 1e-15));
    CHECK_THAT(d.rb2, WithinAbs(-a / 2, 1e-15));
    CHECK_THAT(d.rb3, WithinAbs(-a / 2, 1e-15));
    CHECK_THAT(d.yb, WithinAbs(-b / 2, 1e-15));
  }
  SECTION("invalid parameters") {
    CHECK_THROWS_AS(z_family_derivatives(SigmaZParams{0.1, 0.4, 0.4, 0.1, 0.3}), Error);
  }
}

TEST_CASE("family through the G matrix", "[revmap]") {
  Rng rng(21);
  const SigmaZParams p = random_sigma_z(rng);
  CHECK(max_abs(family_from_css(p.matrix(), 0.0).matrix - p.matrix()) == 0.0);
  for (double x : {0.0, 0.01, 0.05, 0.1})
    CHECK(max_abs(z_family(p, x).matrix - family_from_css(p.matrix(), x).matrix) < 1e-10);
  CHECK(max_abs(z_family(p, 0.0).matrix - p.matrix()) == 0.0);
  CHECK_THROWS_AS(z_family(p, -0.1), Error);
}

TEST_CASE("recovery of the family states", "[revmap]") {
  SECTION("VP") {
    const Vector3 lam(0.5, 0.3, 0.2);
    const CssResult r = css_vp(lam);
    const FamilyPoint f = family_from_css_regularized(r.css.matrix(), regularization_pattern(Family::GeneralizedVP), x_vp(lam));
    CHECK(max_abs(f.matrix - vp_state(lam).matrix()) < 1e-9);
  }
  SECTION("Horodecki") {
    const Vector3 lam(0.6, 0.3, 0.1);
    const CssResult r = css_horodecki(lam);
    const FamilyPoint f =
        family_from_css_regularized(r.css.matrix(), regularization_pattern(Family::GeneralizedHorodecki), x_horodecki(lam));
    CHECK(max_abs(f.matrix - horodecki_state(lam).matrix()) < 1e-9);
  }
}

TEST_CASE("Pauli data along the family", "[revmap]") {
  Rng rng(12);
  const SigmaZParams p = random_sigma_z(rng);
  const PauliForm at0 = to_pauli(p.matrix());
  const ZPauli z0 = z_family_pauli(p, 0.0);
  CHECK_THAT(z0.r, WithinAbs(at0.r(2), 1e-15));
  CHECK_THAT(z0.s, WithinAbs(at0.s(2), 1e-15));
  CHECK((z0.t - at0.g.diagonal()).norm() < 1e-15);
  const PauliForm direct = to_pauli(z_family(p, 0.1).matrix);
  const ZPauli z1 = z_family_pauli(p, 0.1);
  CHECK((z1.t - direct.g.diagonal()).norm() < 1e-12);
  CHECK_THAT(z1.r, WithinAbs(direct.r(2), 1e-12));

  SECTION("symmetric edge state keeps its Bloch data") {
    const SigmaZParams q{0.1, 0.35, 0.35, 0.2, std::sqrt(0.02)};
    for (double x : {0.0, 0.05, 0.1}) {
      CHECK_THAT(z_family_pauli(q, x).r, WithinAbs(z_family_pauli(q, 0).r, 1e-15));
      CHECK_THAT(z_family_pauli(q, x).s, WithinAbs(z_family_pauli(q, 0).s, 1e-15));
    }
  }
}

TEST_CASE("crossing of two family lines", "[revmap]") {
  SECTION("Bell-diagonal lines meet at (1, 1, -1)") {
    const SigmaZParams p{0.1, 0.4, 0.4, 0.1, 0.1}, q{0.2, 0.3, 0.3, 0.2, 0.2};
    CHECK((line_crossing(p, q).mu - Vector3(1, 1, -1)).norm() < 1e-10);
  }
  SECTION("identical families are parallel") {
    const SigmaZParams p{0.1, 0.4, 0.4, 0.1, 0.1};
    CHECK_THROWS_AS(line_crossing(p, p), Error);
  }
  SECTION("generic pair misses every vertex") {
    const SigmaZParams p = sweep_params(0.3, 0.3, 0.4), q = sweep_params(0.3, 0.3, 0.5);
    const LineCrossing c = line_crossing(p, q);
    CHECK((c.mu - Vector3(0.8448, 0.8448, -0.7117)).norm() < 1e-4);
    CHECK((z_family_pauli(p, c.x).t - c.mu).norm() < 1e-10);
    CHECK((z_family_pauli(q, c.x_prime).t - c.mu).norm() < 1e-10);
  }
}

TEST_CASE("line sweep dataset", "[revmap]") {
  const auto params = sample_sweep_params(0, 0, 3, 5);
  const auto rows = css_line_sweep(params, sweep_x_grid(params, 6));
  REQUIRE_FALSE(rows.empty());
  for (const auto& row : rows) {
    // Straight line through (1, 1, -1): t - tau parallel to (1, 1, -1) - tau.
    const Vector3 a = row.t - row.tau, b = Vector3(1, 1, -1) - row.tau;
    CHECK(a.cross(b).norm() < 1e-8);
  }
  CHECK(css_line_sweep(params, {}).empty());
  CHECK(css_line_sweep({}, {0.0, 0.1}).empty());
}
