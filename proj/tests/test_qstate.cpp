#include <cmath>

#include "test_support.hpp"

using namespace reegeom;
using Catch::Matchers::WithinAbs;

namespace {

Matrix3 diag3(double a, double b, double c) { return Vector3(a, b, c).asDiagonal(); }

}  // namespace

TEST_CASE("Pauli data of the Bell state beta_1", "[qstate]") {
  const PauliForm p = to_pauli(bell_state(1));
  CHECK(p.r.norm() < 1e-15);
  CHECK(p.s.norm() < 1e-15);
  CHECK((p.g - diag3(1, -1, 1)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("Pauli data of the maximally mixed state vanish", "[qstate]") {
  const PauliForm p = to_pauli(DensityMatrix());
  CHECK(p.r.norm() == 0.0);
  CHECK(p.s.norm() == 0.0);
  CHECK(p.g.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("correlation tensor agrees with direct traces", "[qstate]") {
  Rng rng(11);
  const DensityMatrix rho = random_state(rng);
  const PauliForm p = to_pauli(rho);
  for (int i = 0; i < 3; ++i) {
    CHECK_THAT(p.r(i), WithinAbs((rho.matrix() * kron(pauli(i + 1), pauli(0))).trace().real(), 1e-15));
    CHECK_THAT(p.s(i), WithinAbs((rho.matrix() * kron(pauli(0), pauli(i + 1))).trace().real(), 1e-15));
    for (int j = 0; j < 3; ++j)
      CHECK_THAT(p.g(i, j), WithinAbs((rho.matrix() * kron(pauli(i + 1), pauli(j + 1))).trace().real(), 1e-15));
  }
}

TEST_CASE("reconstruction from Pauli data", "[qstate]") {
  SECTION("Bell correlations give beta_1") {
    const PauliForm p{Vector3::Zero(), Vector3::Zero(), diag3(1, -1, 1)};
    CHECK(max_abs(from_pauli(p).matrix - bell_state(1).matrix()) < 1e-15);
  }
  SECTION("zero data give I/4") {
    const PauliForm p{Vector3::Zero(), Vector3::Zero(), Matrix3::Zero()};
    CHECK(max_abs(from_pauli(p).matrix - Matrix4c::Identity() * 0.25) < 1e-16);
  }
  SECTION("VP weights (0.5, 0.3, 0.2)") {
    const Vector3 lam(0.5, 0.3, 0.2);
    const double d = lam(1) - lam(2);
    const PauliForm p{Vector3(0, 0, d), Vector3(0, 0, d), diag3(lam(0), -lam(0), 1)};
    Matrix4c expected = Matrix4c::Zero();
    expected(0, 0) = 0.25 + 0.3;
    expected(3, 3) = 0.25 + 0.2;
    expected(0, 3) = expected(3, 0) = 0.25;
    CHECK(max_abs(from_pauli(p).matrix - expected) < 1e-15);
  }
  SECTION("non-physical data are flagged") {
    const PauliForm p{Vector3(0, 0, 1), Vector3::Zero(), diag3(1, 1, 1)};
    const Reconstruction rec = from_pauli(p);
    CHECK(rec.not_positive);
    CHECK(rec.min_eigenvalue < 0.0);
    CHECK_THROWS_AS(rec.state(), Error);
  }
}

TEST_CASE("state validation reports the first violation", "[qstate]") {
  Matrix4c m = Matrix4c::Identity() * 0.3;
  try {
    (void)DensityMatrix::from_matrix(m);
    FAIL("expected InvalidState");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidState);
    CHECK_THAT(e.magnitude(), WithinAbs(0.2, 1e-15));
  }
  m = Matrix4c::Identity() * 0.25;
  m(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix::from_matrix(m), Error);
  m = Matrix4c::Zero();
  m(0, 0) = 1.1;
  m(1, 1) = -0.1;
  CHECK_THROWS_AS(DensityMatrix::from_matrix(m), Error);
}

TEST_CASE("partial transpose", "[qstate]") {
  const Vector4 ev = eigenvalues(partial_transpose(bell_state(1)));
  CHECK_THAT(ev(0), WithinAbs(-0.5, 1e-15));
  for (int i = 1; i < 4; ++i) CHECK_THAT(ev(i), WithinAbs(0.5, 1e-15));
  CHECK(max_abs(partial_transpose(DensityMatrix()) - Matrix4c::Identity() * 0.25) == 0.0);
  Matrix4c diag = Matrix4c::Zero();
  diag(0, 0) = 0.55;
  diag(3, 3) = 0.45;
  CHECK(max_abs(partial_transpose(diag) - diag) == 0.0);
}

TEST_CASE("PPT test", "[qstate]") {
  CHECK_FALSE(is_ppt(bell_state(1)));
  CHECK(is_ppt(DensityMatrix()));
  CHECK(is_ppt(horodecki_state(Vector3(0.2, 0.4, 0.4))));
}

TEST_CASE("concurrence", "[qstate]") {
  CHECK_THAT(concurrence(horodecki_state(Vector3(0.6, 0.3, 0.1))), WithinAbs(0.2535898384862245, 1e-12));
  CHECK_THAT(concurrence(DensityMatrix()), WithinAbs(0.0, 1e-15));
  CHECK_THAT(concurrence(bell_state(1)), WithinAbs(1.0, 1e-7));
}

TEST_CASE("canonicalization", "[qstate]") {
  SECTION("x-directed Bloch vectors turned onto z") {
    const PauliForm p{Vector3(0.2, 0, 0), Vector3(0.1, 0, 0), diag3(0.3, -0.2, 0.1)};
    const DensityMatrix rho = from_pauli(p).state();
    // Quarter turn about y on both sides: x -> z, z -> -x.
    Matrix3 rot;
    rot << 0, 0, -1, 0, 1, 0, 1, 0, 0;
    const PauliForm q = to_pauli(local_unitary_from_rotations(rot, rot).apply(rho));
    CHECK((q.r - Vector3(0, 0, 0.2)).norm() < 1e-15);
    CHECK((q.s - Vector3(0, 0, 0.1)).norm() < 1e-15);
    // det g is invariant, so the image is (g3, g2, g1).
    CHECK((q.g - diag3(0.1, -0.2, 0.3)).cwiseAbs().maxCoeff() < 1e-15);
    // Both frames share one canonical form.
    const Vector3 q0 = canonicalize(rho).form.q, q1 = canonicalize(from_pauli(q).state()).form.q;
    CHECK((q0 - q1).cwiseAbs().maxCoeff() < 1e-12);
  }
  SECTION("a diagonal state needs at most a signed permutation") {
    const DensityMatrix rho = vp_state(Vector3(0.5, 0.3, 0.2));
    const Canonicalization c = canonicalize(rho);
    for (const Matrix3& m : {c.rot_a, c.rot_b}) {
      CHECK((m.cwiseAbs() * Vector3::Ones() - Vector3::Ones()).norm() < 1e-12);
      CHECK((m.cwiseAbs().transpose() * Vector3::Ones() - Vector3::Ones()).norm() < 1e-12);
    }
    CHECK(c.off_diagonal == 0.0);
  }
  SECTION("random states keep their spectrum") {
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
      const DensityMatrix rho = random_state(rng);
      const Canonicalization c = canonicalize(rho);
      const Matrix4c moved = c.lu.apply(rho.matrix());
      CHECK(c.off_diagonal < 1e-10);
      CHECK((eigenvalues(moved) - eigenvalues(rho.matrix())).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(c.lu.unitarity_gap() < 1e-12);
    }
  }
}

TEST_CASE("local unitaries act on Pauli data by rotations", "[qstate]") {
  Rng rng(9);
  const DensityMatrix rho = random_state(rng);
  const Matrix3 ra = Eigen::AngleAxisd(0.7, Vector3(1, 2, 3).normalized()).toRotationMatrix();
  const Matrix3 rb = Eigen::AngleAxisd(-1.1, Vector3(0, 1, -1).normalized()).toRotationMatrix();
  const LocalUnitary lu = local_unitary_from_rotations(ra, rb);
  const PauliForm before = to_pauli(rho), after = to_pauli(lu.apply(rho));
  CHECK((after.r - ra * before.r).norm() < 1e-14);
  CHECK((after.s - rb * before.s).norm() < 1e-14);
  CHECK((after.g - ra * before.g * rb.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(max_abs(lu.apply_inverse(lu.apply(rho.matrix())) - rho.matrix()) < 1e-15);
}

TEST_CASE("partial traces", "[qstate]") {
  const DensityMatrix rho = vp_state(Vector3(0.5, 0.3, 0.2));
  const Matrix2c a = partial_trace_b(rho.matrix());
  const Matrix2c b = partial_trace_a(rho.matrix());
  CHECK_THAT(a(0, 0).real(), WithinAbs(0.55, 1e-15));
  CHECK_THAT(b(1, 1).real(), WithinAbs(0.45, 1e-15));
}
