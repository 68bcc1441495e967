#include "test_support.hpp"

using namespace reegeom;
using Catch::Matchers::WithinAbs;

TEST_CASE("nearest vertex", "[geometry]") {
  CHECK(nearest_vertex(Vector3(0.8, -0.8, 0.8)).label == VertexLabel::V1);
  CHECK(nearest_vertex(Vector3(0.4, -0.4, 1.0)).label == VertexLabel::V1);
  CHECK(nearest_vertex(Vector3::Zero()).label == VertexLabel::V1);
  CHECK(nearest_vertex(Vector3(-0.5, -0.5, -0.5)).label == VertexLabel::V4);
  CHECK_THROWS_AS(nearest_vertex(Vector3(1, 1, 1)), Error);
}

TEST_CASE("Bell weights and membership", "[geometry]") {
  const Vector4 w = bell_weights(Vector3(1, -1, 1));
  CHECK((w - Vector4(1, 0, 0, 0)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(inside_tetrahedron(Vector3(0.3, 0.2, -0.1)));
  CHECK_FALSE(inside_tetrahedron(Vector3(1, 1, 1)));
  CHECK(octahedron_norm(Vector3(0.2, -0.3, 0.5)) == 1.0);
}

TEST_CASE("tetrahedron mesh at r = s = 0", "[geometry]") {
  const SurfaceMesh m = surface_mesh(Body::T, 0, 0, 16);
  REQUIRE_FALSE(m.points.empty());
  for (const auto& p : m.points) {
    const Vector3& q = p.q;
    const double d = std::min({std::abs(q(0) + q(1) + q(2) - 1), std::abs(-q(0) - q(1) + q(2) - 1),
                               std::abs(q(0) - q(1) - q(2) - 1), std::abs(-q(0) + q(1) - q(2) - 1)});
    CHECK(d < 1e-12);
  }
}

TEST_CASE("octahedron mesh at r = s = 0", "[geometry]") {
  const SurfaceMesh m = surface_mesh(Body::L, 0, 0, 16);
  REQUIRE_FALSE(m.points.empty());
  for (const auto& p : m.points) CHECK_THAT(octahedron_norm(p.q), WithinAbs(1.0, 1e-8));
}

TEST_CASE("deformed octahedron mesh matches pointwise roots", "[geometry]") {
  const SurfaceMesh m = surface_mesh(Body::L, 0.5, 0.5, 12);
  REQUIRE_FALSE(m.points.empty());
  for (const auto& p : m.points) {
    CHECK(std::abs(boundary_residual(Body::L, 0.5, 0.5, p.q)) < 1e-12);
    CHECK(octahedron_norm(p.q) <= 1.0 + 1e-8);
  }
}

TEST_CASE("mesh rejects bad arguments", "[geometry]") {
  CHECK_THROWS_AS(surface_mesh(Body::T, 0, 0, 1), Error);
  CHECK_THROWS_AS(surface_mesh(Body::T, 1.2, 0, 8), Error);
}

TEST_CASE("ray crossings", "[geometry]") {
  const Vertex v1 = tetrahedron_vertices()[0];
  SECTION("Werner-type point") {
    const auto c = line_surface_crossing(Vector3(0.8, -0.8, 0.8), v1, 0, 0);
    REQUIRE(c.size() == 1);
    CHECK((c[0].coords - Vector3(1, -1, 1) / 3.0).norm() < 1e-10);
  }
  SECTION("VP line") {
    const Vector3 lam(0.5, 0.3, 0.2);
    const double d = lam(1) - lam(2);
    const auto c = line_surface_crossing(Vector3(lam(0), -lam(0), 1), v1, d, d);
    REQUIRE_FALSE(c.empty());
    CHECK((c[0].coords - Vector3(0, 0, 1)).norm() < 1e-9);
  }
  SECTION("Horodecki line has two crossings") {
    const Vector3 lam(0.6, 0.3, 0.1);
    const double d = lam(1) - lam(2);
    const auto c = line_surface_crossing(Vector3(lam(0), -lam(0), 2 * lam(0) - 1), v1, d, -d);
    REQUIRE(c.size() == 2);
    const double q1 = 0.5 * (lam(0) + 2 * lam(1)) * (lam(0) + 2 * lam(2));
    CHECK((c[0].coords - Vector3(q1, -q1, 2 * q1 - 1)).norm() < 1e-9);
    CHECK((c[1].coords - Vector3(0, 0, -1)).norm() < 1e-9);
  }
  SECTION("near-vertex start still reaches the far crossings") {
    const Vector3 lam(0.97, 0.02, 0.01);
    const double d = lam(1) - lam(2);
    const auto c = line_surface_crossing(Vector3(lam(0), -lam(0), 2 * lam(0) - 1), v1, d, -d);
    REQUIRE(c.size() == 2);
    CHECK((c[1].coords - Vector3(0, 0, -1)).norm() < 1e-9);
  }
  SECTION("a ray inside T that never meets L") {
    // From v1 towards v1 itself is rejected; a ray pointing away from L misses it.
    CHECK_THROWS_AS(line_surface_crossing(Vector3(1, -1, 1), v1, 0, 0), Error);
    CHECK_THROWS_AS(line_surface_crossing(Vector3(2, -2, 2), v1, 0, 0), Error);
  }
}
