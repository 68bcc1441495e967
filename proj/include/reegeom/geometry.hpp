// geometry.hpp
// Correlation-vector geometry: the tetrahedron T of all Bell-diagonal states,
// the octahedron L of the separable ones, their deformations at fixed
// z-parallel Bloch vectors, and the ray construction that locates a closest
// separable state as the crossing of a ray from a vertex of T with L_{r,s}.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string_view>
#include <vector>

#include "reegeom/core.hpp"
#include "reegeom/parallel.hpp"
#include "reegeom/spectra.hpp"

namespace reegeom {

enum class VertexLabel { V1, V2, V3, V4, O1Plus, O1Minus, O2Plus, O2Minus, O3Plus, O3Minus };

constexpr std::string_view to_string(VertexLabel v) {
  switch (v) {
    case VertexLabel::V1: return "v1";
    case VertexLabel::V2: return "v2";
    case VertexLabel::V3: return "v3";
    case VertexLabel::V4: return "v4";
    case VertexLabel::O1Plus: return "o1+";
    case VertexLabel::O1Minus: return "o1-";
    case VertexLabel::O2Plus: return "o2+";
    case VertexLabel::O2Minus: return "o2-";
    case VertexLabel::O3Plus: return "o3+";
    case VertexLabel::O3Minus: return "o3-";
  }
  return "?";
}

struct Vertex {
  VertexLabel label = VertexLabel::V1;
  Vector3 coords = Vector3::Zero();
};

/// Vertices of T in label order; v_k is the correlation vector of |beta_k>.
inline const std::array<Vertex, 4>& tetrahedron_vertices() {
  static const std::array<Vertex, 4> v{{
      {VertexLabel::V1, Vector3(1, -1, 1)},
      {VertexLabel::V2, Vector3(-1, 1, 1)},
      {VertexLabel::V3, Vector3(1, 1, -1)},
      {VertexLabel::V4, Vector3(-1, -1, -1)},
  }};
  return v;
}

inline const std::array<Vertex, 6>& octahedron_vertices() {
  static const std::array<Vertex, 6> v{{
      {VertexLabel::O1Plus, Vector3(1, 0, 0)},
      {VertexLabel::O1Minus, Vector3(-1, 0, 0)},
      {VertexLabel::O2Plus, Vector3(0, 1, 0)},
      {VertexLabel::O2Minus, Vector3(0, -1, 0)},
      {VertexLabel::O3Plus, Vector3(0, 0, 1)},
      {VertexLabel::O3Minus, Vector3(0, 0, -1)},
  }};
  return v;
}

/// Bell weights (1 + v_k . t)/4 of the Bell-diagonal state with correlation t.
inline Vector4 bell_weights(const Vector3& t) {
  Vector4 w;
  for (int k = 0; k < 4; ++k) w(k) = 0.25 * (1.0 + tetrahedron_vertices()[k].coords.dot(t));
  return w;
}

inline bool inside_tetrahedron(const Vector3& t, double tol = kEdgeTolerance) {
  return bell_weights(t).minCoeff() >= -0.25 * tol;
}

inline double octahedron_norm(const Vector3& t) { return t.cwiseAbs().sum(); }

/// Vertex of T closest to t; ties go to the lower label.
inline Vertex nearest_vertex(const Vector3& t) {
  const Vector4 w = bell_weights(t);
  if (w.minCoeff() < -0.25 * kEdgeTolerance)
    throw Error(ErrorCode::OutsideTetrahedron, "correlation vector lies outside T", -4.0 * w.minCoeff());
  const auto& vs = tetrahedron_vertices();
  std::size_t best = 0;
  double best_d = (t - vs[0].coords).squaredNorm();
  for (std::size_t k = 1; k < vs.size(); ++k) {
    const double d = (t - vs[k].coords).squaredNorm();
    if (d < best_d - 1e-14) {
      best = k;
      best_d = d;
    }
  }
  return vs[best];
}

enum class Body { T, L };

constexpr std::string_view to_string(Body b) { return b == Body::T ? "T" : "L"; }

struct MeshPoint {
  Vector3 q = Vector3::Zero();
  Sheet sheet = Sheet::Mu;
};

struct SurfaceMesh {
  Body body = Body::T;
  double r = 0.0;
  double s = 0.0;
  int n = 0;
  std::vector<MeshPoint> points;  // row-major over (q1, q2), mu sheet before nu sheet
};

/// Samples the boundary of T_{r,s} or L_{r,s} on an n x n grid over
/// (q1, q2) in [-1, 1]^2. For L only edge states (rho PSD) are kept.
inline SurfaceMesh surface_mesh(Body body, double r, double s, int n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "mesh size must be at least 2");
  if (!(std::abs(r) <= 1.0) || !(std::abs(s) <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "Bloch components must satisfy |r|,|s| <= 1");

  const auto cells = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  std::vector<std::vector<MeshPoint>> per_cell(cells);
  parallel_for(cells, [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / n;
    const int j = static_cast<int>(idx) % n;
    const double q1 = -1.0 + 2.0 * i / (n - 1);
    const double q2 = -1.0 + 2.0 * j / (n - 1);
    const auto roots = body == Body::T ? boundary_T(r, s, q1, q2) : boundary_L(r, s, q1, q2);
    for (const auto& root : roots) {
      if (!root.physical) continue;
      per_cell[idx].push_back({Vector3(q1, q2, root.q3), root.sheet});
    }
  });

  SurfaceMesh mesh{body, r, s, n, {}};
  for (auto& cell : per_cell) mesh.points.insert(mesh.points.end(), cell.begin(), cell.end());
  return mesh;
}

/// Residual of the defining equation of the body at a mesh point:
/// lambda_min of rho (T) or of rho^T_B (L).
inline double boundary_residual(Body body, double r, double s, const Vector3& q) {
  const ZParallelState z{r, s, q(0), q(1), q(2)};
  return body == Body::T ? min_eigenvalue(z) : min_pt_eigenvalue(z);
}

struct CrossingPoint {
  Vector3 coords = Vector3::Zero();
  double w = 0.0;  // p = v + w (t - v)
  Sheet sheet = Sheet::Mu;
};

struct RaySearch {
  double w_max = 10.0;
  double grid_step = 1e-3;
  double w_tolerance = 1e-12;
  double residual_tolerance = 1e-10;
  double physical_tolerance = kEdgeTolerance;
};

/// All points p = v + w (t - v), w >= 0, where the ray meets L_{r,s}:
/// min(mu_-^T, nu_-^T)(p) = 0 with rho(p) physical. Sign changes of the
/// minimum PT eigenvalue are bisected; touching zeros (local extrema that reach
/// zero without a sign change) are refined by golden-section search. Sorted by
/// distance from t.
inline std::vector<CrossingPoint> line_surface_crossing(const Vector3& t, const Vertex& v, double r,
                                                        double s, const RaySearch& opt = {}) {
  const Vector3 dir = t - v.coords;
  if (dir.norm() < 1e-14) throw Error(ErrorCode::InvalidArgument, "t coincides with the vertex");

  auto point = [&](double w) -> Vector3 { return v.coords + w * dir; };
  auto f = [&](double w) {
    const Vector3 p = point(w);
    return min_pt_eigenvalue(ZParallelState{r, s, p(0), p(1), p(2)});
  };

  // When t sits close to v the ray must run past w_max to leave T (diameter
  // 2 sqrt 2); the window and the grid step are stretched by the same factor.
  const double stretch = std::max(1.0, 4.0 / (dir.norm() * opt.w_max));
  const double step = opt.grid_step * stretch;
  std::vector<double> roots;
  const int steps = static_cast<int>(std::lround(opt.w_max / opt.grid_step));
  std::vector<double> fw(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) fw[k] = f(k * step);

  auto bisect = [&](double lo, double hi, double flo) {
    while (hi - lo > opt.w_tolerance) {
      const double mid = 0.5 * (lo + hi);
      const double fm = f(mid);
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  // Golden-section search for an extremum of sign `dir_sign` (+1 max, -1 min).
  auto extremum = [&](double lo, double hi, double dir_sign) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = dir_sign * f(c), fd = dir_sign * f(d);
    while (b - a > opt.w_tolerance) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - g * (b - a);
        fc = dir_sign * f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + g * (b - a);
        fd = dir_sign * f(d);
      }
    }
    return 0.5 * (a + b);
  };

  for (int k = 0; k <= steps; ++k) {
    const double wk = k * step;
    if (fw[k] == 0.0) {
      roots.push_back(wk);
      continue;
    }
    if (k < steps && fw[k + 1] != 0.0 && (fw[k] < 0.0) != (fw[k + 1] < 0.0)) {
      roots.push_back(bisect(wk, wk + step, fw[k]));
      continue;
    }
    if (k == 0 || k == steps) continue;
    const bool local_max = fw[k] < 0.0 && fw[k] >= fw[k - 1] && fw[k] >= fw[k + 1];
    const bool local_min = fw[k] > 0.0 && fw[k] <= fw[k - 1] && fw[k] <= fw[k + 1];
    if ((local_max || local_min) && std::abs(fw[k]) < 1e-2) {
      const double w = extremum(wk - step, wk + step, local_max ? 1.0 : -1.0);
      if (std::abs(f(w)) <= opt.residual_tolerance) roots.push_back(w);
    }
  }

  std::vector<CrossingPoint> out;
  for (double w : roots) {
    const Vector3 p = point(w);
    const ZParallelState z{r, s, p(0), p(1), p(2)};
    if (std::abs(min_pt_eigenvalue(z)) > opt.residual_tolerance) continue;
    if (min_eigenvalue(z) < -opt.physical_tolerance) continue;
    const PtEigenSystem pt = pt_eigensystem(z);
    const Sheet sheet = pt.mu_minus.value <= pt.nu_minus.value ? Sheet::Mu : Sheet::Nu;
    if (!out.empty() && (out.back().coords - p).norm() < 1e-9) continue;
    out.push_back({p, w, sheet});
  }
  if (out.empty()) throw Error(ErrorCode::NoCrossing, "ray from the vertex misses L_{r,s}");
  std::stable_sort(out.begin(), out.end(), [&](const CrossingPoint& a, const CrossingPoint& b) {
    return (a.coords - t).norm() < (b.coords - t).norm();
  });
  return out;
}

}  // namespace reegeom
