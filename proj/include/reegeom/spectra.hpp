// spectra.hpp
// Closed-form eigensystems of the two-qubit state with z-parallel Bloch
// vectors and diagonal correlations,
//
//   rho = 1/4 [ I + r sz(x)I + s I(x)sz + sum_n q_n sn(x)sn ],
//
// and of its partial transpose, together with the boundary sheets of the
// deformed tetrahedron (rho singular) and deformed octahedron (rho^T_B singular).

#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "reegeom/core.hpp"
#include "reegeom/qstate.hpp"

namespace reegeom {

struct ZParallelState {
  double r = 0.0;
  double s = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
  double q3 = 0.0;

  Vector3 q() const { return {q1, q2, q3}; }

  /// The explicit X-shaped matrix.
  Matrix4c matrix() const {
    Matrix4c m = Matrix4c::Zero();
    m(0, 0) = 1 + r + s + q3;
    m(1, 1) = 1 + r - s - q3;
    m(2, 2) = 1 - r + s - q3;
    m(3, 3) = 1 - r - s + q3;
    m(0, 3) = m(3, 0) = q1 - q2;
    m(1, 2) = m(2, 1) = q1 + q2;
    return 0.25 * m;
  }

  DiagonalPauliForm pauli() const { return {Vector3(0, 0, r), Vector3(0, 0, s), q()}; }

  /// Partial transpose acts as q2 -> -q2.
  ZParallelState transposed() const { return {r, s, q1, -q2, q3}; }

  static ZParallelState from_pauli(const DiagonalPauliForm& p) {
    return {p.r(2), p.s(2), p.q(0), p.q(1), p.q(2)};
  }
};

struct EigenPair {
  double value = 0.0;
  Vector4c vector = Vector4c::Zero();
};

/// Labelled spectrum: mu_{+-} live on span{|01>,|10>}, nu_{+-} on span{|00>,|11>}.
struct EigenSystem {
  EigenPair mu_plus, mu_minus, nu_plus, nu_minus;
  bool degenerate_vector = false;  // a closed-form vector vanished and was replaced

  double min_value() const {
    return std::min(std::min(mu_plus.value, mu_minus.value), std::min(nu_plus.value, nu_minus.value));
  }
  Vector4 values() const { return {mu_plus.value, mu_minus.value, nu_plus.value, nu_minus.value}; }
  Matrix4c vectors() const {
    Matrix4c v;
    v << mu_plus.vector, mu_minus.vector, nu_plus.vector, nu_minus.vector;
    return v;
  }
};

/// Same layout, for rho^T_B.
struct PtEigenSystem : EigenSystem {};

namespace detail {

// Eigenpairs of the 2x2 block (1/4)[[base + c, b], [b, base - c]] on basis
// vectors (i, j): values (base +- M)/4 with M = sqrt(c^2 + b^2) and vectors
// b|i> - (c -+ M)|j>. The differences c -+ M are evaluated without cancellation.
inline std::pair<EigenPair, EigenPair> block_pairs(double base, double c, double b, int i, int j,
                                                   bool& degenerate) {
  const double m = std::hypot(c, b);
  const double c_minus_m = c > 0.0 ? -b * b / (c + m) : c - m;  // for the + pair
  const double c_plus_m = c < 0.0 ? b * b / (m - c) : c + m;    // for the - pair

  auto make = [&](double value, double shift) {
    EigenPair p;
    p.value = value;
    p.vector(i) = b;
    p.vector(j) = -shift;
    return p;
  };
  EigenPair plus = make(0.25 * (base + m), c_minus_m);
  EigenPair minus = make(0.25 * (base - m), c_plus_m);

  const double np = plus.vector.norm();
  const double nm = minus.vector.norm();
  const Vector4c ei = Vector4c::Unit(i);
  const Vector4c ej = Vector4c::Unit(j);
  if (np == 0.0 && nm == 0.0) {
    degenerate = true;
    plus.vector = ei;
    minus.vector = ej;
  } else if (np == 0.0) {
    degenerate = true;
    minus.vector /= nm;
    // Orthogonal complement of the surviving vector inside span{|i>,|j>}.
    plus.vector = Vector4c::Zero();
    plus.vector(i) = -std::conj(minus.vector(j));
    plus.vector(j) = std::conj(minus.vector(i));
  } else if (nm == 0.0) {
    degenerate = true;
    plus.vector /= np;
    minus.vector = Vector4c::Zero();
    minus.vector(i) = -std::conj(plus.vector(j));
    minus.vector(j) = std::conj(plus.vector(i));
  } else {
    plus.vector /= np;
    minus.vector /= nm;
  }
  return {plus, minus};
}

}  // namespace detail

/// Closed-form eigensystem of the z-parallel state. Valid for any real
/// parameters, including non-physical points.
inline EigenSystem eigensystem(const ZParallelState& z) {
  EigenSystem e;
  bool degenerate = false;
  auto [mp, mm] = detail::block_pairs(1.0 - z.q3, z.r - z.s, z.q1 + z.q2, 1, 2, degenerate);
  auto [np, nm] = detail::block_pairs(1.0 + z.q3, z.r + z.s, z.q1 - z.q2, 0, 3, degenerate);
  e.mu_plus = mp;
  e.mu_minus = mm;
  e.nu_plus = np;
  e.nu_minus = nm;
  e.degenerate_vector = degenerate;
  return e;
}

/// Closed-form eigensystem of rho^T_B: the z-parallel spectrum with q2 -> -q2.
inline PtEigenSystem pt_eigensystem(const ZParallelState& z) {
  PtEigenSystem out;
  static_cast<EigenSystem&>(out) = eigensystem(z.transposed());
  return out;
}

/// lambda_min(rho) and lambda_min(rho^T_B) for the z-parallel state.
inline double min_eigenvalue(const ZParallelState& z) {
  const double m1 = std::hypot(z.r - z.s, z.q1 + z.q2);
  const double m2 = std::hypot(z.r + z.s, z.q1 - z.q2);
  return 0.25 * std::min(1.0 - z.q3 - m1, 1.0 + z.q3 - m2);
}

inline double min_pt_eigenvalue(const ZParallelState& z) { return min_eigenvalue(z.transposed()); }

enum class Sheet { Mu, Nu };

constexpr std::string_view to_string(Sheet s) { return s == Sheet::Mu ? "mu" : "nu"; }

struct SheetRoot {
  double q3 = 0.0;
  Sheet sheet = Sheet::Mu;
  bool physical = true;  // rho itself is PSD at the root (always true for boundary_T)
};

namespace detail {

inline void check_bloch(double r, double s) {
  if (!(std::abs(r) <= 1.0) || !(std::abs(s) <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "Bloch components must satisfy |r|,|s| <= 1");
}

}  // namespace detail

/// Boundary of the deformed tetrahedron above (q1, q2): the q3 values where
/// min(mu_-, nu_-) = 0. Each sheet root is kept only when the other lower
/// eigenvalue is non-negative there.
inline std::vector<SheetRoot> boundary_T(double r, double s, double q1, double q2,
                                         double tol = kPsdTolerance) {
  detail::check_bloch(r, s);
  std::vector<SheetRoot> roots;
  const double mu_root = 1.0 - std::hypot(r - s, q1 + q2);
  const double nu_root = std::hypot(r + s, q1 - q2) - 1.0;
  if (eigensystem({r, s, q1, q2, mu_root}).nu_minus.value >= -tol) roots.push_back({mu_root, Sheet::Mu, true});
  if (eigensystem({r, s, q1, q2, nu_root}).mu_minus.value >= -tol) roots.push_back({nu_root, Sheet::Nu, true});
  return roots;
}

/// Boundary of the deformed octahedron above (q1, q2): the q3 values where
/// min(mu_-^T, nu_-^T) = 0. `physical` records whether rho is PSD at the root;
/// only those points are edge states.
inline std::vector<SheetRoot> boundary_L(double r, double s, double q1, double q2,
                                         double tol = kPsdTolerance) {
  detail::check_bloch(r, s);
  std::vector<SheetRoot> roots;
  const double mu_root = 1.0 - std::hypot(r - s, q1 - q2);
  const double nu_root = std::hypot(r + s, q1 + q2) - 1.0;
  const ZParallelState at_mu{r, s, q1, q2, mu_root};
  const ZParallelState at_nu{r, s, q1, q2, nu_root};
  if (pt_eigensystem(at_mu).nu_minus.value >= -tol)
    roots.push_back({mu_root, Sheet::Mu, min_eigenvalue(at_mu) >= -tol});
  if (pt_eigensystem(at_nu).mu_minus.value >= -tol)
    roots.push_back({nu_root, Sheet::Nu, min_eigenvalue(at_nu) >= -tol});
  return roots;
}

}  // namespace reegeom
