// relative_entropy.hpp
// Quantum relative entropy S(rho||sigma) = tr(rho ln rho - rho ln sigma) in
// nats, and the first derivative of -tr(rho ln sigma) with respect to sigma.

#pragma once

#include <cmath>
#include <limits>

#include "reegeom/core.hpp"
#include "reegeom/qstate.hpp"

namespace reegeom {

inline constexpr double kLogClamp = 1e-300;

/// S(rho||sigma), or the explicit infinite tag when rho has weight outside
/// the support of sigma.
struct RelativeEntropy {
  double value = 0.0;
  bool infinite = false;

  static RelativeEntropy infinity() { return {std::numeric_limits<double>::infinity(), true}; }
  bool finite() const { return !infinite; }
};

/// sum_i p_i ln p_i with 0 ln 0 = 0.
inline double negative_entropy(const Vector4& p) {
  double acc = 0.0;
  for (int i = 0; i < 4; ++i)
    if (p(i) > kSupportThreshold) acc += p(i) * std::log(p(i));
  return acc;
}

inline double von_neumann_entropy(const DensityMatrix& rho) { return -negative_entropy(eigenvalues(rho.matrix())); }

inline RelativeEntropy relative_entropy(const Matrix4c& rho, const Matrix4c& sigma) {
  const Vector4 p = eigenvalues(rho);
  const HermitianEigen s = eigh(sigma);
  double cross = 0.0;
  for (int j = 0; j < 4; ++j) {
    const Vector4c f = s.vectors.col(j);
    const double weight = (f.adjoint() * rho * f)(0).real();  // <f_j|rho|f_j>
    const double q = s.values(j);
    if (q <= kSupportThreshold) {
      if (weight > kSupportThreshold) return RelativeEntropy::infinity();
      continue;
    }
    cross += weight * std::log(std::max(q, kLogClamp));
  }
  return {negative_entropy(p) - cross, false};
}

inline RelativeEntropy relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return relative_entropy(rho.matrix(), sigma.matrix());
}

/// Frechet derivative of ln at sigma applied to rho, written in the original
/// basis: M = U (K o U^dag rho U) U^dag with K_ij the divided differences of ln
/// on the eigenvalues of sigma. Then d/de tr(rho ln(sigma + e D)) = tr(M D).
/// Pairs touching the kernel of sigma are dropped, which is exact whenever
/// rho lives inside the support of sigma.
inline Matrix4c log_derivative(const Matrix4c& sigma, const Matrix4c& rho) {
  const HermitianEigen s = eigh(sigma);
  Matrix4c rot = s.vectors.adjoint() * rho * s.vectors;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double a = s.values(i), b = s.values(j);
      if (a <= kSupportThreshold || b <= kSupportThreshold) {
        rot(i, j) = 0.0;
        continue;
      }
      rot(i, j) *= log_divided_difference(a, b);
    }
  }
  return s.vectors * rot * s.vectors.adjoint();
}

}  // namespace reegeom
