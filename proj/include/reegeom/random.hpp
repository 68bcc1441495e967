// random.hpp
// Seeded samplers for states, unitaries and Bloch directions used by the
// numerical oracle, the property tests and the verification suites.

#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "reegeom/core.hpp"
#include "reegeom/qstate.hpp"

namespace reegeom {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double gaussian(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

inline Vector3 random_unit_vector(Rng& rng) {
  Vector3 v;
  do {
    v = Vector3(gaussian(rng), gaussian(rng), gaussian(rng));
  } while (v.norm() < 1e-8);
  return v.normalized();
}

/// Uniform point on the probability simplex of dimension n.
inline Eigen::VectorXd random_simplex(Rng& rng, int n) {
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w(i) = -std::log(1.0 - uniform(rng));
  return w / w.sum();
}

/// Haar-random 2x2 unitary.
inline Matrix2c random_unitary2(Rng& rng) {
  Eigen::Matrix2cd z;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) z(i, j) = Complex(gaussian(rng), gaussian(rng));
  Eigen::HouseholderQR<Eigen::Matrix2cd> qr(z);
  Matrix2c q = qr.householderQ();
  const Matrix2c r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < 2; ++i) q.col(i) *= std::polar(1.0, std::arg(r(i, i)));
  return q;
}

inline LocalUnitary random_local_unitary(Rng& rng) { return {random_unitary2(rng), random_unitary2(rng)}; }

/// Ginibre-induced random state of the given rank (Hilbert-Schmidt measure at rank 4).
inline DensityMatrix random_state(Rng& rng, int rank = 4) {
  Eigen::Matrix<Complex, 4, Eigen::Dynamic> a(4, rank);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < rank; ++j) a(i, j) = Complex(gaussian(rng), gaussian(rng));
  Matrix4c m = a * a.adjoint();
  m /= m.trace().real();
  m = 0.5 * (m + m.adjoint());
  return DensityMatrix::from_matrix(m);
}

/// Projector onto the pure qubit state with Bloch vector n.
inline Matrix2c bloch_projector(const Vector3& n) {
  return 0.5 * (pauli(0) + n(0) * pauli(1) + n(1) * pauli(2) + n(2) * pauli(3));
}

/// Mixture of `terms` random pure product states; always separable.
inline DensityMatrix random_separable_state(Rng& rng, int terms = 16) {
  const Eigen::VectorXd p = random_simplex(rng, terms);
  Matrix4c m = Matrix4c::Zero();
  for (int k = 0; k < terms; ++k)
    m += p(k) * kron(bloch_projector(random_unit_vector(rng)), bloch_projector(random_unit_vector(rng)));
  m = 0.5 * (m + m.adjoint());
  m /= m.trace().real();
  return DensityMatrix::from_matrix(m);
}

}  // namespace reegeom
