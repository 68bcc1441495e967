// qstate.hpp
// Two-qubit state algebra: validated density matrices, Pauli (Bloch +
// correlation) decomposition, partial transpose/trace, local-unitary
// canonicalization of the correlation tensor and the Wootters concurrence.

#pragma once

#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "reegeom/core.hpp"

namespace reegeom {

struct StateCheck {
  bool ok = true;
  std::string violation;  // empty when ok
  double magnitude = 0.0;
};

/// Checks Hermiticity, unit trace and positivity in that order and reports the
/// first violated invariant together with its size.
inline StateCheck check_state(const Matrix4c& m, double psd_tol = kPsdTolerance) {
  const double herm = hermiticity_gap(m);
  if (herm > kHermitianTolerance) return {false, "not Hermitian", herm};
  const double trace_err = std::abs(m.trace() - Complex(1.0, 0.0));
  if (trace_err > kTraceTolerance) return {false, "trace differs from 1", trace_err};
  const double lmin = min_eigenvalue(m);
  if (lmin < -psd_tol) return {false, "negative eigenvalue", lmin};
  return {};
}

/// A 4x4 Hermitian, unit-trace, positive semidefinite matrix. Construction
/// through `from_matrix` validates; the default value is I/4.
class DensityMatrix {
 public:
  DensityMatrix() : m_(Matrix4c::Identity() * 0.25) {}

  static DensityMatrix from_matrix(const Matrix4c& m, double psd_tol = kPsdTolerance) {
    const StateCheck check = check_state(m, psd_tol);
    if (!check.ok) throw Error(ErrorCode::InvalidState, check.violation, check.magnitude);
    return DensityMatrix(m);
  }

  static DensityMatrix maximally_mixed() { return {}; }

  const Matrix4c& matrix() const noexcept { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

 private:
  explicit DensityMatrix(const Matrix4c& m) : m_(m) {}
  Matrix4c m_;
};

struct PauliForm {
  Vector3 r = Vector3::Zero();
  Vector3 s = Vector3::Zero();
  Matrix3 g = Matrix3::Zero();
};

struct DiagonalPauliForm {
  Vector3 r = Vector3::Zero();
  Vector3 s = Vector3::Zero();
  Vector3 q = Vector3::Zero();

  PauliForm full() const { return {r, s, q.asDiagonal()}; }
};

/// Result of rebuilding a matrix from Pauli coefficients. The matrix is always
/// Hermitian with unit trace; `not_positive` flags a negative eigenvalue.
struct Reconstruction {
  Matrix4c matrix;
  bool not_positive = false;
  double min_eigenvalue = 0.0;

  DensityMatrix state(double psd_tol = kPsdTolerance) const {
    return DensityMatrix::from_matrix(matrix, psd_tol);
  }
};

inline PauliForm to_pauli(const Matrix4c& rho) {
  PauliForm p;
  for (int i = 1; i <= 3; ++i) {
    p.r(i - 1) = trace_product(rho, kron(pauli(i), pauli(0))).real();
    p.s(i - 1) = trace_product(rho, kron(pauli(0), pauli(i))).real();
    for (int j = 1; j <= 3; ++j)
      p.g(i - 1, j - 1) = trace_product(rho, kron(pauli(i), pauli(j))).real();
  }
  return p;
}

inline PauliForm to_pauli(const DensityMatrix& rho) { return to_pauli(rho.matrix()); }

inline Matrix4c pauli_matrix(const PauliForm& p) {
  Matrix4c m = kron(pauli(0), pauli(0));
  for (int i = 1; i <= 3; ++i) {
    m += p.r(i - 1) * kron(pauli(i), pauli(0));
    m += p.s(i - 1) * kron(pauli(0), pauli(i));
    for (int j = 1; j <= 3; ++j) m += p.g(i - 1, j - 1) * kron(pauli(i), pauli(j));
  }
  return 0.25 * m;
}

inline Reconstruction from_pauli(const PauliForm& p, double psd_tol = kPsdTolerance) {
  Reconstruction out;
  out.matrix = pauli_matrix(p);
  out.min_eigenvalue = min_eigenvalue(out.matrix);
  out.not_positive = out.min_eigenvalue < -psd_tol;
  return out;
}

inline Reconstruction from_pauli(const DiagonalPauliForm& p, double psd_tol = kPsdTolerance) {
  return from_pauli(p.full(), psd_tol);
}

/// Transpose on the second factor: <ab|M^T_B|cd> = <ad|M|cb>.
inline Matrix4c partial_transpose(const Matrix4c& m) {
  Matrix4c out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) out(2 * a + b, 2 * c + d) = m(2 * a + d, 2 * c + b);
  return out;
}

inline Matrix4c partial_transpose(const DensityMatrix& rho) { return partial_transpose(rho.matrix()); }

inline Matrix2c partial_trace_b(const Matrix4c& m) {
  Matrix2c out = Matrix2c::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) out(i, j) += m(2 * i + k, 2 * j + k);
  return out;
}

inline Matrix2c partial_trace_a(const Matrix4c& m) {
  Matrix2c out = Matrix2c::Zero();
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l)
      for (int i = 0; i < 2; ++i) out(k, l) += m(2 * i + k, 2 * i + l);
  return out;
}

inline double min_pt_eigenvalue(const Matrix4c& m) { return min_eigenvalue(partial_transpose(m)); }

/// Positive partial transpose test; for two qubits this is separability.
inline bool is_ppt(const DensityMatrix& rho, double tol = kPsdTolerance) {
  return min_pt_eigenvalue(rho.matrix()) >= -tol;
}

/// Pair of single-qubit unitaries acting as (U_A (x) U_B) rho (U_A (x) U_B)^dagger.
struct LocalUnitary {
  Matrix2c a = Matrix2c::Identity();
  Matrix2c b = Matrix2c::Identity();

  Matrix4c matrix() const { return kron(a, b); }
  Matrix4c apply(const Matrix4c& m) const {
    const Matrix4c u = matrix();
    return u * m * u.adjoint();
  }
  Matrix4c apply_inverse(const Matrix4c& m) const {
    const Matrix4c u = matrix();
    return u.adjoint() * m * u;
  }
  DensityMatrix apply(const DensityMatrix& rho) const {
    return DensityMatrix::from_matrix(apply(rho.matrix()));
  }
  DensityMatrix apply_inverse(const DensityMatrix& rho) const {
    return DensityMatrix::from_matrix(apply_inverse(rho.matrix()));
  }
  double unitarity_gap() const {
    return std::max((a * a.adjoint() - Matrix2c::Identity()).cwiseAbs().maxCoeff(),
                    (b * b.adjoint() - Matrix2c::Identity()).cwiseAbs().maxCoeff());
  }
};

/// SU(2) element whose conjugation rotates Bloch vectors by `rot`:
/// tr(U rho U^dagger sigma) = rot * tr(rho sigma).
inline Matrix2c su2_from_rotation(const Matrix3& rot) {
  const Eigen::Quaterniond q(rot);
  const Complex I(0.0, 1.0);
  return q.w() * pauli(0) - I * (q.x() * pauli(1) + q.y() * pauli(2) + q.z() * pauli(3));
}

inline LocalUnitary local_unitary_from_rotations(const Matrix3& rot_a, const Matrix3& rot_b) {
  return {su2_from_rotation(rot_a), su2_from_rotation(rot_b)};
}

struct Canonicalization {
  DiagonalPauliForm form;  // Pauli data of lu.apply(rho)
  LocalUnitary lu;
  Matrix3 rot_a = Matrix3::Identity();  // r' = rot_a r
  Matrix3 rot_b = Matrix3::Identity();  // s' = rot_b s
  bool degenerate_frame = false;        // singular values of g coincide within 1e-8
  double off_diagonal = 0.0;            // largest off-diagonal entry left in g'
};

namespace detail {

// Proper rotation taking unit vector `from` onto unit vector `to`. For the
// antiparallel case a half turn about `fallback_axis` (assumed orthogonal to
// `from`) is used so that block structure is kept.
inline Matrix3 rotation_between(const Vector3& from, const Vector3& to, const Vector3& fallback_axis) {
  const Vector3 axis = from.cross(to);
  const double c = from.dot(to);
  if (axis.norm() < 1e-12) {
    if (c > 0.0) return Matrix3::Identity();
    const Vector3 k = fallback_axis.normalized();
    return 2.0 * k * k.transpose() - Matrix3::Identity();
  }
  return Eigen::AngleAxisd(std::atan2(axis.norm(), c), axis.normalized()).toRotationMatrix();
}

inline double sign_or_one(double x) { return x < 0.0 ? -1.0 : 1.0; }

}  // namespace detail

/// Local-unitary frame in which the correlation tensor is diagonal, sorted by
/// |q_i| descending with q_1, q_2 >= 0 (the sign of det g sits on q_3). When
/// singular values coincide the frame inside the degenerate block is turned so
/// that the Bloch vector r (or s if r has no weight there) lies on the first
/// axis of the block.
inline Canonicalization canonicalize(const DensityMatrix& rho) {
  const PauliForm p = to_pauli(rho);

  Eigen::JacobiSVD<Matrix3> svd(p.g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix3 u = svd.matrixU();
  Matrix3 v = svd.matrixV();
  Vector3 d = svd.singularValues();
  if (u.determinant() < 0.0) {
    u.col(2) *= -1.0;
    d(2) *= -1.0;
  }
  if (v.determinant() < 0.0) {
    v.col(2) *= -1.0;
    d(2) *= -1.0;
  }
  Matrix3 oa = u.transpose();
  Matrix3 ob = v.transpose();

  // Sort |d| descending with a common signed permutation on both sides.
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return std::abs(d(i)) > std::abs(d(j)); });
  Matrix3 perm = Matrix3::Zero();
  for (int i = 0; i < 3; ++i) perm(i, order[i]) = 1.0;
  if (perm.determinant() < 0.0) perm.row(2) *= -1.0;
  oa = perm * oa;
  ob = perm * ob;

  auto current_q = [&] { return Vector3((oa * p.g * ob.transpose()).diagonal()); };
  Vector3 q = current_q();

  // Flip pairs of signs on the A side so that q1, q2 >= 0.
  Vector3 flip = Vector3::Ones();
  if (q(0) < 0.0 && q(1) < 0.0) {
    flip << -1, -1, 1;
  } else if (q(0) < 0.0) {
    flip << -1, 1, -1;
  } else if (q(1) < 0.0) {
    flip << 1, -1, -1;
  }
  oa = flip.asDiagonal() * oa;
  q = current_q();

  Canonicalization out;

  // Degenerate clusters of |q|.
  std::vector<std::vector<int>> clusters;
  for (int i = 0; i < 3; ++i) {
    if (!clusters.empty() && std::abs(std::abs(q(clusters.back().back())) - std::abs(q(i))) < 1e-8)
      clusters.back().push_back(i);
    else
      clusters.push_back({i});
  }
  for (const auto& cluster : clusters) {
    if (cluster.size() < 2) continue;
    out.degenerate_frame = true;
    Vector3 mask = Vector3::Zero();
    for (int i : cluster) mask(i) = 1.0;
    const Vector3 target = Vector3::Unit(cluster.front());
    Vector3 fallback = Vector3::Zero();
    if (cluster.size() == 2) {
      fallback = Vector3::Unit(3 - cluster[0] - cluster[1]);
    } else {
      fallback = Vector3::Unit(cluster[1]);
    }
    auto aligner = [&](const Vector3& w) -> Matrix3 {
      const Vector3 proj = mask.asDiagonal() * w;
      if (proj.norm() < 1e-10) return Matrix3::Identity();
      return detail::rotation_between(proj.normalized(), target, fallback);
    };
    const Vector3 ra = oa * p.r;
    const Vector3 sb = ob * p.s;
    const bool zero_cluster = std::abs(q(cluster.front())) < 1e-12;
    if (zero_cluster) {
      oa = aligner(ra) * oa;
      ob = aligner(sb) * ob;
    } else {
      Vector3 signs;
      for (int i = 0; i < 3; ++i) signs(i) = detail::sign_or_one(q(i));
      const Matrix3 sgn = signs.asDiagonal();
      if ((mask.asDiagonal() * ra).norm() >= 1e-10) {
        const Matrix3 rot = aligner(ra);
        oa = rot * oa;
        ob = sgn * rot * sgn * ob;
      } else {
        const Matrix3 rot = aligner(sb);
        ob = rot * ob;
        oa = sgn * rot * sgn * oa;
      }
    }
  }

  const Matrix3 g_new = oa * p.g * ob.transpose();
  out.form.r = oa * p.r;
  out.form.s = ob * p.s;
  out.form.q = g_new.diagonal();
  out.off_diagonal = (g_new - Matrix3(g_new.diagonal().asDiagonal())).cwiseAbs().maxCoeff();
  out.rot_a = oa;
  out.rot_b = ob;
  out.lu = local_unitary_from_rotations(oa, ob);
  return out;
}

/// Wootters concurrence via the Hermitian form sqrt(rho) rho~ sqrt(rho).
inline double concurrence(const DensityMatrix& rho) {
  const Matrix4c yy = kron(pauli(2), pauli(2));
  const HermitianEigen e = eigh(rho.matrix());
  const Vector4 roots = e.values.cwiseMax(0.0).cwiseSqrt();
  const Matrix4c sqrt_rho = e.vectors * roots.cast<Complex>().asDiagonal() * e.vectors.adjoint();
  const Matrix4c tilde = yy * rho.matrix().conjugate() * yy;
  Vector4 lam = eigenvalues(sqrt_rho * tilde * sqrt_rho).cwiseMax(0.0).cwiseSqrt();
  std::sort(lam.data(), lam.data() + 4, std::greater<>());
  return std::max(0.0, lam(0) - lam(1) - lam(2) - lam(3));
}

inline Vector4c bell_vector(int k) {
  const double h = 1.0 / std::sqrt(2.0);
  Vector4c v = Vector4c::Zero();
  switch (k) {
    case 1: v << h, 0, 0, h; break;
    case 2: v << h, 0, 0, -h; break;
    case 3: v << 0, h, h, 0; break;
    case 4: v << 0, h, -h, 0; break;
    default: throw Error(ErrorCode::InvalidArgument, "Bell index must be 1..4");
  }
  return v;
}

/// |beta_k><beta_k| with beta_1 = (|00>+|11>)/sqrt2, beta_2 = (|00>-|11>)/sqrt2,
/// beta_3 = (|01>+|10>)/sqrt2, beta_4 = (|01>-|10>)/sqrt2.
inline DensityMatrix bell_state(int k) {
  const Vector4c v = bell_vector(k);
  return DensityMatrix::from_matrix(v * v.adjoint());
}

inline Matrix4c basis_projector(int i) {
  Matrix4c m = Matrix4c::Zero();
  m(i, i) = 1.0;
  return m;
}

}  // namespace reegeom
