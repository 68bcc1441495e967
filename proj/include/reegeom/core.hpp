// core.hpp
// Shared numeric types, tolerances, error type and small dense helpers for
// two-qubit work. Everything here is fixed-size (2x2, 3x3, 4x4).

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace reegeom {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;
using Vector4 = Eigen::Vector4d;
using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;

inline constexpr double kPsdTolerance = 1e-10;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kEdgeTolerance = 1e-8;
inline constexpr double kSupportThreshold = 1e-12;

enum class ErrorCode {
  InvalidState,
  InvalidArgument,
  OutsideTetrahedron,
  NoCrossing,
  NotEdgeState,
  RankDeficient,
  DegenerateZ,
  ParallelLines,
  NotSolvableFamily,
  NotConverged,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OutsideTetrahedron: return "OutsideTetrahedron";
    case ErrorCode::NoCrossing: return "NoCrossing";
    case ErrorCode::NotEdgeState: return "NotEdgeState";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::DegenerateZ: return "DegenerateZ";
    case ErrorCode::ParallelLines: return "ParallelLines";
    case ErrorCode::NotSolvableFamily: return "NotSolvableFamily";
    case ErrorCode::NotConverged: return "NotConverged";
  }
  return "Unknown";
}

/// Error raised by every fallible operation. `magnitude` carries the size of
/// the violated quantity when there is one (e.g. the most negative eigenvalue).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, double magnitude = 0.0)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        magnitude_(magnitude) {}

  ErrorCode code() const noexcept { return code_; }
  double magnitude() const noexcept { return magnitude_; }

 private:
  ErrorCode code_;
  double magnitude_;
};

/// Pauli matrices, index 0 is the identity.
inline const Matrix2c& pauli(int i) {
  static const std::array<Matrix2c, 4> paulis = [] {
    const Complex I(0.0, 1.0);
    std::array<Matrix2c, 4> p;
    p[0] << 1, 0, 0, 1;
    p[1] << 0, 1, 1, 0;
    p[2] << 0, -I, I, 0;
    p[3] << 1, 0, 0, -1;
    return p;
  }();
  return paulis.at(static_cast<std::size_t>(i));
}

/// Kronecker product, basis order |00>,|01>,|10>,|11> (first factor major).
inline Matrix4c kron(const Matrix2c& a, const Matrix2c& b) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return out;
}

inline Vector4c kron(const Eigen::Vector2cd& a, const Eigen::Vector2cd& b) {
  Vector4c out;
  out << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
  return out;
}

/// Tr(A B) without forming the product.
inline Complex trace_product(const Matrix4c& a, const Matrix4c& b) {
  return (a.array() * b.transpose().array()).sum();
}

inline double max_abs(const Matrix4c& m) { return m.cwiseAbs().maxCoeff(); }

inline double hermiticity_gap(const Matrix4c& m) { return max_abs(m - m.adjoint()); }

struct HermitianEigen {
  Vector4 values;    // ascending
  Matrix4c vectors;  // columns
};

inline HermitianEigen eigh(const Matrix4c& m) {
  const Matrix4c h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4c> solver(h);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline Vector4 eigenvalues(const Matrix4c& m) {
  const Matrix4c h = 0.5 * (m + m.adjoint());
  return Eigen::SelfAdjointEigenSolver<Matrix4c>(h, Eigen::EigenvaluesOnly).eigenvalues();
}

inline double min_eigenvalue(const Matrix4c& m) { return eigenvalues(m)(0); }

/// (ln a - ln b) / (a - b), with the analytic limit 1/a at a == b.
/// Written through expm1 so nearly equal arguments keep full precision.
inline double log_divided_difference(double a, double b) {
  const double u = std::log(a) - std::log(b);
  if (u == 0.0) return 1.0 / b;
  return u / (b * std::expm1(u));
}

/// (a - b) / (ln a - ln b), the logarithmic mean, with the limit a at a == b.
inline double logarithmic_mean(double a, double b) {
  const double u = std::log(a) - std::log(b);
  if (u == 0.0) return b;
  return b * std::expm1(u) / u;
}

}  // namespace reegeom
