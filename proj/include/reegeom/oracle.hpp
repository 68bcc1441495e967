// oracle.hpp
// Numerical relative entropy of entanglement. The separable set is covered by
// mixtures of K pure product states,
//
//   sigma = sum_k softmax(w)_k |a_k><a_k| (x) |b_k><b_k|,
//
// with each Bloch direction given by two angles. S(rho||sigma) is minimized by
// multi-start L-BFGS (Ceres) using the analytic gradient. The objective is
// convex in sigma, so distinct restarts agreeing is a meaningful check that the
// non-convex parameterization found the global value.
//
// Also provides the first-order optimality certificate for a candidate CSS.

#pragma once

#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <numbers>
#include <optional>
#include <vector>

#include "reegeom/core.hpp"
#include "reegeom/parallel.hpp"
#include "reegeom/qstate.hpp"
#include "reegeom/random.hpp"
#include "reegeom/relative_entropy.hpp"

namespace reegeom {

struct OracleConfig {
  int ensemble_size = 20;  // K; at least 16 so every separable state is reachable
  int max_iterations = 3000;
  double step_tolerance = 1e-6;  // restarts within this of the best count as agreeing
  int restarts = 8;
  unsigned long long seed = 20140101ULL;
};

inline constexpr double kRestartAgreement = 1e-3;
inline constexpr int kMinAgreeingRestarts = 3;

struct ReeReport {
  double value = 0.0;  // nats
  std::optional<DensityMatrix> css_geometric;
  DensityMatrix css_numeric;
  double gap = 0.0;  // geometric minus numeric, when both exist
  int iterations = 0;
  bool converged = false;
  std::vector<double> restart_values;  // sorted ascending
};

namespace detail {

inline Vector3 sphere_point(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

inline Vector3 sphere_dtheta(double theta, double phi) {
  return {std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), -std::sin(theta)};
}

inline Vector3 sphere_dphi(double theta, double phi) {
  return {-std::sin(theta) * std::sin(phi), std::sin(theta) * std::cos(phi), 0.0};
}

inline Matrix2c bloch_operator(const Vector3& n) {
  return 0.5 * (n(0) * pauli(1) + n(1) * pauli(2) + n(2) * pauli(3));
}

// Parameter layout: [w_0..w_{K-1}, (theta_a, phi_a, theta_b, phi_b) x K].
class ProductMixture {
 public:
  explicit ProductMixture(int k) : k_(k) {}

  int size() const { return 5 * k_; }

  Eigen::VectorXd weights(const double* x) const {
    Eigen::VectorXd w(k_);
    const double top = *std::max_element(x, x + k_);
    for (int i = 0; i < k_; ++i) w(i) = std::exp(x[i] - top);
    return w / w.sum();
  }

  Matrix2c side_a(const double* x, int i) const {
    const double* a = x + k_ + 4 * i;
    return bloch_projector(sphere_point(a[0], a[1]));
  }
  Matrix2c side_b(const double* x, int i) const {
    const double* a = x + k_ + 4 * i;
    return bloch_projector(sphere_point(a[2], a[3]));
  }

  Matrix4c sigma(const double* x) const {
    const Eigen::VectorXd w = weights(x);
    Matrix4c m = Matrix4c::Zero();
    for (int i = 0; i < k_; ++i) m += w(i) * kron(side_a(x, i), side_b(x, i));
    return 0.5 * (m + m.adjoint());
  }

  int k() const { return k_; }

 private:
  int k_;
};

// -tr(rho ln sigma), the sigma-dependent part of S(rho||sigma).
class CrossEntropy final : public ceres::FirstOrderFunction {
 public:
  CrossEntropy(const Matrix4c& rho, int k) : rho_(rho), mix_(k) {}

  bool Evaluate(const double* x, double* cost, double* gradient) const override {
    const Matrix4c sigma = mix_.sigma(x);
    const HermitianEigen e = eigh(sigma);
    if (e.values(0) <= 0.0) return false;
    double value = 0.0;
    for (int j = 0; j < 4; ++j) {
      const Vector4c f = e.vectors.col(j);
      value -= (f.adjoint() * rho_ * f)(0).real() * std::log(std::max(e.values(j), kLogClamp));
    }
    if (!std::isfinite(value)) return false;
    *cost = value;
    if (gradient == nullptr) return true;

    const Matrix4c m = log_derivative(sigma, rho_);
    const int k = mix_.k();
    const Eigen::VectorXd w = mix_.weights(x);
    Eigen::VectorXd g(k);
    for (int i = 0; i < k; ++i) {
      const double* a = x + k + 4 * i;
      const Matrix2c pa = mix_.side_a(x, i);
      const Matrix2c pb = mix_.side_b(x, i);
      g(i) = -trace_product(m, kron(pa, pb)).real();
      const Matrix2c da_t = bloch_operator(sphere_dtheta(a[0], a[1]));
      const Matrix2c da_p = bloch_operator(sphere_dphi(a[0], a[1]));
      const Matrix2c db_t = bloch_operator(sphere_dtheta(a[2], a[3]));
      const Matrix2c db_p = bloch_operator(sphere_dphi(a[2], a[3]));
      double* ga = gradient + k + 4 * i;
      ga[0] = -w(i) * trace_product(m, kron(da_t, pb)).real();
      ga[1] = -w(i) * trace_product(m, kron(da_p, pb)).real();
      ga[2] = -w(i) * trace_product(m, kron(pa, db_t)).real();
      ga[3] = -w(i) * trace_product(m, kron(pa, db_p)).real();
    }
    const double mean = w.dot(g);
    for (int i = 0; i < k; ++i) gradient[i] = w(i) * (g(i) - mean);
    return true;
  }

  int NumParameters() const override { return mix_.size(); }

 private:
  Matrix4c rho_;
  ProductMixture mix_;
};

struct RestartOutcome {
  double value = std::numeric_limits<double>::infinity();
  Matrix4c sigma = Matrix4c::Identity() * 0.25;
  int iterations = 0;
};

}  // namespace detail
}  // namespace reegeom

// Declared here rather than through the logging header, whose CHECK macro
// collides with test frameworks.
namespace fLI {
extern int32_t FLAGS_minloglevel;
}

namespace reegeom {
namespace detail {

// Line-search warnings from the solver are expected on flat directions.
inline void quiet_solver_logging() {
  static std::once_flag once;
  std::call_once(once, [] { fLI::FLAGS_minloglevel = 2; });
}

inline RestartOutcome run_restart(const Matrix4c& rho, const OracleConfig& cfg, int restart) {
  quiet_solver_logging();
  Rng rng(cfg.seed + 0x9E3779B97F4A7C15ULL * static_cast<unsigned long long>(restart + 1));
  const int k = cfg.ensemble_size;
  std::vector<double> x(static_cast<std::size_t>(5 * k));
  for (int i = 0; i < k; ++i) x[i] = 0.1 * gaussian(rng);
  for (int i = 0; i < k; ++i) {
    for (int side = 0; side < 2; ++side) {
      const Vector3 n = random_unit_vector(rng);
      x[k + 4 * i + 2 * side] = std::acos(std::clamp(n(2), -1.0, 1.0));
      x[k + 4 * i + 2 * side + 1] = std::atan2(n(1), n(0));
    }
  }

  ceres::GradientProblemSolver::Options options;
  options.line_search_direction_type = ceres::LBFGS;
  options.max_num_iterations = cfg.max_iterations;
  options.function_tolerance = 1e-15;
  options.gradient_tolerance = 1e-12;
  options.parameter_tolerance = 1e-14;
  options.logging_type = ceres::SILENT;
  options.minimizer_progress_to_stdout = false;
  // Keep the last accepted iterate even when the line search gives up near
  // the boundary of the state space.
  options.update_state_every_iteration = true;

  ceres::GradientProblem problem(new CrossEntropy(rho, k));
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(options, problem, x.data(), &summary);

  RestartOutcome out;
  out.sigma = ProductMixture(k).sigma(x.data());
  out.iterations = static_cast<int>(summary.iterations.size());
  // Same clamped evaluation as the objective: directions where sigma's weight
  // has been driven to ~1e-14 carry comparably tiny rho weight.
  double cross = 0.0;
  const CrossEntropy objective(rho, k);
  if (objective.Evaluate(x.data(), &cross, nullptr)) out.value = negative_entropy(eigenvalues(rho)) + cross;
  return out;
}

}  // namespace detail

/// Multi-start numerical REE. Throws NotConverged when fewer than three
/// restarts land within 1e-3 of the best value.
inline ReeReport ree_numeric(const DensityMatrix& rho, const OracleConfig& cfg = {}) {
  if (cfg.ensemble_size < 16) throw Error(ErrorCode::InvalidArgument, "oracle ensemble size must be at least 16");
  if (cfg.restarts < 1 || cfg.max_iterations < 1)
    throw Error(ErrorCode::InvalidArgument, "oracle needs at least one restart and one iteration");

  std::vector<detail::RestartOutcome> outcomes(static_cast<std::size_t>(cfg.restarts));
  parallel_for(outcomes.size(), [&](std::size_t i) {
    outcomes[i] = detail::run_restart(rho.matrix(), cfg, static_cast<int>(i));
  });

  // Deterministic merge: order by value, then by restart index.
  std::vector<std::size_t> order(outcomes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return outcomes[a].value < outcomes[b].value; });

  const auto& best = outcomes[order.front()];
  ReeReport report;
  report.value = std::max(0.0, best.value);
  for (const auto& o : outcomes) {
    report.iterations += o.iterations;
    report.restart_values.push_back(o.value);
  }
  std::sort(report.restart_values.begin(), report.restart_values.end());

  int agreeing = 0, stable = 0;
  for (const auto& o : outcomes) {
    if (o.value - best.value <= kRestartAgreement) ++agreeing;
    if (o.value - best.value <= cfg.step_tolerance) ++stable;
  }
  if (!std::isfinite(best.value) || agreeing < std::min(kMinAgreeingRestarts, cfg.restarts))
    throw Error(ErrorCode::NotConverged, "oracle restarts disagree beyond 1e-3",
                report.restart_values.size() > 1 ? report.restart_values[1] - report.restart_values[0] : 0.0);
  report.converged = stable >= std::min(kMinAgreeingRestarts, cfg.restarts);

  Matrix4c sigma = best.sigma;
  sigma /= sigma.trace().real();
  report.css_numeric = DensityMatrix::from_matrix(0.5 * (sigma + sigma.adjoint()));
  return report;
}

namespace detail {

// Fibonacci lattice on the unit sphere.
inline std::vector<Vector3> sphere_lattice(int n) {
  std::vector<Vector3> pts;
  pts.reserve(static_cast<std::size_t>(n));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
    pts.emplace_back(rad * std::cos(golden * i), rad * std::sin(golden * i), z);
  }
  return pts;
}

}  // namespace detail

/// max over pure product states |ab> of <ab|m|ab> for Hermitian m. With
/// c_ij = tr(m s_i(x)s_j) the expectation is (c_00 + a.c_a + b.c_b + a^T C b)/4
/// for Bloch vectors a, b. A lattice scan seeds alternating maximization,
/// where each half-step is solved exactly by a unit vector.
inline double max_product_expectation(const Matrix4c& m, int lattice = 400) {
  double c00 = 0.0;
  Vector3 ca, cb;
  Matrix3 cc;
  c00 = trace_product(m, kron(pauli(0), pauli(0))).real();
  for (int i = 0; i < 3; ++i) {
    ca(i) = trace_product(m, kron(pauli(i + 1), pauli(0))).real();
    cb(i) = trace_product(m, kron(pauli(0), pauli(i + 1))).real();
    for (int j = 0; j < 3; ++j) cc(i, j) = trace_product(m, kron(pauli(i + 1), pauli(j + 1))).real();
  }
  auto value = [&](const Vector3& a, const Vector3& b) { return 0.25 * (c00 + ca.dot(a) + cb.dot(b) + a.dot(cc * b)); };
  auto unit_or = [](const Vector3& v, const Vector3& fallback) -> Vector3 {
    const double n = v.norm();
    return n > 1e-300 ? Vector3(v / n) : fallback;
  };

  const auto pts = detail::sphere_lattice(lattice);
  std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>> scored;
  scored.reserve(pts.size() * pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) scored.push_back({value(pts[i], pts[j]), {i, j}});
  const std::size_t keep = std::min<std::size_t>(8, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(),
                    [](const auto& x, const auto& y) { return x.first > y.first; });

  double best = scored.front().first;
  for (std::size_t c = 0; c < keep; ++c) {
    Vector3 a = pts[scored[c].second.first];
    Vector3 b = pts[scored[c].second.second];
    double current = scored[c].first;
    for (int it = 0; it < 500; ++it) {
      a = unit_or(ca + cc * b, a);
      b = unit_or(cb + cc.transpose() * a, b);
      const double next = value(a, b);
      const bool done = std::abs(next - current) <= 1e-16 * std::max(1.0, std::abs(next));
      current = next;
      if (done) break;
    }
    best = std::max(best, current);
  }
  return best;
}

/// min over separable sigma' of d/de S(rho || (1-e) css + e sigma') at e = 0+.
/// With M the derivative of ln at css applied to rho this equals
/// tr(M css) - max_{product} <ab|M|ab>. A closest separable state gives >= 0.
inline double directional_optimality_check(const DensityMatrix& rho, const DensityMatrix& css) {
  const Matrix4c m = log_derivative(css.matrix(), rho.matrix());
  const double base = trace_product(m, css.matrix()).real();
  return base - max_product_expectation(m);
}

}  // namespace reegeom
