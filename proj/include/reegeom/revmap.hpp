// revmap.hpp
// Reverse map from a closest separable state sigma* to the one-parameter
// family of entangled states sharing it,
//
//   rho(x) = sigma* - x G(sigma*),
//   G = sum_ij G_ij |i><i| (|phi><phi|)^T_B |j><j|,
//
// where |i> diagonalize sigma* with eigenvalues l_i, G_ij is the logarithmic
// mean of l_i and l_j, and |phi> spans the kernel of sigma*^T_B. Also the
// closed form of that family for the X-shaped edge state sigma_Z and the
// crossing points of two such families in correlation space.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "reegeom/core.hpp"
#include "reegeom/css.hpp"
#include "reegeom/parallel.hpp"
#include "reegeom/qstate.hpp"
#include "reegeom/random.hpp"

namespace reegeom {

inline constexpr double kKernelTolerance = 1e-8;
inline constexpr double kRankThreshold = 1e-12;
inline constexpr double kRegularization = 1e-7;
inline constexpr double kParallelTolerance = 1e-12;

/// Unit vector spanning the kernel of sigma^T_B. The kernel must be one
/// dimensional.
inline Vector4c pt_kernel(const Matrix4c& sigma) {
  const HermitianEigen e = eigh(partial_transpose(sigma));
  int zeros = 0;
  for (int i = 0; i < 4; ++i)
    if (std::abs(e.values(i)) <= kKernelTolerance) ++zeros;
  if (zeros != 1)
    throw Error(ErrorCode::NotEdgeState, "partial transpose must have exactly one zero eigenvalue",
                static_cast<double>(zeros));
  int idx = 0;
  for (int i = 1; i < 4; ++i)
    if (std::abs(e.values(i)) < std::abs(e.values(idx))) idx = i;
  return e.vectors.col(idx).normalized();
}

inline Vector4c pt_kernel(const DensityMatrix& sigma) { return pt_kernel(sigma.matrix()); }

/// G(sigma). The argument may be an unnormalized positive matrix (used by
/// the regularized construction); G scales linearly with it.
inline Matrix4c g_matrix(const Matrix4c& sigma) {
  const HermitianEigen e = eigh(sigma);
  if (e.values(0) <= kRankThreshold)
    throw Error(ErrorCode::RankDeficient, "sigma must be full rank; regularize first", e.values(0));
  const Vector4c phi = pt_kernel(sigma);
  const Matrix4c kernel_pt = partial_transpose(Matrix4c(phi * phi.adjoint()));
  Matrix4c g = e.vectors.adjoint() * kernel_pt * e.vectors;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) *= logarithmic_mean(e.values(i), e.values(j));
  g = e.vectors * g * e.vectors.adjoint();
  return 0.5 * (g + g.adjoint());
}

inline Matrix4c g_matrix(const DensityMatrix& sigma) { return g_matrix(sigma.matrix()); }

/// A member of the family. `left_physical_range` is set when rho(x) is not
/// PSD, and `max_admissible_x` then holds the bisected end of the physical range.
struct FamilyPoint {
  Matrix4c matrix;
  bool left_physical_range = false;
  double min_eigenvalue = 0.0;
  std::optional<double> max_admissible_x;

  DensityMatrix state() const { return DensityMatrix::from_matrix(matrix); }
};

namespace detail {

// Largest x in [0, hi] with lambda_min(f(x)) >= -tol. lambda_min of an affine
// matrix pencil is concave in x, so the feasible set is an interval.
template <class Fn>
double bisect_physical(Fn&& f, double hi, double tol = kPsdTolerance) {
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (min_eigenvalue(f(mid)) >= -tol)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

template <class Fn>
FamilyPoint make_point(Fn&& f, double x) {
  FamilyPoint p;
  p.matrix = f(x);
  p.min_eigenvalue = min_eigenvalue(p.matrix);
  if (p.min_eigenvalue < -kPsdTolerance) {
    p.left_physical_range = true;
    p.max_admissible_x = bisect_physical(f, x);
  }
  return p;
}

template <class Fn>
double max_admissible(Fn&& f, double start = 1.0) {
  double hi = start;
  while (min_eigenvalue(f(hi)) >= -kPsdTolerance) {
    hi *= 2.0;
    if (hi > 1e12) return hi;
  }
  return bisect_physical(f, hi);
}

}  // namespace detail

inline FamilyPoint family_from_css(const Matrix4c& sigma, double x) {
  if (x < 0.0) throw Error(ErrorCode::InvalidArgument, "family parameter x must be non-negative", -x);
  const Matrix4c g = g_matrix(sigma);
  return detail::make_point([&](double y) -> Matrix4c { return sigma - y * g; }, x);
}

inline FamilyPoint family_from_css(const DensityMatrix& sigma, double x) { return family_from_css(sigma.matrix(), x); }

/// Family through a rank-deficient CSS. The pattern `e` is added with weight
/// eps and eps/2 and the two results are combined by one Richardson step,
/// 2 rho(eps/2) - rho(eps), cancelling the linear term in eps.
inline FamilyPoint family_from_css_regularized(const Matrix4c& sigma, const Matrix4c& pattern, double x,
                                               double eps = kRegularization) {
  if (x < 0.0) throw Error(ErrorCode::InvalidArgument, "family parameter x must be non-negative", -x);
  const Matrix4c g_full = g_matrix(sigma + eps * pattern);
  const Matrix4c g_half = g_matrix(sigma + 0.5 * eps * pattern);
  const Matrix4c g = 2.0 * g_half - g_full;
  return detail::make_point([&](double y) -> Matrix4c { return sigma - y * g; }, x);
}

/// Regularizing direction for the rank-deficient CSS of the two families.
/// VP: eps(|01><01| + |10><10| + |00><11| + |11><00|), the pattern that
/// becomes eps on the corners and the 01/10 coherence after I (x) sigma_x.
/// Horodecki: eps(|00><00| + |11><11|), which keeps the two middle entries of
/// the flipped matrix equal.
inline Matrix4c regularization_pattern(Family family) {
  Matrix4c e = Matrix4c::Zero();
  switch (family) {
    case Family::GeneralizedVP:
      e(1, 1) = e(2, 2) = 1.0;
      e(0, 3) = e(3, 0) = 1.0;
      break;
    case Family::GeneralizedHorodecki:
      e(0, 0) = e(3, 3) = 1.0;
      break;
    default: throw Error(ErrorCode::InvalidArgument, "no regularization pattern for this family");
  }
  return e;
}

/// x at which the VP family through pi_vp reaches rho_vp: l1 L/|l2 - l3| with
/// L = ln((1 + |d|)/(1 - |d|)) = 2 atanh|d|; the d -> 0 limit is 2 l1.
inline double x_vp(const Vector3& lambda) {
  const double d = std::abs(lambda(1) - lambda(2));
  if (d < 1e-8) return lambda(0) * (2.0 + 2.0 * d * d / 3.0);
  return lambda(0) * 2.0 * std::atanh(d) / d;
}

struct HorodeckiReverse {
  double r1, r4, y, eta;
};

inline HorodeckiReverse horodecki_reverse(const Vector3& lambda) {
  const double a = lambda(0) + 2.0 * lambda(1);
  const double b = lambda(0) + 2.0 * lambda(2);
  HorodeckiReverse h{0.25 * a * a, 0.25 * b * b, 0.25 * a * b, 0.0};
  h.eta = h.y * h.y / (h.r1 + h.r4);
  return h;
}

/// x at which the Horodecki family through pi_H reaches rho_H: (l1/2 - Y)/eta.
inline double x_horodecki(const Vector3& lambda) {
  const HorodeckiReverse h = horodecki_reverse(lambda);
  return (0.5 * lambda(0) - h.y) / h.eta;
}

/// Max-entry distance between rho and the family member at the family's
/// recovery point, for a VP or Horodecki CssResult in template coordinates.
inline double recovery_gap(const CssResult& r) {
  if (!r.family.lambda) throw Error(ErrorCode::InvalidArgument, "recovery needs family weights");
  const Vector3& lambda = *r.family.lambda;
  Matrix4c target;
  double x = 0.0;
  if (r.family.family == Family::GeneralizedVP) {
    target = vp_state(lambda).matrix();
    x = x_vp(lambda);
  } else if (r.family.family == Family::GeneralizedHorodecki) {
    target = horodecki_state(lambda).matrix();
    x = x_horodecki(lambda);
  } else {
    throw Error(ErrorCode::InvalidArgument, "recovery is defined for the VP and Horodecki families");
  }
  Matrix4c css = r.family.family == Family::GeneralizedVP ? css_vp(lambda).css.matrix() : css_horodecki(lambda).css.matrix();
  const FamilyPoint p = family_from_css_regularized(css, regularization_pattern(r.family.family), x);
  return max_abs(p.matrix - target);
}

// ---------------------------------------------------------------------------
// The X-shaped edge state
//
//   sigma_Z = [[R1, 0, 0, 0], [0, R2, Y, 0], [0, Y, R3, 0], [0, 0, 0, R4]],
//   Y = sqrt(R1 R4), R2 R3 >= R1 R4,
//
// and its family rho_Z(x) = sigma_Z - x [[Rb1, ...], [.., Rb2, Yb, ..], ...].

struct SigmaZParams {
  double r1 = 0.25, r2 = 0.25, r3 = 0.25, r4 = 0.25;
  double y = 0.25;

  static SigmaZParams from_diagonal(double r1, double r2, double r3, double r4) {
    return {r1, r2, r3, r4, std::sqrt(r1 * r4)};
  }

  Matrix4c matrix() const {
    Matrix4c m = Matrix4c::Zero();
    m(0, 0) = r1;
    m(1, 1) = r2;
    m(2, 2) = r3;
    m(3, 3) = r4;
    m(1, 2) = m(2, 1) = y;
    return m;
  }

  /// Largest violation of the defining constraints (0 when valid).
  double violation() const {
    double v = std::max({0.0, -r1, -r2, -r3, -r4});
    v = std::max(v, std::abs(y - std::sqrt(std::max(0.0, r1 * r4))));
    v = std::max(v, r1 * r4 - r2 * r3);
    v = std::max(v, std::abs(r1 + r2 + r3 + r4 - 1.0));
    return v;
  }

  void validate() const {
    const double v = violation();
    if (v > 1e-12) throw Error(ErrorCode::InvalidArgument, "sigma_Z parameters violate their constraints", v);
  }
};

struct ZFamilyDerivatives {
  double rb1 = 0.0, rb2 = 0.0, rb3 = 0.0, rb4 = 0.0, yb = 0.0;
  double z = 0.0;
  double l = 0.0;  // +inf when R2 R3 = R1 R4
  double d = 0.0;  // -1/((R1 + R4) z^2 L), zero when L is infinite
};

/// Family coefficients (Rb1..Rb4, Yb) of sigma_Z.
/// Products d L are formed analytically so the R2 R3 = R1 R4 limit is finite.
inline ZFamilyDerivatives z_family_derivatives(const SigmaZParams& p) {
  p.validate();
  ZFamilyDerivatives out;
  const double sum = p.r2 + p.r3;
  const double diff = p.r2 - p.r3;
  out.z = std::sqrt(diff * diff + 4.0 * p.r1 * p.r4);
  if (out.z == 0.0) throw Error(ErrorCode::DegenerateZ, "z vanishes (R2 = R3 and R1 R4 = 0)");
  if (p.r1 + p.r4 == 0.0) throw Error(ErrorCode::DegenerateZ, "R1 + R4 vanishes");

  // sum - z without cancellation: (sum^2 - z^2)/(sum + z) = 4(R2 R3 - R1 R4)/(sum + z).
  const double gap = 4.0 * (p.r2 * p.r3 - p.r1 * p.r4) / (sum + out.z);
  const double inv_l = gap > 0.0 ? 1.0 / std::log1p(2.0 * out.z / gap) : 0.0;
  out.l = gap > 0.0 ? std::log1p(2.0 * out.z / gap) : std::numeric_limits<double>::infinity();
  const double dl = -1.0 / ((p.r1 + p.r4) * out.z * out.z);  // d * L
  out.d = dl * inv_l;

  const double y2 = p.y * p.y;
  out.rb1 = out.rb4 = y2 / (p.r1 + p.r4);
  out.rb2 = 2.0 * y2 * dl * (diff * (p.r2 - out.z * inv_l) + 2.0 * y2);
  out.rb3 = -2.0 * out.rb1 - out.rb2;
  out.yb = p.y * dl * (2.0 * y2 * sum + diff * diff * out.z * inv_l);
  return out;
}

inline Matrix4c z_family_matrix(const SigmaZParams& p, const ZFamilyDerivatives& dv, double x) {
  Matrix4c m = p.matrix();
  m(0, 0) -= x * dv.rb1;
  m(1, 1) -= x * dv.rb2;
  m(2, 2) -= x * dv.rb3;
  m(3, 3) -= x * dv.rb4;
  m(1, 2) -= x * dv.yb;
  m(2, 1) -= x * dv.yb;
  return m;
}

inline FamilyPoint z_family(const SigmaZParams& p, double x) {
  if (x < 0.0) throw Error(ErrorCode::InvalidArgument, "family parameter x must be non-negative", -x);
  const ZFamilyDerivatives dv = z_family_derivatives(p);
  return detail::make_point([&](double y) { return z_family_matrix(p, dv, y); }, x);
}

/// Largest x keeping rho_Z(x) PSD.
inline double z_family_max_x(const SigmaZParams& p) {
  const ZFamilyDerivatives dv = z_family_derivatives(p);
  return detail::max_admissible([&](double y) { return z_family_matrix(p, dv, y); });
}

struct ZPauli {
  double r = 0.0;  // z component of the A Bloch vector
  double s = 0.0;  // z component of the B Bloch vector
  Vector3 t = Vector3::Zero();
};

inline ZPauli z_family_pauli(const SigmaZParams& p, double x) {
  const ZFamilyDerivatives dv = z_family_derivatives(p);
  const double rt = p.r1 - p.r2 - p.r3 + p.r4;
  ZPauli out;
  out.r = (p.r1 + p.r2 - p.r3 - p.r4) - x * (dv.rb2 - dv.rb3);
  out.s = (p.r1 - p.r2 + p.r3 - p.r4) + x * (dv.rb2 - dv.rb3);
  out.t(0) = out.t(1) = 2.0 * p.y - 2.0 * x * dv.yb;
  out.t(2) = rt - 4.0 * x * dv.rb1;
  return out;
}

struct LineCrossing {
  double x = 0.0;
  double x_prime = 0.0;
  Vector3 mu = Vector3::Zero();
};

/// Point where the correlation lines of two sigma_Z families meet. Both
/// lines lie in the plane t1 = t2, so they generically cross.
inline LineCrossing line_crossing(const SigmaZParams& p, const SigmaZParams& q) {
  const ZFamilyDerivatives a = z_family_derivatives(p);
  const ZFamilyDerivatives b = z_family_derivatives(q);
  const double den = b.yb * a.rb1 - a.yb * b.rb1;
  if (std::abs(den) < kParallelTolerance)
    throw Error(ErrorCode::ParallelLines, "the two family lines are parallel", std::abs(den));
  const double rt = p.r1 - p.r2 - p.r3 + p.r4;
  const double rt_q = q.r1 - q.r2 - q.r3 + q.r4;

  // x Yb - x' Yb' = Y - Y',  4 x Rb1 - 4 x' Rb1' = rt - rt'.
  LineCrossing out;
  out.x = (b.yb * (rt - rt_q) - 4.0 * b.rb1 * (p.y - q.y)) / (4.0 * den);
  out.x_prime = (a.yb * (rt - rt_q) - 4.0 * a.rb1 * (p.y - q.y)) / (4.0 * den);
  const double mu12 =
      (4.0 * (p.y * b.yb * a.rb1 - q.y * a.yb * b.rb1) - a.yb * b.yb * (rt - rt_q)) / (2.0 * den);
  out.mu = Vector3(mu12, mu12, rt - 4.0 * out.x * a.rb1);
  return out;
}

/// Admissible range of alpha = R1 + R4 for the slice with x = 0 Bloch
/// components (r, s).
inline std::pair<double, double> sweep_alpha_range(double r, double s) {
  const double lo = 0.5 * std::abs(r + s);
  const double hi = std::min(1.0 - 0.5 * std::abs(r - s), 0.5 * (1.0 + r * s));
  return {lo, hi};
}

/// sigma_Z whose x = 0 Bloch components are (r, s), labelled by alpha = R1 + R4.
inline SigmaZParams sweep_params(double r, double s, double alpha) {
  const auto [lo, hi] = sweep_alpha_range(r, s);
  if (alpha < lo - 1e-15 || alpha > hi + 1e-15)
    throw Error(ErrorCode::InvalidArgument, "alpha outside the admissible range for (r, s)");
  return SigmaZParams::from_diagonal(0.5 * (alpha + 0.5 * (r + s)), 0.5 * (1.0 - alpha + 0.5 * (r - s)),
                                     0.5 * (1.0 - alpha - 0.5 * (r - s)), 0.5 * (alpha - 0.5 * (r + s)));
}

/// `count` families for the (r, s) slice, alpha drawn uniformly from the
/// interior of its range with the given seed, then sorted.
inline std::vector<SigmaZParams> sample_sweep_params(double r, double s, int count, unsigned long long seed) {
  if (std::abs(r) > 1.0 || std::abs(s) > 1.0) throw Error(ErrorCode::InvalidArgument, "|r|, |s| must be <= 1");
  const auto [lo, hi] = sweep_alpha_range(r, s);
  if (!(hi > lo)) throw Error(ErrorCode::InvalidArgument, "no full-rank sigma_Z exists for this (r, s)");
  Rng rng(seed);
  std::vector<double> alphas;
  for (int i = 0; i < count; ++i) alphas.push_back(lo + (hi - lo) * uniform(rng, 0.02, 0.98));
  std::sort(alphas.begin(), alphas.end());
  std::vector<SigmaZParams> out;
  for (double a : alphas) out.push_back(sweep_params(r, s, a));
  return out;
}

struct SweepRow {
  int family_id = 0;
  double x = 0.0;
  Vector3 t = Vector3::Zero();
  Vector3 tau = Vector3::Zero();
  double r = 0.0;
  double s = 0.0;
};

/// Correlation-space polylines t(x) for each family, with tau = t(0). Points
/// where rho_Z(x) is not PSD are dropped.
inline std::vector<SweepRow> css_line_sweep(const std::vector<SigmaZParams>& params, const std::vector<double>& x_grid) {
  std::vector<std::vector<SweepRow>> per_family(params.size());
  parallel_for(params.size(), [&](std::size_t i) {
    const SigmaZParams& p = params[i];
    const Vector3 tau = z_family_pauli(p, 0.0).t;
    for (double x : x_grid) {
      if (z_family(p, x).left_physical_range) continue;
      const ZPauli zp = z_family_pauli(p, x);
      per_family[i].push_back({static_cast<int>(i), x, zp.t, tau, zp.r, zp.s});
    }
  });
  std::vector<SweepRow> rows;
  for (auto& f : per_family) rows.insert(rows.end(), f.begin(), f.end());
  return rows;
}

/// Uniform grid on [0, x_hi] with `steps` points, x_hi the largest physical x
/// over the families.
inline std::vector<double> sweep_x_grid(const std::vector<SigmaZParams>& params, int steps) {
  std::vector<double> grid;
  if (params.empty() || steps <= 0) return grid;
  double hi = 0.0;
  for (const auto& p : params) hi = std::max(hi, z_family_max_x(p));
  if (steps == 1) return {0.0};
  for (int k = 0; k < steps; ++k) grid.push_back(hi * k / (steps - 1));
  return grid;
}

/// Random full-rank sigma_Z: R drawn on the simplex and redrawn until
/// R2 R3 > R1 R4 with some margin.
inline SigmaZParams random_sigma_z(Rng& rng) {
  for (;;) {
    const Eigen::VectorXd w = random_simplex(rng, 4);
    if (w.minCoeff() < 1e-3) continue;
    if (w(1) * w(2) < 1.05 * w(0) * w(3)) continue;
    return SigmaZParams::from_diagonal(w(0), w(1), w(2), w(3));
  }
}

}  // namespace reegeom
