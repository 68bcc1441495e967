// css.hpp
// Closest separable states for the three solvable families: Bell-diagonal,
// generalized Vedral-Plenio (a Bell state mixed with separable states that
// overlap it) and generalized Horodecki (a Bell state mixed with separable
// states orthogonal to it), plus classification of an arbitrary state into
// one of those families up to local unitaries.

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

#include "reegeom/core.hpp"
#include "reegeom/geometry.hpp"
#include "reegeom/oracle.hpp"
#include "reegeom/qstate.hpp"
#include "reegeom/relative_entropy.hpp"

namespace reegeom {

inline constexpr double kClassifyTolerance = 1e-8;

enum class Family { BellDiagonal, GeneralizedVP, GeneralizedHorodecki, Other };

constexpr std::string_view to_string(Family f) {
  switch (f) {
    case Family::BellDiagonal: return "BellDiagonal";
    case Family::GeneralizedVP: return "GeneralizedVP";
    case Family::GeneralizedHorodecki: return "GeneralizedHorodecki";
    case Family::Other: return "Other";
  }
  return "?";
}

struct FamilyTag {
  Family family = Family::Other;
  std::optional<Vector3> lambda;  // (l1, l2, l3) for the VP and Horodecki families
};

enum class CssStatus { Entangled, AlreadySeparable };

constexpr std::string_view to_string(CssStatus s) {
  return s == CssStatus::Entangled ? "entangled" : "separable";
}

struct CssResiduals {
  double bloch_gap = 0.0;  // max(|u - r|, |v - s|)
  double edge_gap = 0.0;   // |lambda_min(css^T_B)|
  std::optional<double> recovery_gap;
};

struct CssResult {
  DensityMatrix css;
  Vector3 tau = Vector3::Zero();  // correlation vector of css in the family frame
  FamilyTag family;
  double ree = 0.0;  // nats
  CssStatus status = CssStatus::Entangled;
  bool geometric = true;  // false when the numerical oracle produced the result
  CssResiduals residuals;
};

/// lambda_1 |beta_1><beta_1| + lambda_2 |00><00| + lambda_3 |11><11|.
inline DensityMatrix vp_state(const Vector3& lambda) {
  return DensityMatrix::from_matrix(lambda(0) * bell_state(1).matrix() + lambda(1) * basis_projector(0) +
                                    lambda(2) * basis_projector(3));
}

/// lambda_1 |beta_1><beta_1| + lambda_2 |01><01| + lambda_3 |10><10|.
inline DensityMatrix horodecki_state(const Vector3& lambda) {
  return DensityMatrix::from_matrix(lambda(0) * bell_state(1).matrix() + lambda(1) * basis_projector(1) +
                                    lambda(2) * basis_projector(2));
}

/// Bell-diagonal state with correlation vector t.
inline DensityMatrix bell_diagonal_state(const Vector3& t) {
  return from_pauli(DiagonalPauliForm{Vector3::Zero(), Vector3::Zero(), t}).state();
}

namespace detail {

inline void check_weights(const Vector3& lambda) {
  if (lambda.minCoeff() < -kClassifyTolerance || std::abs(lambda.sum() - 1.0) > 1e-12)
    throw Error(ErrorCode::InvalidArgument, "weights must be non-negative and sum to 1",
                std::max(-lambda.minCoeff(), std::abs(lambda.sum() - 1.0)));
}

inline CssResiduals residuals_for(const Matrix4c& rho, const Matrix4c& css) {
  const PauliForm pr = to_pauli(rho);
  const PauliForm pc = to_pauli(css);
  return {std::max((pc.r - pr.r).norm(), (pc.s - pr.s).norm()), std::abs(min_pt_eigenvalue(css)), std::nullopt};
}

inline CssResult separable_result(const DensityMatrix& rho, const Vector3& tau, FamilyTag tag) {
  CssResult out;
  out.css = rho;
  out.tau = tau;
  out.family = std::move(tag);
  out.ree = 0.0;
  out.status = CssStatus::AlreadySeparable;
  out.residuals = residuals_for(rho.matrix(), rho.matrix());
  return out;
}

inline double finite_ree(const Matrix4c& rho, const Matrix4c& css) {
  const RelativeEntropy s = relative_entropy(rho, css);
  if (!s.finite()) throw Error(ErrorCode::InvalidState, "closest separable state does not cover the support of rho");
  return s.value;
}

}  // namespace detail

/// Closest separable state of the Bell-diagonal state with correlation t: the
/// crossing of the ray from the nearest vertex through t with L. A Bell state
/// itself has a whole face of closest states; the face centroid is returned.
inline CssResult css_bell_diagonal(const Vector3& t) {
  const Vertex v = nearest_vertex(t);
  const DensityMatrix rho = bell_diagonal_state(t);
  FamilyTag tag{Family::BellDiagonal, std::nullopt};
  if (octahedron_norm(t) <= 1.0 + kEdgeTolerance) return detail::separable_result(rho, t, tag);

  Vector3 tau;
  if ((t - v.coords).norm() < 1e-12) {
    tau = v.coords / 3.0;
  } else {
    tau = line_surface_crossing(t, v, 0.0, 0.0).front().coords;
  }
  CssResult out;
  out.css = bell_diagonal_state(tau);
  out.tau = tau;
  out.family = tag;
  out.ree = detail::finite_ree(rho.matrix(), out.css.matrix());
  out.residuals = detail::residuals_for(rho.matrix(), out.css.matrix());
  return out;
}

/// pi_vp = diag(l1/2 + l2, 0, 0, l1/2 + l3) with tau = (0, 0, 1).
inline CssResult css_vp(const Vector3& lambda) {
  detail::check_weights(lambda);
  if (!(lambda(0) > 0.0)) throw Error(ErrorCode::InvalidArgument, "the Bell weight lambda_1 must be positive");
  const DensityMatrix rho = vp_state(lambda);
  Matrix4c css = Matrix4c::Zero();
  css(0, 0) = 0.5 * lambda(0) + lambda(1);
  css(3, 3) = 0.5 * lambda(0) + lambda(2);

  CssResult out;
  out.css = DensityMatrix::from_matrix(css);
  out.tau = Vector3(0, 0, 1);
  out.family = {Family::GeneralizedVP, lambda};
  out.ree = detail::finite_ree(rho.matrix(), css);
  out.residuals = detail::residuals_for(rho.matrix(), css);
  return out;
}

/// pi_H with q1 = (l1 + 2 l2)(l1 + 2 l3)/2 and tau = (q1, -q1, 2 q1 - 1).
inline CssResult css_horodecki(const Vector3& lambda) {
  detail::check_weights(lambda);
  const DensityMatrix rho = horodecki_state(lambda);
  const double a = lambda(0) + 2.0 * lambda(1);
  const double b = lambda(0) + 2.0 * lambda(2);
  FamilyTag tag{Family::GeneralizedHorodecki, lambda};
  if (lambda(0) * lambda(0) <= 4.0 * lambda(1) * lambda(2))
    return detail::separable_result(rho, Vector3(lambda(0), -lambda(0), 2.0 * lambda(0) - 1.0), tag);

  const double q1 = 0.5 * a * b;
  Matrix4c css = Matrix4c::Zero();
  css(0, 0) = css(0, 3) = css(3, 0) = css(3, 3) = 0.25 * a * b;
  css(1, 1) = 0.25 * a * a;
  css(2, 2) = 0.25 * b * b;

  CssResult out;
  out.css = DensityMatrix::from_matrix(css);
  out.tau = Vector3(q1, -q1, 2.0 * q1 - 1.0);
  out.family = tag;
  out.ree = detail::finite_ree(rho.matrix(), css);
  out.residuals = detail::residuals_for(rho.matrix(), css);
  return out;
}

/// Family of a state together with the local frame in which it takes the
/// template form (lu.apply(rho) is the template state).
struct Classification {
  FamilyTag tag;
  DiagonalPauliForm form;  // Pauli data in the template frame
  Matrix3 rot_a = Matrix3::Identity();
  Matrix3 rot_b = Matrix3::Identity();
  LocalUnitary lu;
  bool degenerate_frame = false;
};

namespace detail {

// Proper signed permutations of three axes.
inline const std::vector<Matrix3>& proper_signed_permutations() {
  static const std::vector<Matrix3> all = [] {
    std::vector<Matrix3> out;
    std::array<int, 3> perm{0, 1, 2};
    do {
      for (int signs = 0; signs < 8; ++signs) {
        Matrix3 m = Matrix3::Zero();
        for (int i = 0; i < 3; ++i) m(i, perm[i]) = (signs >> i) & 1 ? -1.0 : 1.0;
        if (m.determinant() > 0.0) out.push_back(m);
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
  }();
  return all;
}

inline const std::array<Matrix3, 4>& even_sign_flips() {
  static const std::array<Matrix3, 4> flips = [] {
    std::array<Matrix3, 4> out;
    out[0] = Vector3(1, 1, 1).asDiagonal();
    out[1] = Vector3(1, -1, -1).asDiagonal();
    out[2] = Vector3(-1, 1, -1).asDiagonal();
    out[3] = Vector3(-1, -1, 1).asDiagonal();
    return out;
  }();
  return flips;
}

inline bool z_only(const Vector3& v, double tol) { return std::abs(v(0)) <= tol && std::abs(v(1)) <= tol; }

// Weights (l1, l2, l3) if the form matches the VP template, else nothing.
inline std::optional<Vector3> match_vp(const DiagonalPauliForm& f, double tol) {
  if (!z_only(f.r, tol) || !z_only(f.s, tol) || std::abs(f.r(2) - f.s(2)) > tol) return std::nullopt;
  if (std::abs(f.q(0) + f.q(1)) > tol || std::abs(f.q(2) - 1.0) > tol) return std::nullopt;
  const double l1 = f.q(0);
  const double d = 0.5 * (f.r(2) + f.s(2));
  const Vector3 lambda(l1, 0.5 * (1.0 - l1 + d), 0.5 * (1.0 - l1 - d));
  if (l1 <= tol || lambda.minCoeff() < -tol) return std::nullopt;
  return lambda.cwiseMax(0.0);
}

inline std::optional<Vector3> match_horodecki(const DiagonalPauliForm& f, double tol) {
  if (!z_only(f.r, tol) || !z_only(f.s, tol) || std::abs(f.r(2) + f.s(2)) > tol) return std::nullopt;
  if (std::abs(f.q(0) + f.q(1)) > tol || std::abs(f.q(2) - (2.0 * f.q(0) - 1.0)) > tol) return std::nullopt;
  const double l1 = f.q(0);
  const double d = 0.5 * (f.r(2) - f.s(2));
  const Vector3 lambda(l1, 0.5 * (1.0 - l1 + d), 0.5 * (1.0 - l1 - d));
  if (l1 <= tol || lambda.minCoeff() < -tol) return std::nullopt;
  return lambda.cwiseMax(0.0);
}

}  // namespace detail

/// Template matching over the 96 frames that keep the canonical correlation
/// tensor diagonal. Among matching frames the one closest to the input frame
/// (largest tr O_A + tr O_B) wins, so a state already in template form keeps
/// its own coordinates.
inline Classification classify_detailed(const DensityMatrix& rho, double tol = kClassifyTolerance) {
  const Canonicalization c = canonicalize(rho);
  Classification best;
  best.degenerate_frame = c.degenerate_frame;
  const bool bell_diagonal = c.form.r.norm() <= tol && c.form.s.norm() <= tol;

  double best_score = -1e300;
  bool found = false;
  for (Family family : {Family::BellDiagonal, Family::GeneralizedVP, Family::GeneralizedHorodecki}) {
    if ((family == Family::BellDiagonal) != bell_diagonal) continue;
    for (const Matrix3& pa : detail::proper_signed_permutations()) {
      for (const Matrix3& flip : detail::even_sign_flips()) {
        const Matrix3 oa = pa * c.rot_a;
        const Matrix3 ob = flip * pa * c.rot_b;
        DiagonalPauliForm f;
        f.r = pa * c.form.r;
        f.s = flip * pa * c.form.s;
        f.q = (pa * Matrix3(c.form.q.asDiagonal()) * (flip * pa).transpose()).diagonal();
        std::optional<Vector3> lambda;
        if (family == Family::GeneralizedVP) {
          lambda = detail::match_vp(f, tol);
          if (!lambda) continue;
        } else if (family == Family::GeneralizedHorodecki) {
          lambda = detail::match_horodecki(f, tol);
          if (!lambda) continue;
        }
        const double score = oa.trace() + ob.trace();
        if (score > best_score + 1e-12) {
          best_score = score;
          best.tag = {family, lambda};
          best.form = f;
          best.rot_a = oa;
          best.rot_b = ob;
          found = true;
        }
      }
    }
    if (found) break;
  }
  if (!found) {
    best.tag = {Family::Other, std::nullopt};
    best.form = c.form;
    best.rot_a = c.rot_a;
    best.rot_b = c.rot_b;
  }
  best.lu = local_unitary_from_rotations(best.rot_a, best.rot_b);
  return best;
}

inline FamilyTag classify(const DensityMatrix& rho) { return classify_detailed(rho).tag; }

/// Dispatcher: PPT states are their own closest separable state; the three
/// families go through their constructions in the template frame and are
/// mapped back; anything else falls back to the numerical oracle.
inline CssResult css_auto(const DensityMatrix& rho, const OracleConfig& cfg = {}) {
  const Classification cls = classify_detailed(rho);
  if (is_ppt(rho)) return detail::separable_result(rho, cls.form.q, cls.tag);

  CssResult out;
  switch (cls.tag.family) {
    case Family::BellDiagonal: out = css_bell_diagonal(cls.form.q); break;
    case Family::GeneralizedVP: out = css_vp(*cls.tag.lambda); break;
    case Family::GeneralizedHorodecki: out = css_horodecki(*cls.tag.lambda); break;
    case Family::Other: {
      const ReeReport numeric = ree_numeric(rho, cfg);
      out.css = numeric.css_numeric;
      out.tau = to_pauli(cls.lu.apply(numeric.css_numeric.matrix())).g.diagonal();
      out.family = cls.tag;
      out.ree = numeric.value;
      out.geometric = false;
      out.residuals = detail::residuals_for(rho.matrix(), numeric.css_numeric.matrix());
      return out;
    }
  }
  if (out.status == CssStatus::AlreadySeparable) return detail::separable_result(rho, out.tau, out.family);

  const Matrix4c back = cls.lu.apply_inverse(out.css.matrix());
  out.css = DensityMatrix::from_matrix(0.5 * (back + back.adjoint()));
  out.family = cls.tag;
  out.ree = detail::finite_ree(rho.matrix(), out.css.matrix());
  out.residuals = detail::residuals_for(rho.matrix(), out.css.matrix());
  return out;
}

}  // namespace reegeom
