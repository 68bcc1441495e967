// verify.hpp
// Executable acceptance checks. Each criterion returns a report made of named
// measurements against thresholds; the acceptance binary and `ree_geom verify`
// both print these.

#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "reegeom/core.hpp"
#include "reegeom/css.hpp"
#include "reegeom/geometry.hpp"
#include "reegeom/oracle.hpp"
#include "reegeom/parallel.hpp"
#include "reegeom/qstate.hpp"
#include "reegeom/random.hpp"
#include "reegeom/ree.hpp"
#include "reegeom/relative_entropy.hpp"
#include "reegeom/revmap.hpp"
#include "reegeom/spectra.hpp"

namespace reegeom {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct CriterionReport {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0.0;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return !checks.empty();
  }
};

struct VerifyOptions {
  unsigned long long seed = 20140101ULL;
  int family_count = 100;  // random states per family in the cross-validation
  OracleConfig oracle;
};

namespace verify_detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

// Measurement `value` must be <= `limit`.
inline Check at_most(std::string name, double value, double limit) {
  return {std::move(name), value <= limit, fmt(value) + " <= " + fmt(limit)};
}

// Measurement `value` must be >= `limit`.
inline Check at_least(std::string name, double value, double limit) {
  return {std::move(name), value >= limit, fmt(value) + " >= " + fmt(limit)};
}

inline Check within_budget(double seconds, double budget) {
  std::ostringstream os;
  os.precision(2);
  os << std::fixed << seconds << " s < " << budget << " s";
  return {"runtime", seconds < budget, os.str()};
}

template <class Body>
CriterionReport timed(int id, std::string title, double budget, Body&& body) {
  CriterionReport report;
  report.id = id;
  report.title = std::move(title);
  const auto start = std::chrono::steady_clock::now();
  try {
    body(report.checks);
  } catch (const std::exception& e) {
    report.checks.push_back({"exception", false, e.what()});
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget > 0.0) report.checks.push_back(within_budget(report.seconds, budget));
  return report;
}

// Bell-diagonal state outside L by a margin, drawn from uniform Bell weights.
inline Vector3 random_entangled_bell_diagonal(Rng& rng) {
  for (;;) {
    const Eigen::VectorXd w = random_simplex(rng, 4);
    Vector3 t = Vector3::Zero();
    for (int k = 0; k < 4; ++k) t += w(k) * tetrahedron_vertices()[k].coords;
    if (octahedron_norm(t) > 1.0 + 1e-3) return t;
  }
}

inline Vector3 random_vp_weights(Rng& rng) {
  for (;;) {
    const Eigen::VectorXd w = random_simplex(rng, 3);
    if (w(0) > 0.02) return w;
  }
}

inline Vector3 random_entangled_horodecki_weights(Rng& rng) {
  for (;;) {
    const Eigen::VectorXd w = random_simplex(rng, 3);
    if (w(0) * w(0) > 4.0 * w(1) * w(2) + 1e-3) return w;
  }
}

// 50 points spread over the triangle with barycentric weights (a, b, c).
inline std::vector<Vector3> triangle_points(int n) {
  std::vector<Vector3> out;
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int i = 0; i < n; ++i) {
    const double u = (i + 0.5) / n;
    const double v = std::fmod((i + 1) * golden, 1.0);
    const double su = std::sqrt(u);
    out.emplace_back(1.0 - su, su * (1.0 - v), su * v);
  }
  return out;
}

inline double vertex_distance(const Vector3& p) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& v : tetrahedron_vertices()) d = std::min(d, (p - v.coords).norm());
  return d;
}

}  // namespace verify_detail

// 1. REE of the four Bell states is ln 2, geometrically and numerically.
inline CriterionReport criterion_1(const VerifyOptions& opt, bool with_oracle = true) {
  using namespace verify_detail;
  return timed(1, "Bell-state REE equals ln 2", 5.0, [&](std::vector<Check>& checks) {
    double geo = 0.0, num = 0.0;
    for (int k = 1; k <= 4; ++k) {
      geo = std::max(geo, std::abs(ree_geometric(bell_state(k)).value - std::numbers::ln2));
      if (with_oracle) num = std::max(num, std::abs(ree_numeric(bell_state(k), opt.oracle).value - std::numbers::ln2));
    }
    checks.push_back(at_most("geometric |ree - ln2|", geo, 1e-12));
    if (with_oracle) checks.push_back(at_most("numeric |ree - ln2|", num, 1e-4));
  });
}

// 2. Closest-face property of |beta_1>: ln 2 on face x - y + z = 1, and the
//    literal strict inequality S < ln 2 on the interiors of the other three
//    faces named in the construction.
inline CriterionReport criterion_2(const VerifyOptions&) {
  using namespace verify_detail;
  return timed(2, "Bell state against faces of the octahedron", 5.0, [&](std::vector<Check>& checks) {
    const DensityMatrix beta = bell_state(1);
    const auto pts = triangle_points(50);
    double on_face = 0.0;
    for (const Vector3& w : pts) {
      const Vector3 t(w(0), -w(1), w(2));  // face (o1+, o2-, o3+)
      on_face = std::max(on_face, std::abs(relative_entropy(beta, bell_diagonal_state(t)).value - std::numbers::ln2));
    }
    checks.push_back(at_most("face x-y+z=1: max |S - ln2|", on_face, 1e-12));

    // Faces (o1+,o2+,o3-), (o1-,o2+,o3+), (o1-,o2-,o3-).
    const std::array<Vector3, 3> signs{Vector3(1, 1, -1), Vector3(-1, 1, 1), Vector3(-1, -1, -1)};
    double worst = -std::numeric_limits<double>::infinity();
    double least = std::numeric_limits<double>::infinity();
    for (const Vector3& sg : signs) {
      for (const Vector3& w : pts) {
        const Vector3 t = sg.cwiseProduct(w);
        const RelativeEntropy s = relative_entropy(beta, bell_diagonal_state(t));
        const double excess = s.finite() ? s.value - std::numbers::ln2 : std::numeric_limits<double>::infinity();
        worst = std::max(worst, excess);
        least = std::min(least, excess);
      }
    }
    Check strict{"other faces: max (S - ln2) < 0", worst < 0.0, fmt(worst) + " < 0"};
    checks.push_back(strict);
    // Reported alongside: the measured sign on those faces.
    checks.push_back({"other faces: min (S - ln2)", true, fmt(least)});
  });
}

// 3. Random entangled states of the three families, each behind a random
//    local unitary: Bloch vectors kept, CSS on the PPT boundary, agreement
//    with the oracle and a non-negative directional derivative.
inline CriterionReport criterion_3(const VerifyOptions& opt, bool with_oracle = true) {
  using namespace verify_detail;
  return timed(3, "family cross-validation", 600.0, [&](std::vector<Check>& checks) {
    Rng rng(opt.seed ^ 0x3333ULL);
    struct Sample {
      std::string family;
      DensityMatrix rho;
    };
    std::vector<Sample> samples;
    for (int i = 0; i < opt.family_count; ++i) {
      const LocalUnitary lu = random_local_unitary(rng);
      samples.push_back({"BellDiagonal", lu.apply(bell_diagonal_state(random_entangled_bell_diagonal(rng)))});
    }
    for (int i = 0; i < opt.family_count; ++i) {
      const LocalUnitary lu = random_local_unitary(rng);
      samples.push_back({"GeneralizedVP", lu.apply(vp_state(random_vp_weights(rng)))});
    }
    for (int i = 0; i < opt.family_count; ++i) {
      const LocalUnitary lu = random_local_unitary(rng);
      samples.push_back({"GeneralizedHorodecki", lu.apply(horodecki_state(random_entangled_horodecki_weights(rng)))});
    }

    struct Outcome {
      double bloch = 0.0, edge = 0.0, gap = 0.0, direction = 0.0;
      bool classified = false;
      std::string error;
    };
    std::vector<Outcome> outcomes(samples.size());
    parallel_for(samples.size(), [&](std::size_t i) {
      Outcome& o = outcomes[i];
      try {
        const CssResult r = css_auto(samples[i].rho, opt.oracle);
        o.classified = to_string(r.family.family) == samples[i].family && r.geometric;
        o.bloch = r.residuals.bloch_gap;
        o.edge = r.residuals.edge_gap;
        o.direction = directional_optimality_check(samples[i].rho, r.css);
        if (with_oracle) {
          OracleConfig cfg = opt.oracle;
          cfg.seed += i;
          o.gap = std::abs(r.ree - ree_numeric(samples[i].rho, cfg).value);
        }
      } catch (const std::exception& e) {
        o.error = e.what();
      }
    });

    for (const std::string family : {"BellDiagonal", "GeneralizedVP", "GeneralizedHorodecki"}) {
      double bloch = 0.0, edge = 0.0, gap = 0.0, direction = std::numeric_limits<double>::infinity();
      int misclassified = 0, done = 0;
      std::string error;
      for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].family != family) continue;
        const Outcome& o = outcomes[i];
        if (!o.error.empty()) {
          error = o.error;
          continue;
        }
        ++done;
        misclassified += o.classified ? 0 : 1;
        bloch = std::max(bloch, o.bloch);
        edge = std::max(edge, o.edge);
        gap = std::max(gap, o.gap);
        direction = std::min(direction, o.direction);
      }
      if (!error.empty()) checks.push_back({family + ": errors", false, error});
      if (done == 0) continue;
      checks.push_back(at_most(family + ": misclassified", misclassified, 0));
      checks.push_back(at_most(family + ": (a) Bloch gap", bloch, 1e-10));
      checks.push_back(at_most(family + ": (b) |min PT eigenvalue|", edge, 1e-8));
      if (with_oracle) checks.push_back(at_most(family + ": (c) |geometric - numeric|", gap, 2e-4));
      checks.push_back(at_least(family + ": (d) directional derivative", direction, -1e-8));
    }
  });
}

// 4. The reverse map through the regularized CSS recovers the family states.
inline CriterionReport criterion_4(const VerifyOptions& opt) {
  using namespace verify_detail;
  return timed(4, "reverse-map recovery", 60.0, [&](std::vector<Check>& checks) {
    Rng rng(opt.seed ^ 0x4444ULL);
    double vp = 0.0, h = 0.0;
    for (int i = 0; i < 100; ++i) vp = std::max(vp, recovery_gap(css_vp(random_vp_weights(rng))));
    for (int i = 0; i < 100; ++i) h = std::max(h, recovery_gap(css_horodecki(random_entangled_horodecki_weights(rng))));
    checks.push_back(at_most("VP max-entry error at x_vp", vp, 1e-9));
    checks.push_back(at_most("Horodecki max-entry error at x_H", h, 1e-9));
  });
}

// 5. Closed-form sigma_Z family equals the G-matrix construction.
inline CriterionReport criterion_5(const VerifyOptions& opt) {
  using namespace verify_detail;
  return timed(5, "sigma_Z closed form against the G-matrix route", 60.0, [&](std::vector<Check>& checks) {
    Rng rng(opt.seed ^ 0x5555ULL);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
      const SigmaZParams p = random_sigma_z(rng);
      for (double x : {0.0, 0.05, 0.1})
        worst = std::max(worst, max_abs(z_family(p, x).matrix - family_from_css(p.matrix(), x).matrix));
    }
    checks.push_back(at_most("max-entry difference over 500 x 3", worst, 1e-10));
  });
}

// 6. At r = s = 0 the deformed bodies are the tetrahedron and the octahedron.
inline CriterionReport criterion_6(const VerifyOptions&) {
  using namespace verify_detail;
  return timed(6, "surface meshes degenerate to T and L", 10.0, [&](std::vector<Check>& checks) {
    const int n = 64;
    const SurfaceMesh t = surface_mesh(Body::T, 0.0, 0.0, n);
    const SurfaceMesh l = surface_mesh(Body::L, 0.0, 0.0, n);

    double t_plane = 0.0, t_inside = 0.0;
    for (const auto& p : t.points) {
      const Vector3& q = p.q;
      const double planes = std::min({std::abs(q(0) + q(1) + q(2) - 1.0), std::abs(-(q(0) + q(1)) + q(2) - 1.0),
                                      std::abs(q(0) - q(1) - q(2) - 1.0), std::abs(-(q(0) - q(1)) - q(2) - 1.0)});
      t_plane = std::max(t_plane, planes);
      t_inside = std::max(t_inside, -4.0 * bell_weights(q).minCoeff());
    }
    double l_face = 0.0;
    for (const auto& p : l.points) l_face = std::max(l_face, std::abs(octahedron_norm(p.q) - 1.0));

    // Coverage: the top and bottom of each polytope above every grid node.
    auto covered = [](const SurfaceMesh& m, int i, int j, double target) {
      double best = std::numeric_limits<double>::infinity();
      const double q1 = -1.0 + 2.0 * i / (m.n - 1), q2 = -1.0 + 2.0 * j / (m.n - 1);
      for (const auto& p : m.points)
        if (p.q(0) == q1 && p.q(1) == q2) best = std::min(best, std::abs(p.q(2) - target));
      return best;
    };
    double t_cover = 0.0, l_cover = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double q1 = -1.0 + 2.0 * i / (n - 1), q2 = -1.0 + 2.0 * j / (n - 1);
        t_cover = std::max(t_cover, covered(t, i, j, 1.0 - std::abs(q1 + q2)));
        t_cover = std::max(t_cover, covered(t, i, j, std::abs(q1 - q2) - 1.0));
        const double h = 1.0 - std::abs(q1) - std::abs(q2);
        if (h < 1e-9) continue;
        // The L mesh holds edge states only: the four faces of L cut out by
        // the partial-transpose planes. Above (q1, q2) that is the top face
        // when q1 q2 <= 0 and the bottom face when q1 q2 >= 0.
        if (q1 * q2 <= 0.0) l_cover = std::max(l_cover, covered(l, i, j, h));
        if (q1 * q2 >= 0.0) l_cover = std::max(l_cover, covered(l, i, j, -h));
      }
    }
    checks.push_back(at_most("T mesh: distance to nearest face plane", t_plane, 1e-8));
    checks.push_back(at_most("T mesh: outside T", t_inside, 1e-8));
    checks.push_back(at_most("T mesh: top/bottom coverage", t_cover, 1e-8));
    checks.push_back(at_most("L mesh: | |q|_1 - 1 |", l_face, 1e-8));
    checks.push_back(at_most("L mesh: edge-state face coverage", l_cover, 1e-8));
  });
}

// 7. Crossing points of family lines: all Bell-diagonal lines meet at
//    (1, 1, -1); generic lines meet away from every vertex.
inline CriterionReport criterion_7(const VerifyOptions& opt) {
  using namespace verify_detail;
  return timed(7, "crossing points of CSS lines", 10.0, [&](std::vector<Check>& checks) {
    Rng rng(opt.seed ^ 0x7777ULL);
    double bd = 0.0;
    for (int i = 0; i < 100; ++i) {
      const auto [lo, hi] = sweep_alpha_range(0.0, 0.0);
      const double a = lo + (hi - lo) * uniform(rng, 0.02, 0.98);
      const double b = lo + (hi - lo) * uniform(rng, 0.02, 0.98);
      if (std::abs(a - b) < 1e-3) continue;
      bd = std::max(bd, (line_crossing(sweep_params(0, 0, a), sweep_params(0, 0, b)).mu - Vector3(1, 1, -1)).norm());
    }
    checks.push_back(at_most("Bell-diagonal pairs: |mu - (1,1,-1)|", bd, 1e-10));

    const std::array<std::pair<double, double>, 4> slices{{{0.3, 0.3}, {0.5, 0.5}, {0.3, -0.3}, {0.5, -0.5}}};
    double nearest = std::numeric_limits<double>::infinity();
    double consistency = 0.0;
    int pairs = 0;
    while (pairs < 100) {
      const auto [r, s] = slices[static_cast<std::size_t>(pairs % 4)];
      const auto [lo, hi] = sweep_alpha_range(r, s);
      const double a = lo + (hi - lo) * uniform(rng, 0.02, 0.98);
      const double b = lo + (hi - lo) * uniform(rng, 0.02, 0.98);
      if (std::abs(a - b) < 1e-2) continue;
      const SigmaZParams p = sweep_params(r, s, a), q = sweep_params(r, s, b);
      const LineCrossing c = line_crossing(p, q);
      nearest = std::min(nearest, vertex_distance(c.mu));
      consistency = std::max(consistency, (z_family_pauli(p, c.x).t - c.mu).norm());
      consistency = std::max(consistency, (z_family_pauli(q, c.x_prime).t - c.mu).norm());
      ++pairs;
    }
    checks.push_back(at_least("generic pairs: min distance of mu to a vertex", nearest, 1e-3 * (1 + 1e-12)));
    checks.push_back(at_most("generic pairs: mu lies on both lines", consistency, 1e-10));
  });
}

// 8. Module invariants under a fixed seed.
inline CriterionReport criterion_8(const VerifyOptions& opt) {
  using namespace verify_detail;
  return timed(8, "property suite", 300.0, [&](std::vector<Check>& checks) {
    Rng rng(opt.seed ^ 0x8888ULL);

    // Pauli round trip, partial transpose, canonical frame, PPT versus concurrence.
    double round_trip = 0.0, involution = 0.0, pt_trace = 0.0, spectrum = 0.0, pt_spectrum = 0.0, off_diag = 0.0;
    int ppt_mismatch = 0;
    for (int i = 0; i < 1000; ++i) {
      const DensityMatrix rho = random_state(rng, 1 + i % 4);
      round_trip = std::max(round_trip, max_abs(from_pauli(to_pauli(rho)).matrix - rho.matrix()));
      const Matrix4c pt = partial_transpose(rho);
      involution = std::max(involution, max_abs(partial_transpose(pt) - rho.matrix()));
      pt_trace = std::max({pt_trace, std::abs(pt.trace().real() - 1.0), hermiticity_gap(pt)});
      const Canonicalization c = canonicalize(rho);
      const Matrix4c moved = c.lu.apply(rho.matrix());
      spectrum = std::max(spectrum, (eigenvalues(moved) - eigenvalues(rho.matrix())).cwiseAbs().maxCoeff());
      pt_spectrum = std::max(pt_spectrum, (eigenvalues(partial_transpose(moved)) - eigenvalues(pt)).cwiseAbs().maxCoeff());
      off_diag = std::max(off_diag, c.off_diagonal);
      const DensityMatrix mixed = random_state(rng);
      if ((concurrence(mixed) <= 1e-12) != is_ppt(mixed, 1e-10)) ++ppt_mismatch;
    }
    checks.push_back(at_most("Pauli round trip (1000 states)", round_trip, 1e-12));
    checks.push_back(at_most("partial transpose involution", involution, 0.0));
    checks.push_back(at_most("partial transpose trace and Hermiticity", pt_trace, 1e-15));
    checks.push_back(at_most("canonical frame keeps spectrum", spectrum, 1e-10));
    checks.push_back(at_most("canonical frame keeps PT spectrum", pt_spectrum, 1e-10));
    checks.push_back(at_most("canonical correlation tensor diagonal", off_diag, 1e-10));
    checks.push_back(at_most("concurrence zero <=> PPT mismatches (1000 states)", ppt_mismatch, 0));

    // Closed-form spectra against the dense eigensolver.
    double eig = 0.0, vec = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const ZParallelState z{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1),
                             uniform(rng, -1, 1)};
      for (int pt = 0; pt < 2; ++pt) {
        const EigenSystem e = pt == 0 ? eigensystem(z) : static_cast<EigenSystem>(pt_eigensystem(z));
        const Matrix4c m = pt == 0 ? z.matrix() : partial_transpose(z.matrix());
        Vector4 closed = e.values();
        std::sort(closed.data(), closed.data() + 4);
        eig = std::max(eig, (closed - eigenvalues(m)).cwiseAbs().maxCoeff());
        const Matrix4c v = e.vectors();
        vec = std::max(vec, max_abs(v.adjoint() * v - Matrix4c::Identity()));
        vec = std::max(vec, max_abs(m * v - v * e.values().cast<Complex>().asDiagonal()));
      }
    }
    checks.push_back(at_most("closed-form eigenvalues vs dense (rho and PT)", eig, 1e-10));
    checks.push_back(at_most("closed-form eigenvectors orthonormal and exact", vec, 1e-10));

    // Boundary roots are boundary points; degeneration to the polytopes.
    double root_res = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double r = uniform(rng, -1, 1), s = uniform(rng, -1, 1), q1 = uniform(rng, -1, 1), q2 = uniform(rng, -1, 1);
      for (const auto& root : boundary_T(r, s, q1, q2))
        root_res = std::max(root_res, std::abs(min_eigenvalue(ZParallelState{r, s, q1, q2, root.q3}.matrix())));
    }
    checks.push_back(at_most("boundary_T roots: |lambda_min|", root_res, 1e-10));
    double degen_t = 0.0, degen_l = 0.0;
    for (int i = 0; i <= 40; ++i) {
      for (int j = 0; j <= 40; ++j) {
        const double q1 = -1.0 + i / 20.0, q2 = -1.0 + j / 20.0;
        for (const auto& root : boundary_T(0, 0, q1, q2)) {
          const double top = 1.0 - std::abs(q1 + q2), bottom = std::abs(q1 - q2) - 1.0;
          degen_t = std::max(degen_t, std::min(std::abs(root.q3 - top), std::abs(root.q3 - bottom)));
        }
        for (const auto& root : boundary_L(0, 0, q1, q2)) {
          if (!root.physical) continue;
          degen_l = std::max(degen_l, std::abs(std::abs(q1) + std::abs(q2) + std::abs(root.q3) - 1.0));
        }
      }
    }
    checks.push_back(at_most("boundary_T(0,0) against the tetrahedron planes", degen_t, 1e-12));
    checks.push_back(at_most("boundary_L(0,0) against the octahedron faces", degen_l, 1e-12));

    // Glued upper sheet of T_{r,s} is continuous along rays in (q1, q2).
    double jump = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double r = uniform(rng, -0.9, 0.9), s = uniform(rng, -0.9, 0.9);
      const double angle = uniform(rng, 0.0, 2.0 * std::numbers::pi);
      double prev = std::numeric_limits<double>::quiet_NaN();
      for (int k = 0; k <= 1000; ++k) {
        const double rad = k * 1e-3;
        double top = -std::numeric_limits<double>::infinity();
        for (const auto& root : boundary_T(r, s, rad * std::cos(angle), rad * std::sin(angle))) top = std::max(top, root.q3);
        if (std::isfinite(prev) && std::isfinite(top)) jump = std::max(jump, std::abs(top - prev) / 1e-3);
        prev = top;
      }
    }
    checks.push_back(at_most("upper T sheet slope along rays (continuity)", jump, 10.0));

    // Crossing points are edge states; deformed L shrinks inside L.
    double crossing_edge = 0.0, crossing_line = 0.0;
    for (int i = 0; i < 50; ++i) {
      const Vector3 lam = random_entangled_horodecki_weights(rng);
      const double d = lam(1) - lam(2);
      const Vector3 t(lam(0), -lam(0), 2 * lam(0) - 1);
      const Vertex v = tetrahedron_vertices()[0];
      for (const CrossingPoint& c : line_surface_crossing(t, v, d, -d)) {
        crossing_edge = std::max(crossing_edge, std::abs(min_pt_eigenvalue(ZParallelState{d, -d, c.coords(0), c.coords(1), c.coords(2)}.matrix())));
        crossing_line = std::max(crossing_line, (c.coords - (v.coords + c.w * (t - v.coords))).norm());
      }
    }
    checks.push_back(at_most("crossings: |min PT eigenvalue|", crossing_edge, 1e-8));
    checks.push_back(at_most("crossings: distance to the ray", crossing_line, 1e-10));
    double shrink = 0.0;
    for (const auto& p : surface_mesh(Body::L, 0.5, 0.5, 64).points) shrink = std::max(shrink, octahedron_norm(p.q) - 1.0);
    checks.push_back(at_most("L_{0.5,0.5} inside L: max(|q|_1 - 1)", shrink, 1e-8));

    // Optimality against random separable states.
    double optimality = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 6; ++i) {
      DensityMatrix rho;
      CssResult r;
      if (i % 3 == 0) {
        const Vector3 t = random_entangled_bell_diagonal(rng);
        rho = bell_diagonal_state(t);
        r = css_bell_diagonal(t);
      } else if (i % 3 == 1) {
        const Vector3 lam = random_vp_weights(rng);
        rho = vp_state(lam);
        r = css_vp(lam);
      } else {
        const Vector3 lam = random_entangled_horodecki_weights(rng);
        rho = horodecki_state(lam);
        r = css_horodecki(lam);
      }
      for (int k = 0; k < 200; ++k) {
        const RelativeEntropy s = relative_entropy(rho, random_separable_state(rng));
        if (s.finite()) optimality = std::max(optimality, r.ree - s.value);
      }
    }
    checks.push_back(at_most("S(rho||css) - S(rho||sigma') over random separable sigma'", optimality, 1e-12));

    // Families: straightness, tracelessness of G, monotone relative entropy,
    // Pauli route equality.
    double straight = 0.0, trace_g = 0.0, pauli_route = 0.0;
    int monotone_breaks = 0;
    for (int i = 0; i < 200; ++i) {
      const SigmaZParams p = random_sigma_z(rng);
      const double xmax = z_family_max_x(p);
      const Vector3 t0 = z_family_pauli(p, 0.0).t;
      const Vector3 t1 = z_family_pauli(p, 0.5 * xmax).t;
      const Vector3 dir = (t1 - t0).normalized();
      double prev = -1.0;
      for (int k = 0; k <= 10; ++k) {
        const double x = xmax * k / 10.0;
        const ZPauli zp = z_family_pauli(p, x);
        const Vector3 off = (zp.t - t0) - (zp.t - t0).dot(dir) * dir;
        straight = std::max(straight, off.norm());
        const PauliForm direct = to_pauli(z_family(p, x).matrix);
        pauli_route = std::max({pauli_route, std::abs(direct.r(2) - zp.r), std::abs(direct.s(2) - zp.s),
                                (direct.g.diagonal() - zp.t).cwiseAbs().maxCoeff()});
        const RelativeEntropy s = relative_entropy(z_family(p, x).matrix, p.matrix());
        if (s.finite()) {
          if (s.value < prev - 1e-12) ++monotone_breaks;
          prev = s.value;
        }
      }
      trace_g = std::max(trace_g, std::abs(g_matrix(p.matrix()).trace().real()));
    }
    checks.push_back(at_most("family lines straight", straight, 1e-10));
    checks.push_back(at_most("|tr G|", trace_g, 1e-12));
    checks.push_back(at_most("closed-form Pauli data vs direct", pauli_route, 1e-12));
    checks.push_back(at_most("S(rho(x)||sigma*) non-decreasing along x", monotone_breaks, 0));

    // sigma* stays the closest separable state along its family.
    double stability = 0.0;
    for (int i = 0; i < 6; ++i) {
      const SigmaZParams p = random_sigma_z(rng);
      const double x = z_family_max_x(p) * uniform(rng, 0.3, 0.9);
      const DensityMatrix rho = z_family(p, x).state();
      OracleConfig cfg = opt.oracle;
      cfg.seed += static_cast<unsigned long long>(i);
      stability = std::max(stability, std::abs(ree_numeric(rho, cfg).value - relative_entropy(rho.matrix(), p.matrix()).value));
    }
    checks.push_back(at_most("oracle REE of rho(x) vs S(rho(x)||sigma*)", stability, 2e-4));

    // Oracle sanity: non-negative, zero exactly on PPT states.
    int sanity = 0;
    for (int i = 0; i < 6; ++i) {
      const DensityMatrix rho = i % 2 == 0 ? random_separable_state(rng) : random_state(rng, 2);
      OracleConfig cfg = opt.oracle;
      cfg.seed += static_cast<unsigned long long>(100 + i);
      const double v = ree_numeric(rho, cfg).value;
      const bool zero = v <= 1e-6;
      if (v < 0.0 || zero != is_ppt(rho)) ++sanity;
    }
    checks.push_back(at_most("oracle >= 0 and zero iff PPT (violations)", sanity, 0));

    // Analytic oracle gradient against central differences.
    double grad = 0.0;
    for (int i = 0; i < 5; ++i) {
      const DensityMatrix rho = random_state(rng);
      const int k = opt.oracle.ensemble_size;
      const detail::CrossEntropy f(rho.matrix(), k);
      std::vector<double> x(static_cast<std::size_t>(5 * k)), g(x.size());
      for (auto& v : x) v = uniform(rng, -1.0, 1.0);
      double c = 0.0;
      f.Evaluate(x.data(), &c, g.data());
      double num = 0.0, den = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        const double h = 1e-5;
        std::vector<double> xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        double fp = 0.0, fm = 0.0;
        f.Evaluate(xp.data(), &fp, nullptr);
        f.Evaluate(xm.data(), &fm, nullptr);
        const double fd = (fp - fm) / (2 * h);
        num += (fd - g[j]) * (fd - g[j]);
        den += g[j] * g[j];
      }
      grad = std::max(grad, std::sqrt(num / den));
    }
    checks.push_back(at_most("oracle gradient vs central differences (relative)", grad, 1e-6));
  });
}

using CriterionFn = std::function<CriterionReport(const VerifyOptions&)>;

inline CriterionReport run_criterion(int id, const VerifyOptions& opt) {
  switch (id) {
    case 1: return criterion_1(opt);
    case 2: return criterion_2(opt);
    case 3: return criterion_3(opt);
    case 4: return criterion_4(opt);
    case 5: return criterion_5(opt);
    case 6: return criterion_6(opt);
    case 7: return criterion_7(opt);
    case 8: return criterion_8(opt);
    default: throw Error(ErrorCode::InvalidArgument, "criterion must be 1..8");
  }
}

/// Named suites for the command line. `families` runs the residual checks
/// of the family constructions without the oracle; `oracle` adds the oracle
/// comparisons; `revmap` the reverse-map, closed-form and crossing checks.
inline std::vector<CriterionReport> run_suite(const std::string& suite, const VerifyOptions& opt) {
  std::vector<CriterionReport> out;
  if (suite == "families") {
    out.push_back(criterion_1(opt, false));
    out.push_back(criterion_3(opt, false));
  } else if (suite == "revmap") {
    out.push_back(criterion_4(opt));
    out.push_back(criterion_5(opt));
    out.push_back(criterion_7(opt));
  } else if (suite == "oracle") {
    out.push_back(criterion_1(opt, true));
    out.push_back(criterion_3(opt, true));
  } else if (suite == "all") {
    for (int id = 1; id <= 8; ++id) out.push_back(run_criterion(id, opt));
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown suite '" + suite + "'");
  }
  return out;
}

}  // namespace reegeom
