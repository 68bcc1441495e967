// ree.hpp
// Relative entropy of entanglement: the geometric value for the solvable
// families and a comparison against the numerical oracle.

#pragma once

#include "reegeom/css.hpp"
#include "reegeom/oracle.hpp"
#include "reegeom/relative_entropy.hpp"

namespace reegeom {

/// REE through the geometric closest separable state. Separable input gives
/// zero regardless of family; entangled input outside the families is refused.
inline ReeReport ree_geometric(const DensityMatrix& rho) {
  const FamilyTag tag = classify(rho);
  if (tag.family == Family::Other && !is_ppt(rho))
    throw Error(ErrorCode::NotSolvableFamily, "no geometric construction for this state");
  const CssResult r = css_auto(rho);
  ReeReport out;
  out.value = r.ree;
  out.css_geometric = r.css;
  out.css_numeric = r.css;
  out.converged = true;
  return out;
}

/// Geometric and numerical REE side by side; gap = geometric - numeric.
inline ReeReport ree_cross_check(const DensityMatrix& rho, const OracleConfig& cfg = {}) {
  const ReeReport geometric = ree_geometric(rho);
  ReeReport out = ree_numeric(rho, cfg);
  out.css_geometric = geometric.css_geometric;
  out.gap = geometric.value - out.value;
  return out;
}

}  // namespace reegeom
