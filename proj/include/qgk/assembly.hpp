#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qgk/graph.hpp"
#include "qgk/mre.hpp"
#include "qgk/terms.hpp"

namespace qgk {

/// Green function value at one space-time point with per-order breakdown.
struct GreenEvaluation {
  double t = 0;
  EdgePoint field;
  Rational s0;
  EdgePoint source;
  bool includes_free = false;  // field point on the source edge
  double free_part = 0;
  std::vector<double> order_contrib;
  double gamma = 0;  // sum of the order contributions
  double green = 0;  // free_part + gamma
};

struct CylinderValues {
  GreenEvaluation bookkeeping;
  double tbar = 0;
  double t_kernel = 0;
};

/// Exact per-order boundary contribution gamma_e(., x) as LOG terms in t.
/// Spatial offsets enter only through the distance parameter: a density term
/// at distance d seen from height rho lands at distance rho + d. No numeric
/// integration happens here.
std::vector<TermSum> assemble_gamma_terms(const DensitySeries& series,
                                          const EdgePoint& x);

/// The delta_{e e0} G0 term, present when x lies on the source edge.
std::optional<CanonicalTerm> free_green_term(const DensitySeries& series,
                                             const EdgePoint& x);

GreenEvaluation assemble_green(const DensitySeries& series, double t,
                               const EdgePoint& x);

/// Cylinder kernels, requiring the series to be centered at s0 = 0:
/// Tbar = -2 G and T = -2 dG/dt, the derivative taken symbolically term by
/// term before any numeric evaluation.
double cylinder_tbar(const DensitySeries& series, double t, const EdgePoint& x);
double cylinder_t(const DensitySeries& series, double t, const EdgePoint& x,
                  const EdgePoint& y);
CylinderValues cylinder_values(const DensitySeries& series, double t,
                               const EdgePoint& x);

/// T(t,x,x) - 1/(pi t): the free diagonal kernel removed exactly (the x = y
/// limit of the direct term), leaving the finite boundary-induced part.
/// Requires t > 0 and x equal to the series' source point.
double renormalized_diagonal(const DensitySeries& series, double t,
                             const EdgePoint& x);

/// Exact Kirchhoff flux residual sum_e dG_e/dx_e(t, v+) at a vertex, as terms
/// in t. Vanishes identically for the closed-form solutions; for a truncation
/// it equals the boundary trace of the first omitted reflection.
TermSum kirchhoff_residual_terms(const DensitySeries& series, int up_to_order,
                                 const std::string& vertex);

/// Exact continuity residual G_a(t, v+) - G_b(t, v+) across two edge ends
/// meeting at the same vertex.
TermSum continuity_residual_terms(const DensitySeries& series, int up_to_order,
                                  const EdgeEnd& a, const EdgeEnd& b);

}  // namespace qgk
