#pragma once

#include <functional>
#include <vector>

#include "qgk/rational.hpp"
#include "qgk/terms.hpp"

namespace qgk {

/// Closed-form image ladder for the Neumann interval, in MRE generation
/// order: order 0 places images at -y0 and 2L-y0; order 1 adds y0-2L and
/// y0+2L; subsequent orders continue the double-reflection pattern
/// +-y0 + 2kL. All coefficients are +1.
struct ImageExpansion {
  struct Image {
    Rational coeff;
    Rational position;  // signed coordinate along the edge axis
    int order;
  };
  std::vector<Image> images;
  int max_order = 0;
};

ImageExpansion image_interval(const Rational& length, const Rational& y0, int order);

/// Half-line Neumann image: gamma(t,x;s0,y0) = G0(t,x;s0,-y0)
///                                          = -(1/4pi) ln[(t-s0)^2+(x+y0)^2].
double image_halfline(double t, double x, double s0, double y0);

/// Cylinder kernel T on an infinite star with d_v edges, field on edge j,
/// source on edge l:
///   T_j^l = delta_jl (t/pi)/(t^2+(x-y)^2) + (2/d_v - delta_jl) (t/pi)/(t^2+(x+y)^2)
double image_star_t(int d_v, int j, int l, double t, double x, double y);

struct QuadOptions {
  double abs_tol = 1e-10;
  long max_evals = 1000000;
};

/// Adaptive quadrature over the whole line: Gauss-Kronrod refinement on
/// finite segments split at the supplied breakpoints, with the algebraic
/// tails beyond |s| = 10 * scale_hint mapped by s -> 1/u. Throws
/// QuadratureBudgetError (carrying the achieved estimate) past the budget.
double integrate_real_line(const std::function<double(double)>& f,
                           std::vector<double> breakpoints, double scale_hint,
                           const QuadOptions& options = {});

/// Adaptive quadrature on a finite interval (same engine, same budget rules).
double integrate_segment(const std::function<double(double)>& f, double a, double b,
                         const QuadOptions& options = {});

/// Left-hand sides of the three closed convolution identities, by quadrature.
/// Positivity of x and y0 is required.
double quad_lemma_even(double x, double y0, double t, double s0,
                       const QuadOptions& options = {});  // 1/(Lorentz*Lorentz)
double quad_lemma_odd(double x, double y0, double t, double s0,
                      const QuadOptions& options = {});  // (t-s)/(Lorentz*Lorentz)
double quad_prop_log(double x, double y0, double t, double s0,
                     const QuadOptions& options = {});  // ln/(Lorentz)

/// Numeric oracle for (kernel * density)(t), independent of the closed-form
/// convolution rules.
double convolution_numeric(const CanonicalTerm& kernel, const CanonicalTerm& density,
                           double t, const QuadOptions& options = {});

/// int_0^infty ln(sigma)/(sigma^2+1) dsigma, which vanishes exactly.
double constant_vanishing_integral(const QuadOptions& options = {});

/// Residual of the flat-boundary identity
///   G0(t,x;s0,-y0) = 2 int ds dG0/dn(t,x;s,0) G0(s,0;s0,y0),
/// the left side closed-form, the right side by quadrature.
double balian_bloch_residual(double t, double x, double s0, double y0,
                             const QuadOptions& options = {});

}  // namespace qgk
