#pragma once

#include <utility>
#include <vector>

#include "qgk/rational.hpp"

namespace qgk {

/// Exact coefficient of the form q * pi^pi_pow. The rational part does all
/// bookkeeping; pi enters numerically only when a term is evaluated.
struct Coeff {
  Rational q;
  int pi_pow = 0;

  Coeff() : q(0) {}
  Coeff(Rational rational_part, int pi_power = 0)
      : q(std::move(rational_part)), pi_pow(pi_power) {}

  bool is_zero() const { return q == 0; }
  Coeff operator*(const Coeff& other) const {
    return Coeff(Rational(q * other.q), pi_pow + other.pi_pow);
  }
  Coeff operator-() const { return Coeff(Rational(-q), pi_pow); }
  bool operator==(const Coeff& other) const {
    if (q == 0 && other.q == 0) return true;
    return q == other.q && pi_pow == other.pi_pow;
  }
  double to_double() const;
};

/// The three canonical time profiles closed under boundary-layer
/// convolution. As functions of t with center s0 and distance d:
///
///   LOG(c,d)  = c * ln[(t-s0)^2 + d^2]
///   EVEN(c,d) = c * (1/pi) * d      / [(t-s0)^2 + d^2]
///   ODD(c,d)  = c * (1/pi) * (t-s0) / [(t-s0)^2 + d^2]
///
/// EVEN is the Poisson kernel (EVEN(c,0) degenerates to c*delta), ODD its
/// harmonic conjugate, LOG the potential profile of a point charge.
enum class Kind { Log, Even, Odd };

const char* kind_name(Kind kind);

struct CanonicalTerm {
  Kind kind;
  Coeff c;
  Rational d;   // distance parameter, >= 0
  Rational s0;  // center (source time)

  CanonicalTerm(Kind k, Coeff coeff, Rational dist, Rational center = Rational(0))
      : kind(k), c(std::move(coeff)), d(std::move(dist)), s0(std::move(center)) {}

  /// Numeric value at time t. Throws SingularEvaluation at a singular point.
  double eval(double t) const;

  bool same_shape(const CanonicalTerm& other) const {
    return kind == other.kind && d == other.d && c.pi_pow == other.c.pi_pow &&
           s0 == other.s0;
  }
};

/// A compacted sum of canonical terms sharing one center. At most one term
/// per (kind, d, pi_pow) key; zero coefficients dropped; deterministic order.
class TermSum {
 public:
  TermSum() : s0_(0) {}
  explicit TermSum(Rational center) : s0_(std::move(center)) {}
  TermSum(std::initializer_list<CanonicalTerm> terms);

  /// Adds a term (must share the sum's center) and re-compacts lazily.
  void add(const CanonicalTerm& term);
  void add(const TermSum& other);

  const std::vector<CanonicalTerm>& terms() const { return terms_; }
  const Rational& center() const { return s0_; }
  bool empty() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }

  double eval(double t) const;
  TermSum scaled(const Coeff& factor) const;

  bool operator==(const TermSum& other) const;

 private:
  Rational s0_;
  std::vector<CanonicalTerm> terms_;
};

/// Free Green function of the 2-D Poisson equation, -(1/4pi) ln r^2, C = 0.
double g0(double t, double x, double s, double y);

/// (dG0/dt, dG0/dx); the s and y derivatives are the negatives.
std::pair<double, double> g0_grad(double t, double x, double s, double y);

/// Exact closed-form time convolution (K * rho)(t) = \int K(t-s) rho(s) ds.
/// Supported pairs and results (distances add, coefficients multiply):
///   EVEN*EVEN -> EVEN,  ODD*EVEN -> ODD,  EVEN*ODD -> ODD,
///   ODD*ODD   -> -EVEN, LOG*EVEN -> LOG,  EVEN*LOG -> LOG.
/// Requires kernel.d > 0 and density.d > 0. LOG*LOG and LOG*ODD throw.
CanonicalTerm convolve(const CanonicalTerm& kernel, const CanonicalTerm& density);
TermSum convolve(const CanonicalTerm& kernel, const TermSum& densities);

/// d/dt of a term. Only LOG stays in the family: d/dt LOG(c,d) = ODD(2 pi c, d).
/// EVEN/ODD time derivatives are second-order poles and are rejected; use the
/// integrated-by-parts (nu-prime) system instead.
TermSum differentiate_time(const CanonicalTerm& term);
TermSum differentiate_time(const TermSum& sum);

/// Antiderivative in t with the canonical constant (0): ODD(c,d) -> LOG(c/2pi, d).
/// Used to rebuild dipole densities nu from nu-prime for assembly.
CanonicalTerm antiderivative_time(const CanonicalTerm& term);
TermSum antiderivative_time(const TermSum& sum);

/// Merges equal-shape terms by exact coefficient addition, drops zeros,
/// sorts by (kind, d, pi_pow).
TermSum compact(const TermSum& sum);

/// Global sup norm of |term| over t: EVEN peaks at |c|/(pi d), ODD at
/// |c|/(2 pi d); LOG is unbounded (returns +inf).
double term_sup_global(const CanonicalTerm& term);

}  // namespace qgk
