#include "qgk/terms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qgk/errors.hpp"

namespace qgk {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

const char* kind_name(Kind kind) {
  switch (kind) {
    case Kind::Log: return "LOG";
    case Kind::Even: return "EVEN";
    case Kind::Odd: return "ODD";
  }
  return "?";
}

double Coeff::to_double() const {
  double v = q.get_d();
  if (pi_pow != 0) v *= std::pow(kPi, pi_pow);
  return v;
}

double CanonicalTerm::eval(double t) const {
  const double u = t - qgk::to_double(s0);
  const double dd = qgk::to_double(d);
  const double denom = u * u + dd * dd;
  switch (kind) {
    case Kind::Log:
      if (denom == 0.0)
        throw SingularEvaluation("LOG term evaluated at its center with d = 0");
      return c.to_double() * std::log(denom);
    case Kind::Even:
      if (denom == 0.0)
        throw SingularEvaluation("EVEN term with d = 0 is a delta at the center");
      return c.to_double() / kPi * dd / denom;
    case Kind::Odd:
      if (denom == 0.0)
        throw SingularEvaluation("ODD term evaluated at its center with d = 0");
      return c.to_double() / kPi * u / denom;
  }
  return 0.0;
}

TermSum::TermSum(std::initializer_list<CanonicalTerm> terms) : s0_(0) {
  bool first = true;
  for (const auto& t : terms) {
    if (first) {
      s0_ = t.s0;
      first = false;
    }
    add(t);
  }
}

void TermSum::add(const CanonicalTerm& term) {
  if (term.c.is_zero()) return;
  if (terms_.empty() && s0_ == 0) s0_ = term.s0;
  if (term.s0 != s0_)
    throw Error("TermSum requires a shared center; got " + rational_str(term.s0) +
                " in a sum centered at " + rational_str(s0_));
  for (auto& existing : terms_) {
    if (existing.same_shape(term)) {
      existing.c.q += term.c.q;
      if (existing.c.is_zero()) {
        *this = compact(*this);
      }
      return;
    }
  }
  terms_.push_back(term);
}

void TermSum::add(const TermSum& other) {
  for (const auto& t : other.terms()) add(t);
}

double TermSum::eval(double t) const {
  double total = 0.0;
  for (const auto& term : terms_) total += term.eval(t);
  return total;
}

TermSum TermSum::scaled(const Coeff& factor) const {
  TermSum out(s0_);
  if (factor.is_zero()) return out;
  for (const auto& term : terms_) {
    CanonicalTerm t = term;
    t.c = t.c * factor;
    out.add(t);
  }
  return out;
}

bool TermSum::operator==(const TermSum& other) const {
  TermSum a = compact(*this);
  TermSum b = compact(other);
  if (a.center() != b.center() && !(a.empty() && b.empty())) return false;
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    const auto& ta = a.terms()[i];
    const auto& tb = b.terms()[i];
    if (ta.kind != tb.kind || ta.d != tb.d || !(ta.c == tb.c)) return false;
  }
  return true;
}

double g0(double t, double x, double s, double y) {
  const double r2 = (t - s) * (t - s) + (x - y) * (x - y);
  if (r2 == 0.0) throw SingularEvaluation("G0 at coincident points");
  return -std::log(r2) / (4.0 * kPi);
}

std::pair<double, double> g0_grad(double t, double x, double s, double y) {
  const double r2 = (t - s) * (t - s) + (x - y) * (x - y);
  if (r2 == 0.0) throw SingularEvaluation("grad G0 at coincident points");
  const double scale = -1.0 / (2.0 * kPi * r2);
  return {scale * (t - s), scale * (x - y)};
}

CanonicalTerm convolve(const CanonicalTerm& kernel, const CanonicalTerm& density) {
  if (kernel.d <= 0 || density.d <= 0)
    throw Error("convolve requires strictly positive distance parameters");
  const Coeff c = kernel.c * density.c;
  const Rational d(kernel.d + density.d);
  const Rational s0(kernel.s0 + density.s0);
  const Kind a = kernel.kind, b = density.kind;
  if (a == Kind::Even && b == Kind::Even) return {Kind::Even, c, d, s0};
  if (a == Kind::Odd && b == Kind::Even) return {Kind::Odd, c, d, s0};
  if (a == Kind::Even && b == Kind::Odd) return {Kind::Odd, c, d, s0};
  if (a == Kind::Odd && b == Kind::Odd) return {Kind::Even, -c, d, s0};
  if (a == Kind::Log && b == Kind::Even) return {Kind::Log, c, d, s0};
  if (a == Kind::Even && b == Kind::Log) return {Kind::Log, c, d, s0};
  throw UnsupportedConvolution(std::string("unsupported convolution ") +
                               kind_name(a) + " * " + kind_name(b));
}

TermSum convolve(const CanonicalTerm& kernel, const TermSum& densities) {
  TermSum out(Rational(kernel.s0 + densities.center()));
  for (const auto& term : densities.terms()) out.add(convolve(kernel, term));
  return out;
}

TermSum differentiate_time(const CanonicalTerm& term) {
  TermSum out(term.s0);
  if (term.c.is_zero()) return out;
  if (term.kind != Kind::Log)
    throw UnsupportedDerivative(
        std::string("d/dt of ") + kind_name(term.kind) +
        " leaves the closed family; use the nu-prime formulation");
  // d/dt c ln(u^2+d^2) = 2cu/(u^2+d^2) = ODD(2 pi c, d)
  out.add({Kind::Odd, Coeff(Rational(2 * term.c.q), term.c.pi_pow + 1), term.d,
           term.s0});
  return out;
}

TermSum differentiate_time(const TermSum& sum) {
  TermSum out(sum.center());
  for (const auto& term : sum.terms()) out.add(differentiate_time(term));
  return out;
}

CanonicalTerm antiderivative_time(const CanonicalTerm& term) {
  if (term.kind != Kind::Odd)
    throw UnsupportedDerivative(std::string("antiderivative of ") +
                                kind_name(term.kind) + " is not in the family");
  return {Kind::Log, Coeff(Rational(term.c.q / 2), term.c.pi_pow - 1), term.d,
          term.s0};
}

TermSum antiderivative_time(const TermSum& sum) {
  TermSum out(sum.center());
  for (const auto& term : sum.terms()) out.add(antiderivative_time(term));
  return out;
}

TermSum compact(const TermSum& sum) {
  std::vector<CanonicalTerm> terms = sum.terms();
  std::sort(terms.begin(), terms.end(),
            [](const CanonicalTerm& a, const CanonicalTerm& b) {
              if (a.kind != b.kind) return a.kind < b.kind;
              if (a.d != b.d) return a.d < b.d;
              return a.c.pi_pow < b.c.pi_pow;
            });
  TermSum out(sum.center());
  std::vector<CanonicalTerm> merged;
  for (const auto& t : terms) {
    if (!merged.empty() && merged.back().same_shape(t)) {
      merged.back().c.q += t.c.q;
    } else {
      merged.push_back(t);
    }
  }
  for (const auto& t : merged)
    if (!t.c.is_zero()) out.add(t);
  return out;
}

double term_sup_global(const CanonicalTerm& term) {
  const double c = std::abs(term.c.to_double());
  const double d = qgk::to_double(term.d);
  switch (term.kind) {
    case Kind::Even:
      if (d == 0.0) return std::numeric_limits<double>::infinity();
      return c / (kPi * d);
    case Kind::Odd:
      if (d == 0.0) return std::numeric_limits<double>::infinity();
      return c / (2.0 * kPi * d);
    case Kind::Log:
      return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

}  // namespace qgk
