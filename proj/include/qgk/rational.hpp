#pragma once

#include <gmpxx.h>

#include <string>

namespace qgk {

/// Exact rational number. All lengths, coordinates, and term coefficients
/// are kept in this form so that reflection distances compare bit-exactly.
using Rational = mpq_class;

/// Parse a finite decimal string ("1", "-0.25", "3.10") into an exact
/// rational. Throws qgk::Error on anything that is not a finite decimal.
Rational parse_decimal(const std::string& text);

/// Parse either a decimal string or a "p/q" fraction.
Rational parse_rational(const std::string& text);

/// Render as "p" or "p/q" in lowest terms.
std::string rational_str(const Rational& value);

/// num/den in canonical form (the raw two-argument mpq constructor does not
/// reduce, which breaks exact comparisons).
inline Rational frac(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline double to_double(const Rational& value) { return value.get_d(); }

}  // namespace qgk
