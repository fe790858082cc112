#include "qgk/rational.hpp"

#include <cctype>

#include "qgk/errors.hpp"

namespace qgk {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_decimal(const std::string& text) {
  std::string body = text;
  bool negative = false;
  if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
    negative = body[0] == '-';
    body = body.substr(1);
  }
  std::string ipart = body, fpart;
  if (auto dot = body.find('.'); dot != std::string::npos) {
    ipart = body.substr(0, dot);
    fpart = body.substr(dot + 1);
    if (fpart.empty()) throw Error("bad decimal '" + text + "'");
  }
  if (ipart.empty() && !fpart.empty()) ipart = "0";
  if (!all_digits(ipart) || (!fpart.empty() && !all_digits(fpart)))
    throw Error("bad decimal '" + text + "'");

  // explicit base 10: the default constructor auto-detects octal on a
  // leading zero, so "0.25" would otherwise become 021/100
  mpz_class num(ipart + fpart, 10);
  mpz_class den = 1;
  for (size_t i = 0; i < fpart.size(); ++i) den *= 10;
  Rational r(num, den);
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

Rational parse_rational(const std::string& text) {
  if (auto slash = text.find('/'); slash != std::string::npos) {
    Rational num = parse_decimal(text.substr(0, slash));
    Rational den = parse_decimal(text.substr(slash + 1));
    if (den == 0) throw Error("zero denominator in '" + text + "'");
    return Rational(num / den);
  }
  return parse_decimal(text);
}

std::string rational_str(const Rational& value) {
  Rational v = value;
  v.canonicalize();
  if (v.get_den() == 1) return v.get_num().get_str();
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

}  // namespace qgk
