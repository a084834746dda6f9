#include "filtlab/rational.hpp"

#include <ostream>

#include "filtlab/error.hpp"

namespace filtlab {

Rational::Rational(long num, long den) : v_(num, den) {
  if (den == 0) fail(ErrorCode::ParseError, "rational with zero denominator");
  v_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) fail(ErrorCode::DegenerateDenominator, "division by zero rational");
  v_ /= o.v_;
  return *this;
}

Rational Rational::parse(std::string_view text) {
  if (text.empty()) fail(ErrorCode::ParseError, "empty rational literal");
  const std::string s(text);
  // mpq_class accepts "p/q" but also tolerates whitespace and leading '+';
  // restrict to the canonical grammar so scenario files stay unambiguous.
  auto digits_ok = [](std::string_view part) {
    if (part.empty()) return false;
    size_t i = (part[0] == '-') ? 1 : 0;
    if (i == part.size()) return false;
    for (; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9') return false;
    return true;
  };
  const auto slash = s.find('/');
  if (slash == std::string::npos) {
    if (!digits_ok(s)) fail(ErrorCode::ParseError, "bad rational literal '" + s + "'");
  } else {
    const std::string_view num(s.data(), slash);
    const std::string_view den(s.data() + slash + 1, s.size() - slash - 1);
    if (!digits_ok(num) || !digits_ok(den) || den[0] == '-')
      fail(ErrorCode::ParseError, "bad rational literal '" + s + "'");
  }
  mpq_class v;
  if (v.set_str(s, 10) != 0) fail(ErrorCode::ParseError, "bad rational literal '" + s + "'");
  if (v.get_den() == 0) fail(ErrorCode::ParseError, "zero denominator in '" + s + "'");
  v.canonicalize();
  return Rational(std::move(v));
}

std::string Rational::str() const {
  return v_.get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.str();
}

Rational ratio_or_zero(const Rational& num, const Rational& den) {
  if (den.is_zero()) {
    if (!num.is_zero())
      fail(ErrorCode::DegenerateDenominator, num.str() + "/0 outside the 0/0 convention");
    return Rational();
  }
  return num / den;
}

}  // namespace filtlab
