#include "masep/rational.hpp"

#include "masep/errors.hpp"

#include <cctype>

namespace masep {

namespace {

bool is_integer_literal(std::string_view s, bool allow_sign) {
  if (s.empty()) return false;
  std::size_t i = 0;
  if (allow_sign && (s[0] == '-' || s[0] == '+')) {
    i = 1;
    if (s.size() == 1) return false;
  }
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

mpz_class to_mpz(std::string_view s) {
  if (!s.empty() && s[0] == '+') s.remove_prefix(1);
  return mpz_class(std::string(s), 10);
}

}  // namespace

Rat Rat::parse(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  if (!is_integer_literal(num, true)) {
    throw Error(ErrorKind::InvalidRational, "malformed rational '" + std::string(text) + "'");
  }
  if (slash == std::string_view::npos) return Rat(to_mpz(num), mpz_class(1));
  const std::string_view den = text.substr(slash + 1);
  if (!is_integer_literal(den, false)) {
    throw Error(ErrorKind::InvalidRational, "malformed rational '" + std::string(text) + "'");
  }
  const mpz_class d = to_mpz(den);
  if (d == 0) {
    throw Error(ErrorKind::InvalidRational, "zero denominator in '" + std::string(text) + "'");
  }
  return Rat(to_mpz(num), d);
}

std::string Rat::str() const {
  if (v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.is_zero()) throw Error(ErrorKind::InvalidArgument, "division by zero");
  v_ /= o.v_;
  return *this;
}

void Rat::set_ratio(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw Error(ErrorKind::InvalidRational, "zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rat abs(const Rat& r) { return r.sign() < 0 ? -r : r; }

Rat pow(const Rat& base, int exponent) {
  Rat result(1);
  Rat b = exponent < 0 ? Rat(1) / base : base;
  unsigned e = exponent < 0 ? static_cast<unsigned>(-exponent) : static_cast<unsigned>(exponent);
  while (e != 0) {
    if (e & 1U) result *= b;
    b *= b;
    e >>= 1U;
  }
  return result;
}

}  // namespace masep
