#include "kst/rational.hpp"

#include <cctype>
#include <cmath>
#include <ostream>

#include "kst/errors.hpp"

namespace kst {

Rational::Rational(long num, long den) {
  if (den == 0) throw ConfigError("rational: zero denominator");
  mpq_init(q_);
  mpz_set_si(mpq_numref(q_), num);
  mpz_set_si(mpq_denref(q_), den);
  mpq_canonicalize(q_);
}

Rational Rational::from_string(std::string_view text) {
  // Strict "p" or "p/q": optional '-' before each integer part, digits only.
  auto valid_int = [](std::string_view s) {
    if (!s.empty() && s.front() == '-') s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  if (!valid_int(num)) throw ConfigError("rational: malformed numerator in '" + std::string(text) + "'");
  Rational r;
  if (slash == std::string_view::npos) {
    if (mpz_set_str(mpq_numref(r.q_), std::string(num).c_str(), 10) != 0)
      throw ConfigError("rational: malformed '" + std::string(text) + "'");
    mpz_set_ui(mpq_denref(r.q_), 1);
    return r;
  }
  const std::string_view den = text.substr(slash + 1);
  if (!valid_int(den)) throw ConfigError("rational: malformed denominator in '" + std::string(text) + "'");
  if (mpz_set_str(mpq_numref(r.q_), std::string(num).c_str(), 10) != 0 ||
      mpz_set_str(mpq_denref(r.q_), std::string(den).c_str(), 10) != 0)
    throw ConfigError("rational: malformed '" + std::string(text) + "'");
  if (mpz_sgn(mpq_denref(r.q_)) == 0) throw ConfigError("rational: zero denominator in '" + std::string(text) + "'");
  mpq_canonicalize(r.q_);
  return r;
}

Rational Rational::from_double(double x) {
  if (!std::isfinite(x)) throw ConfigError("rational: non-finite double");
  Rational r;
  mpq_set_d(r.q_, x);  // exact: finite doubles are dyadic
  return r;
}

std::string Rational::str() const {
  char* n = mpz_get_str(nullptr, 10, mpq_numref(q_));
  char* d = mpz_get_str(nullptr, 10, mpq_denref(q_));
  std::string out = std::string(n) + "/" + d;
  void (*freefn)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefn);
  freefn(n, std::string::traits_type::length(n) + 1);
  freefn(d, std::string::traits_type::length(d) + 1);
  return out;
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw ConfigError("rational: division by zero");
  Rational r;
  mpq_div(r.q_, a.q_, b.q_);
  return r;
}

bool Rational::fits_i64() const {
  return mpz_fits_slong_p(mpq_numref(q_)) && mpz_fits_slong_p(mpq_denref(q_));
}

long Rational::num_i64() const { return mpz_get_si(mpq_numref(q_)); }
long Rational::den_i64() const { return mpz_get_si(mpq_denref(q_)); }

Rational min(const Rational& a, const Rational& b) { return a.cmp(b) <= 0 ? a : b; }
Rational max(const Rational& a, const Rational& b) { return a.cmp(b) >= 0 ? a : b; }

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace kst
