#include "freemoments/rational.hpp"

#include <cctype>

#include "freemoments/error.hpp"

namespace freemoments {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void bad_number(std::string_view text) {
  throw Error(ErrorCode::validation,
              "not an exact number: '" + std::string(text) + "'");
}

Integer parse_signed_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) bad_number(whole);
  Integer value(std::string(s), 10);
  return negative ? Integer(-value) : value;
}

Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    Integer exp_value = parse_signed_integer(s.substr(e + 1), text);
    if (!exp_value.fits_slong_p() || abs(exp_value) > 100000) bad_number(text);
    exponent = exp_value.get_si();
    s = s.substr(0, e);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto int_part = s.substr(0, dot);
    auto frac_part = s.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) bad_number(text);
    if (!int_part.empty() && !all_digits(int_part)) bad_number(text);
    if (!frac_part.empty() && !all_digits(frac_part)) bad_number(text);
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<long>(frac_part.size());
  } else {
    if (!all_digits(s)) bad_number(text);
    digits = std::string(s);
  }
  Rational value{Integer(digits, 10)};
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  if (exponent >= 0) {
    value *= scale;
  } else {
    value /= scale;
  }
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) bad_number(text);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_signed_integer(text.substr(0, slash), text);
    auto den_text = text.substr(slash + 1);
    if (!all_digits(den_text)) bad_number(text);
    Integer den(std::string(den_text), 10);
    if (den == 0) throw Error(ErrorCode::validation, "zero denominator in '" + std::string(text) + "'");
    Rational value(num, den);
    value.canonicalize();
    return value;
  }
  return parse_decimal(text);
}

std::string format_rational(const Rational& value) {
  Rational copy = value;
  copy.canonicalize();
  return copy.get_str();
}

std::vector<Rational> parse_rationals(std::span<const std::string> texts) {
  std::vector<Rational> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(parse_rational(t));
  return out;
}

std::vector<std::string> format_rationals(std::span<const Rational> values) {
  std::vector<std::string> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(format_rational(v));
  return out;
}

Rational pow(const Rational& base, unsigned exponent) {
  Rational result(1);
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
  result = Rational(num, den);
  result.canonicalize();
  return result;
}

Integer binomial(unsigned n, unsigned k) {
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

Integer catalan(unsigned n) {
  return binomial(2 * n, n) / (n + 1);
}

Integer factorial(unsigned n) {
  Integer out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

RootBound nth_root_upper(const Rational& value, unsigned n, unsigned bits) {
  if (sgn(value) < 0) throw Error(ErrorCode::domain, "nth_root_upper of a negative value");
  if (n == 0) throw Error(ErrorCode::domain, "nth_root_upper with n = 0");
  Integer num_root, den_root;
  const bool num_exact = mpz_root(num_root.get_mpz_t(), value.get_num_mpz_t(), n) != 0;
  const bool den_exact = mpz_root(den_root.get_mpz_t(), value.get_den_mpz_t(), n) != 0;
  if (num_exact && den_exact) return {Rational(num_root, den_root), true};

  // (num/den)^(1/n) = (num * den^(n-1) * 2^(bits*n))^(1/n) / (den * 2^bits)
  Integer radicand, den_pow;
  mpz_pow_ui(den_pow.get_mpz_t(), value.get_den_mpz_t(), n - 1);
  radicand = value.get_num() * den_pow;
  mpz_mul_2exp(radicand.get_mpz_t(), radicand.get_mpz_t(), static_cast<mp_bitcnt_t>(bits) * n);
  Integer root;
  const bool exact = mpz_root(root.get_mpz_t(), radicand.get_mpz_t(), n) != 0;
  if (!exact) root += 1;
  Integer denom = value.get_den();
  mpz_mul_2exp(denom.get_mpz_t(), denom.get_mpz_t(), bits);
  Rational out(root, denom);
  out.canonicalize();
  return {out, false};
}

}  // namespace freemoments
