#include "roommates/bigrational.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>

namespace roommates {

namespace {

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && s.front() == '-') s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

BigRational::BigRational(const BigInteger& numerator, const BigInteger& denominator)
    : value_(numerator, denominator) {
  if (sgn(denominator) == 0) throw std::domain_error("BigRational: zero denominator");
  value_.canonicalize();
}

BigRational::BigRational(mpq_class value) : value_(std::move(value)) {
  if (sgn(value_.get_den()) == 0) throw std::domain_error("BigRational: zero denominator");
  value_.canonicalize();
}

BigRational BigRational::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den.front() == '-')
    throw std::invalid_argument("not a fraction: '" + std::string(text) + "'");
  BigInteger d(std::string(den), 10);
  if (sgn(d) == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  return BigRational(BigInteger(std::string(num), 10), d);
}

std::string BigRational::to_string() const {
  if (value_.get_den() == 1) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string BigRational::to_decimal(int digits) const {
  if (digits < 0) throw std::invalid_argument("negative digit count");
  BigInteger scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));

  const BigInteger num = abs(value_.get_num()) * scale;
  const BigInteger& den = value_.get_den();
  BigInteger q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  const int half = cmp(BigInteger(2 * r), den);
  if (half > 0 || (half == 0 && mpz_odd_p(q.get_mpz_t()))) ++q;

  std::string body = q.get_str();
  if (static_cast<int>(body.size()) <= digits) body.insert(0, static_cast<size_t>(digits) - body.size() + 1, '0');
  std::string out;
  if (sgn(value_) < 0 && sgn(q) != 0) out.push_back('-');
  out.append(body, 0, body.size() - static_cast<size_t>(digits));
  if (digits > 0) {
    out.push_back('.');
    out.append(body, body.size() - static_cast<size_t>(digits), std::string::npos);
  }
  return out;
}

BigRational& BigRational::operator/=(const BigRational& o) {
  if (o.is_zero()) throw std::domain_error("BigRational: division by zero");
  value_ /= o.value_;
  return *this;
}

std::ostream& operator<<(std::ostream& os, const BigRational& r) { return os << r.to_string(); }

BigInteger factorial(unsigned n) {
  BigInteger out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

}  // namespace roommates
