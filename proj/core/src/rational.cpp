#include "cfnormal/rational.hpp"

#include <sstream>
#include <stdexcept>

namespace cfnormal {

BigInt to_bigint(Digit d) {
  static_assert(sizeof(unsigned long) == sizeof(Digit), "Digit must fit an unsigned long");
  return BigInt(static_cast<unsigned long>(d));
}

std::string to_string(const BigInt& v) { return v.get_str(10); }

BigInt parse_bigint(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty integer literal");
  const std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size()) throw std::invalid_argument("malformed integer literal: " + s);
  for (std::size_t i = start; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("malformed integer literal: " + s);
  }
  if (s[0] == '+') s.erase(0, 1);
  return BigInt(s, 10);
}

Rational::Rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  value_ = mpq_class(num, den);
  value_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_bigint(text));
  return Rational(parse_bigint(text.substr(0, slash)), parse_bigint(text.substr(slash + 1)));
}

BigInt Rational::floor() const {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  return r;
}

BigInt Rational::ceil() const {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  return r;
}

Rational Rational::abs() const { return Rational(mpq_class(::abs(value_))); }

Rational Rational::reciprocal() const {
  if (is_zero()) throw std::domain_error("reciprocal of zero");
  return Rational(value_.get_den(), value_.get_num());
}

std::string Rational::str() const {
  if (is_integer()) return value_.get_num().get_str(10);
  return value_.get_num().get_str(10) + "/" + value_.get_den().get_str(10);
}

std::string Rational::decimal(int digits, bool round_up) const {
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  const Rational scaled = *this * Rational(scale);
  const BigInt n = round_up ? scaled.ceil() : scaled.floor();
  const bool negative = n < 0;
  std::string body = BigInt(::abs(n)).get_str(10);
  if (digits > 0) {
    if (body.size() <= static_cast<std::size_t>(digits)) {
      body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
    }
    body.insert(body.size() - static_cast<std::size_t>(digits), ".");
  }
  return negative ? "-" + body : body;
}

Rational& Rational::operator+=(const Rational& o) {
  value_ += o.value_;
  return *this;
}
Rational& Rational::operator-=(const Rational& o) {
  value_ -= o.value_;
  return *this;
}
Rational& Rational::operator*=(const Rational& o) {
  value_ *= o.value_;
  return *this;
}
Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  value_ /= o.value_;
  return *this;
}

Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational pow(const Rational& base, long exponent) {
  const bool invert = exponent < 0;
  const auto e = static_cast<unsigned long>(invert ? -exponent : exponent);
  BigInt n, d;
  mpz_pow_ui(n.get_mpz_t(), base.num().get_mpz_t(), e);
  mpz_pow_ui(d.get_mpz_t(), base.den().get_mpz_t(), e);
  return invert ? Rational(d, n) : Rational(n, d);
}

CfWord::CfWord(std::initializer_list<Digit> digits) : CfWord(std::vector<Digit>(digits)) {}

CfWord::CfWord(std::vector<Digit> digits) : digits_(std::move(digits)) {
  for (Digit d : digits_) {
    if (d == 0) throw std::invalid_argument("continued-fraction digits must be positive");
  }
}

void CfWord::push_back(Digit d) {
  if (d == 0) throw std::invalid_argument("continued-fraction digits must be positive");
  digits_.push_back(d);
}

void CfWord::append(std::span<const Digit> block) {
  for (Digit d : block) push_back(d);
}

CfWord CfWord::concat(const CfWord& tail) const {
  CfWord out = *this;
  out.append(tail.digits());
  return out;
}

CfWord CfWord::with_last_incremented() const {
  if (digits_.empty()) throw std::invalid_argument("empty word has no last digit");
  CfWord out = *this;
  ++out.digits_.back();
  return out;
}

std::string CfWord::str() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    if (i) os << ',';
    os << digits_[i];
  }
  os << ']';
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const CfWord& w) { return os << w.str(); }

std::vector<ConvergentPair> convergents(const CfWord& word) {
  std::vector<ConvergentPair> out;
  out.reserve(word.size() + 2);
  out.push_back({1, 0, -1});
  out.push_back({0, 1, 0});
  for (std::size_t i = 0; i < word.size(); ++i) {
    const BigInt a = to_bigint(word[i]);
    const auto& prev = out[out.size() - 1];
    const auto& prev2 = out[out.size() - 2];
    BigInt p = a * prev.p + prev2.p;
    BigInt q = a * prev.q + prev2.q;
    out.push_back({std::move(p), std::move(q), static_cast<int>(i) + 1});
  }
  return out;
}

Rational cf_to_rational(const CfWord& word) {
  if (word.empty()) throw std::invalid_argument("the empty word has no value");
  const auto c = convergents(word);
  return Rational(c.back().p, c.back().q);
}

CfWord rational_to_cf(const Rational& x) {
  if (x.sign() <= 0 || x > Rational(1)) throw std::domain_error("rational_to_cf needs 0 < x <= 1");
  // Euclid on (den, num): x = num/den, 1/x = den/num.
  std::vector<Digit> digits;
  BigInt a = x.den();
  BigInt b = x.num();
  while (b != 0) {
    BigInt q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (!q.fits_ulong_p()) throw std::overflow_error("partial quotient exceeds 64 bits");
    digits.push_back(q.get_ui());
    a = b;
    b = r;
  }
  // Euclid always ends with a quotient >= 2 except for x = 1.
  return CfWord(std::move(digits));
}

CfWord canonical(const CfWord& word) {
  if (word.size() < 2 || word.back() != 1) return word;
  CfWord out = word;
  out.pop_back();
  return out.with_last_incremented();
}

Rational gauss_map(const Rational& x) {
  if (x.sign() < 0 || x > Rational(1)) throw std::domain_error("gauss_map needs 0 <= x <= 1");
  if (x.is_zero()) return Rational(0);
  const Rational inv = x.reciprocal();
  return inv - Rational(inv.floor());
}

Rational bary_shift(const Rational& x, unsigned base) {
  if (base < 2) throw std::invalid_argument("base must be at least 2");
  if (x.sign() < 0 || x > Rational(1)) throw std::domain_error("bary_shift needs 0 <= x <= 1");
  const Rational bx = x * Rational(static_cast<long>(base));
  return bx - Rational(bx.floor());
}

CfWord reciprocal_shift(const CfWord& word, ShiftDirection direction) {
  if (direction == ShiftDirection::prepend_one) {
    CfWord out{1};
    out.append(word.digits());
    return out;
  }
  if (word.empty() || word[0] != 1) throw std::invalid_argument("drop direction needs a word starting with 1");
  if (word.size() < 2) throw std::invalid_argument("drop direction needs at least two digits");
  return CfWord(std::vector<Digit>(word.digits().begin() + 1, word.digits().end()));
}

}  // namespace cfnormal
