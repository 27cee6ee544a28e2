#pragma once

// Exact rationals, finite continued-fraction words and the two shift maps
// (Gauss map and the base-b shift) acting on rational points.

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cfnormal {

using BigInt = mpz_class;

/// A partial quotient. Sixty-four bits covers every digit the search can
/// reach below the default relative-order ceiling; overflow is reported.
using Digit = std::uint64_t;

BigInt to_bigint(Digit d);
std::string to_string(const BigInt& v);
BigInt parse_bigint(std::string_view text);

/// Exact fraction kept in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(const BigInt& v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(const BigInt& num, const BigInt& den);

  /// Accepts "p/q" or "p" with optional sign on p.
  static Rational parse(std::string_view text);

  BigInt num() const { return value_.get_num(); }
  BigInt den() const { return value_.get_den(); }

  int sign() const { return sgn(value_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return value_.get_den() == 1; }

  BigInt floor() const;
  BigInt ceil() const;
  Rational abs() const;
  Rational reciprocal() const;

  std::string str() const;
  /// Decimal rendering with `digits` fractional digits, truncated toward
  /// -inf (round_up=false) or +inf (round_up=true).
  std::string decimal(int digits, bool round_up = false) const;
  double approx() const { return value_.get_d(); }

  const mpq_class& raw() const { return value_; }

  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a);

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  explicit Rational(mpq_class v) : value_(std::move(v)) { value_.canonicalize(); }
  mpq_class value_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

Rational pow(const Rational& base, long exponent);

/// Finite word a_1 ... a_n of positive partial quotients. The empty word
/// names the unit interval.
class CfWord {
 public:
  CfWord() = default;
  CfWord(std::initializer_list<Digit> digits);
  explicit CfWord(std::vector<Digit> digits);

  std::span<const Digit> digits() const { return digits_; }
  std::size_t size() const { return digits_.size(); }
  bool empty() const { return digits_.empty(); }
  Digit operator[](std::size_t i) const { return digits_[i]; }
  Digit back() const { return digits_.back(); }

  void push_back(Digit d);
  void pop_back() { digits_.pop_back(); }
  void append(std::span<const Digit> block);
  CfWord concat(const CfWord& tail) const;
  CfWord with_last_incremented() const;

  std::string str() const;

  friend bool operator==(const CfWord&, const CfWord&) = default;
  friend auto operator<=>(const CfWord&, const CfWord&) = default;

 private:
  std::vector<Digit> digits_;
};

std::ostream& operator<<(std::ostream& os, const CfWord& w);

struct ConvergentPair {
  BigInt p;
  BigInt q;
  int index = -1;

  friend bool operator==(const ConvergentPair&, const ConvergentPair&) = default;
};

/// (p_k, q_k) for k = -1 .. n, seeded with p_{-1} = q_0 = 1, p_0 = q_{-1} = 0.
std::vector<ConvergentPair> convergents(const CfWord& word);

/// p_n / q_n. Throws std::invalid_argument for the empty word.
Rational cf_to_rational(const CfWord& word);

/// Canonical finite expansion of x in (0, 1]: the last digit is at least 2
/// unless the word is [1].
CfWord rational_to_cf(const Rational& x);

/// Rewrites a trailing digit 1 into its canonical form [.., a, 1] -> [.., a+1].
CfWord canonical(const CfWord& word);

/// T(x) = 1/x - floor(1/x), with T(0) = 0.
Rational gauss_map(const Rational& x);

/// S_b(x) = bx - floor(bx).
Rational bary_shift(const Rational& x, unsigned base);

enum class ShiftDirection {
  drop_leading_one,  // x-word [1, a_2, ..] -> y-word [a_2, ..]
  prepend_one,       // y-word -> x-word
};

/// Moves between the expansion of x in (1/2, 1) and of y = 1/x - 1.
CfWord reciprocal_shift(const CfWord& word, ShiftDirection direction);

}  // namespace cfnormal
