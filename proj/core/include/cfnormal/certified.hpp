#pragma once

#include <compare>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "cfnormal/rational.hpp"

namespace cfnormal {

/// Largest absolute precision, in bits, any evaluation may be asked for.
inline constexpr int kMaxPrecisionBits = 1 << 20;

/// Raised when an enclosure cannot be narrowed enough to decide a question.
class PrecisionExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Closed enclosure [lower, upper] of a real with upper - lower <= 2^-precision_bits.
struct CertifiedReal {
  Rational lower;
  Rational upper;
  int precision_bits = 0;

  bool contains(const Rational& x) const { return lower <= x && x <= upper; }
  Rational width() const { return upper - lower; }
  Rational midpoint() const { return (lower + upper) / Rational(2); }

  /// Decided order of the enclosed value against x, if the enclosure allows.
  std::optional<std::strong_ordering> compare(const Rational& x) const;

  std::string str(int digits = 12) const;

  friend bool operator==(const CertifiedReal&, const CertifiedReal&) = default;
};

using CertifiedEvaluator = std::function<CertifiedReal(int precision_bits)>;

/// Compares the value produced by `eval` against x, doubling precision from
/// `start_bits` until the enclosure separates them or kMaxPrecisionBits is
/// passed (PrecisionExhausted). Exact equality is never decided.
std::strong_ordering decide(const CertifiedEvaluator& eval, const Rational& x, int start_bits = 64);

/// floor and ceil of the enclosed value, refined like decide().
BigInt certified_floor(const CertifiedEvaluator& eval, int start_bits = 64);
BigInt certified_ceil(const CertifiedEvaluator& eval, int start_bits = 64);

}  // namespace cfnormal
