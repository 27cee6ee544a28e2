#pragma once

// Fixed-seed generators and small helpers shared by the test binaries.

#include <cstdint>
#include <functional>
#include <random>
#include <string_view>

#include "cfnormal/cylinders.hpp"
#include "cfnormal/rational.hpp"

namespace cfnormal::testing {

inline Rational q(std::string_view text) { return Rational::parse(text); }

/// Exact value of a decimal literal such as "0.4150374992" or "1e-29".
inline Rational dec(std::string_view text) {
  long exponent = 0;
  if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    exponent = std::stol(std::string(text.substr(e + 1)));
    text = text.substr(0, e);
  }
  std::string digits(text);
  if (const auto dot = digits.find('.'); dot != std::string::npos) {
    exponent -= static_cast<long>(digits.size() - dot - 1);
    digits.erase(dot, 1);
  }
  return Rational(parse_bigint(digits)) * pow(Rational(10), exponent);
}

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng_);
  }

  bool coin() { return uniform(0, 1) == 1; }

  /// Digits skewed toward small values, roughly like cf digits.
  Digit cf_digit(Digit max) {
    Digit d = 1;
    while (d < max && coin()) ++d;
    return d;
  }

  CfWord cf_word(std::size_t length, Digit max) {
    CfWord w;
    for (std::size_t i = 0; i < length; ++i) w.push_back(cf_digit(max));
    return w;
  }

  CfWord uniform_cf_word(std::size_t length, Digit max) {
    CfWord w;
    for (std::size_t i = 0; i < length; ++i) w.push_back(uniform(1, max));
    return w;
  }

  BaryWord bary_word(std::size_t length, unsigned base) {
    BaryWord w;
    for (std::size_t i = 0; i < length; ++i) w.push_back(static_cast<std::uint32_t>(uniform(0, base - 1)));
    return w;
  }

  /// Word whose digit counts are all within `spread` of each other.
  BaryWord balanced_bary_word(std::size_t blocks, unsigned base) {
    BaryWord w;
    for (std::size_t i = 0; i < blocks; ++i) {
      BaryWord block;
      for (unsigned d = 0; d < base; ++d) block.push_back(d);
      std::shuffle(block.begin(), block.end(), rng_);
      w.insert(w.end(), block.begin(), block.end());
    }
    return w;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Calls f on every word of length 1..max_len with digits 1..max_digit.
inline void for_each_word(std::size_t max_len, Digit max_digit, const std::function<void(const CfWord&)>& f) {
  std::function<void(CfWord&)> rec = [&](CfWord& w) {
    if (!w.empty()) f(w);
    if (w.size() == max_len) return;
    for (Digit d = 1; d <= max_digit; ++d) {
      w.push_back(d);
      rec(w);
      w.pop_back();
    }
  };
  CfWord w;
  rec(w);
}

}  // namespace cfnormal::testing
