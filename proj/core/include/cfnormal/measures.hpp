#pragma once

// Certified evaluation of the Gauss measure, Levy's constant and the
// closed-form bounds and schedules that drive the construction.

#include <utility>

#include "cfnormal/certified.hpp"
#include "cfnormal/cylinders.hpp"
#include "cfnormal/rational.hpp"

namespace cfnormal {

/// Constants of the large-cf-subinterval estimate. Only their existence is
/// known, so the search mode never relies on K or N1; C enters the window
/// and slack formulas.
struct BoundConstants {
  long K = 1;
  long C = 1;
  long N1 = 10;

  friend bool operator==(const BoundConstants&, const BoundConstants&) = default;
};

/// Step schedule: t = max(2, floor((log s)^(1/5))), epsilon = 1/t,
/// n0 = floor(log s) + n_start.
struct Schedule {
  BigInt s;
  int t = 2;
  Rational epsilon;
  long n0 = 0;
  long n_start = 0;
};

/// mu(iv) = log((1 + right) / (1 + left)) / log 2.
CertifiedReal gauss_measure(const Interval& iv, int precision_bits);

/// pi^2 / (12 log 2).
CertifiedReal levy_constant(int precision_bits);

/// ceil(k - log(delta^2 / (2 log 2))).
long deviation_M(const Rational& delta, long k);

/// 6 M exp(-delta^2 n / (2M)) with M = deviation_M(delta, k).
CertifiedReal kpw_bound(const Rational& delta, long n, long k, int precision_bits = 64);

/// 2 b^(n+1) exp(-b delta^2 n / 6); requires 6/n <= delta <= 1/b.
CertifiedReal bernstein_bound(unsigned base, const Rational& delta, long n, int precision_bits = 64);

/// The same expression without the range check on delta, for comparing
/// against exhaustive counts outside the proven range.
CertifiedReal bernstein_formula(unsigned base, const Rational& delta, long n, int precision_bits = 64);

/// 384 e^(4C) b^2 exp(b eps^2 (C / (3 log b) + 1/2)).
CertifiedReal a_of_b(unsigned base, const Rational& epsilon, long C, int precision_bits = 64);

Schedule schedule(const BigInt& s, long n_start);

/// Bounds on the number of b-ary digits added per step:
/// 2nL/log b -+ (2C/log b + 3).
std::pair<CertifiedReal, CertifiedReal> nb_window(long n, unsigned base, long C, int precision_bits = 64);

/// Smallest step s with t(s) >= t, i.e. ceil(e^(t^5)) for t >= 2 (1 for t = 2).
BigInt first_step_with_t(int t);

/// e^k for integer k.
CertifiedReal exp_integer(long k, int precision_bits);

/// Reciprocal-length factors of the relative-order-n window:
/// |A| / |alpha| >= e^(-2nL-2C)/4  <=>  D_A <= D_alpha * 4 e^(2nL+2C)   (lower_inverse)
/// |A| / |alpha| <= 2 e^(-2nL+2C)  <=>  D_A >= D_alpha * e^(2nL-2C)/2  (upper_inverse)
struct WindowFactors {
  CertifiedReal lower_inverse;  // 4 e^(2nL + 2C)
  CertifiedReal upper_inverse;  // e^(2nL - 2C) / 2
};
WindowFactors window_factors(long n, long C, int precision_bits);

/// Relative window bounds themselves: e^(-2nL-2C)/4 and 2 e^(-2nL+2C).
std::pair<CertifiedReal, CertifiedReal> window_relative_bounds(long n, long C, int precision_bits);

}  // namespace cfnormal
