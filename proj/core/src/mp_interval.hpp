#pragma once

// Outward-rounded interval arithmetic on MPFR floats. Internal to the core
// library; results leave it as CertifiedReal with rational endpoints.

#include <mpfr.h>

#include "cfnormal/certified.hpp"
#include "cfnormal/rational.hpp"

namespace cfnormal::detail {

class MpFloat {
 public:
  explicit MpFloat(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  MpFloat(const MpFloat& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  MpFloat& operator=(const MpFloat& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  ~MpFloat() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

class MpInterval {
 public:
  explicit MpInterval(mpfr_prec_t prec) : lo_(prec), hi_(prec), prec_(prec) {
    mpfr_set_zero(lo_.get(), 1);
    mpfr_set_zero(hi_.get(), 1);
  }

  static MpInterval exact(const Rational& q, mpfr_prec_t prec);
  static MpInterval exact(long v, mpfr_prec_t prec);
  static MpInterval pi(mpfr_prec_t prec);
  static MpInterval log2_const(mpfr_prec_t prec);

  mpfr_prec_t precision() const { return prec_; }

  friend MpInterval operator+(const MpInterval& a, const MpInterval& b);
  friend MpInterval operator-(const MpInterval& a, const MpInterval& b);
  friend MpInterval operator*(const MpInterval& a, const MpInterval& b);
  friend MpInterval operator/(const MpInterval& a, const MpInterval& b);
  friend MpInterval operator-(const MpInterval& a);

  friend MpInterval exp(const MpInterval& a);
  friend MpInterval log(const MpInterval& a);

  Rational lower() const;
  Rational upper() const;
  bool width_at_most(int bits) const;
  CertifiedReal certified(int bits) const { return {lower(), upper(), bits}; }

 private:
  MpFloat lo_;
  MpFloat hi_;
  mpfr_prec_t prec_;
};

/// Evaluates `f(working_precision)` with increasing working precision until
/// the enclosure is at most 2^-bits wide.
template <class F>
CertifiedReal certify(int bits, F&& f) {
  if (bits > kMaxPrecisionBits) throw std::invalid_argument("requested precision exceeds kMaxPrecisionBits");
  if (bits < 1) bits = 1;
  for (long prec = bits + 64; prec <= 4L * kMaxPrecisionBits; prec *= 2) {
    const MpInterval v = f(static_cast<mpfr_prec_t>(prec));
    if (v.width_at_most(bits)) return v.certified(bits);
  }
  throw PrecisionExhausted("enclosure did not reach the requested width");
}

}  // namespace cfnormal::detail
