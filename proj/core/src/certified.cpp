#include "cfnormal/certified.hpp"

#include <algorithm>

#include "mp_interval.hpp"

namespace cfnormal {

namespace detail {

namespace {

Rational to_rational(mpfr_srcptr x) {
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), x);
  return Rational(q.get_num(), q.get_den());
}

}  // namespace

MpInterval MpInterval::exact(const Rational& q, mpfr_prec_t prec) {
  MpInterval r(prec);
  mpfr_set_q(r.lo_.get(), q.raw().get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_.get(), q.raw().get_mpq_t(), MPFR_RNDU);
  return r;
}

MpInterval MpInterval::exact(long v, mpfr_prec_t prec) {
  MpInterval r(prec);
  mpfr_set_si(r.lo_.get(), v, MPFR_RNDD);
  mpfr_set_si(r.hi_.get(), v, MPFR_RNDU);
  return r;
}

MpInterval MpInterval::pi(mpfr_prec_t prec) {
  MpInterval r(prec);
  mpfr_const_pi(r.lo_.get(), MPFR_RNDD);
  mpfr_const_pi(r.hi_.get(), MPFR_RNDU);
  return r;
}

MpInterval MpInterval::log2_const(mpfr_prec_t prec) {
  MpInterval r(prec);
  mpfr_const_log2(r.lo_.get(), MPFR_RNDD);
  mpfr_const_log2(r.hi_.get(), MPFR_RNDU);
  return r;
}

MpInterval operator+(const MpInterval& a, const MpInterval& b) {
  MpInterval r(std::max(a.prec_, b.prec_));
  mpfr_add(r.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
  mpfr_add(r.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
  return r;
}

MpInterval operator-(const MpInterval& a, const MpInterval& b) {
  MpInterval r(std::max(a.prec_, b.prec_));
  mpfr_sub(r.lo_.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
  mpfr_sub(r.hi_.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
  return r;
}

MpInterval operator-(const MpInterval& a) {
  MpInterval r(a.prec_);
  mpfr_neg(r.lo_.get(), a.hi_.get(), MPFR_RNDD);
  mpfr_neg(r.hi_.get(), a.lo_.get(), MPFR_RNDU);
  return r;
}

MpInterval operator*(const MpInterval& a, const MpInterval& b) {
  const mpfr_prec_t prec = std::max(a.prec_, b.prec_);
  MpInterval r(prec);
  MpFloat t(prec);
  bool first = true;
  for (const MpFloat* x : {&a.lo_, &a.hi_}) {
    for (const MpFloat* y : {&b.lo_, &b.hi_}) {
      mpfr_mul(t.get(), x->get(), y->get(), MPFR_RNDD);
      if (first || mpfr_less_p(t.get(), r.lo_.get())) mpfr_set(r.lo_.get(), t.get(), MPFR_RNDD);
      mpfr_mul(t.get(), x->get(), y->get(), MPFR_RNDU);
      if (first || mpfr_greater_p(t.get(), r.hi_.get())) mpfr_set(r.hi_.get(), t.get(), MPFR_RNDU);
      first = false;
    }
  }
  return r;
}

MpInterval operator/(const MpInterval& a, const MpInterval& b) {
  if (mpfr_sgn(b.lo_.get()) <= 0 && mpfr_sgn(b.hi_.get()) >= 0) throw std::domain_error("interval division by zero");
  MpInterval inv(b.prec_);
  mpfr_ui_div(inv.lo_.get(), 1, b.hi_.get(), MPFR_RNDD);
  mpfr_ui_div(inv.hi_.get(), 1, b.lo_.get(), MPFR_RNDU);
  return a * inv;
}

MpInterval exp(const MpInterval& a) {
  MpInterval r(a.prec_);
  mpfr_exp(r.lo_.get(), a.lo_.get(), MPFR_RNDD);
  mpfr_exp(r.hi_.get(), a.hi_.get(), MPFR_RNDU);
  return r;
}

MpInterval log(const MpInterval& a) {
  if (mpfr_sgn(a.lo_.get()) <= 0) throw std::domain_error("interval log of a non-positive argument");
  MpInterval r(a.prec_);
  mpfr_log(r.lo_.get(), a.lo_.get(), MPFR_RNDD);
  mpfr_log(r.hi_.get(), a.hi_.get(), MPFR_RNDU);
  return r;
}

Rational MpInterval::lower() const { return to_rational(lo_.get()); }
Rational MpInterval::upper() const { return to_rational(hi_.get()); }

bool MpInterval::width_at_most(int bits) const {
  MpFloat w(prec_ + 8);
  mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
  if (mpfr_zero_p(w.get())) return true;
  // w <= 2^-bits  <=>  exponent test after scaling
  mpfr_mul_2si(w.get(), w.get(), bits, MPFR_RNDU);
  return mpfr_cmp_ui(w.get(), 1) <= 0;
}

}  // namespace detail

std::optional<std::strong_ordering> CertifiedReal::compare(const Rational& x) const {
  if (upper < x) return std::strong_ordering::less;
  if (lower > x) return std::strong_ordering::greater;
  if (lower == x && upper == x) return std::strong_ordering::equal;
  return std::nullopt;
}

std::string CertifiedReal::str(int digits) const {
  return "[" + lower.decimal(digits, false) + ", " + upper.decimal(digits, true) + "]";
}

std::strong_ordering decide(const CertifiedEvaluator& eval, const Rational& x, int start_bits) {
  for (long bits = std::max(start_bits, 8); bits <= kMaxPrecisionBits; bits *= 2) {
    const CertifiedReal v = eval(static_cast<int>(bits));
    if (v.upper < x) return std::strong_ordering::less;
    if (v.lower > x) return std::strong_ordering::greater;
  }
  throw PrecisionExhausted("comparison could not be decided at maximum precision");
}

BigInt certified_floor(const CertifiedEvaluator& eval, int start_bits) {
  for (long bits = std::max(start_bits, 8); bits <= kMaxPrecisionBits; bits *= 2) {
    const CertifiedReal v = eval(static_cast<int>(bits));
    const BigInt lo = v.lower.floor();
    // floor is constant on [k, k + 1)
    if (lo == v.upper.floor() && v.upper < Rational(BigInt(lo + 1))) return lo;
  }
  throw PrecisionExhausted("floor could not be decided at maximum precision");
}

BigInt certified_ceil(const CertifiedEvaluator& eval, int start_bits) {
  for (long bits = std::max(start_bits, 8); bits <= kMaxPrecisionBits; bits *= 2) {
    const CertifiedReal v = eval(static_cast<int>(bits));
    const BigInt hi = v.upper.ceil();
    // ceil is constant on (k - 1, k]
    if (hi == v.lower.ceil() && v.lower > Rational(BigInt(hi - 1))) return hi;
  }
  throw PrecisionExhausted("ceil could not be decided at maximum precision");
}

}  // namespace cfnormal
