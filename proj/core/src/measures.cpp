#include "cfnormal/measures.hpp"

#include <cmath>
#include <stdexcept>

#include "mp_interval.hpp"

namespace cfnormal {

using detail::certify;
using detail::MpInterval;

namespace {

MpInterval levy(mpfr_prec_t prec) {
  const MpInterval pi = MpInterval::pi(prec);
  return pi * pi / (MpInterval::exact(12, prec) * MpInterval::log2_const(prec));
}

MpInterval log_of(unsigned base, mpfr_prec_t prec) { return log(MpInterval::exact(static_cast<long>(base), prec)); }

void check_delta(const Rational& delta) {
  if (delta.sign() <= 0 || delta > Rational(1)) throw std::invalid_argument("delta must lie in (0, 1]");
}

MpInterval bernstein_expr(unsigned base, const Rational& delta, long n, mpfr_prec_t prec) {
  const Rational b(static_cast<long>(base));
  const Rational exponent = -(b * delta * delta * Rational(n)) / Rational(6);
  const Rational lead = Rational(2) * pow(b, n + 1);
  return MpInterval::exact(lead, prec) * exp(MpInterval::exact(exponent, prec));
}

}  // namespace

CertifiedReal gauss_measure(const Interval& iv, int precision_bits) {
  if (iv.left.sign() < 0 || iv.right > Rational(1)) throw std::invalid_argument("gauss_measure needs iv inside [0, 1]");
  const Rational ratio = (Rational(1) + iv.right) / (Rational(1) + iv.left);
  return certify(precision_bits, [&](mpfr_prec_t prec) {
    return log(MpInterval::exact(ratio, prec)) / MpInterval::log2_const(prec);
  });
}

CertifiedReal levy_constant(int precision_bits) { return certify(precision_bits, levy); }

long deviation_M(const Rational& delta, long k) {
  check_delta(delta);
  if (k < 1) throw std::invalid_argument("pattern length k must be positive");
  const BigInt m = certified_ceil([&](int bits) {
    return certify(bits, [&](mpfr_prec_t prec) {
      const MpInterval arg = MpInterval::exact(delta * delta, prec) /
                             (MpInterval::exact(2, prec) * MpInterval::log2_const(prec));
      return MpInterval::exact(k, prec) - log(arg);
    });
  });
  return m.get_si();
}

CertifiedReal kpw_bound(const Rational& delta, long n, long k, int precision_bits) {
  check_delta(delta);
  if (n < 1) throw std::invalid_argument("kpw_bound needs n >= 1");
  const long m = deviation_M(delta, k);
  const Rational exponent = -(delta * delta * Rational(n)) / Rational(2 * m);
  return certify(precision_bits, [&](mpfr_prec_t prec) {
    return MpInterval::exact(6 * m, prec) * exp(MpInterval::exact(exponent, prec));
  });
}

CertifiedReal bernstein_bound(unsigned base, const Rational& delta, long n, int precision_bits) {
  if (base < 2) throw std::invalid_argument("base must be at least 2");
  if (n < 1) throw std::invalid_argument("bernstein_bound needs n >= 1");
  if (delta < Rational(BigInt(6), BigInt(n)) || delta > Rational(BigInt(1), BigInt(base))) {
    throw std::invalid_argument("bernstein_bound needs 6/n <= delta <= 1/b");
  }
  return bernstein_formula(base, delta, n, precision_bits);
}

CertifiedReal bernstein_formula(unsigned base, const Rational& delta, long n, int precision_bits) {
  if (base < 2) throw std::invalid_argument("base must be at least 2");
  if (n < 1) throw std::invalid_argument("bernstein_formula needs n >= 1");
  return certify(precision_bits, [&](mpfr_prec_t prec) { return bernstein_expr(base, delta, n, prec); });
}

CertifiedReal a_of_b(unsigned base, const Rational& epsilon, long C, int precision_bits) {
  if (base < 2) throw std::invalid_argument("base must be at least 2");
  const Rational b(static_cast<long>(base));
  return certify(precision_bits, [&](mpfr_prec_t prec) {
    const MpInterval inner = MpInterval::exact(C, prec) / (MpInterval::exact(3, prec) * log_of(base, prec)) +
                             MpInterval::exact(Rational(1) / Rational(2), prec);
    const MpInterval power = MpInterval::exact(b * epsilon * epsilon, prec) * inner;
    return MpInterval::exact(Rational(384) * b * b, prec) * exp(MpInterval::exact(4 * C, prec)) * exp(power);
  });
}

Schedule schedule(const BigInt& s, long n_start) {
  if (s < 1) throw std::invalid_argument("schedule needs s >= 1");
  if (n_start < 1) throw std::invalid_argument("schedule needs n_start >= 1");
  Schedule out;
  out.s = s;
  out.n_start = n_start;
  if (s == 1) {
    out.t = 2;
    out.n0 = n_start;
    out.epsilon = Rational(BigInt(1), BigInt(2));
    return out;
  }
  const auto log_s = [&](int bits) {
    return certify(bits, [&](mpfr_prec_t prec) { return log(MpInterval::exact(Rational(s), prec)); });
  };
  const BigInt floor_log = certified_floor(log_s);
  out.n0 = floor_log.get_si() + n_start;

  // largest r with r^5 <= log s; log s is never an integer for s >= 2
  long r = static_cast<long>(std::floor(std::pow(floor_log.get_d(), 0.2)));
  auto fifth = [](long v) { return Rational(v) * Rational(v) * Rational(v) * Rational(v) * Rational(v); };
  while (decide(log_s, fifth(r + 1)) == std::strong_ordering::greater) ++r;
  while (r > 0 && decide(log_s, fifth(r)) == std::strong_ordering::less) --r;
  out.t = static_cast<int>(std::max(2L, r));
  out.epsilon = Rational(BigInt(1), BigInt(out.t));
  return out;
}

std::pair<CertifiedReal, CertifiedReal> nb_window(long n, unsigned base, long C, int precision_bits) {
  if (n < 1) throw std::invalid_argument("nb_window needs n >= 1");
  if (base < 2) throw std::invalid_argument("base must be at least 2");
  auto centre = [&](mpfr_prec_t prec) {
    return MpInterval::exact(2 * n, prec) * levy(prec) / log_of(base, prec);
  };
  auto spread = [&](mpfr_prec_t prec) {
    return MpInterval::exact(2 * C, prec) / log_of(base, prec) + MpInterval::exact(3, prec);
  };
  return {certify(precision_bits, [&](mpfr_prec_t p) { return centre(p) - spread(p); }),
          certify(precision_bits, [&](mpfr_prec_t p) { return centre(p) + spread(p); })};
}

BigInt first_step_with_t(int t) {
  if (t <= 2) return 1;
  const long power = static_cast<long>(t) * t * t * t * t;
  return certified_ceil([&](int bits) { return exp_integer(power, bits); });
}

CertifiedReal exp_integer(long k, int precision_bits) {
  return certify(precision_bits, [&](mpfr_prec_t prec) { return exp(MpInterval::exact(k, prec)); });
}

WindowFactors window_factors(long n, long C, int precision_bits) {
  WindowFactors f;
  f.lower_inverse = certify(precision_bits, [&](mpfr_prec_t prec) {
    const MpInterval e = MpInterval::exact(2 * n, prec) * levy(prec) + MpInterval::exact(2 * C, prec);
    return MpInterval::exact(4, prec) * exp(e);
  });
  f.upper_inverse = certify(precision_bits, [&](mpfr_prec_t prec) {
    const MpInterval e = MpInterval::exact(2 * n, prec) * levy(prec) - MpInterval::exact(2 * C, prec);
    return exp(e) / MpInterval::exact(2, prec);
  });
  return f;
}

std::pair<CertifiedReal, CertifiedReal> window_relative_bounds(long n, long C, int precision_bits) {
  auto two_nl = [&](mpfr_prec_t prec) { return MpInterval::exact(2 * n, prec) * levy(prec); };
  return {certify(precision_bits,
                  [&](mpfr_prec_t p) {
                    return exp(-(two_nl(p) + MpInterval::exact(2 * C, p))) / MpInterval::exact(4, p);
                  }),
          certify(precision_bits, [&](mpfr_prec_t p) {
            return MpInterval::exact(2, p) * exp(MpInterval::exact(2 * C, p) - two_nl(p));
          })};
}

}  // namespace cfnormal
