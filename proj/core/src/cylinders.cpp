#include "cfnormal/cylinders.hpp"

#include <limits>
#include <stdexcept>

namespace cfnormal {

namespace {

BigInt ipow(unsigned base, long exponent) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, static_cast<unsigned long>(exponent));
  return r;
}

BigInt isqrt(const BigInt& v) {
  BigInt r;
  mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
  return r;
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

// Fibonacci numbers F_0 .. F_{count-1}.
const std::vector<BigInt>& fibonacci(std::size_t count) {
  static thread_local std::vector<BigInt> f{0, 1};
  while (f.size() < count) f.push_back(f[f.size() - 1] + f[f.size() - 2]);
  return f;
}

struct Quadratic {
  // D(l) = (alpha l + beta)(gamma l + delta)
  BigInt alpha, beta, gamma, delta;

  BigInt at(const BigInt& l) const { return (alpha * l + beta) * (gamma * l + delta); }
};

// Reciprocal length of the word after appending digit l and then `rest` ones.
Quadratic completion(const TrackState& s, std::size_t rest) {
  const auto& f = fibonacci(rest + 3);
  Quadratic c;
  c.alpha = f[rest + 1] * s.q;
  c.beta = f[rest + 1] * s.q_prev + f[rest] * s.q;
  c.gamma = f[rest + 2] * s.q;
  c.delta = f[rest + 2] * s.q_prev + f[rest + 1] * s.q;
  return c;
}

// Largest l >= 0 with D(l) <= bound (l = 0 means no admissible digit).
BigInt largest_digit(const Quadratic& d, const BigInt& bound) {
  if (d.at(1) > bound) return 0;
  const BigInt a = d.alpha * d.gamma;
  const BigInt b = d.alpha * d.delta + d.beta * d.gamma;
  const BigInt c = d.beta * d.delta - bound;
  BigInt disc = b * b - 4 * a * c;
  BigInt l = floor_div(isqrt(disc) - b, 2 * a);
  if (l < 1) l = 1;
  while (d.at(l + 1) <= bound) ++l;
  while (l > 1 && d.at(l) > bound) --l;
  return l;
}

class Walker {
 public:
  Walker(std::span<const WalkTrack> tracks, std::size_t n, const LeafVisitor& visit, const PrefixFilter& filter)
      : tracks_(tracks), n_(n), visit_(visit), filter_(filter) {
    states_.reserve(tracks.size());
    for (const auto& t : tracks) states_.push_back(t.parent);
    block_.reserve(n);
  }

  bool run() { return n_ == 0 ? visit_(block_, states_) : descend(); }

 private:
  bool descend() {
    const std::size_t rest = n_ - block_.size() - 1;
    BigInt cap = -1;
    for (std::size_t i = 0; i < tracks_.size(); ++i) {
      const BigInt l = largest_digit(completion(states_[i], rest), tracks_[i].max_reciprocal);
      if (cap < 0 || l < cap) cap = l;
    }
    if (cap < 1) return true;
    if (!cap.fits_ulong_p()) throw std::overflow_error("digit cap exceeds 64 bits; lower the relative order");
    const Digit top = cap.get_ui();

    // Larger digits sit closer to p_N / q_N, the left endpoint when N is even.
    const bool descending = states_[0].size % 2 == 0;
    std::vector<TrackState> saved = states_;
    for (Digit k = 0; k < top; ++k) {
      const Digit l = descending ? top - k : k + 1;
      const BigInt lb = to_bigint(l);
      for (std::size_t i = 0; i < states_.size(); ++i) {
        states_[i].q = lb * saved[i].q + saved[i].q_prev;
        states_[i].q_prev = saved[i].q;
        states_[i].size = saved[i].size + 1;
      }
      block_.push_back(l);
      if (filter_ && !filter_(block_)) {
        block_.pop_back();
        continue;
      }
      const bool go_on = rest == 0 ? visit_(block_, states_) : descend();
      block_.pop_back();
      if (!go_on) {
        states_ = std::move(saved);
        return false;
      }
    }
    states_ = std::move(saved);
    return true;
  }

  std::span<const WalkTrack> tracks_;
  std::size_t n_;
  const LeafVisitor& visit_;
  const PrefixFilter& filter_;
  std::vector<TrackState> states_;
  std::vector<Digit> block_;
};

}  // namespace

Interval::Interval(Rational l, Rational r) : left(std::move(l)), right(std::move(r)) {
  if (!(left < right)) throw std::invalid_argument("interval needs left < right");
}

Interval Interval::reciprocal_image() const {
  if (left.sign() <= 0) throw std::domain_error("reciprocal image needs a positive interval");
  return Interval(right.reciprocal() - Rational(1), left.reciprocal() - Rational(1));
}

BigInt BaryCylinder::scale() const { return ipow(base, order); }

Interval BaryCylinder::interval() const {
  const BigInt s = scale();
  return Interval(Rational(start_index, s), Rational(start_index + width_units, s));
}

Rational BaryCylinder::length() const { return Rational(BigInt(width_units), scale()); }

void check_well_formed(const BaryCylinder& c) {
  if (c.base < 2) throw std::invalid_argument("base must be at least 2");
  if (c.order < 0) throw std::invalid_argument("negative b-ary order");
  if (c.width_units != 1 && c.width_units != 2) throw std::invalid_argument("b-ary width must be 1 or 2");
  if (c.start_index < 0 || c.end_index() > c.scale()) throw std::invalid_argument("b-ary cylinder leaves [0, 1]");
}

CfCylinder cf_cylinder(const CfWord& word) {
  auto conv = convergents(word);
  CfCylinder c;
  c.word = word;
  c.last = conv[conv.size() - 1];
  c.previous = conv[conv.size() - 2];
  const Rational a(c.last.p, c.last.q);
  const Rational b(c.last.p + c.previous.p, c.last.q + c.previous.q);
  c.interval = word.size() % 2 == 0 ? Interval(a, b) : Interval(b, a);
  return c;
}

Rational cf_cylinder_length(const CfWord& word) {
  const auto conv = convergents(word);
  const BigInt& q = conv[conv.size() - 1].q;
  const BigInt& qp = conv[conv.size() - 2].q;
  return Rational(BigInt(1), q * (q + qp));
}

TrackState track_state(const CfCylinder& c) { return {c.last.q, c.previous.q, c.word.size()}; }

bool for_each_extension(std::span<const WalkTrack> tracks, std::size_t n, const LeafVisitor& visit,
                        const PrefixFilter& filter) {
  if (tracks.empty()) throw std::invalid_argument("walk needs at least one track");
  Walker w(tracks, n, visit, filter);
  return w.run();
}

void for_each_relative_cylinder(const CfWord& parent, std::size_t n, const Rational& len_low,
                                const Rational& len_high, const std::function<bool(const CfWord&)>& visit) {
  if (len_low.sign() <= 0) throw std::invalid_argument("relative length lower bound must be positive");
  if (!(len_low < len_high)) throw std::invalid_argument("relative length window needs len_low < len_high");
  const CfCylinder c = cf_cylinder(parent);
  const BigInt d_parent = c.reciprocal_length();
  // len_low <= D_parent / D_child <= len_high
  const WalkTrack track{track_state(c), (Rational(d_parent) / len_low).floor()};
  const BigInt min_reciprocal = (Rational(d_parent) / len_high).ceil();
  for_each_extension(std::span(&track, 1), n, [&](std::span<const Digit> block, std::span<const TrackState> leaves) {
    if (leaves[0].reciprocal_length() < min_reciprocal) return true;
    return visit(CfWord(std::vector<Digit>(block.begin(), block.end())));
  });
}

std::vector<CfWord> enumerate_relative_cylinders(const CfWord& parent, std::size_t n, const Rational& len_low,
                                                 const Rational& len_high) {
  std::vector<CfWord> out;
  for_each_relative_cylinder(parent, n, len_low, len_high, [&](const CfWord& w) {
    out.push_back(w);
    return true;
  });
  return out;
}

BaryCylinder enclosing_bary(const Interval& iv, unsigned base, long order) {
  if (base < 2) throw std::invalid_argument("base must be at least 2");
  if (order < 0) throw std::invalid_argument("negative b-ary order");
  const BigInt s = ipow(base, order);
  if (!(iv.length() < Rational(BigInt(1), s))) {
    throw std::invalid_argument("interval is not shorter than b^-m; no enclosing cylinder of that order");
  }
  if (iv.left.sign() < 0 || iv.right > Rational(1)) throw std::invalid_argument("interval leaves [0, 1]");
  BaryCylinder c{base, order, (iv.left * Rational(s)).floor(), 1};
  if (iv.right > Rational(c.start_index + 1, s)) c.width_units = 2;
  return c;
}

BaryWord bary_digits_common_prefix(const Interval& iv, unsigned base) {
  if (base < 2) throw std::invalid_argument("base must be at least 2");
  if (iv.left.sign() < 0 || iv.right > Rational(1)) throw std::invalid_argument("interval leaves [0, 1]");
  // Track left = ln/ld and right = rn/rd under repeated S_b. A digit is
  // determined when both ends fall in the closed cell [d/b, (d+1)/b].
  BigInt ln = iv.left.num(), ld = iv.left.den();
  BigInt rn = iv.right.num(), rd = iv.right.den();
  const BigInt b(static_cast<unsigned long>(base));
  BaryWord out;
  for (;;) {
    ln *= b;
    rn *= b;
    const BigInt d = floor_div(ln, ld);
    if (rn > (d + 1) * rd) break;
    out.push_back(static_cast<std::uint32_t>(d.get_ui()));
    ln -= d * ld;
    rn -= d * rd;
  }
  return out;
}

BaryWord bary_digits_of_index(const BigInt& index, unsigned base, long digits) {
  BaryWord out(static_cast<std::size_t>(digits), 0);
  BigInt v = index;
  const BigInt b(static_cast<unsigned long>(base));
  for (long i = digits - 1; i >= 0; --i) {
    BigInt r;
    mpz_fdiv_qr(v.get_mpz_t(), r.get_mpz_t(), v.get_mpz_t(), b.get_mpz_t());
    out[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(r.get_ui());
  }
  if (v != 0) throw std::invalid_argument("index does not fit the requested digit count");
  return out;
}

}  // namespace cfnormal
