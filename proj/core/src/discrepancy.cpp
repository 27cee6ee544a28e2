#include "cfnormal/discrepancy.hpp"

#include <algorithm>
#include <stdexcept>

#include "cfnormal/measures.hpp"

namespace cfnormal {

namespace {

// Knuth-Morris-Pratt prefix function of the pattern.
std::vector<std::size_t> prefix_function(std::span<const Digit> p) {
  std::vector<std::size_t> pi(p.size(), 0);
  for (std::size_t i = 1; i < p.size(); ++i) {
    std::size_t k = pi[i - 1];
    while (k > 0 && p[i] != p[k]) k = pi[k - 1];
    if (p[i] == p[k]) ++k;
    pi[i] = k;
  }
  return pi;
}

// D < threshold where D = |count/n - mu|, decided by refining mu.
bool deviation_below(const Rational& frequency, const CfWord& v, const Rational& threshold) {
  if (threshold.sign() <= 0) return false;
  for (long bits = 64; bits <= kMaxPrecisionBits; bits *= 2) {
    const CertifiedReal d = deviation_from(frequency, pattern_measure(v, static_cast<int>(bits)));
    if (d.upper < threshold) return true;
    if (d.lower >= threshold) return false;
  }
  throw PrecisionExhausted("discrepancy comparison could not be decided");
}

bool cf_below(std::span<const Digit> w, std::size_t n, const CfWord& v, const Rational& threshold) {
  if (n == 0) return false;  // undefined on empty prefixes; never satisfies a hypothesis
  const std::size_t c = count_occurrences(w.first(n), v.digits());
  return deviation_below(Rational(BigInt(static_cast<unsigned long>(c)), BigInt(static_cast<unsigned long>(n))), v,
                         threshold);
}

bool bary_below(std::span<const std::uint32_t> w, std::size_t n, unsigned base, const Rational& threshold) {
  if (n == 0) return false;
  return bary_discrepancy_value(w, n, base) < threshold;
}

Rational ratio(std::size_t a, std::size_t b) {
  return Rational(BigInt(static_cast<unsigned long>(a)), BigInt(static_cast<unsigned long>(b)));
}

}  // namespace

std::size_t count_occurrences(std::span<const Digit> text, std::span<const Digit> pattern) {
  const auto counts = prefix_occurrence_counts(text, pattern);
  return counts.back();
}

std::vector<std::size_t> prefix_occurrence_counts(std::span<const Digit> text, std::span<const Digit> pattern) {
  if (pattern.empty()) throw std::invalid_argument("pattern must be nonempty");
  std::vector<std::size_t> counts(text.size() + 1, 0);
  const auto pi = prefix_function(pattern);
  std::size_t k = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    while (k > 0 && (k == pattern.size() || text[i] != pattern[k])) k = pi[k - 1];
    if (text[i] == pattern[k]) ++k;
    counts[i + 1] = counts[i] + (k == pattern.size() ? 1 : 0);
  }
  return counts;
}

CertifiedReal pattern_measure(const CfWord& pattern, int precision_bits) {
  return gauss_measure(cf_cylinder(pattern).interval, precision_bits);
}

CertifiedReal deviation_from(const Rational& frequency, const CertifiedReal& mu) {
  const Rational a = (frequency - mu.lower).abs();
  const Rational b = (frequency - mu.upper).abs();
  CertifiedReal d;
  d.precision_bits = mu.precision_bits;
  d.upper = std::max(a, b);
  d.lower = mu.contains(frequency) ? Rational(0) : std::min(a, b);
  return d;
}

CfDiscrepancyResult cf_discrepancy_prefix(std::span<const Digit> w, std::size_t n, const CfWord& v,
                                          int precision_bits) {
  if (n == 0 || n > w.size()) throw std::invalid_argument("prefix length must lie in 1 .. |w|");
  if (v.empty()) throw std::invalid_argument("pattern must be nonempty");
  CfDiscrepancyResult r;
  r.pattern = v;
  r.prefix_length = n;
  r.occurrence_count = count_occurrences(w.first(n), v.digits());
  r.value = deviation_from(ratio(r.occurrence_count, n), pattern_measure(v, precision_bits));
  return r;
}

CfDiscrepancyResult cf_discrepancy(const CfWord& w, const CfWord& v, int precision_bits) {
  if (w.empty()) throw std::invalid_argument("word must be nonempty");
  return cf_discrepancy_prefix(w.digits(), w.size(), v, precision_bits);
}

bool cf_discrepancy_below(std::size_t count, std::size_t n, const CfWord& v, const Rational& threshold) {
  if (n == 0) throw std::invalid_argument("prefix length must be positive");
  return deviation_below(ratio(count, n), v, threshold);
}

Rational bary_discrepancy_value(std::span<const std::uint32_t> w, std::size_t n, unsigned base) {
  if (base < 2) throw std::invalid_argument("base must be at least 2");
  if (n == 0 || n > w.size()) throw std::invalid_argument("prefix length must lie in 1 .. |w|");
  std::vector<std::size_t> counts(base, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i] >= base) throw std::invalid_argument("digit out of range for base");
    ++counts[w[i]];
  }
  const Rational target(BigInt(1), BigInt(static_cast<unsigned long>(base)));
  Rational best(0);
  for (std::size_t c : counts) best = std::max(best, (ratio(c, n) - target).abs());
  return best;
}

BaryDiscrepancyResult bary_discrepancy(std::span<const std::uint32_t> w, unsigned base) {
  if (base < 2) throw std::invalid_argument("base must be at least 2");
  if (w.empty()) throw std::invalid_argument("word must be nonempty");
  BaryDiscrepancyResult r;
  r.base = base;
  r.prefix_length = w.size();
  std::vector<std::size_t> counts(base, 0);
  for (auto d : w) {
    if (d >= base) throw std::invalid_argument("digit out of range for base");
    ++counts[d];
  }
  const Rational target(BigInt(1), BigInt(static_cast<unsigned long>(base)));
  r.value = Rational(0);
  for (std::size_t c : counts) {
    r.per_digit.push_back((ratio(c, w.size()) - target).abs());
    r.value = std::max(r.value, r.per_digit.back());
  }
  return r;
}

bool ConcatReport::all_hold() const {
  return std::all_of(items.begin(), items.end(), [](const ImplicationCheck& c) { return c.holds(); });
}

const ImplicationCheck& ConcatReport::item(const std::string& name) const {
  for (const auto& c : items) {
    if (c.item == name) return c;
  }
  throw std::out_of_range("no such item: " + name);
}

ConcatReport check_cf_concat(const CfWord& w, const CfWord& u, const CfWord& v, const Rational& epsilon) {
  if (epsilon.sign() <= 0 || epsilon >= Rational(1)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (v.empty()) throw std::invalid_argument("pattern must be nonempty");
  const std::size_t n = w.size();
  const std::size_t s = u.size();
  const std::size_t k = v.size();
  const Rational two_eps = Rational(2) * epsilon;
  const CfWord wu = w.concat(u);
  const CfWord uw = u.concat(w);

  ConcatReport report;
  const bool w_small = cf_below(w.digits(), n, v, epsilon);

  ImplicationCheck one{"1"};
  if (s > 0) {
    const Rational slack = epsilon - ratio(k - 1, s);
    one.hypothesis = w_small && cf_below(u.digits(), s, v, slack);
  }
  if (one.hypothesis) one.conclusion = cf_below(wu.digits(), n + s, v, epsilon);
  report.items.push_back(one);

  const bool short_tail = n > 0 && ratio(s, n) < epsilon;
  ImplicationCheck two_a{"2a", w_small && short_tail};
  ImplicationCheck two_b{"2b", two_a.hypothesis};
  if (two_a.hypothesis) {
    two_a.conclusion = true;
    const auto counts = prefix_occurrence_counts(wu.digits(), v.digits());
    for (std::size_t l = 1; l <= s && two_a.conclusion; ++l) {
      two_a.conclusion = deviation_below(ratio(counts[n + l], n + l), v, two_eps);
    }
    two_b.conclusion = cf_below(uw.digits(), n + s, v, two_eps);
  }
  report.items.push_back(two_a);
  report.items.push_back(two_b);
  return report;
}

ConcatReport check_bary_concat(std::span<const std::uint32_t> u, std::span<const std::uint32_t> v, unsigned base,
                               const Rational& epsilon) {
  if (epsilon.sign() <= 0) throw std::invalid_argument("epsilon must be positive");
  std::vector<std::uint32_t> uv(u.begin(), u.end());
  uv.insert(uv.end(), v.begin(), v.end());
  std::vector<std::uint32_t> vu(v.begin(), v.end());
  vu.insert(vu.end(), u.begin(), u.end());
  const Rational two_eps = Rational(2) * epsilon;

  ConcatReport report;
  const bool v_small = bary_below(v, v.size(), base, epsilon);

  ImplicationCheck one{"1", bary_below(u, u.size(), base, epsilon) && v_small};
  if (one.hypothesis) one.conclusion = bary_below(uv, uv.size(), base, epsilon);
  report.items.push_back(one);

  const bool short_head = !v.empty() && ratio(u.size(), v.size()) < epsilon;
  ImplicationCheck two_a{"2a", v_small && short_head};
  ImplicationCheck two_b{"2b", two_a.hypothesis};
  if (two_a.hypothesis) {
    two_a.conclusion = true;
    for (std::size_t l = 0; l <= u.size() && two_a.conclusion; ++l) {
      two_a.conclusion = bary_below(vu, v.size() + l, base, two_eps);
    }
    two_b.conclusion = bary_below(uv, uv.size(), base, two_eps);
  }
  report.items.push_back(two_a);
  report.items.push_back(two_b);
  return report;
}

}  // namespace cfnormal
