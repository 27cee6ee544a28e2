#include <gtest/gtest.h>

#include <cmath>
#include <optional>

#include "cfnormal/discrepancy.hpp"
#include "cfnormal/measures.hpp"
#include "support.hpp"

using namespace cfnormal;
using cfnormal::testing::dec;
using cfnormal::testing::Gen;
using cfnormal::testing::q;

namespace {

std::size_t naive_count(std::span<const Digit> text, std::span<const Digit> pattern) {
  std::size_t c = 0;
  for (std::size_t j = 0; j + pattern.size() <= text.size(); ++j) {
    bool match = true;
    for (std::size_t i = 0; i < pattern.size(); ++i) match = match && text[j + i] == pattern[i];
    c += match ? 1 : 0;
  }
  return c;
}

BaryWord bary(std::string_view s) {
  BaryWord w;
  for (char c : s) w.push_back(static_cast<std::uint32_t>(c - '0'));
  return w;
}

Rational frac(std::size_t a, std::size_t b) {
  return Rational(BigInt(static_cast<unsigned long>(a)), BigInt(static_cast<unsigned long>(b)));
}

// Naive |count/n - mu| < threshold with a wide independent enclosure of mu.
std::optional<bool> naive_cf_below(std::span<const Digit> w, std::size_t n, const CfWord& v, const Rational& thr) {
  if (n == 0) return false;
  const Rational f = frac(naive_count(w.first(n), v.digits()), n);
  const CertifiedReal mu = gauss_measure(cf_cylinder(v).interval, 200);
  const Rational lo = std::max(Rational(0), std::max(f - mu.upper, mu.lower - f));
  const Rational hi = std::max(f - mu.lower, mu.upper - f);
  if (hi < thr) return true;
  if (lo >= thr) return false;
  return std::nullopt;
}

Rational naive_bary(std::span<const std::uint32_t> w, std::size_t n, unsigned base) {
  Rational worst(0);
  for (unsigned d = 0; d < base; ++d) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += w[i] == d ? 1 : 0;
    worst = std::max(worst, (frac(c, n) - frac(1, base)).abs());
  }
  return worst;
}

// Digits distributed by the Gauss measure of depth-one cylinders.
Digit gauss_digit(Gen& g) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(g.engine());
  const double x = std::exp2(u) - 1.0;
  const double a = std::floor(1.0 / std::max(x, 1e-12));
  return static_cast<Digit>(std::min(a, 1e6));
}

CfWord gauss_word(Gen& g, std::size_t n) {
  CfWord w;
  for (std::size_t i = 0; i < n; ++i) w.push_back(gauss_digit(g));
  return w;
}

CfWord small_pattern(Gen& g) {
  CfWord v;
  const std::size_t k = g.uniform(1, 2);
  for (std::size_t i = 0; i < k; ++i) v.push_back(g.uniform(1, 2));
  return v;
}

Rational random_epsilon(Gen& g, long lo_den, long hi_den) {
  return Rational(BigInt(1), BigInt(static_cast<long>(g.uniform(lo_den, hi_den))));
}

}  // namespace

TEST(OccurrenceTest, Examples) {
  const std::vector<Digit> w = {1, 2, 1, 2, 1};
  EXPECT_EQ(count_occurrences(w, std::vector<Digit>{1, 2, 1}), 2u);
  EXPECT_EQ(count_occurrences(w, std::vector<Digit>{2, 1}), 2u);
  EXPECT_EQ(count_occurrences(w, std::vector<Digit>{1, 2, 1, 2, 1, 2}), 0u);
  EXPECT_THROW(count_occurrences(w, std::vector<Digit>{}), std::invalid_argument);
  const auto prefix = prefix_occurrence_counts(w, std::vector<Digit>{1, 2});
  EXPECT_EQ(prefix, (std::vector<std::size_t>{0, 0, 1, 1, 2, 2}));
}

TEST(OccurrenceTest, MatchesNaiveScan) {
  Gen g(31);
  for (int i = 0; i < 400; ++i) {
    const CfWord w = g.uniform_cf_word(g.uniform(0, 200), g.uniform(1, 3));
    const CfWord v = g.uniform_cf_word(g.uniform(1, 5), 3);
    ASSERT_EQ(count_occurrences(w.digits(), v.digits()), naive_count(w.digits(), v.digits()));
    const auto prefix = prefix_occurrence_counts(w.digits(), v.digits());
    for (std::size_t m = 0; m <= w.size(); m += 7) {
      ASSERT_EQ(prefix[m], naive_count(w.digits().first(m), v.digits()));
    }
  }
}

TEST(CfDiscrepancyTest, Examples) {
  auto r = cf_discrepancy(CfWord{1, 1, 1, 1}, CfWord{1});
  EXPECT_EQ(r.occurrence_count, 4u);
  EXPECT_EQ(r.prefix_length, 4u);
  // 1 - log2(4/3)
  EXPECT_LT((r.value.midpoint() - dec("0.584962500721156181453738943947")).abs(), dec("1e-18"));

  r = cf_discrepancy(CfWord{1, 1, 1, 1}, CfWord{2});
  EXPECT_EQ(r.occurrence_count, 0u);
  EXPECT_LT((r.value.midpoint() - dec("0.169925001442312362907477887896")).abs(), dec("1e-18"));

  r = cf_discrepancy(CfWord{2, 1, 2, 1}, CfWord{2, 1});
  EXPECT_EQ(r.occurrence_count, 2u);
  // 1/2 - log2(21/20)
  EXPECT_LT((r.value.midpoint() - dec("0.4296106721086020589746111683097")).abs(), dec("1e-18"));
  EXPECT_LE(r.value.width(), pow(Rational(2), -64));
}

TEST(CfDiscrepancyTest, WindowDiscipline) {
  Gen g(32);
  for (int i = 0; i < 200; ++i) {
    const CfWord v = g.uniform_cf_word(g.uniform(1, 3), 2);
    const CfWord w = g.uniform_cf_word(g.uniform(1, 60), 2);
    const CfWord longer = w.concat(g.uniform_cf_word(g.uniform(1, 10), 2));
    const auto a = cf_discrepancy(w, v);
    const auto b = cf_discrepancy_prefix(longer.digits(), w.size(), v);
    ASSERT_EQ(a.occurrence_count, b.occurrence_count);
    ASSERT_EQ(a.value, b.value);
  }
  EXPECT_THROW(cf_discrepancy_prefix(std::vector<Digit>{1, 2}, 3, CfWord{1}), std::invalid_argument);
  EXPECT_THROW(cf_discrepancy_prefix(std::vector<Digit>{1, 2}, 0, CfWord{1}), std::invalid_argument);
}

TEST(CfDiscrepancyTest, CertifiedThresholdAgreesWithValue) {
  Gen g(33);
  for (int i = 0; i < 300; ++i) {
    const CfWord v = g.uniform_cf_word(g.uniform(1, 2), 2);
    const std::size_t n = g.uniform(1, 80);
    const std::size_t count = g.uniform(0, n);
    const Rational thr = frac(g.uniform(1, 99), 100);
    const CertifiedReal mu = pattern_measure(v, 128);
    const CertifiedReal d = deviation_from(frac(count, n), mu);
    const bool below = cf_discrepancy_below(count, n, v, thr);
    if (d.upper < thr) {
      EXPECT_TRUE(below);
    }
    if (d.lower >= thr) {
      EXPECT_FALSE(below);
    }
  }
  EXPECT_FALSE(cf_discrepancy_below(1, 2, CfWord{1}, Rational(0)));
}

TEST(BaryDiscrepancyTest, Examples) {
  EXPECT_EQ(bary_discrepancy(bary("0101"), 2).value, Rational(0));
  EXPECT_EQ(bary_discrepancy(bary("0001"), 2).value, q("1/4"));
  EXPECT_EQ(bary_discrepancy(bary("012"), 3).value, Rational(0));
  const auto r = bary_discrepancy(bary("0012"), 3);
  ASSERT_EQ(r.per_digit.size(), 3u);
  EXPECT_EQ(r.per_digit[0], q("1/6"));
  EXPECT_EQ(r.per_digit[1], q("1/12"));
  EXPECT_EQ(r.value, q("1/6"));
  EXPECT_THROW(bary_discrepancy(bary("012"), 2), std::invalid_argument);
  EXPECT_THROW(bary_discrepancy(BaryWord{}, 2), std::invalid_argument);
  EXPECT_EQ(bary_discrepancy_value(bary("000111"), 3, 2), q("1/2"));
}

TEST(BaryDiscrepancyTest, BoundedAndExtremalOnConstantWords) {
  Gen g(34);
  for (int i = 0; i < 500; ++i) {
    const unsigned b = static_cast<unsigned>(g.uniform(2, 16));
    const BaryWord w = g.bary_word(g.uniform(1, 100), b);
    const Rational d = bary_discrepancy(w, b).value;
    ASSERT_LE(d, Rational(1) - frac(1, b));
    ASSERT_EQ(d, naive_bary(w, w.size(), b));
    const BaryWord constant(w.size(), static_cast<std::uint32_t>(g.uniform(0, b - 1)));
    ASSERT_EQ(bary_discrepancy(constant, b).value, Rational(1) - frac(1, b));
  }
}

TEST(CfConcatTest, Examples) {
  const CfWord ones(std::vector<Digit>(100, 1));
  // D([1]) of an all-ones word is 1 - log2(4/3) < 0.6.
  const auto r = check_cf_concat(ones, ones, CfWord{1}, q("3/5"));
  EXPECT_TRUE(r.item("1").hypothesis);
  EXPECT_TRUE(r.item("1").conclusion);
  EXPECT_TRUE(r.all_hold());

  Gen g(35);
  for (int i = 0; i < 50; ++i) {
    const CfWord w = gauss_word(g, g.uniform(5, 50));
    const auto e = check_cf_concat(w, CfWord(), small_pattern(g), random_epsilon(g, 2, 10));
    EXPECT_FALSE(e.item("1").hypothesis);
    EXPECT_TRUE(e.item("2a").holds());
    if (e.item("2a").hypothesis) {
      EXPECT_TRUE(e.item("2a").conclusion);
    }
  }
  EXPECT_THROW(check_cf_concat(ones, ones, CfWord{1}, Rational(0)), std::invalid_argument);
  EXPECT_THROW(check_cf_concat(ones, ones, CfWord(), q("1/2")), std::invalid_argument);
  EXPECT_THROW(r.item("3"), std::out_of_range);
}

TEST(CfConcatTest, RandomInstancesSatisfyingHypotheses) {
  Gen g(36);
  int item1 = 0, item2 = 0, attempts = 0;
  while ((item1 < 1500 || item2 < 1500) && attempts < 40000) {
    ++attempts;
    const CfWord v = small_pattern(g);
    const Rational eps = random_epsilon(g, 2, 8);
    const CfWord w = gauss_word(g, g.uniform(40, 300));
    // Alternate between long tails for item 1 and short tails for items 2a, 2b.
    const bool short_tail = attempts % 2 == 0;
    const std::size_t max_s = short_tail ? std::max<std::size_t>(1, (w.size() / eps.den().get_ui()) - 1) : 300;
    const CfWord u = gauss_word(g, g.uniform(1, max_s));
    const auto r = check_cf_concat(w, u, v, eps);
    ASSERT_TRUE(r.all_hold()) << "w=" << w << " u=" << u << " v=" << v << " eps=" << eps;
    if (r.item("1").hypothesis) ++item1;
    if (r.item("2a").hypothesis) ++item2;
    if (attempts % 50 == 0) {
      // Cross-check the reported hypotheses against naive counting.
      const auto hw = naive_cf_below(w.digits(), w.size(), v, eps);
      const auto hu = naive_cf_below(u.digits(), u.size(), v, eps - frac(v.size() - 1, u.size()));
      if (hw && hu) {
        EXPECT_EQ(r.item("1").hypothesis, *hw && *hu);
      }
      const CfWord wu = w.concat(u);
      if (r.item("1").hypothesis) {
        const auto c = naive_cf_below(wu.digits(), wu.size(), v, eps);
        if (c) {
          EXPECT_TRUE(*c);
        }
      }
    }
  }
  EXPECT_GE(item1, 1500);
  EXPECT_GE(item2, 1500);
}

TEST(BaryConcatTest, Examples) {
  auto r = check_bary_concat(bary("01"), bary("10"), 2, q("1/4"));
  EXPECT_TRUE(r.item("1").hypothesis);
  EXPECT_TRUE(r.item("1").conclusion);

  BaryWord v;
  for (int i = 0; i < 50; ++i) {
    v.push_back(0);
    v.push_back(1);
  }
  r = check_bary_concat(bary("0"), v, 2, q("1/10"));
  EXPECT_TRUE(r.item("2b").hypothesis);
  EXPECT_TRUE(r.item("2b").conclusion);
  EXPECT_TRUE(r.all_hold());
  EXPECT_THROW(check_bary_concat(bary("0"), v, 2, Rational(0)), std::invalid_argument);
}

TEST(BaryConcatTest, RandomInstancesSatisfyingHypotheses) {
  Gen g(37);
  int item1 = 0, item2 = 0, attempts = 0;
  while ((item1 < 2000 || item2 < 2000) && attempts < 40000) {
    ++attempts;
    const unsigned b = static_cast<unsigned>(g.uniform(2, 6));
    const Rational eps = random_epsilon(g, 3, 20);
    const BaryWord v = g.balanced_bary_word(g.uniform(20, 100), b);
    const bool short_head = attempts % 2 == 0;
    const std::size_t max_u = short_head ? std::max<std::size_t>(1, v.size() / eps.den().get_ui()) : 400;
    BaryWord u = g.bary_word(g.uniform(1, max_u), b);
    const auto r = check_bary_concat(u, v, b, eps);
    ASSERT_TRUE(r.all_hold()) << "b=" << b << " eps=" << eps;
    if (r.item("1").hypothesis) {
      ++item1;
      ASSERT_LT(naive_bary(u, u.size(), b), eps);
      BaryWord uv = u;
      uv.insert(uv.end(), v.begin(), v.end());
      ASSERT_LT(naive_bary(uv, uv.size(), b), eps);
    }
    if (r.item("2a").hypothesis) {
      ++item2;
      BaryWord vu = v;
      vu.insert(vu.end(), u.begin(), u.end());
      for (std::size_t l = 0; l <= u.size(); ++l) ASSERT_LT(naive_bary(vu, v.size() + l, b), Rational(2) * eps);
    }
  }
  EXPECT_GE(item1, 2000);
  EXPECT_GE(item2, 2000);
}
