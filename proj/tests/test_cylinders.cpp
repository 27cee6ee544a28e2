#include <gtest/gtest.h>

#include <algorithm>

#include "cfnormal/cylinders.hpp"
#include "support.hpp"

using namespace cfnormal;
using cfnormal::testing::for_each_word;
using cfnormal::testing::Gen;
using cfnormal::testing::q;

namespace {

Interval iv(const char* l, const char* r) { return Interval(q(l), q(r)); }

BaryWord bary(std::string_view s) {
  BaryWord w;
  for (char c : s) w.push_back(static_cast<std::uint32_t>(c - '0'));
  return w;
}

// Greedy base-b digits of a rational point.
BaryWord expansion(Rational x, unsigned base, std::size_t count) {
  BaryWord out;
  for (std::size_t i = 0; i < count; ++i) {
    const Rational bx = x * Rational(static_cast<long>(base));
    const BigInt d = bx.floor();
    out.push_back(static_cast<std::uint32_t>(d.get_ui()));
    x = bx - Rational(d);
  }
  return out;
}

// Independent filter: every block with digits up to `cap`, kept if its
// relative length lies in the window, sorted by left endpoint.
std::vector<CfWord> brute_force_window(const CfWord& parent, std::size_t n, const Rational& lo, const Rational& hi,
                                       Digit cap) {
  std::vector<std::pair<Rational, CfWord>> found;
  const Rational parent_len = cf_cylinder(parent).length();
  std::vector<Digit> block(n, 1);
  for (;;) {
    const CfWord child = parent.concat(CfWord(block));
    const Rational rel = cf_cylinder(child).length() / parent_len;
    if (lo <= rel && rel <= hi) found.emplace_back(cf_cylinder(child).interval.left, CfWord(block));
    std::size_t i = 0;
    while (i < n && block[i] == cap) block[i++] = 1;
    if (i == n) break;
    ++block[i];
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<CfWord> out;
  for (auto& f : found) out.push_back(f.second);
  return out;
}

}  // namespace

TEST(IntervalTest, RejectsEmpty) {
  EXPECT_THROW(iv("1/2", "1/2"), std::invalid_argument);
  EXPECT_THROW(iv("1/2", "1/3"), std::invalid_argument);
  EXPECT_EQ(iv("1/2", "1").reciprocal_image(), iv("0", "1"));
  EXPECT_THROW(iv("0", "1").reciprocal_image(), std::domain_error);
}

TEST(CfCylinderTest, Examples) {
  auto c = cf_cylinder(CfWord{1});
  EXPECT_EQ(c.interval, iv("1/2", "1"));
  c = cf_cylinder(CfWord{1, 2});
  EXPECT_EQ(c.interval, iv("2/3", "3/4"));
  EXPECT_EQ(c.length(), q("1/12"));
  c = cf_cylinder(CfWord{2});
  EXPECT_EQ(c.interval, iv("1/3", "1/2"));
  EXPECT_EQ(cf_cylinder(CfWord()).interval, iv("0", "1"));
}

TEST(CfCylinderTest, LengthExamples) {
  EXPECT_EQ(cf_cylinder_length(CfWord{1}), q("1/2"));
  EXPECT_EQ(cf_cylinder_length(CfWord{1, 2}), q("1/12"));
  EXPECT_EQ(cf_cylinder_length(CfWord{1, 1}), q("1/6"));
}

TEST(CfCylinderTest, LengthFormulaAndOrientationOnAllShortWords) {
  std::size_t count = 0;
  for_each_word(6, 4, [&](const CfWord& w) {
    ++count;
    const CfCylinder c = cf_cylinder(w);
    ASSERT_EQ(c.length(), Rational(BigInt(1), c.reciprocal_length())) << w;
    ASSERT_EQ(cf_cylinder_length(w), c.interval.right - c.interval.left) << w;
    const Rational a = cf_to_rational(w);
    const Rational b = cf_to_rational(w.with_last_incremented());
    if (w.size() % 2 == 0) {
      ASSERT_EQ(c.interval, Interval(a, b)) << w;
    } else {
      ASSERT_EQ(c.interval, Interval(b, a)) << w;
    }
  });
  EXPECT_EQ(count, 5460u);
}

TEST(CfCylinderTest, PrependedOneQuartersAtMost) {
  for_each_word(5, 4, [](const CfWord& w) {
    const Rational inner = cf_cylinder_length(w);
    const Rational outer = cf_cylinder_length(CfWord{1}.concat(w));
    ASSERT_LE(inner / Rational(4), outer) << w;
    ASSERT_LE(outer, inner) << w;
  });
}

TEST(CfCylinderTest, DepthTwoPartitionIsExact) {
  for (Digit d : {3u, 10u, 40u}) {
    Rational covered(0);
    Rational tail(0);
    for (Digit a = 1; a <= d; ++a) {
      for (Digit b = 1; b <= d; ++b) covered += cf_cylinder_length(CfWord{a, b});
      // I_[a] minus its first d children is the interval between [a] and [a, d+1].
      tail += (cf_to_rational(CfWord{a, d + 1}) - cf_to_rational(CfWord{a})).abs();
    }
    const Rational above = Rational(BigInt(1), BigInt(static_cast<unsigned long>(d + 1)));
    EXPECT_EQ(covered + tail + above, Rational(1));
  }
}

TEST(CfCylinderTest, ChildrenAscendByParity) {
  for (const CfWord& parent : {CfWord(), CfWord{1}, CfWord{2, 3}}) {
    Rational previous(-1);
    // Children of odd length move left as l grows.
    const bool increasing = parent.size() % 2 == 1;
    std::vector<Interval> kids;
    for (Digit l = 1; l <= 12; ++l) kids.push_back(cf_cylinder(parent.concat(CfWord{l})).interval);
    if (!increasing) std::reverse(kids.begin(), kids.end());
    for (const Interval& k : kids) {
      EXPECT_GT(k.left, previous);
      previous = k.left;
    }
  }
}

TEST(RelativeCylindersTest, Examples) {
  auto blocks = enumerate_relative_cylinders(CfWord(), 1, q("1/6"), q("1/2"));
  ASSERT_EQ(blocks.size(), 2u);
  // [2] = (1/3, 1/2) lies left of [1] = (1/2, 1).
  EXPECT_EQ(blocks[0], (CfWord{2}));
  EXPECT_EQ(blocks[1], (CfWord{1}));

  blocks = enumerate_relative_cylinders(CfWord{1}, 1, q("1/4"), Rational(1));
  ASSERT_EQ(blocks.size(), 1u);
  EXPECT_EQ(blocks[0], (CfWord{1}));

  EXPECT_TRUE(enumerate_relative_cylinders(CfWord{1, 2}, 2, q("3/2"), Rational(2)).empty());
  EXPECT_THROW(enumerate_relative_cylinders(CfWord(), 1, Rational(0), q("1/2")), std::invalid_argument);
  EXPECT_THROW(enumerate_relative_cylinders(CfWord(), 1, q("1/2"), q("1/3")), std::invalid_argument);
}

TEST(RelativeCylindersTest, MatchesBruteForce) {
  struct Case {
    CfWord parent;
    std::size_t n;
    const char* lo;
    const char* hi;
  };
  const std::vector<Case> cases = {
      {CfWord(), 1, "1/200", "1/2"},      {CfWord{1}, 2, "1/150", "1/5"},  {CfWord{2, 1}, 2, "1/300", "1/3"},
      {CfWord{1, 3}, 3, "1/400", "1/20"}, {CfWord(), 3, "1/250", "1/30"},  {CfWord{1, 1, 1}, 3, "1/500", "1/40"},
      {CfWord{5}, 2, "1/90", "1/10"},
  };
  for (const Case& c : cases) {
    const Rational lo = q(c.lo), hi = q(c.hi);
    // A digit l anywhere in the block shrinks the relative length below 2/(l(l+1)).
    Digit cap = 1;
    while (Rational(2) / Rational(static_cast<long>(cap * (cap + 1))) >= lo) ++cap;
    const auto expected = brute_force_window(c.parent, c.n, lo, hi, cap);
    const auto got = enumerate_relative_cylinders(c.parent, c.n, lo, hi);
    EXPECT_FALSE(expected.empty());
    EXPECT_EQ(got, expected) << c.parent << " n=" << c.n;
  }
}

TEST(RelativeCylindersTest, VisitorCanStopEarly) {
  int seen = 0;
  for_each_relative_cylinder(CfWord(), 2, q("1/500"), q("1/2"), [&](const CfWord&) { return ++seen < 3; });
  EXPECT_EQ(seen, 3);
}

TEST(WalkerTest, FilterSkipsSubtrees) {
  const CfCylinder parent = cf_cylinder(CfWord{1});
  const WalkTrack track{track_state(parent), parent.reciprocal_length() * 400};
  std::size_t all = 0, filtered = 0;
  for_each_extension(std::span(&track, 1), 2, [&](std::span<const Digit>, std::span<const TrackState>) {
    ++all;
    return true;
  });
  for_each_extension(
      std::span(&track, 1), 2,
      [&](std::span<const Digit> block, std::span<const TrackState>) {
        EXPECT_NE(block[0], 1u);
        ++filtered;
        return true;
      },
      [](std::span<const Digit> prefix) { return prefix[0] != 1; });
  EXPECT_GT(all, filtered);
  EXPECT_GT(filtered, 0u);
}

TEST(WalkerTest, TwoTracksShareTheBlock) {
  const CfCylinder x = cf_cylinder(CfWord{1, 2});
  const CfCylinder y = cf_cylinder(CfWord{2});
  const std::vector<WalkTrack> tracks = {{track_state(x), x.reciprocal_length() * 300},
                                         {track_state(y), y.reciprocal_length() * 300}};
  std::size_t visits = 0;
  for_each_extension(tracks, 2, [&](std::span<const Digit> block, std::span<const TrackState> leaves) {
    ++visits;
    const CfWord b(std::vector<Digit>(block.begin(), block.end()));
    EXPECT_EQ(leaves[0].reciprocal_length(), cf_cylinder(CfWord{1, 2}.concat(b)).reciprocal_length());
    EXPECT_EQ(leaves[1].reciprocal_length(), cf_cylinder(CfWord{2}.concat(b)).reciprocal_length());
    EXPECT_LE(leaves[0].reciprocal_length(), tracks[0].max_reciprocal);
    EXPECT_LE(leaves[1].reciprocal_length(), tracks[1].max_reciprocal);
    return true;
  });
  EXPECT_GT(visits, 0u);
}

TEST(EnclosingBaryTest, Examples) {
  BaryCylinder c = enclosing_bary(iv("3/10", "7/20"), 2, 4);
  EXPECT_EQ(c.start_index, 4);
  EXPECT_EQ(c.width_units, 2);
  EXPECT_EQ(c.interval(), iv("4/16", "6/16"));

  c = enclosing_bary(iv("1/5", "1/4"), 2, 2);
  EXPECT_EQ(c.width_units, 1);
  EXPECT_EQ(c.interval(), iv("0", "1/4"));

  c = enclosing_bary(iv("2/3", "3/4"), 2, 1);
  EXPECT_EQ(c.width_units, 1);
  EXPECT_EQ(c.interval(), iv("1/2", "1"));

  EXPECT_THROW(enclosing_bary(iv("1/4", "3/4"), 2, 1), std::invalid_argument);
  EXPECT_THROW(enclosing_bary(iv("0", "1/2"), 2, 1), std::invalid_argument);
}

TEST(EnclosingBaryTest, ContainsInputAndIsMinimal) {
  Gen g(21);
  for (int i = 0; i < 2000; ++i) {
    const unsigned base = static_cast<unsigned>(g.uniform(2, 7));
    const long order = static_cast<long>(g.uniform(0, 6));
    BigInt scale = 1;
    for (long k = 0; k < order; ++k) scale *= base;
    const BigInt den = scale * BigInt(static_cast<unsigned long>(g.uniform(2, 50)));
    const BigInt a = BigInt(static_cast<unsigned long>(g.uniform(0, 1u << 30))) % den;
    const BigInt max_len = den / scale - 1;
    if (max_len < 1) continue;
    const BigInt len = 1 + BigInt(static_cast<unsigned long>(g.uniform(0, 1u << 30))) % max_len;
    if (a + len > den) continue;
    const Interval in(Rational(a, den), Rational(a + len, den));
    const BaryCylinder c = enclosing_bary(in, base, order);
    check_well_formed(c);
    ASSERT_TRUE(c.interval().contains(in));
    if (c.width_units == 2) {
      // No single cell of this order contains the input.
      const BigInt cell = (in.left * Rational(scale)).floor();
      ASSERT_GT(in.right, Rational(cell + 1, scale));
    }
  }
}

TEST(BaryCylinderTest, WellFormedness) {
  EXPECT_NO_THROW(check_well_formed(BaryCylinder{2, 3, 6, 2}));
  EXPECT_THROW(check_well_formed(BaryCylinder{2, 3, 7, 2}), std::invalid_argument);
  EXPECT_THROW(check_well_formed(BaryCylinder{2, 3, 0, 3}), std::invalid_argument);
  EXPECT_THROW(check_well_formed(BaryCylinder{1, 3, 0, 1}), std::invalid_argument);
  EXPECT_EQ((BaryCylinder{3, 2, 4, 1}).length(), q("1/9"));
  EXPECT_EQ((BaryCylinder{3, 2, 4, 2}).interval(), iv("4/9", "6/9"));
}

TEST(CommonPrefixTest, Examples) {
  EXPECT_EQ(bary_digits_common_prefix(iv("2/3", "3/4"), 2), bary("101"));
  EXPECT_TRUE(bary_digits_common_prefix(iv("0", "1"), 2).empty());
  EXPECT_EQ(bary_digits_common_prefix(iv("1/3", "1/2"), 3), bary("1"));
}

TEST(CommonPrefixTest, EveryInteriorPointAgrees) {
  Gen g(22);
  for (int i = 0; i < 500; ++i) {
    const unsigned base = static_cast<unsigned>(g.uniform(2, 12));
    const CfWord w = g.cf_word(g.uniform(1, 10), 6);
    const Interval in = cf_cylinder(w).interval;
    const BaryWord prefix = bary_digits_common_prefix(in, base);
    for (int j = 1; j <= 7; ++j) {
      const Rational point = in.left + in.length() * Rational(BigInt(j), BigInt(8));
      const BaryWord e = expansion(point, base, prefix.size() + 1);
      ASSERT_TRUE(std::equal(prefix.begin(), prefix.end(), e.begin())) << w;
    }
  }
}

TEST(CommonPrefixTest, IndexDigits) {
  EXPECT_EQ(bary_digits_of_index(BigInt(5), 2, 4), bary("0101"));
  EXPECT_EQ(bary_digits_of_index(BigInt(0), 3, 2), bary("00"));
  EXPECT_THROW(bary_digits_of_index(BigInt(9), 3, 2), std::invalid_argument);
}
