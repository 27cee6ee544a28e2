#pragma once

// Continued-fraction and base-b cylinder intervals with exact endpoints.
//
// All intervals are open. Rationals sitting on a cylinder boundary belong to
// no cylinder of that order, which sidesteps the two expansions of such
// points in either numeration system.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cfnormal/rational.hpp"

namespace cfnormal {

/// Open interval (left, right) with left < right.
struct Interval {
  Rational left;
  Rational right;

  Interval() = default;
  Interval(Rational l, Rational r);

  Rational length() const { return right - left; }
  /// Containment of open intervals; equal endpoints are allowed.
  bool contains(const Interval& inner) const { return left <= inner.left && inner.right <= right; }
  bool contains_point(const Rational& x) const { return left < x && x < right; }
  /// Image under u -> 1/u - 1, which maps (1/2, 1) onto (0, 1) reversing order.
  Interval reciprocal_image() const;

  friend bool operator==(const Interval&, const Interval&) = default;
};

struct CfCylinder {
  CfWord word;
  Interval interval;
  ConvergentPair last;      // (p_n, q_n)
  ConvergentPair previous;  // (p_{n-1}, q_{n-1})

  Rational length() const { return interval.length(); }
  /// q_n (q_n + q_{n-1}); the cylinder length is its reciprocal.
  BigInt reciprocal_length() const { return last.q * (last.q + previous.q); }
};

/// (a / b^k, (a + w) / b^k) with w = 1 for a plain cylinder and w = 2 for the
/// union of two consecutive cylinders of the same order.
struct BaryCylinder {
  unsigned base = 2;
  long order = 0;
  BigInt start_index = 0;
  int width_units = 1;

  BigInt scale() const;  // b^order
  Interval interval() const;
  Rational length() const;
  /// Index range [start, start + width) of the constituent order-k cells.
  BigInt end_index() const { return start_index + width_units; }

  friend bool operator==(const BaryCylinder&, const BaryCylinder&) = default;
};

using BaryWord = std::vector<std::uint32_t>;

/// Throws std::invalid_argument unless the cylinder is a well-formed union
/// of one or two cells inside [0, 1].
void check_well_formed(const BaryCylinder& c);

/// Empty word gives the unit interval.
CfCylinder cf_cylinder(const CfWord& word);
Rational cf_cylinder_length(const CfWord& word);

/// Convergent tail (q_n, q_{n-1}) of a word extended digit by digit.
struct TrackState {
  BigInt q;
  BigInt q_prev;
  /// Length of the word this tail belongs to; its parity fixes orientation.
  std::size_t size = 0;

  BigInt reciprocal_length() const { return q * (q + q_prev); }
};

/// A parent cylinder walked by for_each_extension. Children are pruned once
/// no completion of the block can keep the reciprocal length at or below
/// `max_reciprocal`.
struct WalkTrack {
  TrackState parent;
  BigInt max_reciprocal;
};

TrackState track_state(const CfCylinder& c);

using LeafVisitor = std::function<bool(std::span<const Digit> block, std::span<const TrackState> leaves)>;
/// Called on every partial block; returning false skips the whole subtree.
using PrefixFilter = std::function<bool(std::span<const Digit> prefix)>;

/// Depth-first walk over all blocks of length n appended simultaneously to
/// every track. Leaves arrive in ascending order of the left endpoint of the
/// first track's child cylinder. Returns false if the visitor stopped early.
///
/// Digit caps come from the length bound: at each position the largest digit
/// is the one whose all-ones completion still meets `max_reciprocal`, since
/// appending ones minimises every later q.
bool for_each_extension(std::span<const WalkTrack> tracks, std::size_t n, const LeafVisitor& visit,
                        const PrefixFilter& filter = {});

/// Every block u of length n with len_low <= |I_{parent u}| / |I_parent| <= len_high,
/// in ascending order of the child's left endpoint. The visitor returns false
/// to stop.
void for_each_relative_cylinder(const CfWord& parent, std::size_t n, const Rational& len_low,
                                const Rational& len_high, const std::function<bool(const CfWord&)>& visit);

std::vector<CfWord> enumerate_relative_cylinders(const CfWord& parent, std::size_t n, const Rational& len_low,
                                                 const Rational& len_high);

/// Smallest order-m cylinder (one cell or two consecutive cells) containing iv.
/// Requires |iv| < b^{-m}.
BaryCylinder enclosing_bary(const Interval& iv, unsigned base, long order);

/// Longest word shared by the greedy base-b expansions of every point of iv.
BaryWord bary_digits_common_prefix(const Interval& iv, unsigned base);

/// The order-m cell index as a fixed-length word of `digits` base-b digits.
BaryWord bary_digits_of_index(const BigInt& index, unsigned base, long digits);

}  // namespace cfnormal
