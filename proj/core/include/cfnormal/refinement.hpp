#pragma once

// t-bricks, paired bricks for x and y = 1/x - 1, and the verified search for
// one digit block that refines both bricks at once.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfnormal/certified.hpp"
#include "cfnormal/cylinders.hpp"
#include "cfnormal/rational.hpp"

namespace cfnormal {

/// A cf cylinder together with one b-ary cylinder (one or two cells) per
/// base 2 .. t that contains it.
struct Brick {
  int t = 2;
  CfCylinder cf;
  std::map<unsigned, BaryCylinder> bary;

  friend bool operator==(const Brick& a, const Brick& b) {
    return a.t == b.t && a.cf.word == b.cf.word && a.bary == b.bary;
  }
};

struct BrickPair {
  Brick x;
  Brick y;
  /// Set by extend_base and cleared by the next refinement.
  bool extended = false;

  int t() const { return x.t; }
  friend bool operator==(const BrickPair&, const BrickPair&) = default;
};

struct InvariantCheck {
  std::string name;
  bool passed = false;
  /// Exact quantity behind the check; its meaning depends on the check
  /// (containment gap, length ratio, slack ratio). Zero for structural checks.
  Rational margin;
};

struct Diagnostics {
  std::vector<InvariantCheck> checks;

  bool all_passed() const;
  std::vector<std::string> failures() const;
  void add(std::string name, bool passed, Rational margin = Rational(0));
  void append(const Diagnostics& other);
};

struct RefinementOptions {
  Rational slack{64};
  long C = 1;
  int precision_bits = 128;
  long n_ceiling = 64;
};

enum class SearchMode { search, schedule };

std::string to_string(SearchMode mode);
SearchMode parse_search_mode(const std::string& text);

/// The pair fixed by the first cf digit: x in (1/2, 1), y in (0, 1).
BrickPair initial_pair();

/// Every Brick and BrickPair invariant, checked exactly. The slack check
/// passes when |cf| * slack * b * e^(4C) >= |bary(b)|; its margin is the
/// ratio |bary(b)| / (|cf| * slack * b), which must not exceed e^(4C).
Diagnostics validate_brick_pair(const BrickPair& pair, const Rational& slack, long C = 1);

struct BaryExtension {
  /// New digits of each constituent cell of the refined cylinder.
  std::vector<BaryWord> x;
  std::vector<BaryWord> y;
};

struct RefinementMargins {
  Rational cf_discrepancy;    // min over patterns of (threshold - upper enclosure of D)
  Rational bary_discrepancy;  // min over bases and cells of (epsilon - D)
  Rational x_relative_length;
  Rational y_relative_length;
  CertifiedReal window_low;   // e^(-2nL-2C) / 4
  CertifiedReal window_high;  // 2 e^(-2nL+2C)
  Rational x_slack;           // max over bases of |bary| / (|cf| slack b)
  Rational y_slack;

  friend bool operator==(const RefinementMargins&, const RefinementMargins&) = default;
};

struct RefinementOutcome {
  CfWord block;
  BrickPair new_pair;
  long n_used = 0;
  std::map<unsigned, BaryExtension> per_base_extensions;
  RefinementMargins margins;
};

struct SearchStats {
  long n = 0;
  std::string skipped;  // reason the order was not searched, if any
  std::uint64_t leaves = 0;
  std::uint64_t cf_pruned = 0;
  std::uint64_t window_rejects = 0;
  std::uint64_t bary_rejects = 0;
  std::uint64_t width_rejects = 0;
  std::uint64_t slack_rejects = 0;

  std::string str() const;
};

class RefinementError : public std::runtime_error {
 public:
  RefinementError(const std::string& what, std::vector<SearchStats> stats);
  const std::vector<SearchStats>& stats() const { return stats_; }

 private:
  std::vector<SearchStats> stats_;
};

/// The discrepancy threshold epsilon - (t-1)/n is non-positive for every n.
class UnsatisfiableCondition : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Every word of length 1..t with digits in 1..t, shortest first.
std::vector<CfWord> pattern_set(int t);

/// Leftmost valid block for the smallest feasible n. In schedule mode n is
/// n_hint; in search mode n runs from n_hint to options.n_ceiling. When
/// t_new = pair.t + 1 the new pair is extended by base t_new afterwards.
RefinementOutcome refine_pair(const BrickPair& pair, int t_new, const Rational& epsilon, SearchMode mode, long n_hint,
                              const RefinementOptions& options = {});

/// Adds base t+1 cylinders of the largest order m with |y.cf| <= (t+1)^-m.
BrickPair extend_base(const BrickPair& pair);

/// Recomputes every refinement condition of `outcome` against `old_pair`
/// from scratch through the discrepancy and cylinder modules.
Diagnostics verify_refinement(const BrickPair& old_pair, const RefinementOutcome& outcome, const Rational& epsilon,
                              const RefinementOptions& options = {});

/// b-ary order m_b = max { m : 2 e^(-2nL+2C) / D <= b^-m } for parent
/// reciprocal length D.
long refinement_order(const BigInt& parent_reciprocal, unsigned base, long n, long C, int precision_bits);

/// The digits each cell of `child` adds below a parent cylinder of order
/// `parent_order`: the cell index mod b^(m - k), written with m - k digits.
std::vector<BaryWord> refinement_digits(const BaryCylinder& child, long parent_order);

/// Brick with its cf cylinder replaced by the one of `word`, bary unchanged.
Brick with_word(const Brick& brick, const CfWord& word);

}  // namespace cfnormal
