#pragma once

// Pattern discrepancy of cf words against the Gauss measure, simple b-ary
// discrepancy, and evaluators for the two concatenation lemmas.
//
// Occurrences are counted only for windows lying entirely inside the first
// n digits: for a pattern of length k the start index runs over 1 .. n-k+1.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cfnormal/certified.hpp"
#include "cfnormal/cylinders.hpp"
#include "cfnormal/rational.hpp"

namespace cfnormal {

struct CfDiscrepancyResult {
  CfWord pattern;
  std::size_t prefix_length = 0;
  std::size_t occurrence_count = 0;
  CertifiedReal value;  // encloses |count / n - mu(I_pattern)|
};

struct BaryDiscrepancyResult {
  unsigned base = 2;
  std::size_t prefix_length = 0;
  std::vector<Rational> per_digit;  // |count_v / n - 1/b| for v = 0 .. b-1
  Rational value;                   // maximum over digits
};

/// Occurrences of `pattern` starting in the first n - k + 1 positions of
/// `text[0, n)`.
std::size_t count_occurrences(std::span<const Digit> text, std::span<const Digit> pattern);

/// Occurrence counts for every prefix length m = 0 .. |text|.
std::vector<std::size_t> prefix_occurrence_counts(std::span<const Digit> text, std::span<const Digit> pattern);

/// mu(I_pattern) enclosure.
CertifiedReal pattern_measure(const CfWord& pattern, int precision_bits = 64);

/// |count/n - mu| from an enclosure of mu.
CertifiedReal deviation_from(const Rational& frequency, const CertifiedReal& mu);

CfDiscrepancyResult cf_discrepancy(const CfWord& w, const CfWord& v, int precision_bits = 64);
/// Discrepancy over the first n digits of w.
CfDiscrepancyResult cf_discrepancy_prefix(std::span<const Digit> w, std::size_t n, const CfWord& v,
                                          int precision_bits = 64);

/// Certified test |count/n - mu(I_v)| < threshold, refining mu until decided.
bool cf_discrepancy_below(std::size_t count, std::size_t n, const CfWord& v, const Rational& threshold);

BaryDiscrepancyResult bary_discrepancy(std::span<const std::uint32_t> w, unsigned base);
/// max_v |count_v/n - 1/b| over the first n digits.
Rational bary_discrepancy_value(std::span<const std::uint32_t> w, std::size_t n, unsigned base);

struct ImplicationCheck {
  std::string item;
  bool hypothesis = false;
  bool conclusion = false;

  bool holds() const { return !hypothesis || conclusion; }
};

struct ConcatReport {
  std::vector<ImplicationCheck> items;

  bool all_hold() const;
  const ImplicationCheck& item(const std::string& name) const;
};

/// Items 1, 2a, 2b of the cf concatenation lemma on concrete words.
ConcatReport check_cf_concat(const CfWord& w, const CfWord& u, const CfWord& v, const Rational& epsilon);

/// Items 1, 2a, 2b of the b-ary concatenation lemma on concrete words.
ConcatReport check_bary_concat(std::span<const std::uint32_t> u, std::span<const std::uint32_t> v, unsigned base,
                               const Rational& epsilon);

}  // namespace cfnormal
