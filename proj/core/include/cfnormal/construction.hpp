#pragma once

// The step driver: starts from the pair fixed by the first digit, refines it
// once per step, streams the digits that become determined and persists the
// whole run as a JSON checkpoint.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cfnormal/measures.hpp"
#include "cfnormal/refinement.hpp"

namespace cfnormal {

/// Schedule table row: from step `from_step` on, use t and epsilon.
struct ScheduleEntry {
  long from_step = 1;
  int t = 2;
  Rational epsilon;

  friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

struct ConstructionConfig {
  SearchMode mode = SearchMode::search;
  long n_start = 5;
  BoundConstants constants;
  Rational slack{64};
  int precision_bits = 128;
  long n_ceiling = 64;
  std::optional<std::vector<ScheduleEntry>> schedule_override;

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
  RefinementOptions refinement_options() const;
  /// t and epsilon for step s, honouring the override table.
  Schedule schedule_for(long s) const;
  /// First step on which t reaches `t`.
  BigInt first_step_with(int t) const;
  /// FNV-1a 64 of the canonical JSON form.
  std::uint64_t hash() const;

  friend bool operator==(const ConstructionConfig&, const ConstructionConfig&) = default;
};

/// Rows "from_step t [epsilon]"; epsilon defaults to 1/t, '#' starts a comment.
std::vector<ScheduleEntry> parse_schedule_override(const std::string& text);

enum class Target { x, one_over_x };

std::string to_string(Target target);
Target parse_target(const std::string& text);

struct StepRecord {
  long s = 0;  // the step number after this refinement
  int t = 2;
  Rational epsilon;
  long n_used = 0;
  RefinementMargins margins;
  std::map<unsigned, BaryCylinder> x_bary;
  std::map<unsigned, BaryCylinder> y_bary;

  friend bool operator==(const StepRecord& a, const StepRecord& b);
};

struct ConstructionState {
  long step = 1;
  BrickPair pair;
  std::vector<Digit> emitted_cf;
  std::map<std::pair<Target, unsigned>, BaryWord> emitted_bary;
  ConstructionConfig config;
  std::vector<StepRecord> history;

  friend bool operator==(const ConstructionState& a, const ConstructionState& b);
};

class StepError : public std::runtime_error {
 public:
  StepError(long step, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ConstructionState init(const ConstructionConfig& config = {});
ConstructionState step(const ConstructionState& state);
/// init followed by `steps` calls of step.
ConstructionState run(const ConstructionConfig& config, long steps);
/// Continues an existing state until state.step = target_step.
ConstructionState resume(ConstructionState state, long target_step);

/// Invariants of a state: brick pair, stream/word agreement, prefix relation
/// of the emitted b-ary digits.
Diagnostics validate_state(const ConstructionState& state);

std::string checkpoint(const ConstructionState& state);

enum class RestoreCheck {
  verify,  // rebuild every step and re-verify its refinement conditions
  replay   // additionally re-run the search and require the same block
};

ConstructionState restore(const std::string& document, RestoreCheck check = RestoreCheck::verify);

/// cf digits after the integer part: x = [0; 1, u...], 1/x = [1; u...].
/// The 1/x stream starts with its integer part 1.
std::vector<Digit> emit_cf(const ConstructionState& state, Target target);
/// Fractional base-b digits; the integer part is 0 for x and 1 for 1/x.
BaryWord emit_bary(const ConstructionState& state, Target target, unsigned base);

/// Newline-separated decimal digits, at most `count` of them.
std::string format_cf_stream(const std::vector<Digit>& digits, std::size_t count);
/// "0.1011..." for x and "1.0110..." for 1/x; comma-separated digits above base 10.
std::string format_bary_stream(Target target, unsigned base, const BaryWord& digits, std::size_t count);

}  // namespace cfnormal
