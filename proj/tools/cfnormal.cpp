// cfnormal: drives the construction, emits digit streams, verifies
// checkpoints, analyses digit files and evaluates the closed-form bounds.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cfnormal/construction.hpp"
#include "cfnormal/discrepancy.hpp"
#include "cfnormal/measures.hpp"

namespace {

using namespace cfnormal;

constexpr const char* kDefaultCheckpoint = "cfnormal-checkpoint.json";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << text;
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

// "cf" or "base:B".
struct Kind {
  bool cf = true;
  unsigned base = 0;
};

Kind parse_kind(const std::string& text) {
  if (text == "cf") return {};
  const std::string prefix = "base:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string b = text.substr(prefix.size());
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(b, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == b.size() && v >= 2 && v <= 1u << 16) return {false, static_cast<unsigned>(v)};
  }
  throw std::invalid_argument("kind must be 'cf' or 'base:B' with B >= 2, got '" + text + "'");
}

// Digits from emit output or any text: newline/space/comma separated
// integers; a leading "0." or "1." is dropped for base-b streams.
std::vector<Digit> parse_cf_digits(const std::string& text) {
  std::vector<Digit> out;
  std::istringstream in(text);
  for (std::string tok; in >> tok;) {
    const BigInt v = parse_bigint(tok);
    if (v < 1 || !v.fits_ulong_p()) throw std::invalid_argument("cf digit out of range: " + tok);
    out.push_back(v.get_ui());
  }
  return out;
}

BaryWord parse_bary_digits(std::string text, unsigned base) {
  const auto dot = text.find('.');
  if (dot != std::string::npos) text = text.substr(dot + 1);
  BaryWord out;
  const bool separated = text.find(',') != std::string::npos || base > 10;
  if (separated) {
    for (char& c : text) {
      if (c == ',') c = ' ';
    }
    std::istringstream in(text);
    for (unsigned long v; in >> v;) {
      if (v >= base) throw std::invalid_argument("digit " + std::to_string(v) + " out of range for base " + std::to_string(base));
      out.push_back(static_cast<std::uint32_t>(v));
    }
    if (!in.eof()) throw std::invalid_argument("malformed digit list");
    return out;
  }
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c < '0' || c > '9' || static_cast<unsigned>(c - '0') >= base) {
      throw std::invalid_argument(std::string("invalid digit '") + c + "' for base " + std::to_string(base));
    }
    out.push_back(static_cast<std::uint32_t>(c - '0'));
  }
  return out;
}

// One pattern per line: "1 2", "1,2" or "[1,2]"; '#' starts a comment.
std::vector<CfWord> parse_patterns(const std::string& text) {
  std::vector<CfWord> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    line = line.substr(0, line.find('#'));
    for (char& c : line) {
      if (c == ',' || c == '[' || c == ']') c = ' ';
    }
    const std::vector<Digit> d = parse_cf_digits(line);
    if (!d.empty()) out.emplace_back(d);
  }
  return out;
}

std::string pattern_label(const CfWord& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? " " : "") + std::to_string(w[i]);
  return s;
}

int cmd_construct(long steps, const ConstructionConfig& config, const std::string& path, bool resume_run,
                  bool quiet) {
  ConstructionState s;
  if (resume_run && std::filesystem::exists(path)) {
    s = restore(read_file(path));
    if (s.config != config) throw std::invalid_argument("configuration differs from the checkpoint's");
  } else {
    s = init(config);
  }
  const long target = s.step + steps;
  while (s.step < target) {
    s = step(s);
    write_file(path, checkpoint(s));
    if (!quiet) {
      const StepRecord& r = s.history.back();
      std::cout << "step " << r.s << " t=" << r.t << " epsilon=" << r.epsilon.str() << " n=" << r.n_used
                << " cf_digits=" << s.emitted_cf.size() << " bits=" << emit_bary(s, Target::x, 2).size() << "\n";
    }
  }
  if (steps == 0) write_file(path, checkpoint(s));
  std::cout << "checkpoint " << path << " step " << s.step << "\n";
  return 0;
}

int cmd_emit(const std::string& path, Target target, const Kind& kind, std::size_t count) {
  const ConstructionState s = restore(read_file(path));
  std::size_t have = 0;
  if (kind.cf) {
    const auto digits = emit_cf(s, target);
    have = digits.size();
    std::cout << format_cf_stream(digits, count);
  } else {
    const BaryWord digits = emit_bary(s, target, kind.base);
    have = digits.size();
    std::cout << format_bary_stream(target, kind.base, digits, count) << "\n";
  }
  if (have < count) std::cerr << "only " << have << " digits are determined at step " << s.step << "\n";
  return 0;
}

int cmd_verify(const std::string& path, bool replay) {
  const ConstructionState s = restore(read_file(path), replay ? RestoreCheck::replay : RestoreCheck::verify);
  std::cout << "OK step " << s.step << " cf_digits " << s.emitted_cf.size() << " t " << s.pair.t()
            << (replay ? " replayed" : " verified") << "\n";
  return 0;
}

int cmd_analyze_cf(const std::string& digits_path, const std::string& patterns_path, std::size_t every,
                   int digits) {
  const std::vector<Digit> text = parse_cf_digits(read_file(digits_path));
  const std::vector<CfWord> patterns = parse_patterns(read_file(patterns_path));
  if (text.empty()) throw std::invalid_argument("digit file is empty");
  if (patterns.empty()) throw std::invalid_argument("pattern file lists no patterns");
  std::cout << "pattern,n,count,discrepancy_lower,discrepancy_upper\n";
  for (const CfWord& v : patterns) {
    std::vector<std::size_t> lengths;
    if (every > 0) {
      for (std::size_t n = every; n < text.size(); n += every) lengths.push_back(n);
    }
    lengths.push_back(text.size());
    for (std::size_t n : lengths) {
      const CfDiscrepancyResult r = cf_discrepancy_prefix(text, n, v);
      std::cout << pattern_label(v) << "," << n << "," << r.occurrence_count << ","
                << r.value.lower.decimal(digits, false) << "," << r.value.upper.decimal(digits, true) << "\n";
    }
  }
  return 0;
}

int cmd_analyze_bary(const std::string& digits_path, unsigned base, std::size_t every, int digits) {
  const BaryWord text = parse_bary_digits(read_file(digits_path), base);
  if (text.empty()) throw std::invalid_argument("digit file is empty");
  std::cout << "pattern,n,count,discrepancy_lower,discrepancy_upper\n";
  std::vector<std::size_t> lengths;
  if (every > 0) {
    for (std::size_t n = every; n < text.size(); n += every) lengths.push_back(n);
  }
  lengths.push_back(text.size());
  for (unsigned d = 0; d < base; ++d) {
    for (std::size_t n : lengths) {
      std::size_t c = 0;
      for (std::size_t i = 0; i < n; ++i) c += text[i] == d ? 1 : 0;
      const Rational dev = (Rational(BigInt(c), BigInt(n)) - Rational(BigInt(1), BigInt(base))).abs();
      std::cout << d << "," << n << "," << c << "," << dev.decimal(digits, false) << "," << dev.decimal(digits, true)
                << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constructs a number x such that x and 1/x are continued-fraction normal and absolutely normal"};
  app.require_subcommand(1);

  // construct
  auto* construct = app.add_subcommand("construct", "Run refinement steps and write a checkpoint");
  long steps = 0;
  std::string mode_text = "search";
  ConstructionConfig config;
  std::string slack_text = "64";
  std::string checkpoint_path = kDefaultCheckpoint;
  std::string override_path;
  bool resume_run = false, quiet = false;
  construct->add_option("--steps", steps, "Number of steps to add")->required()->check(CLI::NonNegativeNumber);
  construct->add_option("--mode", mode_text, "Block length policy")->check(CLI::IsMember({"search", "schedule"}));
  construct->add_option("--n-start", config.n_start, "n_start of the n_0(s) schedule")->check(CLI::PositiveNumber);
  construct->add_option("--slack", slack_text, "Slack factor of the length coupling (rational)");
  construct->add_option("--precision", config.precision_bits, "Working precision in bits");
  construct->add_option("--n-ceiling", config.n_ceiling, "Largest block length tried in search mode");
  construct->add_option("--checkpoint", checkpoint_path, "Checkpoint file");
  construct->add_option("--schedule-override", override_path, "Table of 'from_step t [epsilon]' rows")
      ->check(CLI::ExistingFile);
  construct->add_flag("--resume", resume_run, "Continue from the checkpoint if it exists");
  construct->add_flag("--quiet", quiet, "Only print the final line");

  // emit
  auto* emit = app.add_subcommand("emit", "Print a digit stream from a checkpoint");
  std::string target_text = "x", kind_text = "cf";
  std::size_t count = 100;
  std::string emit_path = kDefaultCheckpoint;
  emit->add_option("--target", target_text, "x or inv")->check(CLI::IsMember({"x", "inv"}));
  emit->add_option("--kind", kind_text, "cf or base:B");
  emit->add_option("--count", count, "Maximum number of digits");
  emit->add_option("--checkpoint", emit_path, "Checkpoint file")->check(CLI::ExistingFile);

  // verify
  auto* verify = app.add_subcommand("verify", "Rebuild a checkpoint and re-run every invariant");
  std::string verify_path = kDefaultCheckpoint;
  bool replay = false;
  verify->add_option("--checkpoint", verify_path, "Checkpoint file")->check(CLI::ExistingFile);
  verify->add_flag("--replay", replay, "Also re-run the block search of every step");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Discrepancy table of a digit file as CSV");
  std::string digits_path, patterns_path;
  unsigned analyze_base = 0;
  bool analyze_cf = false;
  std::size_t every = 0;
  int analyze_digits = 20;
  analyze->add_option("--digits", digits_path, "Digit file")->required()->check(CLI::ExistingFile);
  auto* base_opt = analyze->add_option("--base", analyze_base, "Base of a b-ary digit file")->check(CLI::Range(2u, 1u << 16));
  auto* cf_opt = analyze->add_flag("--cf", analyze_cf, "The digit file holds cf digits");
  auto* patterns_opt =
      analyze->add_option("--patterns", patterns_path, "cf patterns, one per line")->check(CLI::ExistingFile);
  analyze->add_option("--every", every, "Also report every k-th prefix length");
  analyze->add_option("--decimals", analyze_digits, "Decimal places of the enclosures")->check(CLI::Range(1, 200));
  base_opt->excludes(cf_opt);
  cf_opt->needs(patterns_opt);

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Certified values of the closed-form bounds");
  bounds->require_subcommand(1);
  int bound_bits = 128, bound_digits = 20;
  bounds->add_option("--precision", bound_bits, "Precision in bits")->check(CLI::Range(8, kMaxPrecisionBits));
  bounds->add_option("--decimals", bound_digits, "Decimal places")->check(CLI::Range(1, 200));
  std::string delta_text = "1/2", eps_text = "1/2", s_text = "1";
  long n = 1, k = 2, C = 1, n_start = 5;
  unsigned base = 2;
  auto* kpw = bounds->add_subcommand("kpw", "6 M e^(-delta^2 n / 2M)");
  kpw->add_option("--delta", delta_text)->required();
  kpw->add_option("--n", n)->required();
  kpw->add_option("--k", k, "Pattern length");
  auto* bern = bounds->add_subcommand("bernstein", "2 b^(n+1) e^(-b delta^2 n / 6)");
  bern->add_option("--base", base)->required();
  bern->add_option("--delta", delta_text)->required();
  bern->add_option("--n", n)->required();
  auto* aofb = bounds->add_subcommand("aofb", "A(b) = 384 e^(4C) b^2 e^(b eps^2 (C/(3 log b) + 1/2))");
  aofb->add_option("--base", base)->required();
  aofb->add_option("--epsilon", eps_text);
  aofb->add_option("--C", C);
  auto* sched = bounds->add_subcommand("schedule", "t(s), epsilon(s), n_0(s)");
  sched->add_option("--s", s_text)->required();
  sched->add_option("--n-start", n_start);
  auto* nbw = bounds->add_subcommand("nbwindow", "Range of b-ary digits added by one step of length n");
  nbw->add_option("--n", n)->required();
  nbw->add_option("--base", base)->required();
  nbw->add_option("--C", C);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*construct) {
      config.mode = parse_search_mode(mode_text);
      config.slack = Rational::parse(slack_text);
      if (!override_path.empty()) config.schedule_override = parse_schedule_override(read_file(override_path));
      config.validate();
      return cmd_construct(steps, config, checkpoint_path, resume_run, quiet);
    }
    if (*emit) return cmd_emit(emit_path, parse_target(target_text), parse_kind(kind_text), count);
    if (*verify) return cmd_verify(verify_path, replay);
    if (*analyze) {
      if (analyze_cf) return cmd_analyze_cf(digits_path, patterns_path, every, analyze_digits);
      if (analyze_base == 0) throw std::invalid_argument("analyze needs --base B or --cf --patterns FILE");
      return cmd_analyze_bary(digits_path, analyze_base, every, analyze_digits);
    }
    if (*kpw) {
      const Rational delta = Rational::parse(delta_text);
      std::cout << "M " << deviation_M(delta, k) << "\n";
      std::cout << "kpw " << kpw_bound(delta, n, k, bound_bits).str(bound_digits) << "\n";
    } else if (*bern) {
      const Rational delta = Rational::parse(delta_text);
      std::cout << "bernstein " << bernstein_bound(base, delta, n, bound_bits).str(bound_digits) << "\n";
    } else if (*aofb) {
      std::cout << "aofb " << a_of_b(base, Rational::parse(eps_text), C, bound_bits).str(bound_digits) << "\n";
    } else if (*sched) {
      const Schedule sc = schedule(parse_bigint(s_text), n_start);
      std::cout << "s " << to_string(sc.s) << "\nt " << sc.t << "\nepsilon " << sc.epsilon.str() << "\nn0 " << sc.n0
                << "\nn_start " << sc.n_start << "\n";
    } else if (*nbw) {
      const auto [lo, hi] = nb_window(n, base, C, bound_bits);
      std::cout << "nb_low " << lo.str(bound_digits) << "\nnb_high " << hi.str(bound_digits) << "\n";
    }
    return 0;
  } catch (const CheckpointError& e) {
    std::cerr << "checkpoint error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
