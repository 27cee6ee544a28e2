#include "cfnormal/refinement.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "cfnormal/discrepancy.hpp"
#include "cfnormal/measures.hpp"

namespace cfnormal {

namespace {

BigInt ipow(unsigned base, long exponent) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, static_cast<unsigned long>(exponent));
  return r;
}

Rational ratio(std::size_t a, std::size_t b) {
  return Rational(BigInt(static_cast<unsigned long>(a)), BigInt(static_cast<unsigned long>(b)));
}

std::string base_tag(const std::string& brick, const std::string& what, unsigned b) {
  return brick + "." + what + "[" + std::to_string(b) + "]";
}

// |bary| / (|cf| slack b); the slack inequality holds when this is <= e^(4C).
Rational slack_ratio(const CfCylinder& cf, const BaryCylinder& bary, const Rational& slack) {
  return bary.length() / (cf.length() * slack * Rational(static_cast<long>(bary.base)));
}

class SlackTest {
 public:
  explicit SlackTest(long C) : C_(C), e4c_(exp_integer(4 * C, 64)) {}

  bool operator()(const Rational& r) const {
    if (r <= e4c_.lower) return true;
    if (r > e4c_.upper) return false;
    const long k = 4 * C_;
    return decide([k](int bits) { return exp_integer(k, bits); }, r) == std::strong_ordering::greater;
  }

 private:
  long C_;
  CertifiedReal e4c_;
};

// Membership of a child reciprocal length in the window of a parent:
// D_p * e^(2nL-2C)/2 <= D_c <= D_p * 4 e^(2nL+2C).
class WindowTest {
 public:
  WindowTest(long n, long C, int bits) : n_(n), C_(C), bits_(bits), f_(window_factors(n, C, bits)) {}

  const WindowFactors& factors() const { return f_; }

  bool operator()(const BigInt& d_parent, const BigInt& d_child) const {
    if (auto r = test(f_, d_parent, d_child)) return *r;
    for (long bits = 2L * bits_; bits <= kMaxPrecisionBits; bits *= 2) {
      if (auto r = test(window_factors(n_, C_, static_cast<int>(bits)), d_parent, d_child)) return *r;
    }
    throw PrecisionExhausted("window membership could not be decided");
  }

 private:
  static std::optional<bool> test(const WindowFactors& f, const BigInt& d_parent, const BigInt& d_child) {
    const Rational dp(d_parent);
    const Rational dc(d_child);
    if (dc > dp * f.lower_inverse.upper || dc < dp * f.upper_inverse.lower) return false;
    if (dc <= dp * f.lower_inverse.lower && dc >= dp * f.upper_inverse.upper) return true;
    return std::nullopt;
  }

  long n_;
  long C_;
  int bits_;
  WindowFactors f_;
};

std::optional<BaryCylinder> widen(const BaryCylinder& c, const Interval& bound) {
  BaryCylinder w = c;
  w.width_units = 2;
  if (w.end_index() <= w.scale() && bound.contains(w.interval())) return w;
  w.start_index = c.start_index - 1;
  if (w.start_index >= 0 && bound.contains(w.interval())) return w;
  return std::nullopt;
}

// Gives both cylinders the larger width, widening the narrower one inside its bound.
bool harmonize(BaryCylinder& a, const Interval& bound_a, BaryCylinder& b, const Interval& bound_b) {
  if (a.width_units == b.width_units) return true;
  BaryCylinder& narrow = a.width_units < b.width_units ? a : b;
  const Interval& bound = a.width_units < b.width_units ? bound_a : bound_b;
  auto w = widen(narrow, bound);
  if (!w) return false;
  narrow = *w;
  return true;
}

struct PatternTable {
  std::vector<CfWord> patterns;
  std::unordered_map<std::uint64_t, std::size_t> index;
  int t = 2;

  explicit PatternTable(int t_) : patterns(pattern_set(t_)), t(t_) {
    for (std::size_t i = 0; i < patterns.size(); ++i) index.emplace(code(patterns[i].digits()), i);
  }

  std::uint64_t code(std::span<const Digit> w) const {
    std::uint64_t c = 0;
    for (Digit d : w) c = c * static_cast<std::uint64_t>(t + 1) + d;
    return c;
  }
};

// Searches one block length n.
class BlockSearch {
 public:
  BlockSearch(const BrickPair& pair, const Rational& epsilon, long n, const RefinementOptions& options,
              const PatternTable& table, SearchStats& stats)
      : pair_(pair),
        epsilon_(epsilon),
        n_(n),
        options_(options),
        table_(table),
        stats_(stats),
        slack_(options.C) {}

  std::optional<RefinementOutcome> run() {
    const int t = pair_.t();
    const Rational threshold = epsilon_ - ratio(static_cast<std::size_t>(t - 1), static_cast<std::size_t>(n_));
    if (threshold.sign() <= 0) {
      stats_.skipped = "discrepancy threshold is not positive";
      return std::nullopt;
    }
    if (!allowed_counts(threshold)) {
      stats_.skipped = "some pattern frequency cannot meet the threshold";
      return std::nullopt;
    }

    const BigInt dx = pair_.x.cf.reciprocal_length();
    const BigInt dy = pair_.y.cf.reciprocal_length();
    const int bits = std::max<int>(options_.precision_bits, static_cast<int>(mpz_sizeinbase(dx.get_mpz_t(), 2)) + 64);
    if (bits > kMaxPrecisionBits) throw PrecisionExhausted("parent cylinder exceeds the precision limit");

    for (unsigned b = 2; b <= static_cast<unsigned>(t); ++b) {
      const long m = refinement_order(dy, b, n_, options_.C, bits);
      if (m <= pair_.x.bary.at(b).order || m <= pair_.y.bary.at(b).order) {
        stats_.skipped = "b-ary order does not grow in base " + std::to_string(b);
        return std::nullopt;
      }
      orders_[b] = m;
    }

    window_.emplace(n_, options_.C, bits);
    const auto& f = window_->factors();
    const WalkTrack tracks[2] = {
        {track_state(pair_.x.cf), (Rational(dx) * f.lower_inverse.upper).floor()},
        {track_state(pair_.y.cf), (Rational(dy) * f.lower_inverse.upper).floor()},
    };

    counts_.assign(static_cast<std::size_t>(n_) + 1, std::vector<long>(table_.patterns.size(), 0));
    for_each_extension(
        tracks, static_cast<std::size_t>(n_),
        [&](std::span<const Digit> block, std::span<const TrackState> leaves) { return visit(block, leaves); },
        [&](std::span<const Digit> prefix) { return filter(prefix); });
    return std::move(found_);
  }

 private:
  // Integer count ranges [lo, hi] meeting |c/n - mu| < threshold; false if one is empty.
  bool allowed_counts(const Rational& threshold) {
    for (const auto& v : table_.patterns) {
      const long windows = std::max(0L, n_ - static_cast<long>(v.size()) + 1);
      long lo = -1;
      long hi = -1;
      for (long c = 0; c <= windows; ++c) {
        if (cf_discrepancy_below(static_cast<std::size_t>(c), static_cast<std::size_t>(n_), v, threshold)) {
          if (lo < 0) lo = c;
          hi = c;
        }
      }
      if (lo < 0) return false;
      allowed_.emplace_back(lo, hi);
    }
    return true;
  }

  bool filter(std::span<const Digit> prefix) {
    const std::size_t p = prefix.size();
    auto& cur = counts_[p];
    cur = counts_[p - 1];
    const std::size_t max_k = std::min<std::size_t>(static_cast<std::size_t>(table_.t), p);
    for (std::size_t k = 1; k <= max_k; ++k) {
      if (prefix[p - k] > static_cast<Digit>(table_.t)) break;
      ++cur[table_.index.at(table_.code(prefix.subspan(p - k, k)))];
    }
    for (std::size_t i = 0; i < cur.size(); ++i) {
      const long k = static_cast<long>(table_.patterns[i].size());
      const long windows = std::max(0L, n_ - k + 1);
      const long done = std::max(0L, static_cast<long>(p) - k + 1);
      const long rest = windows - std::min(windows, done);
      if (cur[i] > allowed_[i].second || cur[i] + rest < allowed_[i].first) {
        ++stats_.cf_pruned;
        return false;
      }
    }
    return true;
  }

  bool visit(std::span<const Digit> block, std::span<const TrackState> leaves) {
    ++stats_.leaves;
    const auto& w = *window_;
    if (!w(pair_.x.cf.reciprocal_length(), leaves[0].reciprocal_length()) ||
        !w(pair_.y.cf.reciprocal_length(), leaves[1].reciprocal_length())) {
      ++stats_.window_rejects;
      return true;
    }

    const CfWord u(std::vector<Digit>(block.begin(), block.end()));
    RefinementOutcome out;
    out.block = u;
    out.n_used = n_;
    out.new_pair.x = with_word(pair_.x, pair_.x.cf.word.concat(u));
    out.new_pair.y = with_word(pair_.y, pair_.y.cf.word.concat(u));
    RefinementMargins& mg = out.margins;
    mg.bary_discrepancy = epsilon_;
    mg.x_slack = Rational(0);
    mg.y_slack = Rational(0);

    for (const auto& [b, m] : orders_) {
      const BaryCylinder& sx = pair_.x.bary.at(b);
      const BaryCylinder& sy = pair_.y.bary.at(b);
      BaryCylinder tx = enclosing_bary(out.new_pair.x.cf.interval, b, m);
      BaryCylinder ty = enclosing_bary(out.new_pair.y.cf.interval, b, m);
      if (!harmonize(tx, sx.interval(), ty, sy.interval()) || !sx.interval().contains(tx.interval()) ||
          !sy.interval().contains(ty.interval())) {
        ++stats_.width_rejects;
        return true;
      }
      BaryExtension ext{refinement_digits(tx, sx.order), refinement_digits(ty, sy.order)};
      for (const auto* words : {&ext.x, &ext.y}) {
        for (const auto& word : *words) {
          const Rational d = bary_discrepancy(word, b).value;
          if (!(d < epsilon_)) {
            ++stats_.bary_rejects;
            return true;
          }
          mg.bary_discrepancy = std::min(mg.bary_discrepancy, epsilon_ - d);
        }
      }
      const Rational rx = slack_ratio(out.new_pair.x.cf, tx, options_.slack);
      const Rational ry = slack_ratio(out.new_pair.y.cf, ty, options_.slack);
      if (!slack_(rx) || !slack_(ry)) {
        ++stats_.slack_rejects;
        return true;
      }
      mg.x_slack = std::max(mg.x_slack, rx);
      mg.y_slack = std::max(mg.y_slack, ry);
      out.new_pair.x.bary[b] = tx;
      out.new_pair.y.bary[b] = ty;
      out.per_base_extensions.emplace(b, std::move(ext));
    }

    const Rational threshold = epsilon_ - ratio(static_cast<std::size_t>(pair_.t() - 1), static_cast<std::size_t>(n_));
    bool first = true;
    for (const auto& v : table_.patterns) {
      const auto r = cf_discrepancy(u, v, options_.precision_bits);
      const Rational gap = threshold - r.value.upper;
      if (first || gap < mg.cf_discrepancy) mg.cf_discrepancy = gap;
      first = false;
    }
    mg.x_relative_length = out.new_pair.x.cf.length() / pair_.x.cf.length();
    mg.y_relative_length = out.new_pair.y.cf.length() / pair_.y.cf.length();
    std::tie(mg.window_low, mg.window_high) = window_relative_bounds(n_, options_.C, 64);
    found_ = std::move(out);
    return false;
  }

  const BrickPair& pair_;
  Rational epsilon_;
  long n_;
  const RefinementOptions& options_;
  const PatternTable& table_;
  SearchStats& stats_;
  SlackTest slack_;
  std::optional<WindowTest> window_;
  std::map<unsigned, long> orders_;
  std::vector<std::pair<long, long>> allowed_;
  std::vector<std::vector<long>> counts_;
  std::optional<RefinementOutcome> found_;
};

}  // namespace

bool Diagnostics::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const InvariantCheck& c) { return c.passed; });
}

std::vector<std::string> Diagnostics::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.passed) out.push_back(c.name);
  }
  return out;
}

void Diagnostics::add(std::string name, bool passed, Rational margin) {
  checks.push_back({std::move(name), passed, std::move(margin)});
}

void Diagnostics::append(const Diagnostics& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

std::string to_string(SearchMode mode) { return mode == SearchMode::search ? "search" : "schedule"; }

SearchMode parse_search_mode(const std::string& text) {
  if (text == "search") return SearchMode::search;
  if (text == "schedule") return SearchMode::schedule;
  throw std::invalid_argument("unknown mode: " + text);
}

std::vector<BaryWord> refinement_digits(const BaryCylinder& child, long parent_order) {
  const long extra = child.order - parent_order;
  if (extra < 0) throw std::invalid_argument("child order below parent order");
  const BigInt mod = ipow(child.base, extra);
  std::vector<BaryWord> out;
  for (BigInt a = child.start_index; a < child.end_index(); ++a) {
    const BigInt low = a % mod;
    out.push_back(bary_digits_of_index(low, child.base, extra));
  }
  return out;
}

Brick with_word(const Brick& brick, const CfWord& word) {
  Brick b = brick;
  b.cf = cf_cylinder(word);
  return b;
}

BrickPair initial_pair() {
  BrickPair p;
  p.x.t = 2;
  p.x.cf = cf_cylinder(CfWord({1}));
  p.x.bary[2] = BaryCylinder{2, 1, 1, 1};
  p.y.t = 2;
  p.y.cf = cf_cylinder(CfWord());
  p.y.bary[2] = BaryCylinder{2, 0, 0, 1};
  return p;
}

Diagnostics validate_brick_pair(const BrickPair& pair, const Rational& slack, long C) {
  Diagnostics d;
  const SlackTest slack_ok(C);
  const int t = pair.x.t;
  d.add("t", t >= 2 && pair.y.t == t, Rational(t));

  for (const auto& [name, brick] : {std::pair<std::string, const Brick*>{"x", &pair.x}, {"y", &pair.y}}) {
    d.add(name + ".cf_consistent", brick->cf.word.empty() || cf_cylinder(brick->cf.word).interval == brick->cf.interval);
    bool bases_ok = brick->bary.size() == static_cast<std::size_t>(std::max(0, t - 1));
    for (unsigned b = 2; b <= static_cast<unsigned>(std::max(t, 2)); ++b) bases_ok = bases_ok && brick->bary.count(b);
    d.add(name + ".bases", bases_ok, Rational(static_cast<long>(brick->bary.size())));
    for (const auto& [b, cyl] : brick->bary) {
      bool formed = cyl.base == b;
      try {
        check_well_formed(cyl);
      } catch (const std::invalid_argument&) {
        formed = false;
      }
      d.add(base_tag(name, "well_formed", b), formed, Rational(cyl.width_units));
      if (!formed) continue;
      const Interval iv = cyl.interval();
      const Rational gap = std::min(brick->cf.interval.left - iv.left, iv.right - brick->cf.interval.right);
      d.add(base_tag(name, "cf_in_bary", b), gap.sign() >= 0, gap);
      const Rational r = slack_ratio(brick->cf, cyl, slack);
      d.add(base_tag(name, "slack", b), slack_ok(r), r);
    }
  }

  CfWord shifted({1});
  shifted.append(pair.y.cf.word.digits());
  d.add("word_shift", pair.x.cf.word == shifted);

  const Rational rel = pair.x.cf.length() / pair.y.cf.length();
  d.add("length_ratio_lower", rel >= Rational(BigInt(1), BigInt(4)), rel);
  d.add("length_ratio_upper", rel <= Rational(1), rel);

  // The starting pair has |sigma_2| = 1/2 against |Sigma_2| = 1; equality is
  // maintained from the first refinement on.
  if (!pair.y.cf.word.empty()) {
    for (const auto& [b, cyl] : pair.x.bary) {
      auto it = pair.y.bary.find(b);
      const bool ok = it != pair.y.bary.end() && cyl.length() == it->second.length();
      d.add(base_tag("pair", "equal_bary_length", b), ok,
            it == pair.y.bary.end() ? Rational(0) : cyl.length() / it->second.length());
    }
  }

  bool coupled = false;
  try {
    coupled = pair.x.cf.interval.reciprocal_image() == pair.y.cf.interval;
  } catch (const std::exception&) {
    coupled = false;
  }
  d.add("reciprocal_coupling", coupled);
  return d;
}

long refinement_order(const BigInt& parent_reciprocal, unsigned base, long n, long C, int precision_bits) {
  const BigInt b(static_cast<unsigned long>(base));
  for (long bits = precision_bits; bits <= kMaxPrecisionBits; bits *= 2) {
    const WindowFactors f = window_factors(n, C, static_cast<int>(bits));
    const Rational lo = Rational(parent_reciprocal) * f.upper_inverse.lower;
    const Rational hi = Rational(parent_reciprocal) * f.upper_inverse.upper;
    // largest m with b^m <= value
    const BigInt fl = lo.floor();
    long m = -1;
    BigInt p = 1;
    while (p <= fl) {
      ++m;
      p *= b;
    }
    if (Rational(p) > hi) return m;
  }
  throw PrecisionExhausted("b-ary order could not be decided");
}

std::vector<CfWord> pattern_set(int t) {
  if (t < 1) throw std::invalid_argument("pattern set needs t >= 1");
  std::vector<CfWord> out;
  std::vector<CfWord> layer{CfWord()};
  for (int k = 1; k <= t; ++k) {
    std::vector<CfWord> next;
    for (const auto& w : layer) {
      for (Digit d = 1; d <= static_cast<Digit>(t); ++d) {
        CfWord v = w;
        v.push_back(d);
        next.push_back(v);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

std::string SearchStats::str() const {
  std::ostringstream os;
  os << "n=" << n;
  if (!skipped.empty()) {
    os << " skipped (" << skipped << ")";
    return os.str();
  }
  os << " leaves=" << leaves << " cf_pruned=" << cf_pruned << " window=" << window_rejects
     << " bary=" << bary_rejects << " width=" << width_rejects << " slack=" << slack_rejects;
  return os.str();
}

RefinementError::RefinementError(const std::string& what, std::vector<SearchStats> stats)
    : std::runtime_error([&] {
        std::string s = what;
        for (const auto& st : stats) s += "; " + st.str();
        return s;
      }()),
      stats_(std::move(stats)) {}

RefinementOutcome refine_pair(const BrickPair& pair, int t_new, const Rational& epsilon, SearchMode mode, long n_hint,
                              const RefinementOptions& options) {
  const int t = pair.t();
  if (t_new != t && t_new != t + 1) throw std::invalid_argument("t may grow by at most 1 per refinement");
  if (epsilon.sign() <= 0) throw UnsatisfiableCondition("epsilon must be positive; strict inequality against 0");
  if (epsilon > Rational(BigInt(1), BigInt(t))) throw std::invalid_argument("epsilon must not exceed 1/t");
  if (n_hint < 1) throw std::invalid_argument("n_hint must be positive");
  const long last = mode == SearchMode::schedule ? n_hint : std::max(n_hint, options.n_ceiling);

  // epsilon - (t-1)/n > 0 needs n > (t-1)/epsilon
  if ((epsilon - ratio(static_cast<std::size_t>(t - 1), static_cast<std::size_t>(last))).sign() <= 0) {
    throw UnsatisfiableCondition("epsilon <= (t-1)/n for every admissible n");
  }

  BrickPair base = pair;
  base.extended = false;
  const PatternTable table(t);
  std::vector<SearchStats> stats;
  for (long n = n_hint; n <= last; ++n) {
    SearchStats st;
    st.n = n;
    stats.push_back(st);
    BlockSearch search(base, epsilon, n, options, table, stats.back());
    if (auto found = search.run()) {
      if (t_new == t + 1) found->new_pair = extend_base(found->new_pair);
      return std::move(*found);
    }
  }
  throw RefinementError(mode == SearchMode::schedule ? "no valid block at the scheduled n"
                                                     : "no valid block up to the n ceiling",
                        std::move(stats));
}

BrickPair extend_base(const BrickPair& pair) {
  if (pair.extended) throw std::logic_error("t may grow by at most 1 per refinement");
  const unsigned b = static_cast<unsigned>(pair.t() + 1);
  const BigInt dy = pair.y.cf.reciprocal_length();
  // largest m with b^m <= D_y, i.e. |y.cf| <= b^-m
  long m = 0;
  BigInt p = b;
  while (p <= dy) {
    ++m;
    p *= b;
  }
  // enclosing needs |y.cf| < b^-m; order 0 is the unit cell
  if (p / b == dy && m > 0) --m;
  const BaryCylinder unit_cell{b, 0, 0, 1};
  BaryCylinder tx = m == 0 ? unit_cell : enclosing_bary(pair.x.cf.interval, b, m);
  BaryCylinder ty = m == 0 ? unit_cell : enclosing_bary(pair.y.cf.interval, b, m);
  const Interval unit(Rational(0), Rational(1));
  if (!harmonize(tx, unit, ty, unit)) throw std::logic_error("no common width for the new base");
  BrickPair out = pair;
  out.x.t = out.y.t = static_cast<int>(b);
  out.x.bary[b] = tx;
  out.y.bary[b] = ty;
  out.extended = true;
  return out;
}

Diagnostics verify_refinement(const BrickPair& old_pair, const RefinementOutcome& outcome, const Rational& epsilon,
                              const RefinementOptions& options) {
  Diagnostics d = validate_brick_pair(outcome.new_pair, options.slack, options.C);
  const BrickPair& np = outcome.new_pair;
  const CfWord& u = outcome.block;
  const long n = outcome.n_used;
  const int t = old_pair.t();

  d.add("block_length", !u.empty() && static_cast<long>(u.size()) == n, Rational(n));
  d.add("shared_block",
        np.x.cf.word == old_pair.x.cf.word.concat(u) && np.y.cf.word == old_pair.y.cf.word.concat(u));
  d.add("t_growth", np.t() == t || (np.t() == t + 1 && np.extended), Rational(np.t()));
  if (!d.all_passed()) return d;

  for (const auto& [name, oldb, newb] : {std::tuple<std::string, const Brick*, const Brick*>{"x", &old_pair.x, &np.x},
                                         {"y", &old_pair.y, &np.y}}) {
    const bool strict =
        oldb->cf.interval.contains(newb->cf.interval) && !(oldb->cf.interval == newb->cf.interval);
    d.add(name + ".cf_nested", strict);

    const Rational rel = newb->cf.length() / oldb->cf.length();
    const auto low = [n, &options](int bits) { return window_relative_bounds(n, options.C, bits).first; };
    const auto high = [n, &options](int bits) { return window_relative_bounds(n, options.C, bits).second; };
    d.add(name + ".window_low", decide(low, rel) == std::strong_ordering::less, rel);
    d.add(name + ".window_high", decide(high, rel) == std::strong_ordering::greater, rel);

    for (const auto& [b, oc] : oldb->bary) {
      const BaryCylinder& nc = newb->bary.at(b);
      d.add(base_tag(name, "bary_nested", b), oc.interval().contains(nc.interval()));
      const long m = refinement_order(old_pair.y.cf.reciprocal_length(), b, n, options.C, options.precision_bits);
      d.add(base_tag(name, "bary_order", b), nc.order == m, Rational(nc.order));
      if (nc.order <= oc.order) continue;
      const auto words = refinement_digits(nc, oc.order);
      auto ext = outcome.per_base_extensions.find(b);
      const bool recorded = ext != outcome.per_base_extensions.end() && (name == "x" ? ext->second.x : ext->second.y) == words;
      d.add(base_tag(name, "bary_extension_recorded", b), recorded);
      for (const auto& w : words) {
        const Rational disc = bary_discrepancy(w, b).value;
        d.add(base_tag(name, "bary_discrepancy", b), disc < epsilon, epsilon - disc);
      }
    }
  }

  const Rational threshold = epsilon - ratio(static_cast<std::size_t>(t - 1), static_cast<std::size_t>(n));
  for (const auto& v : pattern_set(t)) {
    const auto r = cf_discrepancy(u, v, options.precision_bits);
    const bool ok = threshold.sign() > 0 && cf_discrepancy_below(r.occurrence_count, static_cast<std::size_t>(n), v,
                                                                 threshold);
    d.add("cf_discrepancy" + v.str(), ok, threshold - r.value.upper);
  }

  if (np.t() == t + 1) {
    const unsigned b = static_cast<unsigned>(t + 1);
    const BaryCylinder& tx = np.x.bary.at(b);
    const BaryCylinder& ty = np.y.bary.at(b);
    const Rational bb(static_cast<long>(b));
    const Rational unit_len = Rational(BigInt(1), tx.scale());
    const bool below = np.y.cf.length() < unit_len || tx.order == 0;
    d.add("extension.order", below && np.y.cf.length() >= unit_len / bb, Rational(tx.order));
    const Rational ry = np.y.cf.length() * Rational(2) * bb / ty.length();
    d.add("extension.y_ratio", ry >= Rational(1), ry);
    const Rational rx = np.x.cf.length() * Rational(8) * bb / tx.length();
    d.add("extension.x_ratio", rx >= Rational(1), rx);
  }
  return d;
}

}  // namespace cfnormal
