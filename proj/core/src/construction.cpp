#include "cfnormal/construction.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

#include "cfnormal/discrepancy.hpp"

namespace cfnormal {

using nlohmann::json;

namespace {

std::string str(long v) { return std::to_string(v); }

long to_long(const json& j) {
  const std::string s = j.get<std::string>();
  std::size_t pos = 0;
  const long v = std::stol(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("not an integer: " + s);
  return v;
}

json bary_json(const std::map<unsigned, BaryCylinder>& m) {
  json a = json::array();
  for (const auto& [b, c] : m) {
    a.push_back({{"base", str(b)}, {"order", str(c.order)}, {"start_index", to_string(c.start_index)},
                 {"width", str(c.width_units)}});
  }
  return a;
}

std::map<unsigned, BaryCylinder> bary_from_json(const json& a) {
  std::map<unsigned, BaryCylinder> m;
  for (const auto& e : a) {
    BaryCylinder c;
    c.base = static_cast<unsigned>(to_long(e.at("base")));
    c.order = to_long(e.at("order"));
    c.start_index = parse_bigint(e.at("start_index").get<std::string>());
    c.width_units = static_cast<int>(to_long(e.at("width")));
    check_well_formed(c);
    if (!m.emplace(c.base, c).second) throw std::invalid_argument("duplicate base in cylinder list");
  }
  return m;
}

json certified_json(const CertifiedReal& c) {
  return {{"lower", c.lower.str()}, {"upper", c.upper.str()}, {"precision_bits", str(c.precision_bits)}};
}

CertifiedReal certified_from_json(const json& j) {
  CertifiedReal c;
  c.lower = Rational::parse(j.at("lower").get<std::string>());
  c.upper = Rational::parse(j.at("upper").get<std::string>());
  c.precision_bits = static_cast<int>(to_long(j.at("precision_bits")));
  return c;
}

json margins_json(const RefinementMargins& m) {
  return {{"cf_discrepancy", m.cf_discrepancy.str()},
          {"bary_discrepancy", m.bary_discrepancy.str()},
          {"x_relative_length", m.x_relative_length.str()},
          {"y_relative_length", m.y_relative_length.str()},
          {"window_low", certified_json(m.window_low)},
          {"window_high", certified_json(m.window_high)},
          {"x_slack", m.x_slack.str()},
          {"y_slack", m.y_slack.str()}};
}

RefinementMargins margins_from_json(const json& j) {
  RefinementMargins m;
  m.cf_discrepancy = Rational::parse(j.at("cf_discrepancy").get<std::string>());
  m.bary_discrepancy = Rational::parse(j.at("bary_discrepancy").get<std::string>());
  m.x_relative_length = Rational::parse(j.at("x_relative_length").get<std::string>());
  m.y_relative_length = Rational::parse(j.at("y_relative_length").get<std::string>());
  m.window_low = certified_from_json(j.at("window_low"));
  m.window_high = certified_from_json(j.at("window_high"));
  m.x_slack = Rational::parse(j.at("x_slack").get<std::string>());
  m.y_slack = Rational::parse(j.at("y_slack").get<std::string>());
  return m;
}

json config_json(const ConstructionConfig& c) {
  json j = {{"mode", to_string(c.mode)},
            {"n_start", str(c.n_start)},
            {"K", str(c.constants.K)},
            {"C", str(c.constants.C)},
            {"N1", str(c.constants.N1)},
            {"slack", c.slack.str()},
            {"precision_bits", str(c.precision_bits)},
            {"n_ceiling", str(c.n_ceiling)}};
  if (c.schedule_override) {
    json rows = json::array();
    for (const auto& e : *c.schedule_override) {
      rows.push_back({{"from_step", str(e.from_step)}, {"t", str(e.t)}, {"epsilon", e.epsilon.str()}});
    }
    j["schedule_override"] = rows;
  } else {
    j["schedule_override"] = nullptr;
  }
  return j;
}

ConstructionConfig config_from_json(const json& j) {
  ConstructionConfig c;
  c.mode = parse_search_mode(j.at("mode").get<std::string>());
  c.n_start = to_long(j.at("n_start"));
  c.constants.K = to_long(j.at("K"));
  c.constants.C = to_long(j.at("C"));
  c.constants.N1 = to_long(j.at("N1"));
  c.slack = Rational::parse(j.at("slack").get<std::string>());
  c.precision_bits = static_cast<int>(to_long(j.at("precision_bits")));
  c.n_ceiling = to_long(j.at("n_ceiling"));
  const json& o = j.at("schedule_override");
  if (!o.is_null()) {
    std::vector<ScheduleEntry> rows;
    for (const auto& e : o) {
      rows.push_back({to_long(e.at("from_step")), static_cast<int>(to_long(e.at("t"))),
                      Rational::parse(e.at("epsilon").get<std::string>())});
    }
    c.schedule_override = rows;
  }
  return c;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << v;
  return os.str();
}

bool is_prefix(const BaryWord& a, const BaryWord& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

// Extends the b-ary streams of every active base from the current intervals.
void update_bary_streams(ConstructionState& s) {
  for (unsigned b = 2; b <= static_cast<unsigned>(s.pair.t()); ++b) {
    for (const auto& [target, brick] : {std::pair<Target, const Brick*>{Target::x, &s.pair.x},
                                        {Target::one_over_x, &s.pair.y}}) {
      BaryWord digits = bary_digits_common_prefix(brick->cf.interval, b);
      auto& stream = s.emitted_bary[{target, b}];
      if (!is_prefix(stream, digits)) throw std::logic_error("b-ary stream lost monotonicity");
      stream = std::move(digits);
    }
  }
}

// Applies a verified outcome to the state.
void apply(ConstructionState& s, const RefinementOutcome& out, const Schedule& sched) {
  s.pair = out.new_pair;
  s.emitted_cf.insert(s.emitted_cf.end(), out.block.digits().begin(), out.block.digits().end());
  ++s.step;
  StepRecord r;
  r.s = s.step;
  r.t = sched.t;
  r.epsilon = sched.epsilon;
  r.n_used = out.n_used;
  r.margins = out.margins;
  r.x_bary = s.pair.x.bary;
  r.y_bary = s.pair.y.bary;
  s.history.push_back(std::move(r));
  update_bary_streams(s);
}

void check_diagnostics(const Diagnostics& d, long step, const char* what) {
  if (d.all_passed()) return;
  std::string msg = what;
  for (const auto& f : d.failures()) msg += " " + f;
  throw StepError(step, msg);
}

}  // namespace

void ConstructionConfig::validate() const {
  if (n_start < 1) throw std::invalid_argument("n_start must be positive");
  if (n_ceiling < n_start) throw std::invalid_argument("n_ceiling must be at least n_start");
  if (precision_bits < 32) throw std::invalid_argument("precision_bits must be at least 32");
  if (precision_bits > kMaxPrecisionBits) throw std::invalid_argument("precision_bits exceeds the maximum");
  if (slack.sign() <= 0) throw std::invalid_argument("slack must be positive");
  if (constants.C < 0 || constants.K < 0 || constants.N1 < 0) throw std::invalid_argument("negative bound constant");
  if (schedule_override) {
    int prev_t = 2;
    long prev_step = 0;
    for (const auto& e : *schedule_override) {
      if (e.from_step <= prev_step) throw std::invalid_argument("schedule override steps must increase");
      if (e.t < prev_t || e.t > prev_t + 1) {
        throw std::invalid_argument("schedule override t must grow by at most 1 per row");
      }
      if (e.epsilon.sign() <= 0 || e.epsilon > Rational(BigInt(1), BigInt(e.t))) {
        throw std::invalid_argument("schedule override epsilon must lie in (0, 1/t]");
      }
      prev_t = e.t;
      prev_step = e.from_step;
    }
  }
}

RefinementOptions ConstructionConfig::refinement_options() const {
  RefinementOptions o;
  o.slack = slack;
  o.C = constants.C;
  o.precision_bits = precision_bits;
  o.n_ceiling = n_ceiling;
  return o;
}

Schedule ConstructionConfig::schedule_for(long s) const {
  Schedule out = schedule(BigInt(s), n_start);
  if (schedule_override) {
    const ScheduleEntry* hit = nullptr;
    for (const auto& e : *schedule_override) {
      if (e.from_step <= s) hit = &e;
    }
    if (hit) {
      out.t = hit->t;
      out.epsilon = hit->epsilon;
    }
  }
  return out;
}

BigInt ConstructionConfig::first_step_with(int t) const {
  if (schedule_override) {
    for (const auto& e : *schedule_override) {
      if (e.t >= t) return BigInt(e.from_step);
    }
    return BigInt(0);
  }
  return first_step_with_t(t);
}

std::uint64_t ConstructionConfig::hash() const {
  const std::string text = config_json(*this).dump();
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::vector<ScheduleEntry> parse_schedule_override(const std::string& text) {
  std::vector<ScheduleEntry> rows;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = line.substr(0, line.find('#'));
    std::istringstream fields(line);
    std::vector<std::string> parts;
    for (std::string f; fields >> f;) parts.push_back(f);
    if (parts.empty()) continue;
    if (parts.size() > 3 || parts.size() < 2) {
      throw std::invalid_argument("schedule override line " + std::to_string(line_no) + ": expected 'from_step t [epsilon]'");
    }
    ScheduleEntry e;
    try {
      e.from_step = std::stol(parts[0]);
      e.t = std::stoi(parts[1]);
      e.epsilon = parts.size() == 3 ? Rational::parse(parts[2]) : Rational(BigInt(1), BigInt(e.t));
    } catch (const std::exception& ex) {
      throw std::invalid_argument("schedule override line " + std::to_string(line_no) + ": " + ex.what());
    }
    rows.push_back(e);
  }
  return rows;
}

std::string to_string(Target target) { return target == Target::x ? "x" : "inv"; }

Target parse_target(const std::string& text) {
  if (text == "x") return Target::x;
  if (text == "inv" || text == "one_over_x") return Target::one_over_x;
  throw std::invalid_argument("unknown target: " + text);
}

bool operator==(const StepRecord& a, const StepRecord& b) {
  return a.s == b.s && a.t == b.t && a.epsilon == b.epsilon && a.n_used == b.n_used && a.margins == b.margins &&
         a.x_bary == b.x_bary && a.y_bary == b.y_bary;
}

bool operator==(const ConstructionState& a, const ConstructionState& b) {
  return a.step == b.step && a.pair == b.pair && a.emitted_cf == b.emitted_cf && a.emitted_bary == b.emitted_bary &&
         a.config == b.config && a.history == b.history;
}

ConstructionState init(const ConstructionConfig& config) {
  config.validate();
  ConstructionState s;
  s.step = 1;
  s.pair = initial_pair();
  s.config = config;
  return s;
}

ConstructionState step(const ConstructionState& state) {
  const Schedule sched = state.config.schedule_for(state.step + 1);
  ConstructionState next = state;
  try {
    const RefinementOutcome out = refine_pair(state.pair, sched.t, sched.epsilon, state.config.mode, sched.n0,
                                              state.config.refinement_options());
    apply(next, out, sched);
  } catch (const StepError&) {
    throw;
  } catch (const std::exception& e) {
    throw StepError(state.step, e.what());
  }
  check_diagnostics(validate_brick_pair(next.pair, state.config.slack, state.config.constants.C), state.step,
                    "invariant failure after refinement:");
  return next;
}

ConstructionState resume(ConstructionState state, long target_step) {
  while (state.step < target_step) state = step(state);
  return state;
}

ConstructionState run(const ConstructionConfig& config, long steps) {
  if (steps < 1) throw std::invalid_argument("run needs at least one step");
  return resume(init(config), 1 + steps);
}

Diagnostics validate_state(const ConstructionState& s) {
  Diagnostics d = validate_brick_pair(s.pair, s.config.slack, s.config.constants.C);
  const auto y_digits = s.pair.y.cf.word.digits();
  d.add("stream_matches_word", std::equal(y_digits.begin(), y_digits.end(), s.emitted_cf.begin(), s.emitted_cf.end()));
  d.add("history_length", static_cast<long>(s.history.size()) == s.step - 1, Rational(static_cast<long>(s.history.size())));
  bool prefixes = true;
  for (const auto& [key, digits] : s.emitted_bary) {
    const Brick& brick = key.first == Target::x ? s.pair.x : s.pair.y;
    prefixes = prefixes && key.second <= static_cast<unsigned>(s.pair.t()) &&
               is_prefix(digits, bary_digits_common_prefix(brick.cf.interval, key.second));
  }
  d.add("bary_stream_prefixes", prefixes);
  return d;
}

std::string checkpoint(const ConstructionState& s) {
  json doc;
  doc["format"] = "cfnormal-checkpoint";
  doc["version"] = "1";
  doc["config"] = config_json(s.config);
  doc["config_hash"] = hex64(s.config.hash());
  doc["step"] = str(s.step);
  json digits = json::array();
  for (Digit d : s.emitted_cf) digits.push_back(std::to_string(d));
  doc["cf_digits"] = digits;
  doc["cylinders"] = {{"x", bary_json(s.pair.x.bary)}, {"y", bary_json(s.pair.y.bary)}};
  json history = json::array();
  for (const auto& r : s.history) {
    history.push_back({{"s", str(r.s)},
                       {"t", str(r.t)},
                       {"epsilon", r.epsilon.str()},
                       {"n_used", str(r.n_used)},
                       {"margins", margins_json(r.margins)},
                       {"cylinders", {{"x", bary_json(r.x_bary)}, {"y", bary_json(r.y_bary)}}}});
  }
  doc["history"] = history;
  return doc.dump(2) + "\n";
}

ConstructionState restore(const std::string& document, RestoreCheck check) {
  json doc;
  ConstructionConfig config;
  std::vector<Digit> digits;
  std::vector<StepRecord> records;
  long final_step = 0;
  std::map<unsigned, BaryCylinder> final_x, final_y;
  try {
    doc = json::parse(document);
    if (doc.at("format").get<std::string>() != "cfnormal-checkpoint") throw std::invalid_argument("unknown format");
    config = config_from_json(doc.at("config"));
    config.validate();
    if (doc.at("config_hash").get<std::string>() != hex64(config.hash())) {
      throw CheckpointError("config hash mismatch");
    }
    final_step = to_long(doc.at("step"));
    for (const auto& d : doc.at("cf_digits")) {
      const BigInt v = parse_bigint(d.get<std::string>());
      if (v < 1 || !v.fits_ulong_p()) throw std::invalid_argument("cf digit out of range");
      digits.push_back(v.get_ui());
    }
    final_x = bary_from_json(doc.at("cylinders").at("x"));
    final_y = bary_from_json(doc.at("cylinders").at("y"));
    for (const auto& h : doc.at("history")) {
      StepRecord r;
      r.s = to_long(h.at("s"));
      r.t = static_cast<int>(to_long(h.at("t")));
      r.epsilon = Rational::parse(h.at("epsilon").get<std::string>());
      r.n_used = to_long(h.at("n_used"));
      r.margins = margins_from_json(h.at("margins"));
      r.x_bary = bary_from_json(h.at("cylinders").at("x"));
      r.y_bary = bary_from_json(h.at("cylinders").at("y"));
      records.push_back(std::move(r));
    }
  } catch (const CheckpointError&) {
    throw;
  } catch (const std::exception& e) {
    throw CheckpointError(std::string("malformed checkpoint: ") + e.what());
  }

  ConstructionState s = init(config);
  const RefinementOptions options = config.refinement_options();
  std::size_t offset = 0;
  for (const auto& r : records) {
    const std::string where = "checkpoint step " + std::to_string(s.step + 1) + ": ";
    const Schedule sched = config.schedule_for(s.step + 1);
    if (r.s != s.step + 1 || r.t != sched.t || r.epsilon != sched.epsilon) {
      throw CheckpointError(where + "schedule mismatch");
    }
    if (r.n_used < 1 || offset + static_cast<std::size_t>(r.n_used) > digits.size()) {
      throw CheckpointError(where + "digit array too short");
    }
    RefinementOutcome out;
    out.block = CfWord(std::vector<Digit>(digits.begin() + static_cast<long>(offset),
                                          digits.begin() + static_cast<long>(offset + r.n_used)));
    out.n_used = r.n_used;
    out.margins = r.margins;
    out.new_pair.x = with_word(s.pair.x, s.pair.x.cf.word.concat(out.block));
    out.new_pair.y = with_word(s.pair.y, s.pair.y.cf.word.concat(out.block));
    out.new_pair.x.t = out.new_pair.y.t = r.t;
    out.new_pair.x.bary = r.x_bary;
    out.new_pair.y.bary = r.y_bary;
    out.new_pair.extended = r.t == s.pair.t() + 1;
    for (const auto& [b, c] : s.pair.x.bary) {
      auto nx = r.x_bary.find(b);
      auto ny = r.y_bary.find(b);
      if (nx == r.x_bary.end() || ny == r.y_bary.end() || nx->second.order < c.order ||
          ny->second.order < s.pair.y.bary.at(b).order) {
        throw CheckpointError(where + "cylinder list inconsistent");
      }
      out.per_base_extensions[b] = {refinement_digits(nx->second, c.order),
                                    refinement_digits(ny->second, s.pair.y.bary.at(b).order)};
    }

    Diagnostics d;
    try {
      d = verify_refinement(s.pair, out, sched.epsilon, options);
    } catch (const std::exception& e) {
      throw CheckpointError(where + "invariant failure: " + e.what());
    }
    d.add("x_relative_length_recorded",
          r.margins.x_relative_length == out.new_pair.x.cf.length() / s.pair.x.cf.length());
    d.add("y_relative_length_recorded",
          r.margins.y_relative_length == out.new_pair.y.cf.length() / s.pair.y.cf.length());
    if (!d.all_passed()) {
      std::string msg = where + "invariant failure:";
      for (const auto& f : d.failures()) msg += " " + f;
      throw CheckpointError(msg);
    }
    if (check == RestoreCheck::replay) {
      const RefinementOutcome again = refine_pair(s.pair, sched.t, sched.epsilon, config.mode, sched.n0, options);
      if (!(again.block == out.block) || !(again.new_pair == out.new_pair) || !(again.margins == out.margins)) {
        throw CheckpointError(where + "replayed search selects a different block");
      }
    }
    apply(s, out, sched);
    offset += static_cast<std::size_t>(r.n_used);
  }
  if (offset != digits.size() || final_step != s.step || final_x != s.pair.x.bary || final_y != s.pair.y.bary) {
    throw CheckpointError("checkpoint summary disagrees with its history");
  }
  const Diagnostics d = validate_state(s);
  if (!d.all_passed()) throw CheckpointError("invariant failure on load");
  return s;
}

std::vector<Digit> emit_cf(const ConstructionState& state, Target) {
  std::vector<Digit> out{1};
  out.insert(out.end(), state.emitted_cf.begin(), state.emitted_cf.end());
  return out;
}

BaryWord emit_bary(const ConstructionState& state, Target target, unsigned base) {
  if (base < 2) throw std::invalid_argument("base must be at least 2");
  if (base > static_cast<unsigned>(state.pair.t())) {
    const BigInt first = state.config.first_step_with(static_cast<int>(base));
    if (first == 0) {
      throw std::invalid_argument("base " + std::to_string(base) + " never becomes active under the schedule override");
    }
    throw std::invalid_argument("base " + std::to_string(base) + " is not active yet; it activates at step " +
                                to_string(first));
  }
  auto it = state.emitted_bary.find({target, base});
  return it == state.emitted_bary.end() ? BaryWord{} : it->second;
}

std::string format_cf_stream(const std::vector<Digit>& digits, std::size_t count) {
  std::string out;
  for (std::size_t i = 0; i < std::min(count, digits.size()); ++i) out += std::to_string(digits[i]) + "\n";
  return out;
}

std::string format_bary_stream(Target target, unsigned base, const BaryWord& digits, std::size_t count) {
  std::string out = target == Target::x ? "0." : "1.";
  const std::size_t m = std::min(count, digits.size());
  for (std::size_t i = 0; i < m; ++i) {
    if (base <= 10) {
      out += static_cast<char>('0' + digits[i]);
    } else {
      if (i > 0) out += ",";
      out += std::to_string(digits[i]);
    }
  }
  return out;
}

}  // namespace cfnormal
