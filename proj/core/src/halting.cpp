#include "tagforge/halting.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "tagforge/fast_engine.hpp"

namespace tagforge {

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int k = 0; k < 8; ++k) b[k] = static_cast<char>((v >> (8 * k)) & 0xff);
  out.write(b, 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw FormatError("truncated detector record");
  std::uint64_t v = 0;
  for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(b[k]) << (8 * k);
  return v;
}

void put_state(std::ostream& out, const CompressedState& c) {
  const std::string bytes = serialize_state(c);
  put_u64(out, bytes.size());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

CompressedState get_state(std::istream& in) {
  const std::uint64_t n = get_u64(in);
  if (n > (std::uint64_t{1} << 40)) throw FormatError("implausible packed state size");
  std::string bytes(n, '\0');
  if (!in.read(bytes.data(), static_cast<std::streamsize>(n))) throw FormatError("truncated packed state");
  std::size_t used = 0;
  CompressedState c = deserialize_state(bytes, &used);
  if (used != n) throw FormatError("packed state has trailing bytes");
  return c;
}

// Steps of the six-rule map, ignoring the halting test, until the word is
// empty. An 8-step block engine only notices termination there.
std::uint64_t flush_steps(CompressedState c) {
  for (std::uint64_t k = 0; k < 64; ++k) {
    if (c.word.empty()) return k;
    apply_rule(c);
  }
  return 0;
}

}  // namespace

HaltDetector::HaltDetector(CompressedState initial)
    : initial_(initial), current_(initial), saved_(std::move(initial)) {
  max_len_ = initial_.uncompressed_length();
  if (current_.halted()) status_ = DetectorStatus::halted;
}

DetectorStatus HaltDetector::advance(std::uint64_t budget) {
  if (status_ != DetectorStatus::running) return status_;
  const BlockTable& table = block_table();
  const std::uint64_t stop = steps_ + budget;
  std::uint64_t len = current_.uncompressed_length();
  while (steps_ < stop) {
    if (current_.word.size() >= kBlockMinSize) {
      const BlockEntry& e = table[current_.phase * 256u + current_.word.peek8()];
      max_len_ = std::max<std::uint64_t>(max_len_, len + e.rise);
      len += e.delta;
      current_.word.pop_front(8);
      current_.word.append_bits(e.out, e.out_count);
      current_.phase = e.next_phase;
      steps_ += 8;
    } else {
      if (!step_compressed_inplace(current_)) {
        status_ = DetectorStatus::halted;
        return status_;
      }
      len = current_.uncompressed_length();
      max_len_ = std::max(max_len_, len);
      ++steps_;
    }
    if (current_.phase == saved_.phase && current_.word.size() == saved_.word.size() &&
        current_.word == saved_.word) {
      status_ = DetectorStatus::cycled;
      return status_;
    }
    if (steps_ - saved_step_ >= power_) {
      saved_ = current_;
      saved_step_ = steps_;
      power_ *= 2;
    }
  }
  if (current_.halted()) status_ = DetectorStatus::halted;
  return status_;
}

HaltReport HaltDetector::finish(const HaltOptions& options) const {
  if (status_ == DetectorStatus::running) throw std::logic_error("detector has not finished");
  HaltReport r;
  r.max_length_seen = max_len_;
  if (status_ == DetectorStatus::halted) {
    r.transient = steps_;
    r.period = 0;
    r.final_state = current_;
    // The last step on a nonempty short string deletes it.
    r.halting_step = steps_ + (current_.word.empty() ? 0 : 1);
    r.table_step = steps_ + flush_steps(current_);
    return r;
  }

  // Reduce the detected multiple to the exact period and collect the cycle.
  const std::uint64_t multiple = steps_ - saved_step_;
  std::unordered_set<CompressedState, CompressedStateHash> cycle;
  std::uint64_t min_len = UINT64_MAX, max_len = 0;
  CompressedState s = saved_;
  std::uint64_t period = 0;
  do {
    cycle.insert(s);
    min_len = std::min(min_len, s.uncompressed_length());
    max_len = std::max(max_len, s.uncompressed_length());
    step_compressed_inplace(s);
    ++period;
    if (period > multiple) throw std::logic_error("cycle reduction overran the detected multiple");
  } while (!(s == saved_));
  r.period = period;

  // First on-cycle index; blocks are safe while the length is out of range.
  const BlockTable& table = block_table();
  s = initial_;
  std::uint64_t t = 0;
  for (;;) {
    const std::uint64_t len = s.uncompressed_length();
    if (len >= min_len && len <= max_len && cycle.count(s)) break;
    if (s.word.size() >= kBlockMinSize && (len > max_len + 8 || len + 8 < min_len)) {
      block_step(table, s);
      t += 8;
    } else {
      step_compressed_inplace(s);
      ++t;
    }
  }
  r.transient = t;
  r.final_state = s;
  r.table_step = (t + 7) / 8 * 8;

  if (!options.literal) {
    r.halting_step = r.table_step;
    return r;
  }
  PostString a = PostString::from(initial_);
  for (std::uint64_t k = 0; k < t; ++k) a.step();
  PostString b = a;
  for (std::uint64_t k = 0; k < period; ++k) b.step();
  std::uint64_t u = t;
  const std::uint64_t bound = t + 4 * (max_len_ + period) + 64;
  while (!(a.bits == b.bits)) {
    a.step();
    b.step();
    if (++u > bound) throw std::logic_error("uncompressed strings never repeated");
  }
  r.halting_step = u;
  return r;
}

void HaltDetector::save(std::ostream& out) const {
  out.put(static_cast<char>(status_));
  put_u64(out, steps_);
  put_u64(out, saved_step_);
  put_u64(out, power_);
  put_u64(out, max_len_);
  put_state(out, initial_);
  put_state(out, current_);
  put_state(out, saved_);
}

HaltDetector HaltDetector::load(std::istream& in) {
  HaltDetector d;
  const int st = in.get();
  if (st < 0 || st > 2) throw FormatError("bad detector status");
  d.status_ = static_cast<DetectorStatus>(st);
  d.steps_ = get_u64(in);
  d.saved_step_ = get_u64(in);
  d.power_ = get_u64(in);
  d.max_len_ = get_u64(in);
  d.initial_ = get_state(in);
  d.current_ = get_state(in);
  d.saved_ = get_state(in);
  if (d.saved_step_ > d.steps_ || d.power_ == 0) throw FormatError("inconsistent detector record");
  return d;
}

bool operator==(const HaltDetector& a, const HaltDetector& b) {
  return a.status_ == b.status_ && a.steps_ == b.steps_ && a.saved_step_ == b.saved_step_ &&
         a.power_ == b.power_ && a.max_len_ == b.max_len_ && a.initial_ == b.initial_ &&
         a.current_ == b.current_ && a.saved_ == b.saved_;
}

std::variant<HaltReport, Undecided> detect_halt(const CompressedState& c, std::uint64_t max_steps,
                                                const HaltOptions& options) {
  HaltDetector d(c);
  if (d.advance(max_steps) == DetectorStatus::running)
    return Undecided{d.steps(), d.current(), d.max_length_seen()};
  return d.finish(options);
}

HaltReport detect_halt_or_throw(const CompressedState& c, std::uint64_t max_steps, const HaltOptions& options) {
  auto res = detect_halt(c, max_steps, options);
  if (auto* r = std::get_if<HaltReport>(&res)) return *r;
  throw std::runtime_error("undecided after " + std::to_string(max_steps) + " steps: " + format_state_id(c));
}

LengthTrace length_trace(const CompressedState& c, std::uint64_t max_steps, std::size_t max_entries) {
  LengthTrace tr;
  max_entries = std::max<std::size_t>(max_entries, 2);
  CompressedState s = c;
  tr.lengths.push_back(s.uncompressed_length());
  for (;;) {
    if (s.halted()) {
      tr.halted = true;
      break;
    }
    if (tr.steps >= max_steps) break;
    step_compressed_inplace(s);
    ++tr.steps;
    if (tr.steps % tr.stride == 0) {
      if (tr.lengths.size() == max_entries) {
        std::size_t w = 0;
        for (std::size_t k = 0; k < tr.lengths.size(); k += 2) tr.lengths[w++] = tr.lengths[k];
        tr.lengths.resize(w);
        tr.stride *= 2;
        if (tr.steps % tr.stride != 0) continue;
      }
      tr.lengths.push_back(s.uncompressed_length());
    }
  }
  return tr;
}

GenerationTrace generation_trace(const CompressedState& c, std::uint64_t max_generations) {
  GenerationTrace g;
  CompressedState s = c;
  std::uint64_t t = 0;
  g.states.push_back(s);
  g.boundary_steps.push_back(0);
  for (std::uint64_t gen = 0; gen < max_generations; ++gen) {
    if (s.halted()) {
      g.halted = true;
      break;
    }
    const std::size_t m = s.word.size();
    for (std::size_t k = 0; k < m && step_compressed_inplace(s); ++k) ++t;
    g.states.push_back(s);
    g.boundary_steps.push_back(t);
  }
  if (s.halted()) g.halted = true;
  return g;
}

std::optional<std::uint64_t> generational_period(const CompressedState& c, std::uint64_t max_generations) {
  std::unordered_map<CompressedState, std::uint64_t, CompressedStateHash> seen;
  CompressedState s = c;
  for (std::uint64_t gen = 0; gen <= max_generations; ++gen) {
    if (s.halted()) return 0;
    auto [it, fresh] = seen.emplace(s, gen);
    if (!fresh) return gen - it->second;
    const std::size_t m = s.word.size();
    for (std::size_t k = 0; k < m && step_compressed_inplace(s); ++k) {
    }
  }
  return std::nullopt;
}

std::string to_json_line(const std::string& id, const HaltReport& r) {
  nlohmann::ordered_json j;
  j["id"] = id;
  j["steps"] = r.halting_step;
  j["table_steps"] = r.table_step;
  j["period"] = r.period;
  j["transient"] = r.transient;
  j["maxlen"] = r.max_length_seen;
  return j.dump();
}

}  // namespace tagforge
