#include "tagforge/cycles.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "tagforge/enumeration.hpp"
#include "tagforge/halting.hpp"
#include "tagforge/parallel.hpp"

namespace tagforge {

std::string to_string(CycleFamily f) {
  switch (f) {
    case CycleFamily::block_01_1100: return "block-01-1100";
    case CycleFamily::period6: return "period6-family";
    case CycleFamily::sporadic: return "sporadic";
  }
  return "unknown";
}

std::optional<std::uint64_t> is_on_cycle(const CompressedState& c, std::uint64_t max_period) {
  CompressedState s = c;
  for (std::uint64_t p = 1; p <= max_period; ++p) {
    if (!step_compressed_inplace(s)) return std::nullopt;
    if (s == c) return p;
  }
  return std::nullopt;
}

bool is_block_word(const PackedWord& w) {
  // reachable[i]: the first i bits split into blocks.
  const std::size_t n = w.size();
  std::vector<char> reachable(n + 1, 0);
  reachable[0] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (!reachable[i]) continue;
    if (i + 2 <= n && !w[i] && w[i + 1]) reachable[i + 2] = 1;
    if (i + 4 <= n && w[i] && w[i + 1] && !w[i + 2] && !w[i + 3]) reachable[i + 4] = 1;
  }
  return reachable[n];
}

namespace {

bool is_period6_word(const CompressedState& c) {
  const std::size_t n = c.word.size();
  if (c.phase != 1 || n == 0 || n % 6 != 0) return false;
  for (std::size_t i = 0; i < n; ++i)
    if (c.word[i] != ((i % 6) >= 3)) return false;
  return true;
}

}  // namespace

CycleDescriptor describe_cycle(const CompressedState& c, std::uint64_t period) {
  CycleDescriptor d;
  d.period = period;
  d.seed = c;
  d.min_length = d.max_length = c.uncompressed_length();
  d.min_word = d.max_word = c.word.size();
  bool block = false, p6 = false;
  CompressedState s = c;
  for (std::uint64_t k = 0; k < period; ++k) {
    if (s < d.seed) d.seed = s;
    d.min_length = std::min(d.min_length, s.uncompressed_length());
    d.max_length = std::max(d.max_length, s.uncompressed_length());
    d.min_word = std::min<std::uint64_t>(d.min_word, s.word.size());
    d.max_word = std::max<std::uint64_t>(d.max_word, s.word.size());
    if (s.phase == 0 && is_block_word(s.word)) block = true;
    if (period == 6 && is_period6_word(s)) p6 = true;
    if (!step_compressed_inplace(s)) throw std::invalid_argument("state does not lie on a cycle");
  }
  if (!(s == c)) throw std::invalid_argument("state does not return after the given period");
  d.family = block ? CycleFamily::block_01_1100 : p6 ? CycleFamily::period6 : CycleFamily::sporadic;
  return d;
}

std::vector<CycleDescriptor> family_cycles(std::size_t b) {
  if (b == 0) throw std::invalid_argument("block count must be positive");
  if (b > 30) throw std::out_of_range("block count too large");
  std::map<std::pair<std::uint64_t, std::string>, CycleDescriptor> distinct;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << b); ++mask) {
    CompressedState seed;
    for (std::size_t k = 0; k < b; ++k) {
      if ((mask >> (b - 1 - k)) & 1u)
        seed.word.append_bits(0b0011, 4);  // 1100
      else
        seed.word.append_bits(0b10, 2);  // 01
    }
    const auto period = is_on_cycle(seed, 8 * b + 8);
    if (!period) throw std::logic_error("block word " + format_bits_id(seed) + " is not on a cycle");
    CycleDescriptor d = describe_cycle(seed, *period);
    distinct.emplace(std::make_pair(d.period, format_bits_id(d.seed)), std::move(d));
  }
  std::vector<CycleDescriptor> out;
  for (auto& [key, d] : distinct) out.push_back(std::move(d));
  return out;
}

std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t result = n;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

BigInt lucas(std::uint64_t n) {
  BigInt a = 2, b = 1;
  for (std::uint64_t k = 0; k < n; ++k) {
    BigInt c = a + b;
    a = std::move(b);
    b = std::move(c);
  }
  return a;
}

BigInt count_distinct_cycles(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("n must be positive");
  BigInt sum = 0;
  for (std::uint64_t k = 1; k <= n; ++k)
    if (n % k == 0) sum += BigInt(euler_phi(k)) << (n / k);
  return sum / n;
}

BigInt count_on_cycle_strings(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("n must be positive");
  BigInt sum = 0;
  for (std::uint64_t k = 1; k <= n; ++k)
    if (n % k == 0) sum += BigInt(euler_phi(n / k)) * lucas(k);
  return sum / n;
}

CompressedState period6_seed(std::size_t m) {
  CompressedState c;
  c.phase = 1;
  for (std::size_t k = 0; k <= m; ++k) c.word.append_bits(0b111000, 6);
  return c;
}

std::vector<CycleDescriptor> sporadic_search(std::size_t min_m, std::size_t max_m, const SporadicOptions& options) {
  std::map<std::pair<std::uint64_t, std::string>, CycleDescriptor> found;
  std::mutex mutex;
  for (std::size_t m = min_m; m <= max_m; ++m) {
    const auto ics = enumerate_initial(m);
    parallel_for(ics.size(), options.threads, [&](std::size_t i) {
      auto res = detect_halt(ics[i], options.step_cap, {false});
      const auto* r = std::get_if<HaltReport>(&res);
      if (!r || r->period == 0 || r->period > options.period_cap) return;
      CycleDescriptor d = describe_cycle(r->final_state, r->period);
      if (d.family == CycleFamily::block_01_1100) return;
      std::lock_guard lock(mutex);
      found.emplace(std::make_pair(d.period, format_bits_id(d.seed)), std::move(d));
    });
  }
  std::vector<CycleDescriptor> out;
  for (auto& [key, d] : found) out.push_back(std::move(d));
  return out;
}

void write_cycle_jsonl(std::ostream& out, const std::vector<CycleDescriptor>& cycles) {
  nlohmann::ordered_json header;
  header["format"] = "tagforge-cycles";
  header["version"] = 1;
  out << header.dump() << '\n';
  for (const auto& d : cycles) {
    nlohmann::ordered_json j;
    j["seed"] = format_state_id(d.seed);
    j["period"] = d.period;
    j["family"] = to_string(d.family);
    j["min_len"] = d.min_length;
    j["max_len"] = d.max_length;
    out << j.dump() << '\n';
  }
}

}  // namespace tagforge
