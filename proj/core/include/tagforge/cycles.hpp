#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tagforge/tagcore.hpp"

namespace tagforge {

enum class CycleFamily { block_01_1100, period6, sporadic };

std::string to_string(CycleFamily f);

struct CycleDescriptor {
  CompressedState seed;  // least (phase, word) state on the cycle
  std::uint64_t period = 0;
  CycleFamily family = CycleFamily::sporadic;
  std::uint64_t min_length = 0;  // uncompressed lengths along the cycle
  std::uint64_t max_length = 0;
  std::uint64_t min_word = 0;  // compressed word lengths along the cycle
  std::uint64_t max_word = 0;
};

// Smallest p <= max_period with T^p(c) = c.
std::optional<std::uint64_t> is_on_cycle(const CompressedState& c, std::uint64_t max_period);

// c must lie on a cycle of the given period.
CycleDescriptor describe_cycle(const CompressedState& c, std::uint64_t period);

bool is_block_word(const PackedWord& w);  // concatenation of 01 and 1100

// Cycles seeded by phase-0 words made of b blocks from {01, 1100}, one per
// distinct cycle, sorted by (period, seed).
std::vector<CycleDescriptor> family_cycles(std::size_t b);

BigInt count_distinct_cycles(std::uint64_t n);
BigInt count_on_cycle_strings(std::uint64_t n);
BigInt lucas(std::uint64_t n);
std::uint64_t euler_phi(std::uint64_t n);

// Compressed word (000111)^(m+1) at phase 1: uncompressed length 16 + 18m.
CompressedState period6_seed(std::size_t m);

struct SporadicOptions {
  std::uint64_t period_cap = 512;
  std::uint64_t step_cap = std::uint64_t{1} << 34;
  unsigned threads = 0;
};

// Runs every initial condition with word length in [min_m, max_m] and keeps the
// distinct cycles outside the 01/1100 block family.
std::vector<CycleDescriptor> sporadic_search(std::size_t min_m, std::size_t max_m, const SporadicOptions& options = {});

void write_cycle_jsonl(std::ostream& out, const std::vector<CycleDescriptor>& cycles);

}  // namespace tagforge
