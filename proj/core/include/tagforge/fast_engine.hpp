#pragma once

#include <array>
#include <cstdint>

#include "tagforge/tagcore.hpp"

namespace tagforge {

// Eight compressed steps applied to the leading byte of the word.
struct BlockEntry {
  std::uint16_t out = 0;       // appended bits, first appended in bit 0
  std::uint8_t out_count = 0;  // at most 16
  std::uint8_t next_phase = 0;
  std::int8_t delta = 0;       // change of uncompressed length over the block
  std::int8_t rise = 0;        // highest uncompressed length reached, relative to the start
};

using BlockTable = std::array<BlockEntry, 3 * 256>;

const BlockTable& block_table();

// A block is safe once the word has at least this many bits: the word can
// shrink by one bit per step, so it never drops to a halting size mid-block.
inline constexpr std::size_t kBlockMinSize = 10;

inline void block_step(const BlockTable& table, CompressedState& c) noexcept {
  const BlockEntry& e = table[c.phase * 256u + c.word.peek8()];
  c.word.pop_front(8);
  c.word.append_bits(e.out, e.out_count);
  c.phase = e.next_phase;
}

struct FastResult {
  CompressedState state;
  bool halted = false;
  std::uint64_t steps = 0;
};

// Bit-exact with iterating step_compressed.
FastResult evolve_fast(CompressedState c, std::uint64_t max_steps);

}  // namespace tagforge
