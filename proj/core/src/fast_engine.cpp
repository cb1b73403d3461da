#include "tagforge/fast_engine.hpp"

#include <algorithm>

namespace tagforge {

namespace {

BlockTable build_table() {
  BlockTable table{};
  for (unsigned phase = 0; phase < 3; ++phase) {
    for (unsigned byte = 0; byte < 256; ++byte) {
      BlockEntry e;
      unsigned p = phase;
      unsigned out = 0, count = 0;
      int len = 0, high = 0;
      auto emit = [&](unsigned bit) { out |= bit << count++; };
      for (unsigned k = 0; k < 8; ++k) {
        const bool lead = (byte >> k) & 1u;
        switch (p * 2 + (lead ? 1 : 0)) {
          case 0: p = 2; emit(0); break;
          case 1: p = 1; emit(1); emit(1); break;
          case 2: p = 0; break;
          case 3: p = 2; emit(0); break;
          case 4: p = 1; emit(0); break;
          case 5: p = 0; emit(1); break;
        }
        len += lead ? 1 : -1;
        high = std::max(high, len);
      }
      e.out = static_cast<std::uint16_t>(out);
      e.out_count = static_cast<std::uint8_t>(count);
      e.next_phase = static_cast<std::uint8_t>(p);
      e.delta = static_cast<std::int8_t>(len);
      e.rise = static_cast<std::int8_t>(high);
      table[phase * 256 + byte] = e;
    }
  }
  return table;
}

}  // namespace

const BlockTable& block_table() {
  static const BlockTable table = build_table();
  return table;
}

FastResult evolve_fast(CompressedState c, std::uint64_t max_steps) {
  const BlockTable& table = block_table();
  std::uint64_t steps = 0;
  while (steps < max_steps) {
    if (c.word.size() >= kBlockMinSize && max_steps - steps >= 8) {
      block_step(table, c);
      steps += 8;
      continue;
    }
    if (!step_compressed_inplace(c)) return {std::move(c), true, steps};
    ++steps;
  }
  const bool halted = c.halted();
  return {std::move(c), halted, steps};
}

}  // namespace tagforge
