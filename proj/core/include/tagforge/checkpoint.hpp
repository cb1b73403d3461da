#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "tagforge/halting.hpp"

namespace tagforge {

inline constexpr char kCheckpointMagic[8] = {'T', 'A', 'G', 'C', 'K', 'P', 'T', '1'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

// Layout: magic, u32 version, rule literal, initial StateId, detector record
// (status, step counter, Brent state, packed states), FNV-1a 64 of all
// preceding bytes. Integers are little-endian; strings are u32-length-prefixed.
struct Checkpoint {
  std::string rule_literal;
  std::string initial_id;
  HaltDetector detector;
};

void write_checkpoint(std::ostream& out, const Checkpoint& c);
Checkpoint read_checkpoint(std::istream& in);  // throws FormatError

// Writes to a sibling temporary and renames it over `path`.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace tagforge
