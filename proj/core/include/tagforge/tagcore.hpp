#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tagforge/packed_word.hpp"

namespace tagforge {

using BigInt = boost::multiprecision::cpp_int;
using Symbols = std::vector<std::uint8_t>;

struct MalformedState : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct FormatError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// First-element tag rule: delete `deletion` symbols, append appends[first].
struct TagRule {
  int alphabet_size = 2;
  int deletion = 3;
  std::vector<Symbols> appends;

  void validate() const;

  // Post's system: k=2, r=3, 0 -> 00, 1 -> 1101.
  static const TagRule& post();
};

bool operator==(const TagRule& a, const TagRule& b);

struct UncompressedState {
  Symbols symbols;

  std::size_t length() const noexcept { return symbols.size(); }
  std::string to_string() const;
  static UncompressedState from_string(std::string_view digits);
};

bool operator==(const UncompressedState& a, const UncompressedState& b);

struct CompressedState {
  std::uint8_t phase = 0;
  PackedWord word;

  std::size_t size() const noexcept { return word.size(); }
  std::uint64_t uncompressed_length() const noexcept;
  // Length < 3 once uncompressed.
  bool halted() const noexcept { return word.empty() || (word.size() == 1 && phase != 0); }
};

bool operator==(const CompressedState& a, const CompressedState& b) noexcept;
bool operator<(const CompressedState& a, const CompressedState& b) noexcept;

struct CompressedStateHash {
  std::size_t operator()(const CompressedState& c) const noexcept {
    return static_cast<std::size_t>(c.word.hash(c.phase));
  }
};

std::optional<UncompressedState> step_uncompressed(const TagRule& rule, const UncompressedState& s);

CompressedState compress(const UncompressedState& s);
UncompressedState uncompress(const CompressedState& c, std::uint8_t pad = 0);

// One of the six (phase, lead) rules with no halting test; word must be nonempty.
void apply_rule(CompressedState& c);

// In-place compressed step; returns false (state untouched) when halted.
bool step_compressed_inplace(CompressedState& c);
std::optional<CompressedState> step_compressed(const CompressedState& c);

// Uncompressed Post string held as packed bits; the literal-convention replay
// in the halting module runs on this.
struct PostString {
  PackedWord bits;

  static PostString from(const CompressedState& c, std::uint8_t pad = 0);
  bool halted() const noexcept { return bits.size() < 3; }
  bool step();
};

struct IntegerPairState {
  std::uint64_t n = 0;
  BigInt i = 0;
};

bool operator==(const IntegerPairState& a, const IntegerPairState& b);

IntegerPairState integer_pair_step(const IntegerPairState& s);
IntegerPairState to_integer_pair(const UncompressedState& s);
UncompressedState from_integer_pair(const IntegerPairState& p);

// "len:value:phase" (value big-endian) or "bits:phase".
CompressedState parse_state_id(std::string_view text);
std::string format_state_id(const CompressedState& c);
std::string format_bits_id(const CompressedState& c);
CompressedState make_state(std::string_view bits, std::uint8_t phase);

// Phase byte, LEB128 word length, then ceil(m/8) bytes with the first word
// bit in the low bit of the first byte.
std::string serialize_state(const CompressedState& c);
CompressedState deserialize_state(std::string_view bytes, std::size_t* consumed = nullptr);

}  // namespace tagforge
