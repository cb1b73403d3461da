#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "tagforge/tagcore.hpp"

namespace tagforge {

// Positions inside the blocks 00 and 1101; a path spells a factor of some
// concatenation of blocks.
class BlockAutomaton {
 public:
  explicit BlockAutomaton(std::vector<std::string> blocks = {"00", "1101"});

  std::size_t state_count() const noexcept { return emit_.size(); }
  // Distinct length-m factors, exact, via the subset construction.
  std::uint64_t count_factors(std::size_t m) const;
  bool accepts(std::string_view factor) const;
  std::vector<std::string> factors(std::size_t m) const;  // sorted; m <= 24

 private:
  std::uint64_t step(std::uint64_t set, int symbol) const;

  std::vector<int> emit_;            // symbol emitted at each position
  std::vector<std::vector<int>> next_;  // successor positions
};

std::uint64_t mgram_count(std::size_t m);

// If[EvenQ[x], 2 Fib[x/2 + 4], Fib[(x + 11)/2]] - 1.
std::uint64_t mgram_closed_form(std::size_t x);

std::vector<std::string> forbidden_blocks(std::size_t m);

// Binary de Bruijn sequence of order n (FKM / Lyndon-word concatenation).
std::vector<std::uint8_t> de_bruijn(std::size_t n);

// Map each de Bruijn symbol to its block, flatten, count the cyclic m-grams,
// and divide by the smallest count: multiplicity -> number of m-grams.
std::map<std::uint64_t, std::uint64_t> mgram_multiplicity_table(std::size_t m);

struct Entropies {
  double set_entropy = 0.0;             // bits per symbol
  double measure_entropy = 0.0;         // conditional block entropy, bits per symbol
  double set_redundancy = 0.0;          // 1 - set_entropy
  double golden_redundancy = 0.0;       // 1 - log2(phi)
};

// Set entropy from log2(count(m+2)/count(m))/2 at m = set_m; measure entropy
// as H(m) - H(m-1) of the multiplicity-weighted m-gram distribution.
Entropies entropies(std::size_t set_m = 24, std::size_t measure_m = 16);
double set_entropy(const std::vector<std::string>& blocks, std::size_t m);
double block_entropy(std::size_t m);  // H(m) in bits

// Initial pad-0 string followed by every appended symbol over `steps` steps
// of the compressed run. With continue_past_halt the six rules keep being
// applied after termination until the word is empty.
std::vector<std::uint8_t> symbol_stream(const CompressedState& c, std::uint64_t steps, bool continue_past_halt = false);

struct BlockFrequencyReport {
  std::uint64_t ones = 0, zeros = 0;
  std::uint64_t blocks_00 = 0, blocks_1101 = 0;
  double block_imbalance = 0.0;  // |b00 - b1101| / (b00 + b1101)
  std::map<std::string, double> trigram_frequency;
  std::map<std::string, double> trigram_predicted;  // equiprobable independent blocks
  double max_trigram_deviation = 0.0;
};

struct InsufficientData : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// `appended` must be a concatenation of 00 and 1101 blocks.
BlockFrequencyReport block_frequency_check(const std::vector<std::uint8_t>& appended, std::size_t min_length = 64);

// Frequency of each m-gram in a random concatenation of equiprobable blocks.
std::map<std::string, double> predicted_mgram_frequency(std::size_t m);

void write_multiplicity_csv(std::ostream& out, const std::vector<std::size_t>& ms);

}  // namespace tagforge
