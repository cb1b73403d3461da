#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tagforge/tagcore.hpp"

namespace tagforge {

using Symbols = std::vector<std::uint8_t>;

// Delete r symbols, append the block for the first deleted one.
struct FirstElementRule {
  int k = 2;
  int r = 3;
  std::vector<std::optional<Symbols>> appends;  // index = symbol; nullopt = undefined
};

// Delete r symbols, append the block keyed by all of them (base-k, big-endian).
struct BlockRule {
  int k = 2;
  int r = 2;
  std::vector<Symbols> appends;  // size k^r
};

// Delete one symbol; if it was 1, append blocks[cursor]. The cursor advances
// every step.
struct CyclicRule {
  std::vector<Symbols> blocks;
};

using GeneralRule = std::variant<FirstElementRule, BlockRule, CyclicRule>;

int rule_alphabet(const GeneralRule& rule);
int rule_deletion(const GeneralRule& rule);

// "k=3 r=2 0:0 1:02 2:211", "r=2 00:0 10:101 01:000 11:011", "cyclic 01,0,011".
GeneralRule parse_rule(const std::string& text);
std::string format_rule(const GeneralRule& rule);

GeneralRule post_general_rule();  // k=2 r=3 0:00 1:1101

// Growable queue of symbols with an advancing head.
class SymbolQueue {
 public:
  SymbolQueue() = default;
  explicit SymbolQueue(const Symbols& s) : buf_(s) {}

  std::size_t size() const noexcept { return buf_.size() - head_; }
  bool empty() const noexcept { return size() == 0; }
  std::uint8_t operator[](std::size_t i) const { return buf_[head_ + i]; }
  void pop_front(std::size_t n);
  void append(const Symbols& block) { buf_.insert(buf_.end(), block.begin(), block.end()); }
  Symbols to_vector() const { return Symbols(buf_.begin() + static_cast<std::ptrdiff_t>(head_), buf_.end()); }
  std::size_t count(std::uint8_t symbol) const;

  friend bool operator==(const SymbolQueue& a, const SymbolQueue& b);

 private:
  std::vector<std::uint8_t> buf_;
  std::size_t head_ = 0;
};

struct ZooState {
  SymbolQueue symbols;
  std::size_t cursor = 0;  // cyclic systems only

  friend bool operator==(const ZooState& a, const ZooState& b) {
    return a.cursor == b.cursor && a.symbols == b.symbols;
  }
};

// "len:val" with val read in base k ("6:546" with k=3 is 202020), a plain digit
// string, or for cyclic systems an optional ":cursor" suffix.
ZooState parse_zoo_state(const std::string& text, int k);
std::string format_zoo_state(const ZooState& s, int k, bool with_cursor = false);
std::string digits(const ZooState& s);

bool zoo_halted(const GeneralRule& rule, const ZooState& s);
// One step; returns false (state untouched) if already halted. Throws
// MalformedState on a symbol >= k or an undefined append.
bool zoo_step(const GeneralRule& rule, ZooState& s);

struct ZooReport {
  // Termination: steps until fewer than r symbols remain, plus one final step
  // deleting a nonempty remainder. Cycle: index of the first state on the cycle.
  std::uint64_t halting_step = 0;
  std::uint64_t transient = 0;  // exact index of the halted or first cyclic state
  std::uint64_t period = 0;     // 0 = termination
  Symbols final_symbols;
  std::uint64_t max_length = 0;
};

struct ZooUndecided {
  std::uint64_t steps = 0;
  Symbols current;
  std::uint64_t max_length = 0;
};

std::variant<ZooReport, ZooUndecided> zoo_detect_halt(const GeneralRule& rule, const ZooState& s, std::uint64_t cap);

std::vector<std::uint64_t> zoo_length_trace(const GeneralRule& rule, const ZooState& s, std::uint64_t steps);

// The initial string, then the string after each of the first `generations`
// generations (a generation consumes every symbol present at its start).
std::vector<Symbols> zoo_generations(const GeneralRule& rule, const ZooState& s, std::size_t generations);

enum class Growth { halts, cycles, linear_growth, sqrt_growth, undecided };
std::string to_string(Growth g);

struct GrowthReport {
  Growth kind = Growth::undecided;
  double rate = 0.0;  // slope of length vs t or vs sqrt(t)
  double linear_rss = 0.0, sqrt_rss = 0.0;
  std::uint64_t steps = 0;
  std::map<int, std::uint64_t> symbol_counts;  // in the final string
  std::optional<ZooReport> report;
};

// Never claims non-halting: a growth class only says no halt or cycle was
// found within cap. Both models are fitted by least squares on the last 75%
// of the length trace and the smaller residual wins; growth under 2 symbols
// across the window is `undecided`.
GrowthReport growth_analyzer(const GeneralRule& rule, const ZooState& s, std::uint64_t cap);

struct RunSequence {
  std::vector<std::uint64_t> values;
  bool truncated = false;  // cap hit before halting or cycling
  bool halted = false;
  bool cycled = false;  // the string recurred exactly; no further runs follow
  std::uint64_t halting_step = 0;  // same convention as ZooReport
};

// Lengths of successive strings made only of 1s, starting from 1^n. Stops at
// halting, at an exact repeat of the whole string, or at the cap.
RunSequence ones_run_sequence(const GeneralRule& rule, std::uint64_t n, std::uint64_t cap,
                              std::size_t max_values = SIZE_MAX);

GeneralRule collatz_embedding_rule();  // 1->23, 2->1, 3->111
GeneralRule collatz_variant_rule();    // 1->23, 2->111, 3->1
RunSequence collatz_embedding_trace(const GeneralRule& rule, std::uint64_t n, std::uint64_t cap);

// 3^e (n+1)/2^e - 1 with e the 2-adic valuation of n+1.
BigInt ones_closed_form_12_111(const BigInt& n);

enum class RuleFamily { balanced90, simple32 };
// balanced90: k=3 r=2 with appends of lengths 1, 2, 3 using two each of 0, 1, 2.
// simple32: symbols 1, 2 with 1 -> two symbols, 2 -> three symbols, r=2.
std::vector<GeneralRule> rule_family(RuleFamily family);

struct SurveyRow {
  std::string rule;
  std::string longest_ic;
  std::uint64_t longest_halting_step = 0;
  std::uint64_t longest_period = 0;
  std::uint64_t halts = 0, cycles = 0, undecided = 0;
};

std::vector<SurveyRow> balanced_rule_survey(const std::vector<GeneralRule>& rules, std::size_t max_ic_len,
                                            std::uint64_t cap, unsigned threads = 0);

struct ZooWinner {
  std::string state_id;
  std::uint64_t halting_step = 0;
  std::uint64_t period = 0;
};
// Prefix maxima of halting_step over ICs ordered by length then value. Symbols
// range over 0..k-1 except for rules whose symbol 0 is undefined.
std::vector<ZooWinner> zoo_winners(const GeneralRule& rule, std::size_t max_len, std::uint64_t cap);

// First n symbols of the Thue-Morse sequence (parity of popcount).
Symbols thue_morse(std::size_t n);

}  // namespace tagforge
