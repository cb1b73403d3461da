#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tagforge/tagcore.hpp"

namespace tagforge {

struct HaltReport {
  // Steps counted on the pad-0 uncompressed string: states before the first
  // exact repeat, or states up to and including the terminated string.
  std::uint64_t halting_step = 0;
  // Steps as counted by an 8-step block engine: cycle entry rounded up to a
  // block boundary, or steps until the compressed word is empty.
  std::uint64_t table_step = 0;
  // Exact compressed transient: index of the first state on the cycle, or of
  // the halted state.
  std::uint64_t transient = 0;
  std::uint64_t period = 0;  // 0 = termination
  CompressedState final_state;
  std::uint64_t max_length_seen = 0;
};

struct Undecided {
  std::uint64_t steps = 0;
  CompressedState current;
  std::uint64_t max_length_seen = 0;
};

struct HaltOptions {
  // The uncompressed replay costs about as much as the transient; long
  // benchmark runs can skip it (halting_step is then left equal to table_step).
  bool literal = true;
};

enum class DetectorStatus : std::uint8_t { running = 0, halted = 1, cycled = 2 };

// Resumable Brent search over the compressed map, stepping in blocks of eight
// while the word is long enough. Candidate states are compared after every
// block; a match gives a multiple of the period which finish() reduces.
class HaltDetector {
 public:
  explicit HaltDetector(CompressedState initial);

  DetectorStatus advance(std::uint64_t budget);
  DetectorStatus status() const noexcept { return status_; }
  std::uint64_t steps() const noexcept { return steps_; }
  const CompressedState& current() const noexcept { return current_; }
  const CompressedState& initial() const noexcept { return initial_; }
  std::uint64_t max_length_seen() const noexcept { return max_len_; }

  // Valid once status() != running.
  HaltReport finish(const HaltOptions& options = {}) const;

  void save(std::ostream& out) const;
  static HaltDetector load(std::istream& in);

  friend bool operator==(const HaltDetector& a, const HaltDetector& b);

 private:
  HaltDetector() = default;

  CompressedState initial_;
  CompressedState current_;
  CompressedState saved_;
  std::uint64_t steps_ = 0;
  std::uint64_t saved_step_ = 0;
  std::uint64_t power_ = 1;
  std::uint64_t max_len_ = 0;
  DetectorStatus status_ = DetectorStatus::running;
};

std::variant<HaltReport, Undecided> detect_halt(const CompressedState& c, std::uint64_t max_steps,
                                                const HaltOptions& options = {});

// Throws std::runtime_error when undecided within max_steps.
HaltReport detect_halt_or_throw(const CompressedState& c, std::uint64_t max_steps,
                                const HaltOptions& options = {});

struct LengthTrace {
  std::vector<std::uint64_t> lengths;  // entry j is the length after j*stride steps
  std::uint64_t stride = 1;
  std::uint64_t steps = 0;  // steps actually taken
  bool halted = false;
};

// Keeps at most max_entries values, doubling the stride when full.
LengthTrace length_trace(const CompressedState& c, std::uint64_t max_steps,
                         std::size_t max_entries = std::size_t{1} << 22);

struct GenerationTrace {
  std::vector<CompressedState> states;  // states at generation boundaries
  std::vector<std::uint64_t> boundary_steps;
  bool halted = false;
};

// A generation of a state with m word bits lasts m steps: that consumes
// ceil(L/3) uncompressed triples, the last one straddling the boundary.
GenerationTrace generation_trace(const CompressedState& c, std::uint64_t max_generations);

// Period of the generation map's cycle reached from c (0 if it halts).
std::optional<std::uint64_t> generational_period(const CompressedState& c, std::uint64_t max_generations);

std::string to_json_line(const std::string& id, const HaltReport& r);

}  // namespace tagforge
