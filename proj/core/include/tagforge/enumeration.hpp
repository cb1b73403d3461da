#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "tagforge/halting.hpp"

namespace tagforge {

inline const std::vector<std::uint8_t> kAllPhases{0, 1, 2};

// Word of length m whose big-endian value is `value`.
CompressedState initial_state(std::size_t m, std::uint64_t value, std::uint8_t phase);

// Each (phase, word) once, phase-major then by value.
std::vector<CompressedState> enumerate_initial(std::size_t m, const std::vector<std::uint8_t>& phases = kAllPhases);
void for_each_initial(std::size_t m, const std::vector<std::uint8_t>& phases,
                      const std::function<void(const CompressedState&)>& fn);

// Ordinal space of a winners search: lengths 0..max_m in order, each length
// contributing |phases| * 2^m initial conditions in enumeration order.
struct InitialIndex {
  std::size_t max_m = 0;
  std::vector<std::uint8_t> phases = kAllPhases;

  std::uint64_t size() const;
  CompressedState at(std::uint64_t ordinal) const;
};

struct WorkShard {
  std::size_t max_m = 0;
  std::vector<std::uint8_t> phases = kAllPhases;
  std::uint64_t lo = 0;  // ordinal range [lo, hi)
  std::uint64_t hi = 0;
  std::uint64_t step_cap = std::uint64_t{1} << 34;
  std::uint64_t cursor = 0;  // next ordinal to process

  bool done() const noexcept { return cursor >= hi; }
};

// Shard i of n over the full ordinal space; shards partition it.
WorkShard make_shard(std::size_t max_m, std::uint64_t step_cap, std::uint64_t index, std::uint64_t count,
                     const std::vector<std::uint8_t>& phases = kAllPhases);

struct WinnerRecord {
  std::uint64_t ordinal = 0;
  std::string state_id;
  std::uint64_t halting_step = 0;
  std::uint64_t table_step = 0;
  std::uint64_t transient = 0;
  std::uint64_t period = 0;
};

bool operator==(const WinnerRecord& a, const WinnerRecord& b);

struct ShardResult {
  std::uint64_t lo = 0, hi = 0;
  std::vector<WinnerRecord> winners;  // prefix maxima within the shard
  std::vector<std::string> undecided;
};

struct SearchOptions {
  unsigned threads = 0;
  std::uint64_t batch = 4096;  // ICs evaluated per cursor advance
  // Called after each batch with the shard cursor updated; lets callers checkpoint.
  std::function<void(const WorkShard&, const ShardResult&)> on_progress;
};

// Resumes from shard.cursor; `partial` carries earlier results for a resumed shard.
ShardResult run_shard(WorkShard& shard, const SearchOptions& options = {}, ShardResult partial = {});

// Combines shard results (any order) into the global winners list.
ShardResult merge_shards(std::vector<ShardResult> parts);

ShardResult search_winners(std::size_t max_m, std::uint64_t step_cap, const SearchOptions& options = {},
                           const std::vector<std::uint8_t>& phases = kAllPhases);

// Winners that beat the last kept one by more than a factor min_ratio and run
// at least min_steps; drops near-duplicate records such as a longer word that
// reaches the same highway one step later.
std::vector<WinnerRecord> notable_winners(const std::vector<WinnerRecord>& winners, double min_ratio = 1.01,
                                          std::uint64_t min_steps = 100);

void write_shard_jsonl(std::ostream& out, const ShardResult& r);
ShardResult read_shard_jsonl(std::istream& in);

struct HistogramBin {
  std::uint64_t lo = 0, hi = 0;  // [lo, hi)
  std::uint64_t count = 0;
};

struct HaltingHistogram {
  std::vector<HistogramBin> bins;
  std::uint64_t undecided = 0;
  std::uint64_t outside = 0;  // halting steps not covered by any bin
  double tail_slope = 0.0;
  bool tail_fit_ok = false;
};

// [0,1), [1,2), [2,4), ... covering up to max_value.
std::vector<HistogramBin> log2_bins(std::uint64_t max_value);

// Halting measure is the exact compressed transient (steps to termination or
// to cycle entry) over all phases. Empty `bins` means log2 bins.
HaltingHistogram halting_histogram(std::size_t m, std::uint64_t step_cap, std::vector<HistogramBin> bins = {},
                                   unsigned threads = 0);

// Log-log OLS slope of count per log2 bin against the bin's geometric centre,
// over bins from the median bin onward that hold at least min_count entries.
// Counts per logarithmic bin scale like t * p(t), so a t^(-3/2) first-passage
// law shows up as slope -1/2.
double tail_slope(const std::vector<HistogramBin>& bins, std::uint64_t min_count = 5, bool* ok = nullptr);

void write_histogram_csv(std::ostream& out, const HaltingHistogram& h);

struct OnesGroup {
  std::size_t ones = 0;
  std::vector<std::uint64_t> halting_steps;
};

struct OnesCorrelation {
  std::vector<OnesGroup> groups;  // indexed by number of 1s
  double spearman_rho = 0.0;
  std::uint64_t undecided = 0;
};

OnesCorrelation ones_correlation(std::size_t m, std::uint64_t step_cap, unsigned threads = 0);

// Average-rank Spearman correlation.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace tagforge
