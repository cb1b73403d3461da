#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "tagforge/tagcore.hpp"

namespace tagforge {

// n -> (a_i n + b_i) / m on the residue class n = i (mod m).
struct ResidueRule {
  int m = 2;
  std::vector<BigInt> a, b;

  void validate() const;  // throws std::invalid_argument if some a_i i + b_i is not divisible by m
  BigInt apply(const BigInt& n) const;
  std::string to_string() const;  // "m=3 {n, 4n+2, 7n+1}"
};

ResidueRule collatz_shortcut_rule();  // m=2 {n, 3n+1}
ResidueRule five_n_plus_one_rule();   // m=2 {n, 5n+1}
ResidueRule four_seven_rule();        // m=3 {n, 4n+2, 7n+1}

enum class IterationOutcome { cycle, cap_exhausted, bit_ceiling };

struct IterationReport {
  IterationOutcome outcome = IterationOutcome::cap_exhausted;
  std::uint64_t transient = 0;     // index of the first value on the cycle
  std::uint64_t steps_to_min = 0;  // index of the first visit to the cycle's least value
  std::uint64_t period = 0;
  BigInt cycle_min = 0;
  std::uint64_t steps = 0;  // values generated
  std::vector<std::uint32_t> bit_lengths;  // per step, from step 0
  double growth_bits_per_step = 0.0;       // least-squares slope of bit_lengths
};

struct IterationOptions {
  std::uint64_t cap = 1'000'000;
  std::uint64_t bit_ceiling = 1'000'000;
};

IterationReport iterate_map(const std::function<BigInt(const BigInt&)>& f, const BigInt& n,
                            const IterationOptions& options = {});

// n -> n/2 or 3n+1; n >= 1.
IterationReport collatz_run(const BigInt& n, std::uint64_t cap = 1'000'000);
BigInt collatz_step(const BigInt& n);
IterationReport residue_run(const ResidueRule& rule, const BigInt& n, const IterationOptions& options = {});

// Sum of log2(a_i / m): the drift over one equidistributed pass through all
// residues, i.e. log2(a_1 ... a_{m-1} / m^m) when a_0 = 1.
double bias(const ResidueRule& rule);
// Drift per step of the unshortened map, where a branch with a_i != 1 costs a
// multiply step plus a divide step (3n+1 gives log2(3/4)/3).
double step_bias(const ResidueRule& rule);

// Among rules with a_0 = 1 and every other a_i >= 2 coprime to m, the product
// closest to m^m in log ratio; ties go to the smallest largest multiplier,
// then the largest smallest one. Multipliers ascend with the residue.
ResidueRule minimal_bias_rule(int m);

// All ascending multiplier tuples for m with product in [1, 2 m^m].
std::vector<ResidueRule> candidate_rules(int m);

std::vector<std::uint64_t> prime_pi_table(std::uint64_t n);

// (2n+3)!!/15 - (2n-2)!! pi(n)^2 ((BitLength[lcm(1..n)] - 1) sum_{k<n} (-1)^(k+1)/k - n)
BigInt riemann_quantity(std::uint64_t n);
std::vector<BigInt> riemann_sequence(std::uint64_t count);
// Q(n+1)/Q(n) - Q(n)/Q(n-1) for n = 2..count-1.
std::vector<double> riemann_ratio_differences(std::uint64_t count);

using RiemannState = std::array<BigInt, 7>;
RiemannState riemann_initial();  // {1, 1, 1, 0, 0, 1, 1}
RiemannState riemann_iteration_step(const RiemannState& x);
// x7 - x4^2 (x1 (BitLength[x3] - 1) - x6); the iteration continues while > 0.
BigInt riemann_margin(const RiemannState& x);
bool riemann_continues(const RiemannState& x);

void write_iteration_csv(std::ostream& out, const IterationReport& r);
std::string to_json(const IterationReport& r);

}  // namespace tagforge
