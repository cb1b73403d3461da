#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "oracles.hpp"
#include "tagforge/cycles.hpp"
#include "tagforge/halting.hpp"

using namespace tagforge;

namespace {

// Binary necklaces of length n with no two cyclically adjacent 0s, by
// canonical-rotation enumeration.
std::uint64_t necklace_oracle(std::size_t n) {
  std::uint64_t count = 0;
  for (std::uint64_t v = 0; v < (1ull << n); ++v) {
    const auto s = oracle::bits_of(v, n);
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      if (s[i] == '0' && s[(i + 1) % n] == '0') ok = false;
    if (!ok) continue;
    bool least = true;
    for (std::size_t r = 1; r < n && least; ++r)
      if (s.substr(r) + s.substr(0, r) < s) least = false;
    if (least) ++count;
  }
  return count;
}

std::vector<std::uint64_t> periods(const std::vector<CycleDescriptor>& cs) {
  std::vector<std::uint64_t> p;
  for (const auto& c : cs) p.push_back(c.period);
  return p;
}

}  // namespace

TEST(FamilyCycles, ListedRows) {
  EXPECT_EQ(periods(family_cycles(1)), (std::vector<std::uint64_t>{2, 4}));
  EXPECT_EQ(periods(family_cycles(2)), (std::vector<std::uint64_t>{2, 4, 6}));
  EXPECT_EQ(periods(family_cycles(3)), (std::vector<std::uint64_t>{2, 4, 8, 10}));
  EXPECT_EQ(periods(family_cycles(4)), (std::vector<std::uint64_t>{2, 4, 6, 10, 12, 14}));
  EXPECT_EQ(periods(family_cycles(5)), (std::vector<std::uint64_t>{2, 4, 12, 14, 14, 16, 16, 18}));
  EXPECT_EQ(periods(family_cycles(6)),
            (std::vector<std::uint64_t>{2, 4, 6, 8, 10, 14, 16, 16, 18, 18, 18, 20, 20, 22}));
}

TEST(FamilyCycles, SeedsAreMinimalAndExact) {
  for (std::size_t b = 1; b <= 6; ++b)
    for (const auto& c : family_cycles(b)) {
      CompressedState s = c.seed;
      for (std::uint64_t k = 1; k <= c.period; ++k) {
        ASSERT_TRUE(step_compressed_inplace(s));
        if (k < c.period) ASSERT_FALSE(s == c.seed);
        if (k < c.period) ASSERT_FALSE(s < c.seed);
      }
      ASSERT_EQ(s, c.seed);
      EXPECT_EQ(c.family, CycleFamily::block_01_1100);
    }
}

TEST(CountDistinctCycles, ListedValues) {
  const std::vector<int> want{2, 3, 4, 6, 8, 14, 20, 36, 60, 108, 188, 352, 632, 1182, 2192};
  for (std::size_t n = 1; n <= want.size(); ++n) EXPECT_EQ(count_distinct_cycles(n), want[n - 1]) << n;
}

TEST(CountDistinctCycles, FormulaMatchesConstruction) {
  for (std::size_t n = 1; n <= 8; ++n)
    EXPECT_EQ(count_distinct_cycles(n), BigInt(family_cycles(n).size())) << n;
}

TEST(CountOnCycleStrings, ListedAndNecklaceOracle) {
  const std::vector<int> first{1, 2, 2, 3, 3, 5, 5, 8};
  for (std::size_t n = 1; n <= 8; ++n) EXPECT_EQ(count_on_cycle_strings(n), first[n - 1]);
  EXPECT_EQ(count_on_cycle_strings(20), 766);
  EXPECT_EQ(count_on_cycle_strings(12), 31);
  for (std::size_t n = 1; n <= 18; ++n) EXPECT_EQ(count_on_cycle_strings(n), BigInt(necklace_oracle(n))) << n;
}

// n counts blocks of half-length, so necklaces grow like phi^n / n and the
// on-cycle words of compressed length 2n are a fraction ~ (sqrt(phi)/2)^(2n).
TEST(CountOnCycleStrings, DecaysLikeGoldenRootOverTwo) {
  const double phi = (1 + std::sqrt(5.0)) / 2;
  const double scaled = count_on_cycle_strings(60).convert_to<double>() * 60 / std::pow(phi, 60);
  EXPECT_NEAR(scaled, 1.0, 1e-5);
  EXPECT_NEAR(std::sqrt(phi) / 2, 0.636, 0.001);
  std::uint64_t on = 0;
  const std::size_t len = 20;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v)
    on += is_block_word(PackedWord::from_bits(oracle::bits_of(v, len)));
  EXPECT_NEAR(std::pow(static_cast<double>(on), 1.0 / len) / 2, 0.636, 0.015);
}

TEST(NumberTheory, LucasAndPhi) {
  const std::vector<int> lucas_want{2, 1, 3, 4, 7, 11, 18, 29, 47};
  for (std::size_t i = 0; i < lucas_want.size(); ++i) EXPECT_EQ(lucas(i), lucas_want[i]);
  const std::vector<std::uint64_t> phi{1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4};
  for (std::size_t i = 0; i < phi.size(); ++i) EXPECT_EQ(euler_phi(i + 1), phi[i]);
}

TEST(IsOnCycle, ListedExamples) {
  EXPECT_EQ(is_on_cycle(make_state("01", 0), 100), std::optional<std::uint64_t>(2));
  EXPECT_FALSE(is_on_cycle(make_state("", 0), 100).has_value());
  auto c = compress(UncompressedState::from_string("001101110111010000"));
  EXPECT_TRUE(is_on_cycle(c, 1000).has_value());
  EXPECT_FALSE(is_on_cycle(parse_state_id("4:14:0"), 1000).has_value());
}

TEST(IsOnCycle, AgreesWithDetector) {
  for (std::size_t m = 1; m <= 7; ++m)
    for (std::uint64_t v = 0; v < (1u << m); ++v)
      for (int phase = 0; phase < 3; ++phase) {
        const auto c = make_state(oracle::bits_of(v, m), static_cast<std::uint8_t>(phase));
        auto r = detect_halt_or_throw(c, 100000);
        auto p = is_on_cycle(c, 64);
        if (r.period > 0 && r.transient == 0) {
          ASSERT_EQ(p, std::optional<std::uint64_t>(r.period));
        } else {
          ASSERT_FALSE(p.has_value());
        }
      }
}

TEST(Period6Family, SeedsHavePeriodSix) {
  for (std::size_t m = 0; m <= 6; ++m) {
    auto s = period6_seed(m);
    EXPECT_EQ(s.uncompressed_length(), 16 + 18 * m);
    EXPECT_EQ(is_on_cycle(s, 64), std::optional<std::uint64_t>(6)) << m;
  }
}

TEST(Sporadic, PeriodFortyAtLength13) {
  SporadicOptions opt;
  opt.step_cap = 10'000'000;
  auto found = sporadic_search(13, 13, opt);
  const CycleDescriptor* forty = nullptr;
  for (const auto& c : found)
    if (c.period == 40) forty = &c;
  ASSERT_NE(forty, nullptr);
  EXPECT_EQ(forty->min_length, 37u);
  EXPECT_EQ(forty->max_length, 44u);
  EXPECT_EQ(forty->family, CycleFamily::sporadic);
  for (const auto& c : found) EXPECT_FALSE(is_block_word(c.seed.word));
}

TEST(Sporadic, Period282SeedLength24) {
  auto s = parse_state_id("27:3268039:0");
  auto p = is_on_cycle(s, 512);
  ASSERT_EQ(p, std::optional<std::uint64_t>(282));
  auto d = describe_cycle(s, 282);
  EXPECT_EQ(d.min_word, 24u);
  EXPECT_EQ(d.min_length, 71u);
  EXPECT_EQ(d.max_length, 84u);
}

TEST(BlockWord, Recognizer) {
  EXPECT_TRUE(is_block_word(PackedWord::from_bits("01")));
  EXPECT_TRUE(is_block_word(PackedWord::from_bits("110001")));
  EXPECT_TRUE(is_block_word(PackedWord::from_bits("")));
  EXPECT_FALSE(is_block_word(PackedWord::from_bits("0")));
  EXPECT_FALSE(is_block_word(PackedWord::from_bits("111")));
}

TEST(CycleJsonl, OneLinePerCycle) {
  std::stringstream out;
  write_cycle_jsonl(out, family_cycles(3));
  std::string line;
  int lines = 0;
  std::getline(out, line);
  EXPECT_NE(line.find("tagforge-cycles"), std::string::npos);
  while (std::getline(out, line)) ++lines;
  EXPECT_EQ(lines, 4);
}
