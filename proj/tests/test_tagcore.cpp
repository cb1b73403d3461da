#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "tagforge/fast_engine.hpp"
#include "tagforge/tagcore.hpp"

using namespace tagforge;

namespace {

std::string str(const UncompressedState& s) { return s.to_string(); }

CompressedState from_oracle(const std::string& s) {
  auto [w, p] = oracle::compress(s);
  return make_state(w, static_cast<std::uint8_t>(p));
}

}  // namespace

TEST(TagRule, PostConstantIsValid) {
  const TagRule& post = TagRule::post();
  EXPECT_EQ(post.alphabet_size, 2);
  EXPECT_EQ(post.deletion, 3);
  ASSERT_EQ(post.appends.size(), 2u);
  EXPECT_EQ(post.appends[0], (Symbols{0, 0}));
  EXPECT_EQ(post.appends[1], (Symbols{1, 1, 0, 1}));
  EXPECT_NO_THROW(post.validate());
}

TEST(TagRule, RejectsOutOfAlphabetAppend) {
  TagRule r{2, 2, {{0}, {2}}};
  EXPECT_THROW(r.validate(), MalformedState);
  TagRule missing{3, 2, {{0}, {1}}};
  EXPECT_THROW(missing.validate(), MalformedState);
}

TEST(StepUncompressed, ListedExamples) {
  const auto& post = TagRule::post();
  EXPECT_EQ(str(*step_uncompressed(post, UncompressedState::from_string("10010"))), "101101");
  EXPECT_EQ(str(*step_uncompressed(post, UncompressedState::from_string("000"))), "00");
  EXPECT_FALSE(step_uncompressed(post, UncompressedState::from_string("01")).has_value());
  EXPECT_THROW(step_uncompressed(post, UncompressedState{{0, 2, 1}}), MalformedState);
}

TEST(StepUncompressed, LengthLaw) {
  std::mt19937_64 rng(7);
  const auto& post = TagRule::post();
  for (int trial = 0; trial < 200; ++trial) {
    UncompressedState s;
    for (int i = 0; i < 30; ++i) s.symbols.push_back(rng() & 1);
    for (int t = 0; t < 100; ++t) {
      auto n = step_uncompressed(post, s);
      if (!n) break;
      const long delta = static_cast<long>(n->length()) - static_cast<long>(s.length());
      EXPECT_EQ(delta, s.symbols[0] ? 1 : -1);
      s = *n;
    }
  }
}

TEST(Compress, ListedExamples) {
  auto c = compress(UncompressedState::from_string("10010"));
  EXPECT_EQ(c.word.to_string(), "11");
  EXPECT_EQ(c.phase, 2);
  auto e = compress(UncompressedState{});
  EXPECT_TRUE(e.word.empty());
  EXPECT_EQ(e.phase, 0);
  auto m = compress(UncompressedState::from_string("100100100000100000"));
  EXPECT_EQ(m.word.to_string(), "111010");
  EXPECT_EQ(m.phase, 0);
}

TEST(Uncompress, ListedExamples) {
  EXPECT_EQ(str(uncompress(make_state("11", 2))), "10010");
  EXPECT_EQ(str(uncompress(make_state("", 0))), "");
  EXPECT_EQ(str(uncompress(make_state("01", 0))), "000100");
  auto c = compress(UncompressedState::from_string("001101"));
  EXPECT_EQ(c, make_state("01", 0));
}

TEST(Uncompress, RoundTripAllWordsThrough12) {
  for (std::size_t m = 1; m <= 12; ++m)
    for (std::uint64_t v = 0; v < (1u << m); ++v)
      for (std::uint8_t phase = 0; phase < 3; ++phase)
        for (std::uint8_t pad = 0; pad < 2; ++pad) {
          const auto bits = oracle::bits_of(v, m);
          const auto c = make_state(bits, phase);
          const auto u = uncompress(c, pad);
          ASSERT_EQ(u.length(), c.uncompressed_length());
          ASSERT_EQ(compress(u), c) << bits << ':' << int(phase) << " pad " << int(pad);
          if (pad == 0) ASSERT_EQ(str(u), oracle::uncompress(bits, phase));
        }
}

TEST(StepCompressed, SixRuleTable) {
  EXPECT_EQ(*step_compressed(make_state("0110", 0)), make_state("1100", 2));
  EXPECT_EQ(*step_compressed(make_state("0110", 1)), make_state("110", 0));
  EXPECT_EQ(*step_compressed(make_state("0110", 2)), make_state("1100", 1));
  EXPECT_EQ(*step_compressed(make_state("1010", 0)), make_state("01011", 1));
  EXPECT_EQ(*step_compressed(make_state("1010", 1)), make_state("0100", 2));
  EXPECT_EQ(*step_compressed(make_state("1010", 2)), make_state("0101", 0));
  EXPECT_FALSE(step_compressed(make_state("", 0)).has_value());
  EXPECT_FALSE(step_compressed(make_state("1", 1)).has_value());
}

// Compressed states reach the 6-cycle at step 11; the pad-0 string needs 16
// steps because its don't-care symbols differ until then.
TEST(StepCompressed, ElevenPhaseTwoReachesSixCycle) {
  CompressedState c = make_state("11", 2);
  std::vector<CompressedState> trail{c};
  for (int t = 0; t < 30; ++t) trail.push_back(c = *step_compressed(c));
  EXPECT_EQ(trail[11], trail[17]);
  EXPECT_NE(trail[10], trail[16]);
  std::vector<std::string> s{"10010"};
  for (int t = 0; t < 30; ++t) s.push_back(*oracle::post_step(s.back()));
  EXPECT_EQ(s[16], s[22]);
  EXPECT_NE(s[15], s[21]);
}

// Every representation must agree with the plain string oracle.
TEST(RepresentationAgreement, FourRepresentations200Steps) {
  const auto& post = TagRule::post();
  std::mt19937_64 rng(2024);
  auto check = [&](const std::string& start) {
    std::string o = start;
    UncompressedState u = UncompressedState::from_string(start);
    CompressedState c = compress(u);
    IntegerPairState ip = to_integer_pair(u);
    for (int t = 0; t < 200; ++t) {
      ASSERT_EQ(compress(u), from_oracle(o));
      ASSERT_EQ(c, from_oracle(o));
      ASSERT_EQ(str(from_integer_pair(ip)), o);
      auto f = evolve_fast(compress(UncompressedState::from_string(start)), static_cast<std::uint64_t>(t));
      ASSERT_EQ(f.state, c) << start << " t=" << t;
      auto next = oracle::post_step(o);
      if (!next) {
        EXPECT_FALSE(step_uncompressed(post, u).has_value());
        EXPECT_FALSE(step_compressed(c).has_value());
        break;
      }
      o = *next;
      u = *step_uncompressed(post, u);
      c = *step_compressed(c);
      ip = integer_pair_step(ip);
    }
  };
  for (std::size_t n = 3; n <= 10; ++n)
    for (std::uint64_t v = 0; v < (1u << n); ++v) check(oracle::bits_of(v, n));
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 11 + rng() % 8;
    check(oracle::bits_of(rng() & ((1u << n) - 1), n));
  }
}

TEST(EvolveFast, MatchesSingleStepsOverLongRuns) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    std::string bits;
    for (int i = 0; i < 40; ++i) bits += (rng() & 1) ? '1' : '0';
    CompressedState start = make_state(bits, static_cast<std::uint8_t>(rng() % 3));
    const std::uint64_t n = 1000 + rng() % 5000;
    CompressedState slow = start;
    std::uint64_t taken = 0;
    while (taken < n && step_compressed_inplace(slow)) ++taken;
    auto fast = evolve_fast(start, n);
    EXPECT_EQ(fast.steps, taken);
    EXPECT_EQ(fast.state, slow);
  }
}

TEST(EvolveFast, ListedExamples) {
  auto zero = evolve_fast(parse_state_id("9:506:0"), 0);
  EXPECT_EQ(zero.steps, 0u);
  EXPECT_EQ(zero.state, parse_state_id("9:506:0"));

  auto h = evolve_fast(parse_state_id("4:14:0"), 1'000'000);
  EXPECT_TRUE(h.halted);
  // 418 steps leave a nonempty remainder shorter than 3; deleting it is step 419.
  EXPECT_EQ(h.steps, 418u);
  EXPECT_GE(h.state.uncompressed_length(), 1u);
  EXPECT_LE(h.state.uncompressed_length(), 2u);
}

TEST(IntegerPair, ListedExamples) {
  EXPECT_EQ(integer_pair_step({12, 2336}), (IntegerPairState{13, 4621}));
  EXPECT_EQ(integer_pair_step({13, 4621}), (IntegerPairState{14, 8413}));
  EXPECT_EQ(integer_pair_step({3, 0}), (IntegerPairState{2, 0}));
  EXPECT_THROW(integer_pair_step({2, 1}), MalformedState);
  EXPECT_EQ(to_integer_pair(uncompress(parse_state_id("4:14:0"))), (IntegerPairState{12, 2336}));
}

TEST(IntegerPair, RoundTripExhaustiveSmallAndRandomTo64) {
  for (std::size_t n = 0; n <= 14; ++n)
    for (std::uint64_t v = 0; v < (1u << n); ++v) {
      auto u = UncompressedState::from_string(oracle::bits_of(v, n));
      auto p = to_integer_pair(u);
      ASSERT_EQ(p.n, n);
      ASSERT_EQ(p.i, BigInt(v));
      ASSERT_EQ(from_integer_pair(p), u);
    }
  std::mt19937_64 rng(5);
  for (std::size_t n = 15; n <= 64; ++n)
    for (int k = 0; k < 50; ++k) {
      std::string s;
      for (std::size_t i = 0; i < n; ++i) s += (rng() & 1) ? '1' : '0';
      auto u = UncompressedState::from_string(s);
      ASSERT_EQ(from_integer_pair(to_integer_pair(u)), u);
    }
}

TEST(StateId, ParseAndFormat) {
  auto c = parse_state_id("9:506:0");
  EXPECT_EQ(c.word.to_string(), "111111010");
  EXPECT_EQ(c.phase, 0);
  EXPECT_EQ(format_state_id(c), "9:506:0");
  EXPECT_TRUE(parse_state_id("0:0:0").word.empty());
  EXPECT_EQ(parse_state_id("1110:0"), parse_state_id("4:14:0"));
  EXPECT_EQ(format_state_id(parse_state_id("1110:0")), "4:14:0");
  EXPECT_EQ(format_bits_id(parse_state_id("4:14:0")), "1110:0");
  EXPECT_EQ(parse_state_id("5:3:1").word.to_string(), "00011");
}

TEST(StateId, RoundTripAll) {
  for (std::size_t m = 0; m <= 10; ++m)
    for (std::uint64_t v = 0; v < (1u << m); ++v)
      for (int p = 0; p < 3; ++p) {
        const std::string id = std::to_string(m) + ":" + std::to_string(v) + ":" + std::to_string(p);
        ASSERT_EQ(format_state_id(parse_state_id(id)), id);
      }
}

TEST(StateId, RejectsMalformed) {
  for (const char* bad : {"4:16:0", "4:14:3", "", "4:14", "x:1:0", "4:-1:0", "4:14:0:1", "10a:0", "11:5"})
    EXPECT_THROW(parse_state_id(bad), FormatError) << bad;
}

TEST(PackedSerialization, RoundTrip) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::string bits;
    const std::size_t n = rng() % 300;
    for (std::size_t i = 0; i < n; ++i) bits += (rng() & 1) ? '1' : '0';
    auto c = make_state(bits, static_cast<std::uint8_t>(rng() % 3));
    std::size_t used = 0;
    auto bytes = serialize_state(c);
    EXPECT_EQ(bytes[0], static_cast<char>(c.phase));
    EXPECT_EQ(deserialize_state(bytes, &used), c);
    EXPECT_EQ(used, bytes.size());
  }
  EXPECT_THROW(deserialize_state(""), FormatError);
}
