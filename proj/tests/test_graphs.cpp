#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "tagforge/cycles.hpp"
#include "tagforge/graphs.hpp"

using namespace tagforge;

namespace {

bool has(const std::vector<std::uint64_t>& v, std::uint64_t x) { return std::find(v.begin(), v.end(), x) != v.end(); }

}  // namespace

TEST(StateGraph, SmallClosures) {
  auto g1 = state_transition_graph(1);
  EXPECT_TRUE(has(g1.cycle_periods, 2));
  bool terminal = false;
  for (const auto& n : g1.nodes) terminal |= n.successor < 0;
  EXPECT_TRUE(terminal);
  EXPECT_FALSE(g1.partial);

  auto g2 = state_transition_graph(2);
  EXPECT_TRUE(has(g2.cycle_periods, 2));
  EXPECT_TRUE(has(g2.cycle_periods, 6));
}

TEST(StateGraph, HighwayAtLength4) {
  auto g = state_transition_graph(4);
  EXPECT_GE(g.longest_transient, 380u);
  EXPECT_LE(g.longest_transient, 440u);
}

TEST(StateGraph, EmptyEnumeration) {
  auto g = state_transition_graph(0, 1000, 1);
  EXPECT_TRUE(g.nodes.empty());
  EXPECT_EQ(g.components, 0u);
}

TEST(StateGraph, FunctionalGraphInvariants) {
  auto g = state_transition_graph(5);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& n = g.nodes[i];
    auto next = step_compressed(n.state);
    if (n.successor < 0) {
      ASSERT_FALSE(next.has_value());
      continue;
    }
    ASSERT_TRUE(next.has_value());
    ASSERT_EQ(g.nodes[static_cast<std::size_t>(n.successor)].state, *next);
    if (n.on_cycle) {
      EXPECT_EQ(n.dist_to_cycle, 0u);
      EXPECT_EQ(is_on_cycle(n.state, 1000), std::optional<std::uint64_t>(n.cycle_period));
    } else {
      EXPECT_EQ(g.nodes[static_cast<std::size_t>(n.successor)].dist_to_cycle + 1, n.dist_to_cycle);
    }
  }
}

TEST(StateGraph, DotAndJsonExports) {
  auto g = state_transition_graph(2);
  const auto dot = to_dot(g);
  EXPECT_NE(dot.find("digraph"), std::string::npos);
  const auto collapsed = to_dot(state_transition_graph(4), true);
  EXPECT_LT(collapsed.size(), to_dot(state_transition_graph(4)).size());
  EXPECT_EQ(to_json(g), to_json(state_transition_graph(2)));
}

// Inversion against forward brute force over all candidate states.
TEST(Predecessors, SoundAndCompleteThroughLength6) {
  for (std::size_t m = 0; m <= 6; ++m)
    for (std::uint64_t v = 0; v < (1u << m); ++v)
      for (std::uint8_t phase = 0; phase < 3; ++phase) {
        if (m == 0 && phase != 0) continue;
        const auto target = make_state(oracle::bits_of(v, m), phase);
        std::set<CompressedState> want;
        for (std::size_t pm = (m > 0 ? m - 1 : 0); pm <= m + 1; ++pm)
          for (std::uint64_t pv = 0; pv < (1u << pm); ++pv)
            for (std::uint8_t pp = 0; pp < 3; ++pp) {
              const auto p = make_state(oracle::bits_of(pv, pm), pp);
              auto n = step_compressed(p);
              if (n && *n == target) want.insert(p);
            }
        auto got = predecessors(target);
        std::set<CompressedState> got_set(got.begin(), got.end());
        ASSERT_EQ(got_set.size(), got.size());
        ASSERT_EQ(got_set, want) << format_state_id(target);
      }
}

TEST(PredecessorTree, Block1100StopsAfter21Levels) {
  auto t = predecessor_tree(make_state("1100", 0), 200);
  EXPECT_TRUE(t.finite);
  EXPECT_EQ(t.per_depth.size(), 22u);
}

TEST(PredecessorTree, TerminalTreeGrowthRate) {
  auto t = predecessor_tree(terminal_states(), 30);
  EXPECT_FALSE(t.finite);
  const double rate = tree_growth_rate(t, 10, 30);
  EXPECT_GE(rate, 1.08);
  EXPECT_LE(rate, 1.16);
}

TEST(PredecessorTree, LeafState) {
  for (std::size_t m = 1; m <= 4; ++m)
    for (std::uint64_t v = 0; v < (1u << m); ++v) {
      auto c = make_state(oracle::bits_of(v, m), 1);
      if (!predecessors(c).empty()) continue;
      auto t = predecessor_tree(c, 10);
      EXPECT_TRUE(t.finite);
      EXPECT_EQ(t.total, 1u);
      return;
    }
  FAIL() << "no leaf state found";
}

TEST(CausalGraph, FourteenLengthFour) {
  const auto c = parse_state_id("4:14:0");
  auto g = causal_graph(c, 100000);
  EXPECT_TRUE(g.halted);
  EXPECT_EQ(g.events.size(), 419u);
  for (const auto& [a, b] : g.edges) EXPECT_LT(a, b);
  for (const auto& [a, b] : g.edges) EXPECT_NE(b, 0u);

  std::uint64_t ones = 0, zeros = 0;
  std::string s = oracle::uncompress("1110", 0);
  while (!s.empty()) {
    (s[0] == '1' ? ones : zeros)++;
    if (s.size() < 3) break;
    s = *oracle::post_step(s);
  }
  std::uint64_t exp = 0, con = 0;
  for (const auto& e : g.events) (e.type == EventType::expansion ? exp : con)++;
  EXPECT_EQ(exp, ones);
  EXPECT_EQ(con, zeros);
  EXPECT_NE(to_dot(g).find("digraph"), std::string::npos);
}
