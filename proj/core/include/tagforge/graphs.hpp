#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "tagforge/tagcore.hpp"

namespace tagforge {

struct GraphNode {
  CompressedState state;
  std::int64_t successor = -1;  // -1 for terminal (halted) states
  bool on_cycle = false;
  std::uint64_t dist_to_cycle = 0;  // steps to the first cycle or terminal state
  std::uint64_t cycle_period = 0;   // period of the attractor reached, 0 = termination
};

struct StateGraph {
  std::vector<GraphNode> nodes;
  std::unordered_map<CompressedState, std::size_t, CompressedStateHash> index;
  std::vector<std::uint64_t> cycle_periods;  // one per distinct cycle, sorted
  std::size_t components = 0;                // attractors: cycles plus terminal states reached
  std::uint64_t longest_transient = 0;       // the longest "highway"
  bool partial = false;                      // some closure walk hit step_cap
};

// Closure of all initial conditions with word length in [min_m, max_m] under
// the step map.
StateGraph state_transition_graph(std::size_t max_m, std::uint64_t step_cap = 1u << 20, std::size_t min_m = 1);

std::string to_dot(const StateGraph& g, bool collapse_chains = false);
std::string to_json(const StateGraph& g);

// Every non-halted state whose single step gives c.
std::vector<CompressedState> predecessors(const CompressedState& c);

struct PredecessorTree {
  std::vector<std::uint64_t> per_depth;  // per_depth[0] = number of roots
  bool finite = false;                   // ran out of predecessors before depth_cap
  std::uint64_t total = 0;
};

// Breadth-first over distinct states; a state already in the tree is not
// expanded again.
PredecessorTree predecessor_tree(const std::vector<CompressedState>& roots, std::size_t depth_cap);
PredecessorTree predecessor_tree(const CompressedState& root, std::size_t depth_cap);

// Halted states that have a non-halted predecessor.
std::vector<CompressedState> terminal_states();

// exp of the OLS slope of log(count) against depth over [lo, hi].
double tree_growth_rate(const PredecessorTree& t, std::size_t lo, std::size_t hi);

enum class EventType : std::uint8_t { contraction = 0, expansion = 1 };

struct CausalEvent {
  std::uint64_t step = 0;
  EventType type = EventType::contraction;
};

struct CausalGraph {
  std::vector<CausalEvent> events;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;  // producer -> consumer
  bool halted = false;
};

// Runs the pad-0 uncompressed string. Event t consumes stream positions
// 3t..3t+2; a terminated run ends with one event deleting the short remainder.
CausalGraph causal_graph(const CompressedState& c, std::uint64_t max_steps);

std::string to_dot(const CausalGraph& g);

}  // namespace tagforge
