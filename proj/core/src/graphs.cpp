#include "tagforge/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "tagforge/enumeration.hpp"

namespace tagforge {

namespace {

std::size_t get_or_add(StateGraph& g, const CompressedState& s, bool& fresh) {
  auto [it, inserted] = g.index.emplace(s, g.nodes.size());
  fresh = inserted;
  if (inserted) g.nodes.push_back({s});
  return it->second;
}

void analyse(StateGraph& g) {
  const std::size_t n = g.nodes.size();
  std::vector<std::uint8_t> mark(n, 0);  // 0 new, 1 on current path, 2 done
  std::vector<std::size_t> path;
  for (std::size_t start = 0; start < n; ++start) {
    if (mark[start]) continue;
    path.clear();
    std::size_t v = start;
    for (;;) {
      if (mark[v] == 2) break;
      if (mark[v] == 1) {
        const auto pos = std::find(path.begin(), path.end(), v) - path.begin();
        const std::uint64_t period = path.size() - pos;
        for (std::size_t k = pos; k < path.size(); ++k) {
          auto& node = g.nodes[path[k]];
          node.on_cycle = true;
          node.dist_to_cycle = 0;
          node.cycle_period = period;
          mark[path[k]] = 2;
        }
        path.resize(pos);
        g.cycle_periods.push_back(period);
        ++g.components;
        break;
      }
      mark[v] = 1;
      path.push_back(v);
      if (g.nodes[v].successor < 0) {
        g.nodes[v].dist_to_cycle = 0;
        g.nodes[v].cycle_period = 0;
        mark[v] = 2;
        path.pop_back();
        ++g.components;
        break;
      }
      v = static_cast<std::size_t>(g.nodes[v].successor);
    }
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      auto& node = g.nodes[*it];
      const auto& next = g.nodes[static_cast<std::size_t>(node.successor)];
      node.dist_to_cycle = next.dist_to_cycle + 1;
      node.cycle_period = next.cycle_period;
      mark[*it] = 2;
    }
  }
  std::sort(g.cycle_periods.begin(), g.cycle_periods.end());
  for (const auto& node : g.nodes) g.longest_transient = std::max(g.longest_transient, node.dist_to_cycle);
}

}  // namespace

StateGraph state_transition_graph(std::size_t max_m, std::uint64_t step_cap, std::size_t min_m) {
  StateGraph g;
  for (std::size_t m = min_m; m <= max_m; ++m) {
    for_each_initial(m, kAllPhases, [&](const CompressedState& ic) {
      bool fresh = false;
      std::size_t idx = get_or_add(g, ic, fresh);
      if (!fresh) return;
      CompressedState s = ic;
      for (std::uint64_t steps = 0;; ++steps) {
        if (s.halted()) break;
        if (steps >= step_cap) {
          g.partial = true;
          break;
        }
        step_compressed_inplace(s);
        const std::size_t next = get_or_add(g, s, fresh);
        g.nodes[idx].successor = static_cast<std::int64_t>(next);
        if (!fresh) break;
        idx = next;
      }
    });
  }
  analyse(g);
  return g;
}

std::string to_dot(const StateGraph& g, bool collapse_chains) {
  std::ostringstream out;
  out << "// tagforge-graph v1\ndigraph states {\n  node [shape=point];\n";
  std::vector<std::uint32_t> indeg(g.nodes.size(), 0);
  for (const auto& node : g.nodes)
    if (node.successor >= 0) ++indeg[static_cast<std::size_t>(node.successor)];
  auto interior = [&](std::size_t i) {
    const auto& node = g.nodes[i];
    return collapse_chains && indeg[i] == 1 && !node.on_cycle && node.successor >= 0;
  };
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (interior(i)) continue;
    const auto& node = g.nodes[i];
    out << "  n" << i << " [label=\"" << format_state_id(node.state) << "\", len=" << node.state.uncompressed_length()
        << ", phase=" << int(node.state.phase) << ", on_cycle=" << (node.on_cycle ? 1 : 0)
        << ", dist_to_cycle=" << node.dist_to_cycle << "];\n";
  }
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (interior(i) || g.nodes[i].successor < 0) continue;
    std::size_t j = static_cast<std::size_t>(g.nodes[i].successor);
    std::uint64_t weight = 1;
    while (interior(j)) {
      j = static_cast<std::size_t>(g.nodes[j].successor);
      ++weight;
    }
    out << "  n" << i << " -> n" << j;
    if (weight > 1) out << " [weight=" << weight << ", label=\"" << weight << "\"]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string to_json(const StateGraph& g) {
  nlohmann::ordered_json j;
  j["format"] = "tagforge-graph";
  j["version"] = 1;
  auto nodes = nlohmann::ordered_json::array();
  auto edges = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& node = g.nodes[i];
    nlohmann::ordered_json n;
    n["id"] = format_state_id(node.state);
    n["len"] = node.state.uncompressed_length();
    n["phase"] = node.state.phase;
    n["on_cycle"] = node.on_cycle;
    n["dist_to_cycle"] = node.dist_to_cycle;
    nodes.push_back(std::move(n));
    if (node.successor >= 0) edges.push_back({i, node.successor});
  }
  j["nodes"] = std::move(nodes);
  j["edges"] = std::move(edges);
  j["cycle_periods"] = g.cycle_periods;
  j["components"] = g.components;
  j["longest_transient"] = g.longest_transient;
  j["partial"] = g.partial;
  return j.dump();
}

std::vector<CompressedState> predecessors(const CompressedState& c) {
  struct Rule {
    std::uint8_t from_phase;
    bool lead;
    std::uint8_t to_phase;
    std::uint8_t append_count;
    std::uint8_t append_bits;  // first appended in bit 0
  };
  static constexpr Rule rules[6] = {
      {0, false, 2, 1, 0b0}, {0, true, 1, 2, 0b11}, {1, false, 0, 0, 0},
      {1, true, 2, 1, 0b0},  {2, false, 1, 1, 0b0}, {2, true, 0, 1, 0b1},
  };
  std::vector<CompressedState> out;
  const std::size_t m = c.word.size();
  for (const auto& r : rules) {
    if (r.to_phase != c.phase || m < r.append_count) continue;
    bool match = true;
    for (unsigned k = 0; k < r.append_count; ++k)
      if (c.word[m - r.append_count + k] != bool((r.append_bits >> k) & 1u)) match = false;
    if (!match) continue;
    CompressedState p;
    p.phase = r.from_phase;
    p.word.push_back(r.lead);
    for (std::size_t k = 0; k + r.append_count < m; ++k) p.word.push_back(c.word[k]);
    if (!p.halted()) out.push_back(std::move(p));
  }
  return out;
}

std::vector<CompressedState> terminal_states() {
  std::vector<CompressedState> out;
  for (std::uint8_t phase = 0; phase < 3; ++phase) {
    for (std::size_t m = 0; m <= 1; ++m) {
      for (std::uint64_t v = 0; v < (std::uint64_t{1} << m); ++v) {
        CompressedState s = initial_state(m, v, phase);
        if (s.halted() && !predecessors(s).empty()) out.push_back(std::move(s));
      }
    }
  }
  return out;
}

PredecessorTree predecessor_tree(const std::vector<CompressedState>& roots, std::size_t depth_cap) {
  PredecessorTree t;
  std::unordered_set<CompressedState, CompressedStateHash> seen(roots.begin(), roots.end());
  std::vector<CompressedState> frontier(seen.begin(), seen.end());
  t.per_depth.push_back(frontier.size());
  t.total = frontier.size();
  for (std::size_t depth = 1; depth <= depth_cap; ++depth) {
    std::vector<CompressedState> next;
    for (const auto& s : frontier)
      for (auto& p : predecessors(s))
        if (seen.insert(p).second) next.push_back(std::move(p));
    if (next.empty()) {
      t.finite = true;
      break;
    }
    t.per_depth.push_back(next.size());
    t.total += next.size();
    frontier = std::move(next);
  }
  return t;
}

PredecessorTree predecessor_tree(const CompressedState& root, std::size_t depth_cap) {
  return predecessor_tree(std::vector<CompressedState>{root}, depth_cap);
}

double tree_growth_rate(const PredecessorTree& t, std::size_t lo, std::size_t hi) {
  hi = std::min(hi, t.per_depth.size() - 1);
  std::vector<double> xs, ys;
  for (std::size_t d = lo; d <= hi; ++d) {
    if (t.per_depth[d] == 0) continue;
    xs.push_back(static_cast<double>(d));
    ys.push_back(std::log(static_cast<double>(t.per_depth[d])));
  }
  if (xs.size() < 2) return 0.0;
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return std::exp(sxy / sxx);
}

CausalGraph causal_graph(const CompressedState& c, std::uint64_t max_steps) {
  CausalGraph g;
  std::deque<std::pair<std::uint8_t, std::int64_t>> q;
  for (auto v : uncompress(c).symbols) q.emplace_back(v, -1);
  for (std::uint64_t t = 0; t < max_steps; ++t) {
    if (q.empty()) {
      g.halted = true;
      break;
    }
    const std::uint8_t lead = q.front().first;
    const std::size_t take = std::min<std::size_t>(3, q.size());
    std::int64_t producers[3];
    std::size_t np = 0;
    for (std::size_t k = 0; k < take; ++k) {
      const std::int64_t p = q.front().second;
      q.pop_front();
      if (p >= 0 && std::find(producers, producers + np, p) == producers + np) producers[np++] = p;
    }
    std::sort(producers, producers + np);
    for (std::size_t k = 0; k < np; ++k) g.edges.emplace_back(static_cast<std::uint64_t>(producers[k]), t);
    g.events.push_back({t, lead ? EventType::expansion : EventType::contraction});
    if (take < 3) {
      g.halted = true;
      break;
    }
    const auto& block = TagRule::post().appends[lead];
    for (auto v : block) q.emplace_back(v, static_cast<std::int64_t>(t));
  }
  if (q.empty()) g.halted = true;
  return g;
}

std::string to_dot(const CausalGraph& g) {
  std::ostringstream out;
  out << "// tagforge-causal v1\ndigraph causal {\n";
  for (const auto& e : g.events)
    out << "  e" << e.step << " [color=" << (e.type == EventType::expansion ? "red" : "blue") << "];\n";
  for (const auto& [a, b] : g.edges) out << "  e" << a << " -> e" << b << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace tagforge
