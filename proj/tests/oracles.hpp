#pragma once

// Deliberately naive reference implementations used to cross-check the
// library: plain strings, std::map of every visited state, no packing.

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

// Post's rule on a '0'/'1' string.
inline std::optional<std::string> post_step(const std::string& s) {
  if (s.size() < 3) return std::nullopt;
  return s.substr(3) + (s[0] == '0' ? "00" : "1101");
}

inline std::pair<std::string, int> compress(const std::string& s) {
  std::string w;
  for (std::size_t i = 0; i < s.size(); i += 3) w += s[i];
  return {w, static_cast<int>(s.size() % 3)};
}

// Word symbols at positions 0, 3, 6, ... with pad elsewhere, trimmed to the phase.
inline std::string uncompress(const std::string& word, int phase, char pad = '0') {
  if (word.empty()) return "";
  std::string s;
  for (char c : word) {
    s += c;
    s += pad;
    s += pad;
  }
  const std::size_t len = 3 * word.size() - (phase == 1 ? 2 : phase == 2 ? 1 : 0);
  s.resize(len);
  return s;
}

inline std::string bits_of(std::uint64_t value, std::size_t m) {
  std::string w(m, '0');
  for (std::size_t i = 0; i < m; ++i)
    if ((value >> (m - 1 - i)) & 1u) w[i] = '1';
  return w;
}

struct Outcome {
  std::uint64_t transient = 0;
  std::uint64_t period = 0;  // 0 = termination
  bool decided = false;
};

// Store every compressed state seen; the index of the first repeated state is
// the transient. Termination: index of the first state with uncompressed
// length < 3.
inline Outcome compressed_brute_force(const std::string& word, int phase, std::uint64_t cap) {
  std::map<std::pair<std::string, int>, std::uint64_t> seen;
  std::string s = uncompress(word, phase);
  for (std::uint64_t t = 0; t <= cap; ++t) {
    if (s.size() < 3) return {t, 0, true};
    auto key = compress(s);
    auto [it, fresh] = seen.emplace(key, t);
    if (!fresh) return {it->second, t - it->second, true};
    s = *post_step(s);
  }
  return {};
}

// Pad-0 uncompressed run. Termination counts one extra step that deletes a
// nonempty short remainder; cycles report the first repeated string.
inline Outcome literal_brute_force(const std::string& word, int phase, std::uint64_t cap) {
  std::map<std::string, std::uint64_t> seen;
  std::string s = uncompress(word, phase);
  for (std::uint64_t t = 0; t <= cap; ++t) {
    if (s.size() < 3) return {t + (s.empty() ? 0 : 1), 0, true};
    auto [it, fresh] = seen.emplace(s, t);
    if (!fresh) return {it->second, t - it->second, true};
    s = *post_step(s);
  }
  return {};
}

// Generic queue systems over digit strings.
struct FirstElement {
  int r;
  std::vector<std::string> appends;  // by symbol; "-" = undefined
};
struct Block {
  int k, r;
  std::map<std::string, std::string> appends;
};
struct Cyclic {
  std::vector<std::string> blocks;
};

struct ZooOutcome {
  std::uint64_t halting_step = 0;
  std::uint64_t period = 0;
  bool decided = false;
};

template <class Step>
ZooOutcome run_map(std::string s, std::size_t r, std::uint64_t cap, Step step) {
  std::map<std::string, std::uint64_t> seen;
  for (std::uint64_t t = 0; t <= cap; ++t) {
    if (s.size() < r) return {t + (s.empty() ? 0 : 1), 0, true};
    auto [it, fresh] = seen.emplace(s, t);
    if (!fresh) return {it->second, t - it->second, true};
    s = step(s, t);
  }
  return {};
}

inline ZooOutcome run(const FirstElement& rule, const std::string& ic, std::uint64_t cap) {
  return run_map(ic, static_cast<std::size_t>(rule.r), cap, [&](const std::string& s, std::uint64_t) {
    return s.substr(static_cast<std::size_t>(rule.r)) + rule.appends[static_cast<std::size_t>(s[0] - '0')];
  });
}

inline ZooOutcome run(const Block& rule, const std::string& ic, std::uint64_t cap) {
  return run_map(ic, static_cast<std::size_t>(rule.r), cap, [&](const std::string& s, std::uint64_t) {
    return s.substr(static_cast<std::size_t>(rule.r)) + rule.appends.at(s.substr(0, static_cast<std::size_t>(rule.r)));
  });
}

// The cursor is part of the state, so it goes into the key.
inline ZooOutcome run(const Cyclic& rule, const std::string& ic, std::uint64_t cap) {
  std::map<std::pair<std::string, std::size_t>, std::uint64_t> seen;
  std::string s = ic;
  std::size_t cur = 0;
  for (std::uint64_t t = 0; t <= cap; ++t) {
    if (s.empty()) return {t, 0, true};
    auto [it, fresh] = seen.emplace(std::make_pair(s, cur), t);
    if (!fresh) return {it->second, t - it->second, true};
    const char head = s[0];
    s.erase(0, 1);
    if (head == '1') s += rule.blocks[cur];
    cur = (cur + 1) % rule.blocks.size();
  }
  return {};
}

// Collatz with 64-bit arithmetic and a map of visited values.
inline Outcome collatz(std::uint64_t n, std::uint64_t cap) {
  std::map<std::uint64_t, std::uint64_t> seen;
  for (std::uint64_t t = 0; t <= cap; ++t) {
    auto [it, fresh] = seen.emplace(n, t);
    if (!fresh) return {it->second, t - it->second, true};
    n = n % 2 == 0 ? n / 2 : 3 * n + 1;
  }
  return {};
}

inline std::uint64_t collatz_steps_to_one(std::uint64_t n) {
  std::uint64_t t = 0;
  while (n != 1) {
    n = n % 2 == 0 ? n / 2 : 3 * n + 1;
    ++t;
  }
  return t;
}

}  // namespace oracle
