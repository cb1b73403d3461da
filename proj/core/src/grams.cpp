#include "tagforge/grams.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace tagforge {

BlockAutomaton::BlockAutomaton(std::vector<std::string> blocks) {
  std::vector<int> starts;
  for (const auto& b : blocks) {
    if (b.empty()) throw std::invalid_argument("blocks must be nonempty");
    starts.push_back(static_cast<int>(emit_.size()));
    for (char ch : b) {
      if (ch != '0' && ch != '1') throw std::invalid_argument("blocks must be binary");
      emit_.push_back(ch - '0');
    }
  }
  if (emit_.size() > 64) throw std::invalid_argument("too many block positions");
  next_.resize(emit_.size());
  std::size_t pos = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.size(); ++i, ++pos) {
      if (i + 1 < b.size())
        next_[pos] = {static_cast<int>(pos + 1)};
      else
        next_[pos] = starts;
    }
  }
}

std::uint64_t BlockAutomaton::step(std::uint64_t set, int symbol) const {
  std::uint64_t out = 0;
  for (std::size_t p = 0; p < emit_.size(); ++p)
    if (((set >> p) & 1u) && emit_[p] == symbol)
      for (int q : next_[p]) out |= std::uint64_t{1} << q;
  return out;
}

std::uint64_t BlockAutomaton::count_factors(std::size_t m) const {
  const std::uint64_t all = emit_.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << emit_.size()) - 1;
  std::unordered_map<std::uint64_t, std::uint64_t> layer{{all, 1}};
  for (std::size_t k = 0; k < m; ++k) {
    std::unordered_map<std::uint64_t, std::uint64_t> next;
    for (const auto& [set, count] : layer)
      for (int a = 0; a < 2; ++a)
        if (const auto s = step(set, a)) next[s] += count;
    layer = std::move(next);
  }
  std::uint64_t total = 0;
  for (const auto& [set, count] : layer) total += count;
  return total;
}

bool BlockAutomaton::accepts(std::string_view factor) const {
  std::uint64_t set = emit_.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << emit_.size()) - 1;
  for (char ch : factor) {
    set = step(set, ch - '0');
    if (!set) return false;
  }
  return true;
}

std::vector<std::string> BlockAutomaton::factors(std::size_t m) const {
  if (m > 24) throw std::out_of_range("factor listing limited to m <= 24");
  std::vector<std::string> out;
  std::string cur;
  const std::uint64_t all = (std::uint64_t{1} << emit_.size()) - 1;
  std::function<void(std::uint64_t)> rec = [&](std::uint64_t set) {
    if (cur.size() == m) {
      out.push_back(cur);
      return;
    }
    for (int a = 0; a < 2; ++a) {
      if (const auto s = step(set, a)) {
        cur.push_back(static_cast<char>('0' + a));
        rec(s);
        cur.pop_back();
      }
    }
  };
  rec(all);
  return out;
}

std::uint64_t mgram_count(std::size_t m) {
  static const BlockAutomaton automaton;
  return automaton.count_factors(m);
}

std::uint64_t mgram_closed_form(std::size_t x) {
  auto fib = [](std::size_t n) {
    std::uint64_t a = 0, b = 1;
    for (std::size_t k = 0; k < n; ++k) {
      const std::uint64_t c = a + b;
      a = b;
      b = c;
    }
    return a;
  };
  if (x % 2 == 0) return 2 * fib(x / 2 + 4) - 1;
  return fib((x + 11) / 2) - 1;
}

std::vector<std::string> forbidden_blocks(std::size_t m) {
  if (m > 24) throw std::out_of_range("forbidden block listing limited to m <= 24");
  static const BlockAutomaton automaton;
  std::vector<std::string> out;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << m); ++v) {
    std::string s(m, '0');
    for (std::size_t k = 0; k < m; ++k)
      if ((v >> (m - 1 - k)) & 1u) s[k] = '1';
    if (!automaton.accepts(s)) out.push_back(s);
  }
  return out;
}

std::vector<std::uint8_t> de_bruijn(std::size_t n) {
  if (n == 0 || n > 30) throw std::out_of_range("de Bruijn order must be in 1..30");
  std::vector<std::uint8_t> a(n + 1, 0), seq;
  seq.reserve(std::size_t{1} << n);
  std::function<void(std::size_t, std::size_t)> db = [&](std::size_t t, std::size_t p) {
    if (t > n) {
      if (n % p == 0) seq.insert(seq.end(), a.begin() + 1, a.begin() + static_cast<std::ptrdiff_t>(p) + 1);
      return;
    }
    a[t] = a[t - p];
    db(t + 1, p);
    for (std::uint8_t j = a[t - p] + 1; j < 2; ++j) {
      a[t] = j;
      db(t + 1, t);
    }
  };
  db(1, 1);
  return seq;
}

namespace {

std::unordered_map<std::uint64_t, std::uint64_t> flattened_counts(std::size_t m) {
  if (m == 0 || m > 24) throw std::out_of_range("multiplicity table needs 1 <= m <= 24");
  std::vector<std::uint8_t> flat;
  for (auto s : de_bruijn(m)) {
    if (s)
      flat.insert(flat.end(), {1, 1, 0, 1});
    else
      flat.insert(flat.end(), {0, 0});
  }
  const std::size_t n = flat.size();
  std::unordered_map<std::uint64_t, std::uint64_t> counts;
  const std::uint64_t mask = (std::uint64_t{1} << m) - 1;
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < m - 1; ++i) key = (key << 1) | flat[i % n];
  for (std::size_t i = 0; i < n; ++i) {
    key = ((key << 1) | flat[(i + m - 1) % n]) & mask;
    ++counts[key];
  }
  return counts;
}

}  // namespace

std::map<std::uint64_t, std::uint64_t> mgram_multiplicity_table(std::size_t m) {
  const auto counts = flattened_counts(m);
  std::uint64_t least = UINT64_MAX;
  for (const auto& [key, c] : counts) least = std::min(least, c);
  std::map<std::uint64_t, std::uint64_t> table;
  for (const auto& [key, c] : counts) {
    if (c % least != 0) throw std::logic_error("m-gram count is not a multiple of the smallest count");
    ++table[c / least];
  }
  return table;
}

double block_entropy(std::size_t m) {
  const auto counts = flattened_counts(m);
  double total = 0;
  for (const auto& [key, c] : counts) total += static_cast<double>(c);
  double h = 0;
  for (const auto& [key, c] : counts) {
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h;
}

double set_entropy(const std::vector<std::string>& blocks, std::size_t m) {
  const BlockAutomaton automaton(blocks);
  const double a = static_cast<double>(automaton.count_factors(m));
  const double b = static_cast<double>(automaton.count_factors(m + 2));
  return std::log2(b / a) / 2.0;
}

Entropies entropies(std::size_t set_m, std::size_t measure_m) {
  Entropies e;
  e.set_entropy = set_entropy({"00", "1101"}, set_m);
  e.measure_entropy = block_entropy(measure_m) - block_entropy(measure_m - 1);
  e.set_redundancy = 1.0 - e.set_entropy;
  e.golden_redundancy = 1.0 - std::log2((1.0 + std::sqrt(5.0)) / 2.0);
  return e;
}

std::vector<std::uint8_t> symbol_stream(const CompressedState& c, std::uint64_t steps, bool continue_past_halt) {
  std::vector<std::uint8_t> out = uncompress(c).symbols;
  CompressedState s = c;
  for (std::uint64_t t = 0; t < steps; ++t) {
    if (s.word.empty() || (s.halted() && !continue_past_halt)) break;
    const auto& block = TagRule::post().appends[s.word.front() ? 1 : 0];
    out.insert(out.end(), block.begin(), block.end());
    apply_rule(s);
  }
  return out;
}

std::map<std::string, double> predicted_mgram_frequency(std::size_t m) {
  static const std::string blocks[2] = {"00", "1101"};
  std::map<std::string, double> freq;
  std::function<void(std::string&, double)> extend = [&](std::string& cur, double p) {
    if (cur.size() >= m) {
      freq[cur.substr(0, m)] += p;
      return;
    }
    for (const auto& b : blocks) {
      const std::size_t keep = cur.size();
      cur += b;
      extend(cur, p * 0.5);
      cur.resize(keep);
    }
  };
  // A uniform position lands in block b at offset i with probability (1/2)/3.
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.size(); ++i) {
      std::string cur = b.substr(i);
      extend(cur, 0.5 / 3.0);
    }
  }
  return freq;
}

BlockFrequencyReport block_frequency_check(const std::vector<std::uint8_t>& appended, std::size_t min_length) {
  if (appended.size() < std::max<std::size_t>(min_length, 3)) throw InsufficientData("trace too short for block statistics");
  BlockFrequencyReport r;
  for (std::size_t i = 0; i < appended.size();) {
    if (appended[i] == 0) {
      if (i + 1 >= appended.size() || appended[i + 1] != 0) throw std::invalid_argument("stream is not made of 00 and 1101 blocks");
      ++r.blocks_00;
      i += 2;
    } else {
      if (i + 3 >= appended.size() || appended[i + 1] != 1 || appended[i + 2] != 0 || appended[i + 3] != 1)
        throw std::invalid_argument("stream is not made of 00 and 1101 blocks");
      ++r.blocks_1101;
      i += 4;
    }
  }
  for (auto v : appended) (v ? r.ones : r.zeros)++;
  r.block_imbalance = std::abs(static_cast<double>(r.blocks_00) - static_cast<double>(r.blocks_1101)) /
                      static_cast<double>(r.blocks_00 + r.blocks_1101);
  const double windows = static_cast<double>(appended.size() - 2);
  for (std::size_t i = 0; i + 2 < appended.size(); ++i) {
    std::string g{static_cast<char>('0' + appended[i]), static_cast<char>('0' + appended[i + 1]),
                  static_cast<char>('0' + appended[i + 2])};
    r.trigram_frequency[g] += 1.0 / windows;
  }
  r.trigram_predicted = predicted_mgram_frequency(3);
  for (const auto& [g, p] : r.trigram_predicted) {
    const auto it = r.trigram_frequency.find(g);
    const double obs = it == r.trigram_frequency.end() ? 0.0 : it->second;
    r.max_trigram_deviation = std::max(r.max_trigram_deviation, std::abs(obs - p));
  }
  return r;
}

void write_multiplicity_csv(std::ostream& out, const std::vector<std::size_t>& ms) {
  out << "# tagforge-multiplicity v1\n";
  out << "m,multiplicity,count\n";
  for (auto m : ms)
    for (const auto& [mult, count] : mgram_multiplicity_table(m)) out << m << ',' << mult << ',' << count << '\n';
}

}  // namespace tagforge
