#include "tagforge/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tagforge/parallel.hpp"
#include "tagforge/walkstats.hpp"

namespace tagforge {

namespace {

Symbols parse_symbols(const std::string& text) {
  Symbols out;
  for (char ch : text) {
    if (ch < '0' || ch > '9') throw FormatError("symbols must be decimal digits: '" + text + "'");
    out.push_back(static_cast<std::uint8_t>(ch - '0'));
  }
  return out;
}

std::string symbols_text(const Symbols& s) {
  std::string out;
  for (auto v : s) out.push_back(static_cast<char>('0' + v));
  return out;
}

int max_symbol(const Symbols& s) {
  int m = -1;
  for (auto v : s) m = std::max<int>(m, v);
  return m;
}

std::size_t ipow(std::size_t base, int e) {
  std::size_t out = 1;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

// Symbols an initial condition may use.
Symbols rule_symbols(const GeneralRule& rule) {
  Symbols out;
  if (const auto* fe = std::get_if<FirstElementRule>(&rule)) {
    for (int a = 0; a < fe->k; ++a)
      if (fe->appends[a]) out.push_back(static_cast<std::uint8_t>(a));
  } else {
    for (int a = 0; a < rule_alphabet(rule); ++a) out.push_back(static_cast<std::uint8_t>(a));
  }
  return out;
}

}  // namespace

int rule_alphabet(const GeneralRule& rule) {
  return std::visit(
      [](const auto& r) -> int {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, CyclicRule>)
          return 2;
        else
          return r.k;
      },
      rule);
}

int rule_deletion(const GeneralRule& rule) {
  return std::visit(
      [](const auto& r) -> int {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, CyclicRule>)
          return 1;
        else
          return r.r;
      },
      rule);
}

GeneralRule parse_rule(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> tokens;
  for (std::string t; in >> t;) tokens.push_back(t);
  if (tokens.empty()) throw FormatError("empty rule literal");
  if (tokens[0] == "cyclic") {
    std::string rest;
    for (std::size_t i = 1; i < tokens.size(); ++i) rest += tokens[i];
    CyclicRule rule;
    std::string block;
    std::istringstream parts(rest);
    while (std::getline(parts, block, ',')) {
      auto s = parse_symbols(block);
      if (max_symbol(s) > 1) throw FormatError("cyclic blocks are binary");
      rule.blocks.push_back(std::move(s));
    }
    if (rule.blocks.empty()) throw FormatError("cyclic rule needs at least one block");
    return rule;
  }
  int k = 0, r = 0, seen_max = 1;
  std::vector<std::pair<Symbols, Symbols>> pairs;
  for (const auto& t : tokens) {
    if (t.rfind("k=", 0) == 0) {
      k = std::stoi(t.substr(2));
    } else if (t.rfind("r=", 0) == 0) {
      r = std::stoi(t.substr(2));
    } else {
      const auto colon = t.find(':');
      if (colon == std::string::npos || colon == 0) throw FormatError("bad rule entry '" + t + "'");
      auto key = parse_symbols(t.substr(0, colon));
      auto val = parse_symbols(t.substr(colon + 1));
      seen_max = std::max({seen_max, max_symbol(key), max_symbol(val)});
      pairs.emplace_back(std::move(key), std::move(val));
    }
  }
  if (pairs.empty()) throw FormatError("rule has no entries");
  if (k == 0) k = seen_max + 1;
  if (k < 2 || k > 10 || seen_max >= k) throw FormatError("alphabet size must cover every symbol and be <= 10");
  const bool block = std::any_of(pairs.begin(), pairs.end(), [](const auto& p) { return p.first.size() > 1; });
  if (block) {
    if (r == 0) r = static_cast<int>(pairs.front().first.size());
    BlockRule rule{k, r, std::vector<Symbols>(ipow(static_cast<std::size_t>(k), r))};
    std::vector<bool> have(rule.appends.size(), false);
    for (auto& [key, val] : pairs) {
      if (static_cast<int>(key.size()) != r) throw FormatError("block keys must have length r");
      std::size_t idx = 0;
      for (auto v : key) idx = idx * static_cast<std::size_t>(k) + v;
      if (have[idx]) throw FormatError("duplicate block key");
      have[idx] = true;
      rule.appends[idx] = std::move(val);
    }
    if (std::find(have.begin(), have.end(), false) != have.end())
      throw FormatError("block rule must define all k^r blocks");
    return rule;
  }
  if (r <= 0) throw FormatError("first-element rule needs r=");
  FirstElementRule rule{k, r, std::vector<std::optional<Symbols>>(static_cast<std::size_t>(k))};
  for (auto& [key, val] : pairs) {
    if (rule.appends[key[0]]) throw FormatError("duplicate symbol in rule");
    rule.appends[key[0]] = std::move(val);
  }
  return rule;
}

std::string format_rule(const GeneralRule& rule) {
  std::ostringstream out;
  if (const auto* c = std::get_if<CyclicRule>(&rule)) {
    out << "cyclic ";
    for (std::size_t i = 0; i < c->blocks.size(); ++i) out << (i ? "," : "") << symbols_text(c->blocks[i]);
  } else if (const auto* fe = std::get_if<FirstElementRule>(&rule)) {
    out << "k=" << fe->k << " r=" << fe->r;
    for (int a = 0; a < fe->k; ++a)
      if (fe->appends[a]) out << ' ' << a << ':' << symbols_text(*fe->appends[a]);
  } else {
    const auto& b = std::get<BlockRule>(rule);
    out << "k=" << b.k << " r=" << b.r;
    for (std::size_t idx = 0; idx < b.appends.size(); ++idx) {
      std::string key(static_cast<std::size_t>(b.r), '0');
      std::size_t v = idx;
      for (int i = b.r - 1; i >= 0; --i) {
        key[static_cast<std::size_t>(i)] = static_cast<char>('0' + v % static_cast<std::size_t>(b.k));
        v /= static_cast<std::size_t>(b.k);
      }
      out << ' ' << key << ':' << symbols_text(b.appends[idx]);
    }
  }
  return out.str();
}

GeneralRule post_general_rule() { return parse_rule("k=2 r=3 0:00 1:1101"); }

void SymbolQueue::pop_front(std::size_t n) {
  if (n > size()) throw std::out_of_range("pop_front past end");
  head_ += n;
  if (head_ == buf_.size()) {
    buf_.clear();
    head_ = 0;
  } else if (head_ >= 4096 && head_ * 2 >= buf_.size()) {
    buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(head_));
    head_ = 0;
  }
}

std::size_t SymbolQueue::count(std::uint8_t symbol) const {
  return static_cast<std::size_t>(std::count(buf_.begin() + static_cast<std::ptrdiff_t>(head_), buf_.end(), symbol));
}

bool operator==(const SymbolQueue& a, const SymbolQueue& b) {
  return a.size() == b.size() && std::equal(a.buf_.begin() + static_cast<std::ptrdiff_t>(a.head_), a.buf_.end(),
                                            b.buf_.begin() + static_cast<std::ptrdiff_t>(b.head_));
}

ZooState parse_zoo_state(const std::string& text, int k) {
  if (k < 2 || k > 10) throw FormatError("alphabet size must be in 2..10");
  ZooState s;
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    const auto sym = parse_symbols(text);
    if (max_symbol(sym) >= k) throw MalformedState("symbol outside alphabet in '" + text + "'");
    s.symbols = SymbolQueue(sym);
    return s;
  }
  const auto colon2 = text.find(':', colon + 1);
  const std::string len_text = text.substr(0, colon);
  const std::string val_text = text.substr(colon + 1, colon2 == std::string::npos ? std::string::npos : colon2 - colon - 1);
  if (len_text.empty() || val_text.empty() ||
      !std::all_of(len_text.begin(), len_text.end(), ::isdigit) ||
      !std::all_of(val_text.begin(), val_text.end(), ::isdigit))
    throw FormatError("state id must be len:val[:cursor], got '" + text + "'");
  const std::size_t len = std::stoul(len_text);
  BigInt value{val_text};
  Symbols sym(len, 0);
  for (std::size_t i = len; i-- > 0;) {
    sym[i] = static_cast<std::uint8_t>(static_cast<unsigned>(value % k));
    value /= k;
  }
  if (value != 0) throw MalformedState("value does not fit in " + len_text + " base-" + std::to_string(k) + " digits");
  s.symbols = SymbolQueue(sym);
  if (colon2 != std::string::npos) s.cursor = std::stoul(text.substr(colon2 + 1));
  return s;
}

std::string format_zoo_state(const ZooState& s, int k, bool with_cursor) {
  BigInt value = 0;
  for (std::size_t i = 0; i < s.symbols.size(); ++i) value = value * k + s.symbols[i];
  std::string out = std::to_string(s.symbols.size()) + ":" + value.str();
  if (with_cursor) out += ":" + std::to_string(s.cursor);
  return out;
}

std::string digits(const ZooState& s) { return symbols_text(s.symbols.to_vector()); }

bool zoo_halted(const GeneralRule& rule, const ZooState& s) {
  return s.symbols.size() < static_cast<std::size_t>(rule_deletion(rule));
}

bool zoo_step(const GeneralRule& rule, ZooState& s) {
  return std::visit(
      [&s](const auto& r) -> bool {
        using T = std::decay_t<decltype(r)>;
        auto& q = s.symbols;
        if constexpr (std::is_same_v<T, CyclicRule>) {
          if (q.empty()) return false;
          const auto a = q[0];
          if (a > 1) throw MalformedState("cyclic systems are binary");
          q.pop_front(1);
          if (a == 1) q.append(r.blocks[s.cursor % r.blocks.size()]);
          s.cursor = (s.cursor + 1) % r.blocks.size();
          return true;
        } else {
          const auto n = static_cast<std::size_t>(r.r);
          if (q.size() < n) return false;
          for (std::size_t i = 0; i < n; ++i)
            if (q[i] >= r.k) throw MalformedState("symbol " + std::to_string(q[i]) + " outside alphabet");
          if constexpr (std::is_same_v<T, FirstElementRule>) {
            const auto& app = r.appends[q[0]];
            if (!app) throw MalformedState("no append defined for symbol " + std::to_string(q[0]));
            const Symbols& block = *app;
            q.pop_front(n);
            q.append(block);
          } else {
            std::size_t idx = 0;
            for (std::size_t i = 0; i < n; ++i) idx = idx * static_cast<std::size_t>(r.k) + q[i];
            q.pop_front(n);
            q.append(r.appends[idx]);
          }
          return true;
        }
      },
      rule);
}

std::variant<ZooReport, ZooUndecided> zoo_detect_halt(const GeneralRule& rule, const ZooState& s, std::uint64_t cap) {
  ZooState cur = s;
  ZooState saved = s;
  std::uint64_t steps = 0, saved_step = 0, power = 1;
  std::uint64_t max_len = cur.symbols.size();
  std::uint64_t period = 0;
  for (;;) {
    if (zoo_halted(rule, cur)) {
      ZooReport r;
      r.transient = steps;
      r.halting_step = steps + (cur.symbols.empty() ? 0 : 1);
      r.final_symbols = cur.symbols.to_vector();
      r.max_length = max_len;
      return r;
    }
    if (steps >= cap) return ZooUndecided{steps, cur.symbols.to_vector(), max_len};
    zoo_step(rule, cur);
    ++steps;
    max_len = std::max<std::uint64_t>(max_len, cur.symbols.size());
    if (cur == saved) {
      period = steps - saved_step;
      break;
    }
    if (steps - saved_step >= power) {
      saved = cur;
      saved_step = steps;
      power *= 2;
    }
  }
  ZooState a = s, b = s;
  for (std::uint64_t i = 0; i < period; ++i) zoo_step(rule, b);
  std::uint64_t mu = 0;
  while (!(a == b)) {
    zoo_step(rule, a);
    zoo_step(rule, b);
    ++mu;
  }
  ZooReport r;
  r.transient = mu;
  r.halting_step = mu;
  r.period = period;
  r.final_symbols = a.symbols.to_vector();
  r.max_length = max_len;
  return r;
}

std::vector<std::uint64_t> zoo_length_trace(const GeneralRule& rule, const ZooState& s, std::uint64_t steps) {
  ZooState cur = s;
  std::vector<std::uint64_t> out{cur.symbols.size()};
  for (std::uint64_t t = 0; t < steps && zoo_step(rule, cur); ++t) out.push_back(cur.symbols.size());
  return out;
}

std::vector<Symbols> zoo_generations(const GeneralRule& rule, const ZooState& s, std::size_t generations) {
  ZooState cur = s;
  std::vector<Symbols> out{cur.symbols.to_vector()};
  const auto r = static_cast<std::size_t>(rule_deletion(rule));
  for (std::size_t g = 0; g < generations && !zoo_halted(rule, cur); ++g) {
    const std::size_t steps = cur.symbols.size() / r;
    for (std::size_t i = 0; i < steps && zoo_step(rule, cur); ++i) {
    }
    out.push_back(cur.symbols.to_vector());
  }
  return out;
}

std::string to_string(Growth g) {
  switch (g) {
    case Growth::halts: return "halts";
    case Growth::cycles: return "cycles";
    case Growth::linear_growth: return "linear-growth";
    case Growth::sqrt_growth: return "sqrt-growth";
    case Growth::undecided: return "undecided";
  }
  return "undecided";
}

GrowthReport growth_analyzer(const GeneralRule& rule, const ZooState& s, std::uint64_t cap) {
  GrowthReport g;
  auto outcome = zoo_detect_halt(rule, s, cap);
  if (auto* r = std::get_if<ZooReport>(&outcome)) {
    g.kind = r->period ? Growth::cycles : Growth::halts;
    g.steps = r->transient;
    for (auto v : r->final_symbols) ++g.symbol_counts[v];
    g.report = *r;
    return g;
  }
  ZooState cur = s;
  std::vector<double> t, sq, len;
  const std::uint64_t start = cap / 4;
  for (std::uint64_t step = 0; step < cap && zoo_step(rule, cur); ++step) {
    if (step + 1 >= start) {
      t.push_back(static_cast<double>(step + 1));
      sq.push_back(std::sqrt(static_cast<double>(step + 1)));
      len.push_back(static_cast<double>(cur.symbols.size()));
    }
  }
  g.steps = cap;
  for (std::size_t i = 0; i < cur.symbols.size(); ++i) ++g.symbol_counts[cur.symbols[i]];
  if (t.size() < 3) return g;
  auto rss = [&len](const std::vector<double>& x, const LineFit& f) {
    double sum = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double e = len[i] - (f.intercept + f.slope * x[i]);
      sum += e * e;
    }
    return sum;
  };
  const auto lin = fit_line(t, len);
  const auto root = fit_line(sq, len);
  g.linear_rss = rss(t, lin);
  g.sqrt_rss = rss(sq, root);
  const bool linear = g.linear_rss <= g.sqrt_rss;
  const double rise = linear ? lin.slope * (t.back() - t.front()) : root.slope * (sq.back() - sq.front());
  g.rate = linear ? lin.slope : root.slope;
  if (rise < 2.0)
    g.kind = Growth::undecided;
  else
    g.kind = linear ? Growth::linear_growth : Growth::sqrt_growth;
  return g;
}

RunSequence ones_run_sequence(const GeneralRule& rule, std::uint64_t n, std::uint64_t cap, std::size_t max_values) {
  const auto* fe = std::get_if<FirstElementRule>(&rule);
  if (!fe) throw std::invalid_argument("ones-run sequences need a first-element rule");
  if (fe->k < 2) throw std::invalid_argument("alphabet must contain symbol 1");
  RunSequence out;
  ZooState cur;
  cur.symbols = SymbolQueue(Symbols(n, 1));
  if (n > 0) out.values.push_back(n);
  std::uint64_t non_ones = 0;
  std::uint64_t steps = 0;
  const auto r = static_cast<std::size_t>(fe->r);
  ZooState saved = cur;
  std::uint64_t next_save = 1;
  while (out.values.size() < max_values) {
    if (steps > 0 && cur.symbols.size() == saved.symbols.size() && cur == saved) {
      out.cycled = true;
      return out;
    }
    if (steps == next_save) {
      saved = cur;
      next_save *= 2;
    }
    if (zoo_halted(rule, cur)) {
      out.halted = true;
      out.halting_step = steps + (cur.symbols.empty() ? 0 : 1);
      return out;
    }
    if (steps >= cap) {
      out.truncated = true;
      return out;
    }
    for (std::size_t i = 0; i < r; ++i) non_ones -= cur.symbols[i] != 1;
    const auto first = cur.symbols[0];
    zoo_step(rule, cur);
    for (auto v : *fe->appends[first]) non_ones += v != 1;
    ++steps;
    if (non_ones == 0 && !cur.symbols.empty()) out.values.push_back(cur.symbols.size());
  }
  return out;
}

GeneralRule collatz_embedding_rule() { return parse_rule("k=4 r=2 1:23 2:1 3:111"); }
GeneralRule collatz_variant_rule() { return parse_rule("k=4 r=2 1:23 2:111 3:1"); }

RunSequence collatz_embedding_trace(const GeneralRule& rule, std::uint64_t n, std::uint64_t cap) {
  return ones_run_sequence(rule, n, cap);
}

BigInt ones_closed_form_12_111(const BigInt& n) {
  BigInt m = n + 1;
  unsigned e = 0;
  while ((m & 1) == 0) {
    m >>= 1;
    ++e;
  }
  return boost::multiprecision::pow(BigInt(3), e) * m - 1;
}

std::vector<GeneralRule> rule_family(RuleFamily family) {
  std::vector<GeneralRule> out;
  if (family == RuleFamily::balanced90) {
    Symbols pool{0, 0, 1, 1, 2, 2};
    do {
      FirstElementRule r{3, 2, std::vector<std::optional<Symbols>>(3)};
      r.appends[0] = Symbols(pool.begin(), pool.begin() + 1);
      r.appends[1] = Symbols(pool.begin() + 1, pool.begin() + 3);
      r.appends[2] = Symbols(pool.begin() + 3, pool.end());
      out.push_back(r);
    } while (std::next_permutation(pool.begin(), pool.end()));
    return out;
  }
  for (unsigned a = 0; a < 4; ++a) {
    for (unsigned b = 0; b < 8; ++b) {
      FirstElementRule r{3, 2, std::vector<std::optional<Symbols>>(3)};
      r.appends[1] = Symbols{static_cast<std::uint8_t>(1 + ((a >> 1) & 1)), static_cast<std::uint8_t>(1 + (a & 1))};
      r.appends[2] = Symbols{static_cast<std::uint8_t>(1 + ((b >> 2) & 1)), static_cast<std::uint8_t>(1 + ((b >> 1) & 1)),
                             static_cast<std::uint8_t>(1 + (b & 1))};
      out.push_back(r);
    }
  }
  return out;
}

namespace {

// Calls fn(state) for every IC of lengths 1..max_len over the rule's symbols,
// ordered by length then value.
template <class Fn>
void for_each_ic(const GeneralRule& rule, std::size_t max_len, Fn&& fn) {
  const Symbols alphabet = rule_symbols(rule);
  if (alphabet.empty()) return;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::size_t> idx(len, 0);
    for (;;) {
      Symbols sym(len);
      for (std::size_t i = 0; i < len; ++i) sym[i] = alphabet[idx[i]];
      ZooState s;
      s.symbols = SymbolQueue(sym);
      fn(s);
      std::size_t pos = len;
      while (pos > 0 && ++idx[pos - 1] == alphabet.size()) idx[--pos] = 0;
      if (pos == 0) break;
    }
  }
}

}  // namespace

std::vector<SurveyRow> balanced_rule_survey(const std::vector<GeneralRule>& rules, std::size_t max_ic_len,
                                            std::uint64_t cap, unsigned threads) {
  std::vector<SurveyRow> rows(rules.size());
  parallel_for(rules.size(), threads, [&](std::size_t i) {
    SurveyRow row;
    row.rule = format_rule(rules[i]);
    const int k = rule_alphabet(rules[i]);
    bool any = false;
    for_each_ic(rules[i], max_ic_len, [&](const ZooState& s) {
      const auto outcome = zoo_detect_halt(rules[i], s, cap);
      if (const auto* r = std::get_if<ZooReport>(&outcome)) {
        (r->period ? row.cycles : row.halts)++;
        if (!any || r->halting_step > row.longest_halting_step) {
          any = true;
          row.longest_halting_step = r->halting_step;
          row.longest_period = r->period;
          row.longest_ic = format_zoo_state(s, k);
        }
      } else {
        ++row.undecided;
      }
    });
    rows[i] = std::move(row);
  });
  return rows;
}

std::vector<ZooWinner> zoo_winners(const GeneralRule& rule, std::size_t max_len, std::uint64_t cap) {
  std::vector<ZooWinner> out;
  const int k = rule_alphabet(rule);
  bool any = false;
  std::uint64_t best = 0;
  for_each_ic(rule, max_len, [&](const ZooState& s) {
    const auto outcome = zoo_detect_halt(rule, s, cap);
    const auto* r = std::get_if<ZooReport>(&outcome);
    if (!r) return;
    if (!any || r->halting_step > best) {
      any = true;
      best = r->halting_step;
      out.push_back({format_zoo_state(s, k), r->halting_step, r->period});
    }
  });
  return out;
}

Symbols thue_morse(std::size_t n) {
  Symbols out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint8_t>(__builtin_popcountll(i) & 1);
  return out;
}

}  // namespace tagforge
