#include "tagforge/numiter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include "tagforge/walkstats.hpp"

namespace tagforge {

namespace {

using boost::multiprecision::cpp_rational;

std::uint32_t bit_length(const BigInt& n) {
  if (n == 0) return 0;
  return static_cast<std::uint32_t>(boost::multiprecision::msb(boost::multiprecision::abs(n)) + 1);
}

int mod_floor(const BigInt& n, int m) {
  int r = static_cast<int>(n % m);
  return r < 0 ? r + m : r;
}

BigInt double_factorial(std::int64_t n) {
  BigInt out = 1;
  for (std::int64_t k = n; k > 1; k -= 2) out *= k;
  return out;
}

}  // namespace

void ResidueRule::validate() const {
  if (m < 2) throw std::invalid_argument("modulus must be >= 2");
  if (a.size() != static_cast<std::size_t>(m) || b.size() != static_cast<std::size_t>(m))
    throw std::invalid_argument("need one affine map per residue");
  for (int i = 0; i < m; ++i)
    if ((a[i] * i + b[i]) % m != 0)
      throw std::invalid_argument("a_" + std::to_string(i) + " n + b_" + std::to_string(i) + " not divisible by m");
}

BigInt ResidueRule::apply(const BigInt& n) const {
  const int i = mod_floor(n, m);
  return (a[i] * n + b[i]) / m;
}

std::string ResidueRule::to_string() const {
  std::ostringstream out;
  out << "m=" << m << " {";
  for (int i = 0; i < m; ++i) {
    if (i) out << ", ";
    if (a[i] != 1) out << a[i];
    out << 'n';
    if (b[i] > 0) out << '+' << b[i];
    if (b[i] < 0) out << b[i];
  }
  out << '}';
  return out.str();
}

ResidueRule collatz_shortcut_rule() { return {2, {1, 3}, {0, 1}}; }
ResidueRule five_n_plus_one_rule() { return {2, {1, 5}, {0, 1}}; }
ResidueRule four_seven_rule() { return {3, {1, 4, 7}, {0, 2, 1}}; }

IterationReport iterate_map(const std::function<BigInt(const BigInt&)>& f, const BigInt& n,
                            const IterationOptions& options) {
  IterationReport r;
  BigInt cur = n, saved = n;
  std::uint64_t steps = 0, saved_step = 0, power = 1, period = 0;
  r.bit_lengths.push_back(bit_length(cur));
  auto finish_growth = [&r] {
    if (r.bit_lengths.size() >= 2) {
      std::vector<double> t(r.bit_lengths.size());
      std::iota(t.begin(), t.end(), 0.0);
      r.growth_bits_per_step = fit_line(t, to_doubles(r.bit_lengths)).slope;
    }
  };
  for (;;) {
    if (steps >= options.cap) {
      r.outcome = IterationOutcome::cap_exhausted;
      r.steps = steps;
      finish_growth();
      return r;
    }
    cur = f(cur);
    ++steps;
    const auto bits = bit_length(cur);
    r.bit_lengths.push_back(bits);
    if (bits > options.bit_ceiling) {
      r.outcome = IterationOutcome::bit_ceiling;
      r.steps = steps;
      finish_growth();
      return r;
    }
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
  BigInt x = n, y = n;
  for (std::uint64_t i = 0; i < period; ++i) y = f(y);
  std::uint64_t mu = 0;
  while (x != y) {
    x = f(x);
    y = f(y);
    ++mu;
  }
  BigInt least = x, walk = x;
  std::uint64_t offset = 0;
  for (std::uint64_t i = 1; i < period; ++i) {
    walk = f(walk);
    if (walk < least) {
      least = walk;
      offset = i;
    }
  }
  r.outcome = IterationOutcome::cycle;
  r.transient = mu;
  r.steps_to_min = mu + offset;
  r.period = period;
  r.cycle_min = least;
  r.steps = steps;
  r.bit_lengths.resize(std::min<std::size_t>(r.bit_lengths.size(), mu + period + 1));
  finish_growth();
  return r;
}

BigInt collatz_step(const BigInt& n) { return (n & 1) == 0 ? BigInt(n >> 1) : BigInt(3 * n + 1); }

IterationReport collatz_run(const BigInt& n, std::uint64_t cap) {
  if (n < 1) throw std::invalid_argument("Collatz start must be >= 1");
  IterationOptions opt;
  opt.cap = cap;
  return iterate_map(collatz_step, n, opt);
}

IterationReport residue_run(const ResidueRule& rule, const BigInt& n, const IterationOptions& options) {
  rule.validate();
  return iterate_map([&rule](const BigInt& v) { return rule.apply(v); }, n, options);
}

double bias(const ResidueRule& rule) {
  rule.validate();
  double sum = 0;
  for (int i = 0; i < rule.m; ++i) sum += std::log2(rule.a[i].convert_to<double>() / rule.m);
  return sum;
}

double step_bias(const ResidueRule& rule) {
  rule.validate();
  double steps = 0;
  for (int i = 0; i < rule.m; ++i) steps += rule.a[i] == 1 ? 1.0 : 2.0;
  return bias(rule) / steps;
}

namespace {

// Ascending tuples of `count` factors >= 2, coprime to m, with the given product.
void factor_tuples(std::uint64_t product, int count, std::uint64_t min_factor, int m,
                   std::vector<std::uint64_t>& cur, std::vector<std::vector<std::uint64_t>>& out) {
  if (count == 0) {
    if (product == 1) out.push_back(cur);
    return;
  }
  if (count == 1) {
    if (product >= min_factor && std::gcd(product, static_cast<std::uint64_t>(m)) == 1) {
      cur.push_back(product);
      out.push_back(cur);
      cur.pop_back();
    }
    return;
  }
  for (std::uint64_t f = min_factor; f * f <= product; ++f) {
    if (product % f != 0 || std::gcd(f, static_cast<std::uint64_t>(m)) != 1) continue;
    cur.push_back(f);
    factor_tuples(product / f, count - 1, f, m, cur, out);
    cur.pop_back();
  }
}

ResidueRule rule_from_multipliers(int m, const std::vector<std::uint64_t>& mult) {
  ResidueRule r{m, {1}, {0}};
  for (int i = 1; i < m; ++i) {
    const BigInt a = mult[static_cast<std::size_t>(i - 1)];
    r.a.push_back(a);
    r.b.push_back(BigInt(mod_floor(-a * i, m)));
  }
  return r;
}

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t out = 1;
  for (int i = 0; i < e; ++i) out *= b;
  return out;
}

}  // namespace

std::vector<ResidueRule> candidate_rules(int m) {
  if (m < 2 || m > 6) throw std::out_of_range("candidate search supports 2 <= m <= 6");
  const std::uint64_t target = ipow(static_cast<std::uint64_t>(m), m);
  std::vector<ResidueRule> out;
  for (std::uint64_t p = 1; p <= 2 * target; ++p) {
    std::vector<std::vector<std::uint64_t>> tuples;
    std::vector<std::uint64_t> cur;
    factor_tuples(p, m - 1, 2, m, cur, tuples);
    for (const auto& t : tuples) out.push_back(rule_from_multipliers(m, t));
  }
  return out;
}

ResidueRule minimal_bias_rule(int m) {
  if (m < 2 || m > 6) throw std::out_of_range("minimal_bias_rule supports 2 <= m <= 6");
  const std::uint64_t target = ipow(static_cast<std::uint64_t>(m), m);
  std::vector<std::uint64_t> products(2 * target);
  std::iota(products.begin(), products.end(), 1);
  auto dist = [target](std::uint64_t p) {
    return std::abs(std::log2(static_cast<double>(p) / static_cast<double>(target)));
  };
  std::stable_sort(products.begin(), products.end(), [&](auto x, auto y) { return dist(x) < dist(y); });
  for (auto p : products) {
    std::vector<std::vector<std::uint64_t>> tuples;
    std::vector<std::uint64_t> cur;
    factor_tuples(p, m - 1, 2, m, cur, tuples);
    if (tuples.empty()) continue;
    const auto best = std::min_element(tuples.begin(), tuples.end(), [](const auto& x, const auto& y) {
      if (x.back() != y.back()) return x.back() < y.back();
      return x.front() > y.front();
    });
    return rule_from_multipliers(m, *best);
  }
  throw std::logic_error("no admissible multiplier tuple");
}

std::vector<std::uint64_t> prime_pi_table(std::uint64_t n) {
  std::vector<bool> composite(n + 1, false);
  std::vector<std::uint64_t> pi(n + 1, 0);
  for (std::uint64_t i = 2; i <= n; ++i) {
    pi[i] = pi[i - 1];
    if (composite[i]) continue;
    ++pi[i];
    for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
  }
  return pi;
}

BigInt riemann_quantity(std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const auto pi = prime_pi_table(n)[n];
  BigInt lcm = 1;
  for (std::uint64_t k = 2; k <= n; ++k) lcm = boost::multiprecision::lcm(lcm, BigInt(k));
  cpp_rational alt = 0;
  for (std::uint64_t k = 1; k < n; ++k) alt += cpp_rational(k % 2 ? 1 : -1, k);
  const auto nn = static_cast<std::int64_t>(n);
  const cpp_rational inner = cpp_rational(bit_length(lcm) - 1) * alt - nn;
  const cpp_rational q = cpp_rational(double_factorial(2 * nn + 3), 15) -
                         cpp_rational(double_factorial(2 * nn - 2)) * BigInt(pi * pi) * inner;
  const BigInt num = boost::multiprecision::numerator(q), den = boost::multiprecision::denominator(q);
  BigInt fl = num / den;
  if (num < 0 && fl * den != num) fl -= 1;
  return fl;
}

std::vector<BigInt> riemann_sequence(std::uint64_t count) {
  std::vector<BigInt> out;
  for (std::uint64_t n = 1; n <= count; ++n) out.push_back(riemann_quantity(n));
  return out;
}

std::vector<double> riemann_ratio_differences(std::uint64_t count) {
  const auto q = riemann_sequence(count);
  std::vector<double> ratio;
  for (std::size_t i = 1; i < q.size(); ++i)
    ratio.push_back(cpp_rational(q[i], q[i - 1]).convert_to<double>());
  std::vector<double> out;
  for (std::size_t i = 1; i < ratio.size(); ++i) out.push_back(ratio[i] - ratio[i - 1]);
  return out;
}

RiemannState riemann_initial() { return {1, 1, 1, 0, 0, 1, 1}; }

RiemannState riemann_iteration_step(const RiemannState& x) {
  const BigInt g = boost::multiprecision::gcd(x[1] + 1, x[2]);
  const BigInt sign = (x[1] & 1) == 0 ? BigInt(1) : BigInt(-1);
  return {2 * x[1] * x[0] - 4 * sign * x[4],
          x[1] + 1,
          (x[1] + 1) * x[2] / g,
          g == 1 ? BigInt(x[3] + 1) : x[3],
          x[5],
          (2 * x[1] + 2) * x[5],
          (2 * x[1] + 5) * x[6]};
}

BigInt riemann_margin(const RiemannState& x) {
  return x[6] - x[3] * x[3] * (x[0] * (bit_length(x[2]) - 1) - x[5]);
}

bool riemann_continues(const RiemannState& x) { return riemann_margin(x) > 0; }

void write_iteration_csv(std::ostream& out, const IterationReport& r) {
  out << "# tagforge-iteration v1\n";
  out << "step,bits\n";
  for (std::size_t i = 0; i < r.bit_lengths.size(); ++i) out << i << ',' << r.bit_lengths[i] << '\n';
}

std::string to_json(const IterationReport& r) {
  nlohmann::ordered_json j;
  j["outcome"] = r.outcome == IterationOutcome::cycle           ? "cycle"
                 : r.outcome == IterationOutcome::cap_exhausted ? "cap"
                                                                : "bit-ceiling";
  j["transient"] = r.transient;
  j["steps_to_min"] = r.steps_to_min;
  j["period"] = r.period;
  j["cycle_min"] = r.cycle_min.str();
  j["generated"] = r.steps;
  j["growth_bits_per_step"] = r.growth_bits_per_step;
  return j.dump();
}

}  // namespace tagforge
