#include "tagforge/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "tagforge/parallel.hpp"

namespace tagforge {

CompressedState initial_state(std::size_t m, std::uint64_t value, std::uint8_t phase) {
  if (m > 64 || (m < 64 && value >> m)) throw std::out_of_range("value does not fit the word length");
  CompressedState c;
  c.phase = phase;
  for (std::size_t k = 0; k < m; ++k) c.word.push_back((value >> (m - 1 - k)) & 1u);
  return c;
}

void for_each_initial(std::size_t m, const std::vector<std::uint8_t>& phases,
                      const std::function<void(const CompressedState&)>& fn) {
  if (m > 62) throw std::out_of_range("word length too large to enumerate");
  const std::uint64_t n = std::uint64_t{1} << m;
  for (auto phase : phases)
    for (std::uint64_t v = 0; v < n; ++v) fn(initial_state(m, v, phase));
}

std::vector<CompressedState> enumerate_initial(std::size_t m, const std::vector<std::uint8_t>& phases) {
  std::vector<CompressedState> out;
  for_each_initial(m, phases, [&](const CompressedState& c) { out.push_back(c); });
  return out;
}

std::uint64_t InitialIndex::size() const {
  std::uint64_t total = 0;
  for (std::size_t m = 0; m <= max_m; ++m) total += phases.size() << m;
  return total;
}

CompressedState InitialIndex::at(std::uint64_t ordinal) const {
  for (std::size_t m = 0; m <= max_m; ++m) {
    const std::uint64_t per_phase = std::uint64_t{1} << m;
    const std::uint64_t block = phases.size() * per_phase;
    if (ordinal < block) return initial_state(m, ordinal % per_phase, phases[ordinal / per_phase]);
    ordinal -= block;
  }
  throw std::out_of_range("ordinal beyond the initial-condition space");
}

WorkShard make_shard(std::size_t max_m, std::uint64_t step_cap, std::uint64_t index, std::uint64_t count,
                     const std::vector<std::uint8_t>& phases) {
  if (count == 0 || index >= count) throw std::invalid_argument("shard index must be below the shard count");
  WorkShard s;
  s.max_m = max_m;
  s.phases = phases;
  s.step_cap = step_cap;
  const std::uint64_t total = InitialIndex{max_m, phases}.size();
  const auto cut = [&](std::uint64_t i) {
    const std::uint64_t q = total / count, r = total % count;
    return q * i + (r * i) / count;
  };
  s.lo = cut(index);
  s.hi = cut(index + 1);
  s.cursor = s.lo;
  return s;
}

bool operator==(const WinnerRecord& a, const WinnerRecord& b) {
  return a.ordinal == b.ordinal && a.state_id == b.state_id && a.halting_step == b.halting_step &&
         a.table_step == b.table_step && a.transient == b.transient && a.period == b.period;
}

ShardResult run_shard(WorkShard& shard, const SearchOptions& options, ShardResult partial) {
  partial.lo = shard.lo;
  partial.hi = shard.hi;
  const InitialIndex index{shard.max_m, shard.phases};
  const std::uint64_t batch = std::max<std::uint64_t>(options.batch, 1);
  while (!shard.done()) {
    const std::uint64_t n = std::min(batch, shard.hi - shard.cursor);
    std::vector<std::variant<HaltReport, Undecided>> results(n);
    parallel_for(n, options.threads,
                 [&](std::size_t k) { results[k] = detect_halt(index.at(shard.cursor + k), shard.step_cap); });
    for (std::uint64_t k = 0; k < n; ++k) {
      const std::uint64_t ordinal = shard.cursor + k;
      const CompressedState ic = index.at(ordinal);
      if (const auto* r = std::get_if<HaltReport>(&results[k])) {
        if (partial.winners.empty() || r->halting_step > partial.winners.back().halting_step)
          partial.winners.push_back({ordinal, format_state_id(ic), r->halting_step, r->table_step, r->transient, r->period});
      } else {
        partial.undecided.push_back(format_state_id(ic));
      }
    }
    shard.cursor += n;
    if (options.on_progress) options.on_progress(shard, partial);
  }
  return partial;
}

ShardResult merge_shards(std::vector<ShardResult> parts) {
  std::sort(parts.begin(), parts.end(), [](const ShardResult& a, const ShardResult& b) { return a.lo < b.lo; });
  ShardResult out;
  if (parts.empty()) return out;
  out.lo = parts.front().lo;
  out.hi = parts.front().lo;
  for (auto& p : parts) {
    if (p.lo != out.hi) throw std::invalid_argument("shard results do not tile the ordinal range");
    out.hi = p.hi;
    for (auto& w : p.winners)
      if (out.winners.empty() || w.halting_step > out.winners.back().halting_step) out.winners.push_back(std::move(w));
    for (auto& u : p.undecided) out.undecided.push_back(std::move(u));
  }
  return out;
}

ShardResult search_winners(std::size_t max_m, std::uint64_t step_cap, const SearchOptions& options,
                           const std::vector<std::uint8_t>& phases) {
  WorkShard shard = make_shard(max_m, step_cap, 0, 1, phases);
  return run_shard(shard, options);
}

std::vector<WinnerRecord> notable_winners(const std::vector<WinnerRecord>& winners, double min_ratio,
                                          std::uint64_t min_steps) {
  std::vector<WinnerRecord> out;
  for (const auto& w : winners) {
    if (w.halting_step < min_steps) continue;
    if (!out.empty() && static_cast<double>(w.halting_step) <= min_ratio * static_cast<double>(out.back().halting_step))
      continue;
    out.push_back(w);
  }
  return out;
}

void write_shard_jsonl(std::ostream& out, const ShardResult& r) {
  nlohmann::ordered_json header;
  header["format"] = "tagforge-shard";
  header["version"] = 1;
  header["lo"] = r.lo;
  header["hi"] = r.hi;
  out << header.dump() << '\n';
  for (const auto& w : r.winners) {
    nlohmann::ordered_json j;
    j["kind"] = "winner";
    j["ordinal"] = w.ordinal;
    j["id"] = w.state_id;
    j["steps"] = w.halting_step;
    j["table_steps"] = w.table_step;
    j["transient"] = w.transient;
    j["period"] = w.period;
    out << j.dump() << '\n';
  }
  for (const auto& u : r.undecided) {
    nlohmann::ordered_json j;
    j["kind"] = "undecided";
    j["id"] = u;
    out << j.dump() << '\n';
  }
}

ShardResult read_shard_jsonl(std::istream& in) {
  ShardResult r;
  std::string line;
  bool have_header = false;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);
      if (!have_header) {
        if (j.value("format", "") != "tagforge-shard" || j.value("version", 0) != 1)
          throw FormatError("not a version-1 shard file");
        r.lo = j.at("lo").get<std::uint64_t>();
        r.hi = j.at("hi").get<std::uint64_t>();
        have_header = true;
        continue;
      }
      const auto kind = j.at("kind").get<std::string>();
      if (kind == "winner") {
        r.winners.push_back({j.at("ordinal").get<std::uint64_t>(), j.at("id").get<std::string>(),
                             j.at("steps").get<std::uint64_t>(), j.at("table_steps").get<std::uint64_t>(),
                             j.at("transient").get<std::uint64_t>(), j.at("period").get<std::uint64_t>()});
      } else if (kind == "undecided") {
        r.undecided.push_back(j.at("id").get<std::string>());
      } else {
        throw FormatError("unknown shard record kind: " + kind);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad shard record: ") + e.what());
  }
  if (!have_header) throw FormatError("shard file has no header");
  return r;
}

std::vector<HistogramBin> log2_bins(std::uint64_t max_value) {
  std::vector<HistogramBin> bins{{0, 1, 0}};
  for (std::uint64_t lo = 1; lo <= max_value && lo < (std::uint64_t{1} << 63); lo *= 2) bins.push_back({lo, 2 * lo, 0});
  return bins;
}

double tail_slope(const std::vector<HistogramBin>& bins, std::uint64_t min_count, bool* ok) {
  std::uint64_t total = 0;
  for (const auto& b : bins) total += b.count;
  std::size_t start = bins.size();
  std::uint64_t seen = 0;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    seen += bins[i].count;
    if (2 * seen >= total) {
      start = i;
      break;
    }
  }
  std::vector<double> xs, ys;
  for (std::size_t i = start; i < bins.size(); ++i) {
    if (bins[i].lo == 0 || bins[i].count < min_count) continue;
    xs.push_back(0.5 * (std::log(static_cast<double>(bins[i].lo)) + std::log(static_cast<double>(bins[i].hi))));
    ys.push_back(std::log(static_cast<double>(bins[i].count)));
  }
  if (ok) *ok = xs.size() >= 3;
  if (xs.size() < 2) return 0.0;
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

namespace {

std::vector<std::variant<HaltReport, Undecided>> run_all(const std::vector<CompressedState>& ics, std::uint64_t cap,
                                                         unsigned threads) {
  std::vector<std::variant<HaltReport, Undecided>> out(ics.size());
  parallel_for(ics.size(), threads, [&](std::size_t i) { out[i] = detect_halt(ics[i], cap, {false}); });
  return out;
}

}  // namespace

HaltingHistogram halting_histogram(std::size_t m, std::uint64_t step_cap, std::vector<HistogramBin> bins,
                                   unsigned threads) {
  HaltingHistogram h;
  const auto ics = enumerate_initial(m);
  const auto results = run_all(ics, step_cap, threads);
  std::vector<std::uint64_t> values;
  values.reserve(results.size());
  for (const auto& res : results) {
    if (const auto* r = std::get_if<HaltReport>(&res))
      values.push_back(r->transient);
    else
      ++h.undecided;
  }
  if (bins.empty()) bins = log2_bins(values.empty() ? 1 : *std::max_element(values.begin(), values.end()));
  for (auto& b : bins) b.count = 0;
  for (auto v : values) {
    bool placed = false;
    for (auto& b : bins) {
      if (v >= b.lo && v < b.hi) {
        ++b.count;
        placed = true;
        break;
      }
    }
    if (!placed) ++h.outside;
  }
  h.bins = std::move(bins);
  h.tail_slope = tail_slope(h.bins, 5, &h.tail_fit_ok);
  return h;
}

void write_histogram_csv(std::ostream& out, const HaltingHistogram& h) {
  out << "# tagforge-histogram v1\n";
  out << "bin_lo,bin_hi,count\n";
  for (const auto& b : h.bins) out << b.lo << ',' << b.hi << ',' << b.count << '\n';
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("spearman needs equal-length samples");
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  auto ranks = [n](const std::vector<double>& v) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i;
      while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

OnesCorrelation ones_correlation(std::size_t m, std::uint64_t step_cap, unsigned threads) {
  OnesCorrelation oc;
  const auto ics = enumerate_initial(m);
  const auto results = run_all(ics, step_cap, threads);
  oc.groups.resize(m + 1);
  for (std::size_t k = 0; k <= m; ++k) oc.groups[k].ones = k;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < ics.size(); ++i) {
    const auto* r = std::get_if<HaltReport>(&results[i]);
    if (!r) {
      ++oc.undecided;
      continue;
    }
    std::size_t ones = 0;
    for (std::size_t k = 0; k < ics[i].word.size(); ++k) ones += ics[i].word[k];
    oc.groups[ones].halting_steps.push_back(r->transient);
    xs.push_back(static_cast<double>(ones));
    ys.push_back(static_cast<double>(r->transient));
  }
  oc.spearman_rho = spearman(xs, ys);
  return oc;
}

}  // namespace tagforge
