#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tagforge/checkpoint.hpp"
#include "tagforge/cycles.hpp"
#include "tagforge/enumeration.hpp"
#include "tagforge/grams.hpp"
#include "tagforge/graphs.hpp"
#include "tagforge/halting.hpp"
#include "tagforge/numiter.hpp"
#include "tagforge/walkstats.hpp"
#include "tagforge/zoo.hpp"

using namespace tagforge;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitHalted = 0;
constexpr int kExitUndecided = 2;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::string kPostRule = "k=2 r=3 0:00 1:1101";

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

// Writes to `path`, or stdout when path is empty or "-".
template <class Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
  } else {
    auto out = open_out(path);
    fn(out);
  }
}

bool is_post(const std::string& rule) {
  if (rule.empty()) return true;
  return format_rule(parse_rule(rule)) == kPostRule;
}

std::vector<std::uint8_t> parse_phases(const std::string& text) {
  std::vector<std::uint8_t> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (item != "0" && item != "1" && item != "2") throw UsageError("phases must be drawn from 0,1,2");
    out.push_back(static_cast<std::uint8_t>(item[0] - '0'));
  }
  if (out.empty()) throw UsageError("no phases given");
  return out;
}

// ---- run -------------------------------------------------------------------

struct RunArgs {
  std::string id;
  std::string rule;
  std::uint64_t max_steps = std::uint64_t{1} << 40;
  std::string trace;
  std::string svg;
  std::string checkpoint;
  bool resume = false;
  std::uint64_t interval = 1'000'000'000;
  double interval_seconds = 60.0;
  bool table = false;
  bool no_literal = false;
};

int run_post(const RunArgs& a) {
  const CompressedState initial = parse_state_id(a.id);
  const std::string canonical = format_state_id(initial);
  std::optional<HaltDetector> detector;
  if (a.resume) {
    if (a.checkpoint.empty()) throw UsageError("--resume needs --checkpoint");
    if (std::filesystem::exists(a.checkpoint)) {
      Checkpoint c = load_checkpoint(a.checkpoint);
      if (c.rule_literal != kPostRule) throw FormatError("checkpoint is for rule '" + c.rule_literal + "'");
      if (c.initial_id != canonical) throw FormatError("checkpoint is for " + c.initial_id + ", not " + canonical);
      detector.emplace(std::move(c.detector));
    }
  }
  if (!detector) detector.emplace(initial);

  auto save = [&] {
    if (!a.checkpoint.empty()) save_checkpoint(a.checkpoint, Checkpoint{kPostRule, canonical, *detector});
  };
  using clock = std::chrono::steady_clock;
  auto last_save = clock::now();
  std::uint64_t since_save = 0;
  while (detector->status() == DetectorStatus::running && detector->steps() < a.max_steps) {
    const std::uint64_t chunk = std::min<std::uint64_t>({a.max_steps - detector->steps(), std::uint64_t{1} << 24,
                                                        a.interval - std::min(a.interval - 1, since_save)});
    const std::uint64_t before = detector->steps();
    detector->advance(chunk);
    since_save += detector->steps() - before;
    const bool time_due = std::chrono::duration<double>(clock::now() - last_save).count() >= a.interval_seconds;
    if (!a.checkpoint.empty() && (since_save >= a.interval || time_due)) {
      save();
      since_save = 0;
      last_save = clock::now();
    }
  }
  if (detector->status() == DetectorStatus::running) {
    save();
    json j;
    j["id"] = canonical;
    j["undecided"] = true;
    j["steps"] = detector->steps();
    j["maxlen"] = detector->max_length_seen();
    std::cout << j.dump() << '\n';
    return kExitUndecided;
  }
  HaltOptions opt;
  opt.literal = !a.no_literal;
  HaltReport r = detector->finish(opt);
  if (a.table) std::swap(r.halting_step, r.table_step);
  save();
  std::cout << to_json_line(canonical, r) << '\n';
  if (!a.trace.empty() || !a.svg.empty()) {
    const auto t = length_trace(initial, r.transient);
    const auto values = to_doubles(t.lengths);
    if (!a.trace.empty()) emit(a.trace, [&](std::ostream& out) { write_trace_csv(out, values, t.stride); });
    if (!a.svg.empty()) emit(a.svg, [&](std::ostream& out) { out << trace_svg(values, 800, 300, canonical); });
  }
  return kExitHalted;
}

int run_zoo(const RunArgs& a) {
  if (!a.checkpoint.empty() || a.resume) throw UsageError("checkpoints are supported for the 00/1101 rule only");
  const GeneralRule rule = parse_rule(a.rule);
  const ZooState s = parse_zoo_state(a.id, rule_alphabet(rule));
  const auto outcome = zoo_detect_halt(rule, s, a.max_steps);
  json j;
  j["id"] = a.id;
  j["rule"] = format_rule(rule);
  int code = kExitHalted;
  if (const auto* r = std::get_if<ZooReport>(&outcome)) {
    j["steps"] = r->halting_step;
    j["period"] = r->period;
    j["transient"] = r->transient;
    j["maxlen"] = r->max_length;
  } else {
    const auto& u = std::get<ZooUndecided>(outcome);
    j["undecided"] = true;
    j["steps"] = u.steps;
    j["maxlen"] = u.max_length;
    code = kExitUndecided;
  }
  std::cout << j.dump() << '\n';
  if (!a.trace.empty() || !a.svg.empty()) {
    const auto values = to_doubles(zoo_length_trace(rule, s, a.max_steps));
    if (!a.trace.empty()) emit(a.trace, [&](std::ostream& out) { write_trace_csv(out, values); });
    if (!a.svg.empty()) emit(a.svg, [&](std::ostream& out) { out << trace_svg(values, 800, 300, a.id); });
  }
  return code;
}

// ---- search / merge ----------------------------------------------------------

struct SearchArgs {
  std::size_t max_len = 0;
  std::uint64_t cap = std::uint64_t{1} << 34;
  std::string shard = "0/1";
  std::string out;
  std::string phases = "0,1,2";
  bool notable = false;
  unsigned threads = 0;
};

void write_results(const std::string& path, const ShardResult& r, bool notable) {
  ShardResult shown = r;
  if (notable) shown.winners = notable_winners(r.winners);
  emit(path, [&](std::ostream& out) { write_shard_jsonl(out, shown); });
}

int cmd_search(const SearchArgs& a) {
  const std::regex shard_re(R"((\d+)/(\d+))");
  std::smatch m;
  if (!std::regex_match(a.shard, m, shard_re)) throw UsageError("--shard must look like i/N");
  const std::uint64_t i = std::stoull(m[1]), n = std::stoull(m[2]);
  if (n == 0 || i >= n) throw UsageError("--shard index must be below the shard count");
  WorkShard shard = make_shard(a.max_len, a.cap, i, n, parse_phases(a.phases));
  SearchOptions opt;
  opt.threads = a.threads;
  const ShardResult r = run_shard(shard, opt);
  write_results(a.out, r, a.notable);
  return r.undecided.empty() ? kExitHalted : kExitUndecided;
}

int cmd_merge(const std::vector<std::string>& inputs, const std::string& out, bool notable) {
  std::vector<ShardResult> parts;
  for (const auto& path : inputs) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    parts.push_back(read_shard_jsonl(in));
  }
  const ShardResult r = merge_shards(std::move(parts));
  write_results(out, r, notable);
  return r.undecided.empty() ? kExitHalted : kExitUndecided;
}

// ---- graph / grams / cycles ------------------------------------------------------

int cmd_graph(std::size_t max_len, std::uint64_t cap, const std::string& dot, const std::string& json_path,
              bool collapse) {
  const StateGraph g = state_transition_graph(max_len, cap);
  json j;
  j["max_len"] = max_len;
  j["nodes"] = g.nodes.size();
  j["components"] = g.components;
  j["cycle_periods"] = g.cycle_periods;
  j["longest_transient"] = g.longest_transient;
  j["partial"] = g.partial;
  std::cout << j.dump() << '\n';
  if (!dot.empty()) emit(dot, [&](std::ostream& out) { out << to_dot(g, collapse); });
  if (!json_path.empty()) emit(json_path, [&](std::ostream& out) { out << to_json(g) << '\n'; });
  return g.partial ? kExitUndecided : kExitHalted;
}

int cmd_grams(std::size_t m, const std::string& csv) {
  if (m == 0) throw UsageError("--m must be positive");
  json j;
  j["m"] = m;
  j["total"] = mgram_count(m);
  if (m <= 24) j["forbidden"] = forbidden_blocks(m);
  if (m <= 24) {
    json mult = json::object();
    for (const auto& [k, v] : mgram_multiplicity_table(m)) mult[std::to_string(k)] = v;
    j["multiplicity"] = mult;
  }
  std::cout << j.dump() << '\n';
  if (!csv.empty()) emit(csv, [&](std::ostream& out) { write_multiplicity_csv(out, {m}); });
  return kExitHalted;
}

int cmd_cycles(std::uint64_t n, std::size_t family, const std::string& sporadic, const std::string& out_path,
               unsigned threads) {
  json j;
  if (n > 0) {
    j["n"] = n;
    j["cycles"] = count_distinct_cycles(n).str();
    j["on_cycle_strings"] = count_on_cycle_strings(n).str();
  }
  std::vector<CycleDescriptor> listed;
  if (family > 0) {
    listed = family_cycles(family);
    std::vector<std::uint64_t> periods;
    for (const auto& c : listed) periods.push_back(c.period);
    j["family_blocks"] = family;
    j["family_periods"] = periods;
  }
  if (!sporadic.empty()) {
    const std::regex range_re(R"((\d+):(\d+))");
    std::smatch m;
    if (!std::regex_match(sporadic, m, range_re)) throw UsageError("--sporadic must look like MIN:MAX");
    SporadicOptions opt;
    opt.threads = threads;
    listed = sporadic_search(std::stoul(m[1]), std::stoul(m[2]), opt);
    std::vector<std::uint64_t> periods;
    for (const auto& c : listed) periods.push_back(c.period);
    j["sporadic_periods"] = periods;
  }
  if (j.is_null()) throw UsageError("give --n, --family or --sporadic");
  std::cout << j.dump() << '\n';
  if (!out_path.empty()) emit(out_path, [&](std::ostream& out) { write_cycle_jsonl(out, listed); });
  return kExitHalted;
}

// ---- walk ------------------------------------------------------------------

int cmd_walk(std::size_t ensemble, std::uint64_t cap, const std::string& csv, std::uint64_t mc_x,
             std::uint64_t samples, std::uint64_t seed, unsigned threads) {
  json j;
  if (ensemble > 0) {
    const HaltingHistogram h = halting_histogram(ensemble, cap, {}, threads);
    j["m"] = ensemble;
    j["tail_slope"] = h.tail_slope;
    j["tail_fit_ok"] = h.tail_fit_ok;
    j["undecided"] = h.undecided;
    const auto oc = ones_correlation(ensemble, cap, threads);
    j["spearman_ones"] = oc.spearman_rho;
    if (!csv.empty()) emit(csv, [&](std::ostream& out) { write_histogram_csv(out, h); });
  }
  if (mc_x > 0) {
    json bins = json::array();
    for (const auto& b : compare_first_passage(mc_x, {50, 100, 200, 400, 800, 1600, 3200}, samples, seed)) {
      bins.push_back({{"lo", b.lo}, {"hi", b.hi}, {"expected", b.expected}, {"observed", b.observed}, {"z", b.z}});
    }
    j["x"] = mc_x;
    j["seed"] = seed;
    j["samples"] = samples;
    j["first_passage_bins"] = bins;
    j["mode"] = first_passage_mode(static_cast<double>(mc_x));
  }
  if (j.is_null()) throw UsageError("give --ensemble or --mc-x");
  std::cout << j.dump() << '\n';
  return kExitHalted;
}

// ---- zoo ---------------------------------------------------------------------

struct ZooArgs {
  std::string rule;
  std::string ic;
  std::uint64_t cap = 10'000'000;
  bool growth = false;
  std::size_t winners = 0;
  std::string survey;
  std::size_t max_ic_len = 6;
  std::uint64_t ones = 0;
  unsigned threads = 0;
};

int cmd_zoo(const ZooArgs& a) {
  json j;
  int code = kExitHalted;
  if (!a.survey.empty()) {
    RuleFamily family;
    if (a.survey == "balanced90")
      family = RuleFamily::balanced90;
    else if (a.survey == "simple32")
      family = RuleFamily::simple32;
    else
      throw UsageError("--survey must be balanced90 or simple32");
    json rows = json::array();
    for (const auto& r : balanced_rule_survey(rule_family(family), a.max_ic_len, a.cap, a.threads)) {
      rows.push_back({{"rule", r.rule}, {"longest_ic", r.longest_ic}, {"steps", r.longest_halting_step},
                      {"period", r.longest_period}, {"halts", r.halts}, {"cycles", r.cycles},
                      {"undecided", r.undecided}});
    }
    j["survey"] = a.survey;
    j["rules"] = rows;
    std::cout << j.dump() << '\n';
    return code;
  }
  if (a.rule.empty()) throw UsageError("--rule is required");
  const GeneralRule rule = parse_rule(a.rule);
  j["rule"] = format_rule(rule);
  if (a.winners > 0) {
    json rows = json::array();
    for (const auto& w : zoo_winners(rule, a.winners, a.cap))
      rows.push_back({{"id", w.state_id}, {"steps", w.halting_step}, {"period", w.period}});
    j["winners"] = rows;
  }
  if (a.ones > 0) {
    const auto seq = ones_run_sequence(rule, a.ones, a.cap);
    j["ones_runs"] = seq.values;
    j["halted"] = seq.halted;
    j["cycled"] = seq.cycled;
    if (seq.halted) j["steps"] = seq.halting_step;
    j["truncated"] = seq.truncated;
    if (seq.truncated) code = kExitUndecided;
  }
  if (!a.ic.empty()) {
    const ZooState s = parse_zoo_state(a.ic, rule_alphabet(rule));
    j["id"] = a.ic;
    if (a.growth) {
      const auto g = growth_analyzer(rule, s, a.cap);
      j["class"] = to_string(g.kind);
      j["rate"] = g.rate;
      json counts = json::object();
      for (const auto& [sym, c] : g.symbol_counts) counts[std::to_string(sym)] = c;
      j["symbol_counts"] = counts;
      if (g.kind == Growth::undecided || g.kind == Growth::linear_growth || g.kind == Growth::sqrt_growth)
        code = kExitUndecided;
    } else {
      const auto outcome = zoo_detect_halt(rule, s, a.cap);
      if (const auto* r = std::get_if<ZooReport>(&outcome)) {
        j["steps"] = r->halting_step;
        j["period"] = r->period;
        j["transient"] = r->transient;
      } else {
        j["undecided"] = true;
        j["steps"] = std::get<ZooUndecided>(outcome).steps;
        code = kExitUndecided;
      }
    }
  }
  std::cout << j.dump() << '\n';
  return code;
}

// ---- collatz -----------------------------------------------------------------

// "n", "4n+2", "7n-1", "3n" -> (a, b)
std::pair<BigInt, BigInt> parse_affine(const std::string& text) {
  const std::regex re(R"(\s*(\d*)n\s*(?:([+-])\s*(\d+))?\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw FormatError("bad affine map '" + text + "'");
  BigInt a = m[1].str().empty() ? BigInt(1) : BigInt(m[1].str());
  BigInt b = m[3].matched ? BigInt(m[3].str()) : BigInt(0);
  if (m[2].matched && m[2].str() == "-") b = -b;
  return {a, b};
}

ResidueRule parse_residue_rule(int modulus, const std::string& maps) {
  ResidueRule r;
  r.m = modulus;
  std::stringstream in(maps);
  for (std::string item; std::getline(in, item, ',');) {
    auto [a, b] = parse_affine(item);
    r.a.push_back(a);
    r.b.push_back(b);
  }
  try {
    r.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return r;
}

int cmd_collatz(const std::string& n_text, std::uint64_t cap, int modulus, const std::string& maps,
                std::uint64_t riemann, int minimal, const std::string& csv) {
  json j;
  int code = kExitHalted;
  if (!n_text.empty()) {
    if (!std::all_of(n_text.begin(), n_text.end(), ::isdigit)) throw FormatError("--n must be a positive integer");
    const BigInt n(n_text);
    IterationReport r;
    if (maps.empty()) {
      r = collatz_run(n, cap);
      j["map"] = "3n+1";
    } else {
      const ResidueRule rule = parse_residue_rule(modulus, maps);
      IterationOptions opt;
      opt.cap = cap;
      r = residue_run(rule, n, opt);
      j["map"] = rule.to_string();
      j["bias"] = bias(rule);
    }
    j["n"] = n_text;
    j["steps"] = maps.empty() ? r.steps_to_min : r.transient;
    const json detail = json::parse(to_json(r));
    for (auto& [k, v] : detail.items()) j[k] = v;
    if (r.outcome != IterationOutcome::cycle) code = kExitUndecided;
    if (!csv.empty()) emit(csv, [&](std::ostream& out) { write_iteration_csv(out, r); });
  }
  if (riemann > 0) {
    std::vector<std::string> values;
    for (const auto& v : riemann_sequence(riemann)) values.push_back(v.str());
    j["riemann"] = values;
  }
  if (minimal > 0) {
    const ResidueRule r = minimal_bias_rule(minimal);
    j["minimal_bias_rule"] = r.to_string();
    j["minimal_bias"] = bias(r);
  }
  if (j.is_null()) throw UsageError("give --n, --riemann or --minimal-bias");
  std::cout << j.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tagforge: tag-system explorer", "tagforge"};
  app.set_version_flag("--version", "tagforge 1.0.0");
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads (0: TAGFORGE_THREADS or all cores)");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "evolve one initial condition to termination or a cycle");
  run_cmd->add_option("id", run.id, "StateId (len:val:phase or bits:phase), or a zoo state with --rule")->required();
  run_cmd->add_option("--rule", run.rule, "rule literal (default: 00/1101)");
  run_cmd->add_option("--max-steps", run.max_steps, "total step budget");
  run_cmd->add_option("--trace", run.trace, "length trace CSV");
  run_cmd->add_option("--svg", run.svg, "length trace SVG plot");
  run_cmd->add_option("--checkpoint", run.checkpoint, "checkpoint file");
  run_cmd->add_flag("--resume", run.resume, "continue from --checkpoint if present");
  run_cmd->add_option("--checkpoint-interval", run.interval, "steps between checkpoint writes")->check(CLI::PositiveNumber);
  run_cmd->add_option("--checkpoint-seconds", run.interval_seconds, "seconds between checkpoint writes");
  run_cmd->add_flag("--table-steps", run.table, "report the 8-step engine count as \"steps\"");
  run_cmd->add_flag("--no-literal", run.no_literal, "skip the uncompressed replay");

  SearchArgs search;
  auto* search_cmd = app.add_subcommand("search", "longest-so-far winners over all initial conditions");
  search_cmd->add_option("--max-len", search.max_len, "largest compressed length")->required();
  search_cmd->add_option("--cap", search.cap, "per-IC step cap");
  search_cmd->add_option("--shard", search.shard, "shard i/N");
  search_cmd->add_option("--out", search.out, "output JSONL");
  search_cmd->add_option("--phases", search.phases, "comma-separated phases");
  search_cmd->add_flag("--notable", search.notable, "drop near-duplicate winners");

  std::vector<std::string> merge_inputs;
  std::string merge_out;
  bool merge_notable = false;
  auto* merge_cmd = app.add_subcommand("merge", "combine shard outputs");
  merge_cmd->add_option("inputs", merge_inputs, "shard JSONL files")->required()->check(CLI::ExistingFile);
  merge_cmd->add_option("--out", merge_out, "output JSONL");
  merge_cmd->add_flag("--notable", merge_notable, "drop near-duplicate winners");

  std::size_t graph_len = 0;
  std::uint64_t graph_cap = 1u << 20;
  std::string graph_dot, graph_json;
  bool graph_collapse = false;
  auto* graph_cmd = app.add_subcommand("graph", "state transition graph");
  graph_cmd->add_option("--max-len", graph_len, "largest compressed length")->required();
  graph_cmd->add_option("--cap", graph_cap, "per-IC step cap");
  graph_cmd->add_option("--dot", graph_dot, "DOT output");
  graph_cmd->add_option("--json", graph_json, "JSON output");
  graph_cmd->add_flag("--collapse", graph_collapse, "collapse unbranched chains in DOT");

  std::size_t grams_m = 0;
  std::string grams_csv;
  auto* grams_cmd = app.add_subcommand("grams", "m-gram census of block concatenations");
  grams_cmd->add_option("--m", grams_m, "gram length")->required();
  grams_cmd->add_option("--csv", grams_csv, "multiplicity CSV");

  std::uint64_t cycles_n = 0;
  std::size_t cycles_family = 0;
  std::string cycles_sporadic, cycles_out;
  auto* cycles_cmd = app.add_subcommand("cycles", "cycle counts and searches");
  cycles_cmd->add_option("--n", cycles_n, "count distinct cycles of block length n");
  cycles_cmd->add_option("--family", cycles_family, "list family cycles with b blocks");
  cycles_cmd->add_option("--sporadic", cycles_sporadic, "search word lengths MIN:MAX for sporadic cycles");
  cycles_cmd->add_option("--out", cycles_out, "cycle JSONL");

  std::size_t walk_m = 0;
  std::uint64_t walk_cap = std::uint64_t{1} << 30, walk_x = 0, walk_samples = 100000, walk_seed = 20210101;
  std::string walk_csv;
  auto* walk_cmd = app.add_subcommand("walk", "random-walk statistics");
  walk_cmd->add_option("--ensemble", walk_m, "halting histogram over all ICs of this compressed length");
  walk_cmd->add_option("--cap", walk_cap, "per-IC step cap");
  walk_cmd->add_option("--csv", walk_csv, "histogram CSV");
  walk_cmd->add_option("--mc-x", walk_x, "Monte-Carlo first-passage start height");
  walk_cmd->add_option("--samples", walk_samples, "Monte-Carlo samples");
  walk_cmd->add_option("--seed", walk_seed, "mt19937_64 seed");

  ZooArgs zoo;
  auto* zoo_cmd = app.add_subcommand("zoo", "generalized tag systems");
  zoo_cmd->add_option("--rule", zoo.rule, "rule literal");
  zoo_cmd->add_option("--ic", zoo.ic, "initial condition (len:val[:cursor] or digits)");
  zoo_cmd->add_option("--cap", zoo.cap, "step cap");
  zoo_cmd->add_flag("--growth", zoo.growth, "classify growth instead of detecting halting");
  zoo_cmd->add_option("--winners", zoo.winners, "winners over ICs up to this length");
  zoo_cmd->add_option("--survey", zoo.survey, "balanced90 or simple32");
  zoo_cmd->add_option("--max-ic-len", zoo.max_ic_len, "survey IC length bound");
  zoo_cmd->add_option("--ones", zoo.ones, "ones-run sequence from a string of n ones");

  std::string collatz_n, collatz_maps, collatz_csv;
  std::uint64_t collatz_cap = 1'000'000, riemann = 0;
  int collatz_mod = 2, minimal = 0;
  auto* collatz_cmd = app.add_subcommand("collatz", "integer iterations");
  collatz_cmd->add_option("--n", collatz_n, "start value");
  collatz_cmd->add_option("--cap", collatz_cap, "step cap");
  collatz_cmd->add_option("--mod", collatz_mod, "modulus for --maps");
  collatz_cmd->add_option("--maps", collatz_maps, "per-residue maps, e.g. \"n,4n+2,7n+1\"");
  collatz_cmd->add_option("--riemann", riemann, "print the first N Riemann-criterion values");
  collatz_cmd->add_option("--minimal-bias", minimal, "least-biased residue rule for this modulus");
  collatz_cmd->add_option("--csv", collatz_csv, "bit-length trajectory CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run_cmd) return is_post(run.rule) ? run_post(run) : run_zoo(run);
    if (*search_cmd) {
      search.threads = threads;
      return cmd_search(search);
    }
    if (*merge_cmd) return cmd_merge(merge_inputs, merge_out, merge_notable);
    if (*graph_cmd) return cmd_graph(graph_len, graph_cap, graph_dot, graph_json, graph_collapse);
    if (*grams_cmd) return cmd_grams(grams_m, grams_csv);
    if (*cycles_cmd) return cmd_cycles(cycles_n, cycles_family, cycles_sporadic, cycles_out, threads);
    if (*walk_cmd) return cmd_walk(walk_m, walk_cap, walk_csv, walk_x, walk_samples, walk_seed, threads);
    if (*zoo_cmd) {
      zoo.threads = threads;
      return cmd_zoo(zoo);
    }
    if (*collatz_cmd)
      return cmd_collatz(collatz_n, collatz_cap, collatz_mod, collatz_maps, riemann, minimal, collatz_csv);
  } catch (const UsageError& e) {
    std::cerr << "tagforge: " << e.what() << '\n';
    return kExitUsage;
  } catch (const FormatError& e) {
    std::cerr << "tagforge: " << e.what() << '\n';
    return kExitData;
  } catch (const MalformedState& e) {
    std::cerr << "tagforge: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "tagforge: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}
