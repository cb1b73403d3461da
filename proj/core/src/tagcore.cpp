#include "tagforge/tagcore.hpp"

#include <charconv>

namespace tagforge {

void TagRule::validate() const {
  if (alphabet_size < 2) throw MalformedState("alphabet size must be at least 2");
  if (deletion < 1) throw MalformedState("deletion count must be at least 1");
  if (appends.size() != static_cast<std::size_t>(alphabet_size))
    throw MalformedState("rule needs one append block per symbol");
  for (const auto& block : appends)
    for (auto s : block)
      if (s >= alphabet_size) throw MalformedState("append block uses a symbol outside the alphabet");
}

const TagRule& TagRule::post() {
  static const TagRule rule{2, 3, {{0, 0}, {1, 1, 0, 1}}};
  return rule;
}

bool operator==(const TagRule& a, const TagRule& b) {
  return a.alphabet_size == b.alphabet_size && a.deletion == b.deletion && a.appends == b.appends;
}

std::string UncompressedState::to_string() const {
  std::string s;
  s.reserve(symbols.size());
  for (auto v : symbols) s.push_back(static_cast<char>('0' + v));
  return s;
}

UncompressedState UncompressedState::from_string(std::string_view digits) {
  UncompressedState u;
  u.symbols.reserve(digits.size());
  for (char c : digits) {
    if (c < '0' || c > '9') throw MalformedState("state digits must be 0-9");
    u.symbols.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return u;
}

bool operator==(const UncompressedState& a, const UncompressedState& b) { return a.symbols == b.symbols; }

std::uint64_t CompressedState::uncompressed_length() const noexcept {
  const std::uint64_t m = word.size();
  if (m == 0) return 0;
  static constexpr std::uint64_t offset[3] = {0, 2, 1};
  return 3 * m - offset[phase];
}

bool operator==(const CompressedState& a, const CompressedState& b) noexcept {
  return a.phase == b.phase && a.word == b.word;
}

bool operator<(const CompressedState& a, const CompressedState& b) noexcept {
  if (a.phase != b.phase) return a.phase < b.phase;
  return a.word < b.word;
}

std::optional<UncompressedState> step_uncompressed(const TagRule& rule, const UncompressedState& s) {
  for (auto v : s.symbols)
    if (v >= rule.alphabet_size) throw MalformedState("symbol outside the rule alphabet");
  if (s.symbols.size() < static_cast<std::size_t>(rule.deletion)) return std::nullopt;
  const auto& block = rule.appends[s.symbols.front()];
  UncompressedState next;
  next.symbols.reserve(s.symbols.size() - rule.deletion + block.size());
  next.symbols.assign(s.symbols.begin() + rule.deletion, s.symbols.end());
  next.symbols.insert(next.symbols.end(), block.begin(), block.end());
  return next;
}

CompressedState compress(const UncompressedState& s) {
  CompressedState c;
  c.phase = static_cast<std::uint8_t>(s.symbols.size() % 3);
  for (std::size_t i = 0; i < s.symbols.size(); i += 3) {
    if (s.symbols[i] > 1) throw MalformedState("compressed form needs a binary string");
    c.word.push_back(s.symbols[i] == 1);
  }
  return c;
}

UncompressedState uncompress(const CompressedState& c, std::uint8_t pad) {
  UncompressedState u;
  const std::size_t m = c.word.size();
  if (m == 0) return u;
  u.symbols.reserve(3 * m);
  for (std::size_t i = 0; i < m; ++i) {
    u.symbols.push_back(c.word[i] ? 1 : 0);
    if (i + 1 < m) {
      u.symbols.push_back(pad);
      u.symbols.push_back(pad);
    }
  }
  static constexpr int tail[3] = {2, 0, 1};
  for (int k = 0; k < tail[c.phase]; ++k) u.symbols.push_back(pad);
  return u;
}

void apply_rule(CompressedState& c) {
  const bool lead = c.word.front();
  c.word.pop_front();
  switch (c.phase * 2 + (lead ? 1 : 0)) {
    case 0: c.phase = 2; c.word.push_back(false); break;
    case 1: c.phase = 1; c.word.append_bits(3, 2); break;
    case 2: c.phase = 0; break;
    case 3: c.phase = 2; c.word.push_back(false); break;
    case 4: c.phase = 1; c.word.push_back(false); break;
    case 5: c.phase = 0; c.word.push_back(true); break;
  }
}

bool step_compressed_inplace(CompressedState& c) {
  if (c.halted()) return false;
  apply_rule(c);
  return true;
}

std::optional<CompressedState> step_compressed(const CompressedState& c) {
  CompressedState next = c;
  if (!step_compressed_inplace(next)) return std::nullopt;
  return next;
}

PostString PostString::from(const CompressedState& c, std::uint8_t pad) {
  PostString p;
  for (auto v : uncompress(c, pad).symbols) p.bits.push_back(v == 1);
  return p;
}

bool PostString::step() {
  if (bits.size() < 3) return false;
  const bool lead = bits.front();
  bits.pop_front(3);
  // 1101 read first-to-last is 0b1011 with the first symbol in bit 0.
  if (lead)
    bits.append_bits(0b1011, 4);
  else
    bits.append_bits(0, 2);
  return true;
}

bool operator==(const IntegerPairState& a, const IntegerPairState& b) { return a.n == b.n && a.i == b.i; }

IntegerPairState integer_pair_step(const IntegerPairState& s) {
  if (s.n < 3) throw MalformedState("integer pair state has halted (n < 3)");
  const BigInt half = BigInt(1) << (s.n - 1);
  const BigInt j = (s.i & ((BigInt(1) << (s.n - 3)) - 1)) * 4;
  if (s.i < half) return {s.n - 1, j};
  return {s.n + 1, 4 * j + 13};
}

IntegerPairState to_integer_pair(const UncompressedState& s) {
  IntegerPairState p;
  p.n = s.symbols.size();
  for (auto v : s.symbols) {
    if (v > 1) throw MalformedState("integer pair form needs a binary string");
    p.i = (p.i << 1) | v;
  }
  return p;
}

UncompressedState from_integer_pair(const IntegerPairState& p) {
  UncompressedState u;
  u.symbols.resize(p.n);
  for (std::uint64_t k = 0; k < p.n; ++k)
    u.symbols[p.n - 1 - k] = bit_test(p.i, static_cast<unsigned>(k)) ? 1 : 0;
  return u;
}

namespace {

std::uint8_t parse_phase(std::string_view t) {
  if (t.size() != 1 || t[0] < '0' || t[0] > '2') throw FormatError("phase must be 0, 1 or 2");
  return static_cast<std::uint8_t>(t[0] - '0');
}

}  // namespace

CompressedState make_state(std::string_view bits, std::uint8_t phase) {
  if (phase > 2) throw FormatError("phase must be 0, 1 or 2");
  CompressedState c;
  c.phase = phase;
  try {
    c.word = PackedWord::from_bits(bits);
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return c;
}

CompressedState parse_state_id(std::string_view text) {
  const auto first = text.find(':');
  if (first == std::string_view::npos) throw FormatError("state id needs a ':' separator");
  const auto second = text.find(':', first + 1);
  if (second == std::string_view::npos) return make_state(text.substr(0, first), parse_phase(text.substr(first + 1)));
  if (text.find(':', second + 1) != std::string_view::npos) throw FormatError("too many ':' in state id");

  const auto len_text = text.substr(0, first);
  const auto val_text = text.substr(first + 1, second - first - 1);
  std::size_t len = 0;
  auto [p, ec] = std::from_chars(len_text.data(), len_text.data() + len_text.size(), len);
  if (ec != std::errc() || p != len_text.data() + len_text.size() || len_text.empty())
    throw FormatError("bad length in state id");
  if (val_text.empty()) throw FormatError("bad value in state id");
  for (char ch : val_text)
    if (ch < '0' || ch > '9') throw FormatError("bad value in state id");
  const BigInt value{std::string(val_text)};
  if (value >= (BigInt(1) << len)) throw FormatError("state id value does not fit its length");

  CompressedState c;
  c.phase = parse_phase(text.substr(second + 1));
  for (std::size_t k = 0; k < len; ++k) c.word.push_back(bit_test(value, static_cast<unsigned>(len - 1 - k)));
  return c;
}

std::string format_state_id(const CompressedState& c) {
  BigInt value = 0;
  for (std::size_t k = 0; k < c.word.size(); ++k) value = (value << 1) | (c.word[k] ? 1 : 0);
  return std::to_string(c.word.size()) + ":" + value.str() + ":" + std::to_string(c.phase);
}

std::string format_bits_id(const CompressedState& c) {
  return c.word.to_string() + ":" + std::to_string(c.phase);
}

std::string serialize_state(const CompressedState& c) {
  std::string out;
  out.push_back(static_cast<char>(c.phase));
  std::uint64_t m = c.word.size();
  do {
    std::uint8_t b = m & 0x7f;
    m >>= 7;
    if (m) b |= 0x80;
    out.push_back(static_cast<char>(b));
  } while (m);
  for (std::size_t pos = 0; pos < c.word.size(); pos += 8) {
    std::uint8_t b = static_cast<std::uint8_t>(c.word.chunk(pos));
    if (c.word.size() - pos < 8) b &= static_cast<std::uint8_t>((1u << (c.word.size() - pos)) - 1);
    out.push_back(static_cast<char>(b));
  }
  return out;
}

CompressedState deserialize_state(std::string_view bytes, std::size_t* consumed) {
  std::size_t at = 0;
  if (bytes.empty()) throw FormatError("truncated packed state");
  CompressedState c;
  const auto phase = static_cast<std::uint8_t>(bytes[at++]);
  if (phase > 2) throw FormatError("packed state has bad phase");
  c.phase = phase;
  std::uint64_t m = 0;
  for (int shift = 0;; shift += 7) {
    if (at >= bytes.size() || shift > 63) throw FormatError("truncated packed state length");
    const auto b = static_cast<std::uint8_t>(bytes[at++]);
    m |= static_cast<std::uint64_t>(b & 0x7f) << shift;
    if (!(b & 0x80)) break;
  }
  const std::size_t nbytes = (m + 7) / 8;
  if (bytes.size() - at < nbytes) throw FormatError("truncated packed state bits");
  for (std::size_t k = 0; k < nbytes; ++k) {
    const unsigned take = static_cast<unsigned>(std::min<std::uint64_t>(8, m - 8 * k));
    c.word.append_bits(static_cast<std::uint8_t>(bytes[at + k]) & ((1u << take) - 1), take);
  }
  at += nbytes;
  if (consumed) *consumed = at;
  return c;
}

}  // namespace tagforge
