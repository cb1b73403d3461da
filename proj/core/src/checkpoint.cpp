#include "tagforge/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

namespace tagforge {

namespace {

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

void put_u32(std::ostream& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::ostream& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_uint(std::istream& in, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    const int ch = in.get();
    if (ch < 0) throw FormatError("truncated checkpoint");
    v |= static_cast<std::uint64_t>(ch) << (8 * i);
  }
  return v;
}

void put_string(std::ostream& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& in) {
  const auto n = get_uint(in, 4);
  if (n > (1u << 20)) throw FormatError("checkpoint string too long");
  std::string s(n, '\0');
  in.read(s.data(), static_cast<std::streamsize>(n));
  if (static_cast<std::uint64_t>(in.gcount()) != n) throw FormatError("truncated checkpoint");
  return s;
}

}  // namespace

void write_checkpoint(std::ostream& out, const Checkpoint& c) {
  std::ostringstream body(std::ios::binary);
  body.write(kCheckpointMagic, sizeof kCheckpointMagic);
  put_u32(body, kCheckpointVersion);
  put_string(body, c.rule_literal);
  put_string(body, c.initial_id);
  c.detector.save(body);
  const std::string bytes = body.str();
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  put_u64(out, fnv1a(bytes));
}

Checkpoint read_checkpoint(std::istream& in) {
  const std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (all.size() < sizeof kCheckpointMagic + 12) throw FormatError("checkpoint too short");
  if (std::memcmp(all.data(), kCheckpointMagic, sizeof kCheckpointMagic) != 0)
    throw FormatError("not a tagforge checkpoint");
  const std::string bytes = all.substr(0, all.size() - 8);
  std::istringstream tail(all.substr(all.size() - 8), std::ios::binary);
  if (get_uint(tail, 8) != fnv1a(bytes)) throw FormatError("checkpoint checksum mismatch");
  std::istringstream body(bytes, std::ios::binary);
  body.ignore(sizeof kCheckpointMagic);
  const auto version = get_uint(body, 4);
  if (version != kCheckpointVersion) throw FormatError("unsupported checkpoint version " + std::to_string(version));
  std::string rule = get_string(body);
  std::string id = get_string(body);
  HaltDetector detector = HaltDetector::load(body);
  if (body.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes in checkpoint");
  return Checkpoint{std::move(rule), std::move(id), std::move(detector)};
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    write_checkpoint(out, c);
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_checkpoint(in);
}

}  // namespace tagforge
