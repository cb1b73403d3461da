#include "tagforge/packed_word.hpp"

#include <algorithm>
#include <stdexcept>

namespace tagforge {

PackedWord PackedWord::from_bits(std::string_view bits) {
  PackedWord w;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("bit string may only contain 0 and 1");
    w.push_back(c == '1');
  }
  return w;
}

void PackedWord::clear() noexcept {
  std::fill(limbs_.begin(), limbs_.end(), 0);
  head_ = tail_ = 0;
}

void PackedWord::reserve_tail(unsigned count) {
  const std::size_t cap = limbs_.size() * 64;
  if (tail_ + count + 64 <= cap) return;
  const std::size_t drop = head_ >> 6;
  if (drop > 0 && size() + count + 64 <= cap / 2) {
    std::copy(limbs_.begin() + drop, limbs_.end(), limbs_.begin());
    std::fill(limbs_.end() - drop, limbs_.end(), 0);
    head_ -= drop * 64;
    tail_ -= drop * 64;
    return;
  }
  limbs_.resize(std::max<std::size_t>(limbs_.size() * 2, (tail_ + count) / 64 + 2), 0);
}

std::string PackedWord::to_string() const {
  std::string s(size(), '0');
  for (std::size_t i = 0; i < s.size(); ++i)
    if ((*this)[i]) s[i] = '1';
  return s;
}

std::uint64_t PackedWord::hash(std::uint64_t seed) const noexcept {
  std::uint64_t h = seed ^ (0x9e3779b97f4a7c15ULL * (size() + 1));
  for (std::size_t pos = 0; pos < size(); pos += 64) {
    h ^= chunk(pos);
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
  }
  h *= 0xc4ceb9fe1a85ec53ULL;
  return h ^ (h >> 29);
}

bool operator==(const PackedWord& a, const PackedWord& b) noexcept {
  if (a.size() != b.size()) return false;
  for (std::size_t pos = 0; pos < a.size(); pos += 64)
    if (a.chunk(pos) != b.chunk(pos)) return false;
  return true;
}

bool operator<(const PackedWord& a, const PackedWord& b) noexcept {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t pos = 0; pos < n; pos += 64) {
    std::uint64_t x = a.chunk(pos), y = b.chunk(pos);
    if (n - pos < 64) {
      const std::uint64_t mask = (std::uint64_t{1} << (n - pos)) - 1;
      x &= mask;
      y &= mask;
    }
    if (x != y) {
      const std::uint64_t diff = x ^ y;
      const int first = __builtin_ctzll(diff);
      return ((x >> first) & 1u) == 0;
    }
  }
  return a.size() < b.size();
}

}  // namespace tagforge
