#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tagforge {

// Growable bit deque. Bit i of the sequence lives at absolute position
// head_ + i, stored little-position-first inside 64-bit limbs. Bits at or
// beyond tail_ are always zero and one spare limb is kept past the tail so
// that unaligned 64-bit reads never need a bounds check.
class PackedWord {
 public:
  PackedWord() : limbs_(2, 0) {}

  static PackedWord from_bits(std::string_view bits);

  std::size_t size() const noexcept { return tail_ - head_; }
  bool empty() const noexcept { return tail_ == head_; }

  bool operator[](std::size_t i) const noexcept {
    const std::size_t a = head_ + i;
    return (limbs_[a >> 6] >> (a & 63)) & 1u;
  }
  bool front() const noexcept { return (*this)[0]; }

  // Up to 64 bits starting at sequence position `pos`, bit 0 = position `pos`.
  // Positions past the end read as zero.
  std::uint64_t chunk(std::size_t pos) const noexcept {
    const std::size_t a = head_ + pos;
    const std::size_t limb = a >> 6;
    const unsigned off = a & 63;
    std::uint64_t v = limbs_[limb] >> off;
    if (off != 0 && limb + 1 < limbs_.size()) v |= limbs_[limb + 1] << (64 - off);
    return v;
  }

  std::uint8_t peek8() const noexcept { return static_cast<std::uint8_t>(chunk(0)); }

  void pop_front(std::size_t n = 1) noexcept {
    head_ += n;
    if (head_ >= tail_) clear();
  }

  void push_back(bool bit) { append_bits(bit ? 1u : 0u, 1); }

  // Appends `count` (<= 57) bits, bit 0 of `bits` first.
  void append_bits(std::uint64_t bits, unsigned count) {
    if (count == 0) return;
    reserve_tail(count);
    const std::size_t limb = tail_ >> 6;
    const unsigned off = tail_ & 63;
    limbs_[limb] |= bits << off;
    if (off + count > 64) limbs_[limb + 1] |= bits >> (64 - off);
    tail_ += count;
  }

  void clear() noexcept;

  std::string to_string() const;
  std::uint64_t hash(std::uint64_t seed = 0) const noexcept;

  friend bool operator==(const PackedWord& a, const PackedWord& b) noexcept;
  friend bool operator<(const PackedWord& a, const PackedWord& b) noexcept;

 private:
  void reserve_tail(unsigned count);

  std::vector<std::uint64_t> limbs_;
  std::size_t head_ = 0;
  std::size_t tail_ = 0;
};

}  // namespace tagforge
