#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace primelab {

// Fixed-size bitset backed by 64-bit words. Bits beyond size() are always
// zero, so word-level equality and popcounts are exact.
class Bitmap {
 public:
  static constexpr std::uint64_t kWordBits = 64;

  Bitmap() = default;
  explicit Bitmap(std::uint64_t size);

  std::uint64_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool test(std::uint64_t i) const {
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1u;
  }
  void set(std::uint64_t i) { words_[i / kWordBits] |= std::uint64_t{1} << (i % kWordBits); }
  void reset(std::uint64_t i) { words_[i / kWordBits] &= ~(std::uint64_t{1} << (i % kWordBits)); }

  // Number of set bits overall, or in [begin, end).
  std::uint64_t count() const;
  std::uint64_t count(std::uint64_t begin, std::uint64_t end) const;

  // First set / clear position >= from, or size() if there is none.
  std::uint64_t find_next_set(std::uint64_t from) const;
  std::uint64_t find_next_clear(std::uint64_t from) const;

  std::vector<std::uint64_t> set_positions() const;

  Bitmap& operator|=(const Bitmap& other);
  bool operator==(const Bitmap& other) const = default;

  std::span<const std::uint64_t> words() const { return words_; }

 private:
  std::uint64_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace primelab
