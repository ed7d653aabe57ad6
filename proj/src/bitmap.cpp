#include "primelab/bitmap.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace primelab {

Bitmap::Bitmap(std::uint64_t size) : size_(size), words_((size + kWordBits - 1) / kWordBits, 0) {}

std::uint64_t Bitmap::count() const {
  std::uint64_t total = 0;
  for (auto w : words_) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

std::uint64_t Bitmap::count(std::uint64_t begin, std::uint64_t end) const {
  end = std::min(end, size_);
  if (begin >= end) return 0;
  std::uint64_t total = 0;
  std::uint64_t i = begin;
  while (i < end && i % kWordBits != 0) total += test(i++);
  while (i + kWordBits <= end) {
    total += static_cast<std::uint64_t>(std::popcount(words_[i / kWordBits]));
    i += kWordBits;
  }
  while (i < end) total += test(i++);
  return total;
}

std::uint64_t Bitmap::find_next_set(std::uint64_t from) const {
  if (from >= size_) return size_;
  std::uint64_t w = from / kWordBits;
  std::uint64_t word = words_[w] & (~std::uint64_t{0} << (from % kWordBits));
  while (true) {
    if (word != 0) {
      return std::min(size_, w * kWordBits + static_cast<std::uint64_t>(std::countr_zero(word)));
    }
    if (++w >= words_.size()) return size_;
    word = words_[w];
  }
}

std::uint64_t Bitmap::find_next_clear(std::uint64_t from) const {
  if (from >= size_) return size_;
  std::uint64_t w = from / kWordBits;
  std::uint64_t word = ~words_[w] & (~std::uint64_t{0} << (from % kWordBits));
  while (true) {
    if (word != 0) {
      return std::min(size_, w * kWordBits + static_cast<std::uint64_t>(std::countr_zero(word)));
    }
    if (++w >= words_.size()) return size_;
    word = ~words_[w];
  }
}

std::vector<std::uint64_t> Bitmap::set_positions() const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = find_next_set(0); i < size_; i = find_next_set(i + 1)) out.push_back(i);
  return out;
}

Bitmap& Bitmap::operator|=(const Bitmap& other) {
  if (other.size_ != size_) throw std::invalid_argument("Bitmap: size mismatch in |=");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

}  // namespace primelab
