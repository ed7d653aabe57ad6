#include "primelab/wheel.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "primelab/bitmap.hpp"
#include "primelab/errors.hpp"

namespace primelab {

namespace {

__extension__ using u128 = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1;
  base %= m;
  while (exp != 0) {
    if (exp & 1u) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

// One strong-probable-prime round; m odd, m > a.
bool strong_probable_prime(std::uint64_t m, std::uint64_t a) {
  std::uint64_t d = m - 1;
  int s = 0;
  while ((d & 1u) == 0) {
    d >>= 1;
    ++s;
  }
  std::uint64_t x = pow_mod(a, d, m);
  if (x == 1 || x == m - 1) return true;
  for (int r = 1; r < s; ++r) {
    x = mul_mod(x, x, m);
    if (x == m - 1) return true;
  }
  return false;
}

constexpr std::array<std::uint64_t, 12> kSmallPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

}  // namespace

bool PrimeTable::contains(std::uint64_t m) const {
  return std::binary_search(primes.begin(), primes.end(), m);
}

PrimeTable sieve_primes(std::uint64_t limit) {
  if (limit < 2) throw DomainError("sieve_primes: limit must be >= 2, got " + std::to_string(limit));
  PrimeTable table;
  table.limit = limit;
  table.primes.push_back(2);
  // bit i stands for the odd number 2i + 1; set means composite
  const std::uint64_t slots = (limit - 1) / 2 + 1;
  Bitmap composite(slots);
  for (std::uint64_t i = 1; i < slots; ++i) {
    if (composite.test(i)) continue;
    const std::uint64_t p = 2 * i + 1;
    table.primes.push_back(p);
    if (p > limit / p) continue;
    for (std::uint64_t j = (p * p) / 2; j < slots; j += p) composite.set(j);
  }
  return table;
}

std::optional<WheelClass> classify_6k(std::uint64_t m) {
  if (m < 5) throw DomainError("classify_6k: value must be >= 5, got " + std::to_string(m));
  switch (m % 6) {
    case 5:
      return WheelClass{m, WheelSign::Minus, (m + 1) / 6};
    case 1:
      return WheelClass{m, WheelSign::Plus, (m - 1) / 6};
    default:
      return std::nullopt;
  }
}

Primorial primorial(std::uint64_t top_prime, std::uint64_t base_prime) {
  if (!is_prime(top_prime) || !is_prime(base_prime)) {
    throw DomainError("primorial: bounds must be prime (got top " + std::to_string(top_prime) +
                      ", base " + std::to_string(base_prime) + ")");
  }
  if (base_prime > top_prime) {
    throw DomainError("primorial: base_prime " + std::to_string(base_prime) + " exceeds top_prime " +
                      std::to_string(top_prime));
  }
  Primorial out{top_prime, base_prime, 1};
  for (std::uint64_t p = base_prime; p <= top_prime; p = next_prime(p)) {
    std::uint64_t product = 0;
    if (__builtin_mul_overflow(out.value, p, &product)) {
      // the previous prime is the largest top that still fits
      std::uint64_t max_top = base_prime;
      std::uint64_t acc = 1;
      for (std::uint64_t q = base_prime;; q = next_prime(q)) {
        if (__builtin_mul_overflow(acc, q, &acc)) break;
        max_top = q;
      }
      throw RangeError("primorial: product of primes in [" + std::to_string(base_prime) + ", " +
                       std::to_string(top_prime) + "] overflows 64 bits; maximum supported top_prime is " +
                       std::to_string(max_top));
    }
    out.value = product;
  }
  return out;
}

bool is_prime(std::uint64_t m) {
  if (m < 2) return false;
  for (auto p : kSmallPrimes) {
    if (m == p) return true;
    if (m % p == 0) return false;
  }
  if (m < 41 * 41) return true;
  // {2, 7, 61} is deterministic below 4759123141; the twelve-prime set covers 2^64
  if (m < 4759123141ull) {
    return strong_probable_prime(m, 2) && strong_probable_prime(m, 7) && strong_probable_prime(m, 61);
  }
  return std::all_of(kSmallPrimes.begin(), kSmallPrimes.end(),
                     [m](std::uint64_t a) { return strong_probable_prime(m, a); });
}

std::uint64_t isqrt(std::uint64_t n) {
  std::uint64_t r = static_cast<std::uint64_t>(__builtin_sqrtl(static_cast<long double>(n)));
  while (r > 0 && (r > n / r)) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

std::uint64_t next_prime(std::uint64_t m) {
  if (m < 2) return 2;
  std::uint64_t c = (m + 1) | 1u;
  while (!is_prime(c)) c += 2;
  return c;
}

}  // namespace primelab
