#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace primelab {

/// Ascending list of every prime <= limit.
struct PrimeTable {
  std::uint64_t limit = 0;
  std::vector<std::uint64_t> primes;

  bool contains(std::uint64_t m) const;
};

enum class WheelSign { Minus, Plus };

/// A value coprime to 6, written as 6*index - 1 (Minus) or 6*index + 1 (Plus).
struct WheelClass {
  std::uint64_t value = 0;
  WheelSign sign = WheelSign::Minus;
  std::uint64_t index = 0;

  bool operator==(const WheelClass&) const = default;
};

/// Product of all primes p with base_prime <= p <= top_prime.
struct Primorial {
  std::uint64_t top_prime = 0;
  std::uint64_t base_prime = 0;
  std::uint64_t value = 1;
};

/// Sieve of Eratosthenes over odd numbers. Throws DomainError for limit < 2.
PrimeTable sieve_primes(std::uint64_t limit);

/// Wheel class of m, or nullopt when gcd(m, 6) != 1. Throws DomainError for m < 5.
std::optional<WheelClass> classify_6k(std::uint64_t m);

/// Throws DomainError when either bound is not prime or base > top, and
/// RangeError (naming the largest top prime that fits) on 64-bit overflow.
Primorial primorial(std::uint64_t top_prime, std::uint64_t base_prime = 2);

/// Exact for every 64-bit input (deterministic Miller-Rabin).
bool is_prime(std::uint64_t m);

/// Largest r with r*r <= n.
std::uint64_t isqrt(std::uint64_t n);

/// Smallest prime strictly greater than m (m < 2^64 - 59).
std::uint64_t next_prime(std::uint64_t m);

}  // namespace primelab
