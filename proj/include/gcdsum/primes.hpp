#pragma once

#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <utility>
#include <vector>

namespace gcdsum {

// Ascending table of primes, p_1 = 2, grown on demand by a segmented sieve.
//
// The dense table is extended lazily up to `dense_limit` (a bound on the
// prime values it stores). Indices beyond it are still answered, by prime
// counting plus a windowed sieve, but are not cached. Reads are concurrent;
// extension takes an exclusive lock.
class PrimeTable {
 public:
  static constexpr std::uint64_t kDefaultDenseLimit = std::uint64_t{1} << 25;
  // Largest index accepted by prime(); p_j for j = 2^31 is about 5.1e10.
  static constexpr std::uint64_t kMaxIndex = std::uint64_t{1} << 31;

  explicit PrimeTable(std::uint64_t dense_limit = kDefaultDenseLimit);

  PrimeTable(const PrimeTable&) = delete;
  PrimeTable& operator=(const PrimeTable&) = delete;

  // j-th prime, 1-based. Throws RangeError for j == 0 or j > kMaxIndex.
  std::uint64_t prime(std::uint64_t j);

  // 1-based index of the prime p. Throws DomainError if p is not prime.
  std::uint64_t index_of(std::uint64_t p);

  // Number of primes currently cached.
  std::size_t cached() const;

  // Make sure the first `count` primes are cached (bounded by the dense limit).
  void reserve_count(std::uint64_t count);

 private:
  void extend_to_value(std::uint64_t limit);  // requires exclusive lock
  std::uint64_t covered_value() const { return covered_; }

  mutable std::shared_mutex mutex_;
  std::vector<std::uint32_t> primes_;
  std::uint64_t covered_ = 1;  // every prime <= covered_ is in primes_
  std::uint64_t dense_limit_;
};

// Process-wide table shared by the weight sequences and integer conversion.
PrimeTable& prime_table();

// pi(x): number of primes <= x (Lucy's O(x^{3/4}) method).
std::uint64_t prime_pi(std::uint64_t x);

// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime(std::uint64_t n);

// Prime factorisation as ascending (prime, exponent) pairs; factor(1) is empty.
std::vector<std::pair<std::uint64_t, std::uint32_t>> factor(std::uint64_t n);

}  // namespace gcdsum
