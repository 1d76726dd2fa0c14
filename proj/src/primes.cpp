#include "gcdsum/primes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gcdsum/errors.hpp"

namespace gcdsum {

namespace {

constexpr std::uint64_t kSegment = std::uint64_t{1} << 18;
constexpr std::uint64_t kMaxPrimeValue = std::uint64_t{1} << 37;

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Marks composites of [lo, hi] using `base` (all primes <= sqrt(hi)) and
// calls emit(p) for each prime found, in ascending order. Stops early when
// emit returns false.
template <typename Emit>
void sieve_segment(std::uint64_t lo, std::uint64_t hi, const std::vector<std::uint32_t>& base,
                   Emit&& emit) {
  std::vector<char> composite;
  for (std::uint64_t low = std::max<std::uint64_t>(lo, 2); low <= hi; low += kSegment) {
    const std::uint64_t high = std::min(hi, low + kSegment - 1);
    composite.assign(high - low + 1, 0);
    for (std::uint64_t p : base) {
      if (p * p > high) break;
      std::uint64_t start = std::max(p * p, (low + p - 1) / p * p);
      for (std::uint64_t m = start; m <= high; m += p) composite[m - low] = 1;
    }
    for (std::uint64_t v = low; v <= high; ++v) {
      if (!composite[v - low] && !emit(v)) return;
    }
  }
}

// Rosser-Schoenfeld style bounds on p_j.
std::uint64_t nth_prime_upper(std::uint64_t j) {
  if (j < 6) return 13;
  const double lj = std::log(static_cast<double>(j));
  return static_cast<std::uint64_t>(static_cast<double>(j) * (lj + std::log(lj))) + 1;
}

std::uint64_t nth_prime_lower(std::uint64_t j) {
  if (j < 6) return 1;
  const double lj = std::log(static_cast<double>(j));
  return static_cast<std::uint64_t>(static_cast<double>(j) * (lj + std::log(lj) - 1.0));
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

std::uint64_t pollard_brent(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  for (std::uint64_t c = 1;; ++c) {
    std::uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
    const std::uint64_t m = 128;
    std::uint64_t r = 1;
    auto f = [&](std::uint64_t v) { return (mulmod(v, v, n) + c) % n; };
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      std::uint64_t k = 0;
      do {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_rec(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const std::uint64_t d = pollard_brent(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace

PrimeTable::PrimeTable(std::uint64_t dense_limit) : dense_limit_(std::max<std::uint64_t>(dense_limit, 64)) {
  std::unique_lock lock(mutex_);
  extend_to_value(1024);
}

std::size_t PrimeTable::cached() const {
  std::shared_lock lock(mutex_);
  return primes_.size();
}

void PrimeTable::extend_to_value(std::uint64_t limit) {
  limit = std::min(limit, dense_limit_);
  if (limit <= covered_) return;
  const std::uint64_t root = isqrt(limit);
  if (root > covered_) extend_to_value(root);
  // primes_ now holds every prime <= root, which is all the sieve needs.
  const std::vector<std::uint32_t> base = primes_;
  sieve_segment(covered_ + 1, limit, base, [this](std::uint64_t p) {
    primes_.push_back(static_cast<std::uint32_t>(p));
    return true;
  });
  covered_ = limit;
}

void PrimeTable::reserve_count(std::uint64_t count) {
  {
    std::shared_lock lock(mutex_);
    if (primes_.size() >= count) return;
  }
  std::unique_lock lock(mutex_);
  while (primes_.size() < count && covered_ < dense_limit_) {
    extend_to_value(std::max(nth_prime_upper(count), covered_ * 2));
  }
}

std::uint64_t PrimeTable::prime(std::uint64_t j) {
  if (j == 0 || j > kMaxIndex) {
    throw RangeError("prime index " + std::to_string(j) + " outside supported range [1, 2^31]");
  }
  {
    std::shared_lock lock(mutex_);
    if (j <= primes_.size()) return primes_[j - 1];
  }
  reserve_count(j);
  {
    std::shared_lock lock(mutex_);
    if (j <= primes_.size()) return primes_[j - 1];
  }
  // Beyond the dense table: count up to a lower bound, then sieve forward.
  const std::uint64_t lo = nth_prime_lower(j);
  std::uint64_t count = prime_pi(lo);
  const std::uint64_t hi = nth_prime_upper(j);
  std::vector<std::uint32_t> base;
  {
    std::unique_lock lock(mutex_);
    extend_to_value(isqrt(hi) + 1);
    base = primes_;
  }
  std::uint64_t found = 0;
  sieve_segment(lo + 1, hi, base, [&](std::uint64_t p) {
    if (++count == j) {
      found = p;
      return false;
    }
    return true;
  });
  if (found == 0) throw RangeError("failed to locate prime number " + std::to_string(j));
  return found;
}

std::uint64_t PrimeTable::index_of(std::uint64_t p) {
  if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
  if (p > kMaxPrimeValue) {
    throw RangeError("prime " + std::to_string(p) + " exceeds the supported index range");
  }
  {
    std::unique_lock lock(mutex_);
    if (p > covered_ && p <= dense_limit_) extend_to_value(std::max(p, covered_ * 2));
    if (p <= covered_) {
      auto it = std::lower_bound(primes_.begin(), primes_.end(), static_cast<std::uint32_t>(p));
      return static_cast<std::uint64_t>(it - primes_.begin()) + 1;
    }
  }
  return prime_pi(p);
}

PrimeTable& prime_table() {
  static PrimeTable table;
  return table;
}

std::uint64_t prime_pi(std::uint64_t x) {
  if (x < 2) return 0;
  const std::uint64_t r = isqrt(x);
  // small[v] = count for v <= r, large[i] = count for x / i.
  std::vector<std::uint64_t> small(r + 1), large(r + 1);
  for (std::uint64_t v = 1; v <= r; ++v) {
    small[v] = v - 1;
    large[v] = x / v - 1;
  }
  for (std::uint64_t p = 2; p <= r; ++p) {
    if (small[p] == small[p - 1]) continue;
    const std::uint64_t sp = small[p - 1];
    const std::uint64_t p2 = p * p;
    const std::uint64_t imax = std::min(r, x / p2);
    for (std::uint64_t i = 1; i <= imax; ++i) {
      const std::uint64_t d = i * p;
      const std::uint64_t sub = d <= r ? large[d] : small[x / d];
      large[i] -= sub - sp;
    }
    for (std::uint64_t v = r; v >= p2; --v) small[v] -= small[v / p] - sp;
  }
  return large[1];
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

std::vector<std::pair<std::uint64_t, std::uint32_t>> factor(std::uint64_t n) {
  if (n == 0) throw DomainError("cannot factor 0");
  std::vector<std::uint64_t> found;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull}) {
    while (n % p == 0) {
      found.push_back(p);
      n /= p;
    }
  }
  for (std::uint64_t p = 37; p < 1000 && p * p <= n; p += 2) {
    while (n % p == 0) {
      found.push_back(p);
      n /= p;
    }
  }
  factor_rec(n, found);
  std::sort(found.begin(), found.end());
  std::vector<std::pair<std::uint64_t, std::uint32_t>> out;
  for (std::uint64_t p : found) {
    if (!out.empty() && out.back().first == p) {
      ++out.back().second;
    } else {
      out.emplace_back(p, 1);
    }
  }
  return out;
}

}  // namespace gcdsum
