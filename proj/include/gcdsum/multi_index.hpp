#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gcdsum {

class PrimeTable;

using Index = std::uint32_t;
using Exponent = std::uint32_t;

struct Term {
  Index index;
  Exponent exponent;

  friend auto operator<=>(const Term&, const Term&) = default;
};

// Finitely supported sequence of nonnegative exponents, i.e. the prime
// factorisation of a positive integer with e_j standing for p_j.
//
// Stored sparsely as (index, exponent) terms with strictly increasing
// indices >= 1 and exponents >= 1. The defaulted ordering is lexicographic on
// that term list, which is the canonical order used for every set iteration.
class MultiIndex {
 public:
  MultiIndex() = default;

  // Terms may come in any order; zero exponents are dropped. Throws
  // DomainError on index 0 or a repeated index.
  explicit MultiIndex(std::vector<Term> terms);

  // Dense constructor: exponents of e_1, e_2, ... in order, so {2, 0, 1} is 2^2 * 5.
  static MultiIndex dense(std::initializer_list<Exponent> exponents);
  static MultiIndex dense(std::span<const Exponent> exponents);
  static MultiIndex basis(Index j, Exponent e = 1);

  Exponent operator[](Index j) const noexcept;
  std::span<const Term> terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t support_size() const noexcept { return terms_.size(); }
  // Largest index in the support, 0 for the zero multi-index.
  Index max_index() const noexcept { return terms_.empty() ? 0 : terms_.back().index; }
  // sum_j j * beta^{(j)}; used as a termination measure by the transforms.
  std::uint64_t weighted_degree() const noexcept;

  MultiIndex operator+(const MultiIndex& other) const;
  // Componentwise difference; requires other <= *this.
  MultiIndex operator-(const MultiIndex& other) const;
  MultiIndex operator*(Exponent k) const;
  MultiIndex with_exponent(Index j, Exponent e) const;

  // Text form `mi j1:e1 j2:e2 ...`; the zero multi-index is `mi`.
  std::string to_string() const;
  static MultiIndex parse(std::string_view text);

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<Term> terms_;
};

struct MultiIndexHash {
  std::size_t operator()(const MultiIndex& m) const noexcept;
};

MultiIndex abs_diff(const MultiIndex& a, const MultiIndex& b);
MultiIndex lcm(const MultiIndex& a, const MultiIndex& b);
bool leq(const MultiIndex& a, const MultiIndex& b);
std::vector<Index> support(const MultiIndex& a);
bool is_square_free(const MultiIndex& a);
// Square-free indicator of the support.
MultiIndex support_indicator(const MultiIndex& a);

// n = p^beta. Throws DomainError for n == 0.
MultiIndex from_integer(std::uint64_t n);
MultiIndex from_integer(std::uint64_t n, PrimeTable& primes);
// Throws RangeError when an index is beyond the prime table or the product overflows 64 bits.
std::uint64_t to_integer(const MultiIndex& a);
std::uint64_t to_integer(const MultiIndex& a, PrimeTable& primes);

}  // namespace gcdsum
