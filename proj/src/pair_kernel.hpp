#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "gcdsum/compensated.hpp"
#include "gcdsum/gcd_sum.hpp"

namespace gcdsum::detail {

// Fast evaluation of t^{|beta_k - beta_l|} for all pairs of one set.
//
// Indices are first renumbered densely over the union of supports. When the
// set is square-free and that union has at most 64 indices, every member
// becomes a bit mask and a pair term is a product of byte-table lookups on
// the XOR of two masks. Otherwise members are kept as sparse (compact index,
// exponent) lists and terms come from per-index power tables.
class PairKernel {
 public:
  PairKernel(const WeightSequence& t, const IndexSet& b);

  std::size_t size() const noexcept { return n_; }
  double term(std::size_t k, std::size_t l) const;
  // sum_{l > k} term(k, l)
  double upper_row_sum(std::size_t k) const;
  // sum_l term(k, l) x_l
  double row_dot(std::size_t k, std::span<const double> x) const;
  double row_sum(std::size_t k) const;

 private:
  template <unsigned Chunks>
  double mask_term(std::uint64_t x) const noexcept {
    double r = tables_[0][x & 0xff];
    for (unsigned c = 1; c < Chunks; ++c) r *= tables_[c][(x >> (8 * c)) & 0xff];
    return r;
  }

  template <typename F>
  double dispatch(F&& f) const;

  double general_term(std::size_t k, std::size_t l) const;

  std::size_t n_ = 0;
  bool bitmask_ = false;
  unsigned chunks_ = 1;
  std::vector<std::uint64_t> masks_;
  std::vector<std::array<double, 256>> tables_;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> sparse_;
  std::vector<std::vector<double>> powers_;
};

// Sums f(l) for l in [lo, hi): plain sums over blocks of 256 with four
// independent accumulators, blocks combined with compensation.
template <typename F>
double blocked_sum(std::size_t lo, std::size_t hi, F&& f) {
  constexpr std::size_t kBlock = 256;
  CompensatedSum total;
  for (std::size_t start = lo; start < hi; start += kBlock) {
    const std::size_t stop = std::min(hi, start + kBlock);
    double a0 = 0, a1 = 0, a2 = 0, a3 = 0;
    std::size_t l = start;
    for (; l + 4 <= stop; l += 4) {
      a0 += f(l);
      a1 += f(l + 1);
      a2 += f(l + 2);
      a3 += f(l + 3);
    }
    for (; l < stop; ++l) a0 += f(l);
    total.add((a0 + a1) + (a2 + a3));
  }
  return total.value();
}

}  // namespace gcdsum::detail
