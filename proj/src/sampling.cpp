#include "gcdsum/sampling.hpp"

#include <algorithm>
#include <set>

#include "gcdsum/errors.hpp"

namespace gcdsum {

namespace {

std::size_t pick_size(std::mt19937_64& rng, std::size_t max_n, double capacity) {
  const auto cap = static_cast<std::size_t>(std::min(capacity, static_cast<double>(max_n)));
  if (cap == 0) throw DomainError("random set needs room for at least one member");
  return std::uniform_int_distribution<std::size_t>(1, cap)(rng);
}

}  // namespace

IndexSet random_square_free_set(std::mt19937_64& rng, std::size_t max_n, Index max_index) {
  if (max_index == 0 || max_index > 63) throw DomainError("random_square_free_set needs 1 <= max_index <= 63");
  const std::size_t n = pick_size(rng, max_n, std::ldexp(1.0, static_cast<int>(max_index)));
  std::uniform_int_distribution<std::uint64_t> mask_dist(0, (std::uint64_t{1} << max_index) - 1);
  std::set<std::uint64_t> masks;
  while (masks.size() < n) masks.insert(mask_dist(rng));
  std::vector<MultiIndex> members;
  for (std::uint64_t x : masks) {
    std::vector<Term> terms;
    for (Index b = 0; b < max_index; ++b) {
      if ((x >> b) & 1u) terms.push_back({b + 1, 1});
    }
    members.emplace_back(std::move(terms));
  }
  return IndexSet(std::move(members));
}

IndexSet random_set(std::mt19937_64& rng, std::size_t max_n, Index max_index, Exponent max_exponent) {
  if (max_index == 0) throw DomainError("random_set needs max_index >= 1");
  const double capacity = std::pow(static_cast<double>(max_exponent) + 1.0, static_cast<double>(max_index));
  const std::size_t n = pick_size(rng, max_n, capacity);
  std::uniform_int_distribution<Exponent> exp_dist(0, max_exponent);
  std::set<MultiIndex> members;
  while (members.size() < n) {
    std::vector<Term> terms;
    for (Index j = 1; j <= max_index; ++j) {
      const Exponent e = exp_dist(rng);
      if (e) terms.push_back({j, e});
    }
    members.emplace(std::move(terms));
  }
  return IndexSet(std::vector<MultiIndex>(members.begin(), members.end()));
}

std::vector<std::uint64_t> random_integer_set(std::mt19937_64& rng, std::size_t max_n, std::uint64_t max_value) {
  const std::size_t n = pick_size(rng, max_n, static_cast<double>(max_value));
  std::uniform_int_distribution<std::uint64_t> dist(1, max_value);
  std::set<std::uint64_t> out;
  while (out.size() < n) out.insert(dist(rng));
  return {out.begin(), out.end()};
}

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace gcdsum
