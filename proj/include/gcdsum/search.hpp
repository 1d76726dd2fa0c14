#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gcdsum/gcd_sum.hpp"
#include "gcdsum/weights.hpp"

namespace gcdsum {

inline constexpr unsigned kMaxExhaustiveIndex = 6;
inline constexpr unsigned kMaxCubeOrder = 20;
inline constexpr double kTieTolerance = 1e-12;

struct SearchReport {
  std::size_t n = 0;
  Index max_index = 0;
  double best = 0.0;   // S*
  double gamma = 0.0;  // S* / N
  std::vector<IndexSet> maximizers;
  std::uint64_t candidates = 0;
  double elapsed_ms = 0.0;
  bool heuristic = false;
  std::string weights;
  std::uint64_t seed = 0;
  std::uint64_t iterations = 0;
};

// Visits every downset of cardinality n of the boolean lattice on indices
// {1..m}, each exactly once. Members are passed as bit masks (bit b stands
// for e_{b+1}) in increasing numeric order. The visiting order is that of a
// depth-first include/exclude decision over masks 0, 1, ..., 2^m - 1.
// Throws RangeError for m > 6 and DomainError unless 1 <= n <= 2^m.
std::uint64_t for_each_downset_mask(unsigned m, std::size_t n,
                                    const std::function<void(std::span<const std::uint32_t>)>& visit);

std::uint64_t for_each_downset(unsigned m, std::size_t n, const std::function<void(const IndexSet&)>& visit);
std::vector<IndexSet> enumerate_downsets(unsigned m, std::size_t n);

IndexSet mask_set(std::span<const std::uint64_t> masks);

// Exhaustive maximisation of S(t,B) over downsets; ties within 1e-12 relative are all reported.
SearchReport extremal_sf(const WeightSequence& t, std::size_t n, unsigned m);

// Simulated-annealing search over downsets (swap a maximal member for a
// minimal non-member) interleaved with completeness normalisation. The
// result carries no optimality claim. iterations == 0 returns the seeded
// starting downset.
SearchReport local_search(const WeightSequence& t, std::size_t n, unsigned m, std::uint64_t seed,
                          std::uint64_t iterations);

// All 2^k square-free multi-indices on {1..k}.
IndexSet cube_construction(unsigned k);

}  // namespace gcdsum
