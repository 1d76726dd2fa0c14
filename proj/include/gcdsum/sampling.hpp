#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "gcdsum/gcd_sum.hpp"

namespace gcdsum {

// Uniform size in [1, max_n], distinct square-free members on indices 1..max_index.
IndexSet random_square_free_set(std::mt19937_64& rng, std::size_t max_n, Index max_index);

// Uniform size in [1, max_n], distinct members on indices 1..max_index with exponents 0..max_exponent.
IndexSet random_set(std::mt19937_64& rng, std::size_t max_n, Index max_index, Exponent max_exponent);

// Uniform size in [1, max_n], distinct integers in [1, max_value].
std::vector<std::uint64_t> random_integer_set(std::mt19937_64& rng, std::size_t max_n, std::uint64_t max_value);

// Independent stream for a named sub-task of a seeded run.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t tag);

}  // namespace gcdsum
