#include <doctest.h>

#include <cmath>
#include <random>

#include "gcdsum/errors.hpp"
#include "gcdsum/gcd_sum.hpp"
#include "gcdsum/sampling.hpp"
#include "gcdsum/search.hpp"

using namespace gcdsum;
using doctest::Approx;

namespace {
const MultiIndex zero;
const MultiIndex e1 = MultiIndex::basis(1);
const MultiIndex e2 = MultiIndex::basis(2);
const WeightSequence half = WeightSequence::prime_power(0.5);
const double t1 = 0.7071067811865475244;
}  // namespace

TEST_CASE("index sets") {
  const IndexSet b{e2, zero, e1};
  CHECK(b[0] == zero);
  CHECK(b[1] == e1);
  CHECK(b[2] == e2);
  CHECK(b.contains(e1));
  CHECK_FALSE(b.contains(e1 + e2));
  CHECK(b.is_square_free());
  CHECK(b.max_index() == 2);
  CHECK_THROWS_AS((IndexSet{e1, e1}), DomainError);
  const std::uint64_t ns[] = {1, 2, 3};
  CHECK(IndexSet::from_integers(ns) == b);
}

TEST_CASE("gcd sums on small sets") {
  CHECK(gcd_sum(half, IndexSet{zero}) == 1.0);
  CHECK(gcd_sum(half, IndexSet{zero, e1}) == Approx(2.0 + std::sqrt(2.0)).epsilon(1e-15));
  CHECK(gcd_sum(half, IndexSet{zero, e1, e2}) == Approx(6.3854106816800726106).epsilon(1e-15));
  PrecisionGuard guard(40);
  const ExtendedReal x = gcd_sum_extended(half, IndexSet{zero, e1, e2});
  CHECK(abs(x - ExtendedReal("6.3854106816800726106")) < ExtendedReal("1e-18"));
}

TEST_CASE("integer form") {
  const std::uint64_t one[] = {1};
  CHECK(gcd_sum_integers(one, 0.3) == 1.0);
  const std::uint64_t two_six[] = {2, 6};
  CHECK(gcd_sum_integers(two_six, 0.5) == Approx(2.0 + 2.0 / std::sqrt(3.0)).epsilon(1e-15));
  const std::uint64_t ns[] = {4, 6, 9, 10, 12, 15, 30, 77, 1001};
  CHECK(gcd_sum_integers(ns, 0.7) == Approx(19.487269038035542896).epsilon(1e-14));
  CHECK(gcd_sum(WeightSequence::prime_power(0.7), IndexSet::from_integers(ns)) ==
        Approx(19.487269038035542896).epsilon(1e-14));
  const std::uint64_t with_zero[] = {0, 3};
  CHECK_THROWS_AS(gcd_sum_integers(with_zero, 0.5), DomainError);
  const std::uint64_t dup[] = {3, 3};
  CHECK_THROWS_AS(gcd_sum_integers(dup, 0.5), DomainError);
}

TEST_CASE("results do not depend on the worker count") {
  auto rng = substream(1, 2);
  for (int s = 0; s < 20; ++s) {
    const IndexSet b = random_set(rng, 300, 10, 2);
    const double one = gcd_sum(half, b, {1});
    CHECK(gcd_sum(half, b, {2}) == one);
    CHECK(gcd_sum(half, b, {7}) == one);
  }
  const IndexSet cube = cube_construction(11);
  CHECK(gcd_sum(half, cube, {1}) == gcd_sum(half, cube, {4}));
}

TEST_CASE("lcm closure and the sum bound") {
  CHECK(lcm_closure(IndexSet{zero}) == IndexSet{zero});
  CHECK(lcm_closure(IndexSet{e1, e2}) == (IndexSet{e1, e2, e1 + e2}));
  CHECK(lcm_closure(IndexSet{zero, e1, e2}) == (IndexSet{zero, e1, e2, e1 + e2}));
  const LemmaSumBound single = lemma_sum_bound(half, IndexSet{zero});
  CHECK(single.rhs == 1.0);
  CHECK(single.holds);
  const LemmaSumBound two = lemma_sum_bound(half, IndexSet{zero, e1});
  CHECK(two.rhs == Approx(1.0 + (1.0 + t1) * (1.0 + t1)).epsilon(1e-15));
  CHECK(two.lhs == Approx(2.0 + std::sqrt(2.0)));
  CHECK(two.holds);
  // On the cube the closure is the cube itself and the bound factorises.
  CHECK(lemma_sum_bound(half, cube_construction(5)).rhs == Approx(329.91969474702003705).epsilon(1e-13));
  CHECK(lemma_sum_bound(WeightSequence::prime_power(1.0), cube_construction(6)).rhs ==
        Approx(240.28115643375383635).epsilon(1e-13));
}

TEST_CASE("gcd matrices") {
  const GcdMatrix one = gcd_matrix(half, IndexSet{zero});
  CHECK(one.order() == 1);
  CHECK(one(0, 0) == 1.0);
  const GcdMatrix m = gcd_matrix(half, IndexSet{zero, e1});
  CHECK(m(0, 1) == Approx(t1).epsilon(1e-15));
  CHECK(m(1, 0) == m(0, 1));
  const GcdMatrix c = gcd_matrix(half, cube_construction(2));
  const double t2 = half.at(2);
  // Members in canonical order: zero, e1, e1+e2, e2.
  CHECK(c(0, 2) == Approx(t1 * t2));
  CHECK(c(1, 3) == Approx(t1 * t2));
  CHECK(c(0, 3) == Approx(t2));
  CHECK(c(1, 2) == Approx(t2));
  CHECK(c.max_row_sum() == Approx((1 + t1) * (1 + t2)));
  CHECK_THROWS_AS(GcdMatrix::from_dense(2, {1.0, 0.5, 0.4, 1.0}), DomainError);
}

TEST_CASE("extreme eigenvalues") {
  const double a = t1;
  const GcdMatrix two = GcdMatrix::from_dense(2, {1.0, a, a, 1.0});
  CHECK(spectral_norm(two) == Approx(1.0 + a).epsilon(1e-12));
  CHECK(min_eigenvalue(two) == Approx(1.0 - a).epsilon(1e-12));
  CHECK(spectral_norm(GcdMatrix::from_dense(1, {1.0})) == 1.0);
  CHECK(min_eigenvalue(GcdMatrix::from_dense(1, {1.0})) == 1.0);
  CHECK(spectral_norm(gcd_matrix(half, cube_construction(2))) == Approx(2.6927053408400363053).epsilon(1e-12));
  const GcdMatrix three = gcd_matrix(half, IndexSet{zero, e1, e2});
  CHECK(spectral_norm(three) == Approx(2.1371580426032576128).epsilon(1e-11));
  CHECK(min_eigenvalue(three) == Approx(0.25777280103144084473).epsilon(1e-12));
  CHECK(min_eigenvalue_shifted(three) == Approx(0.25777280103144084473).epsilon(1e-8));

  auto rng = substream(3, 4);
  for (int s = 0; s < 10; ++s) {
    const GcdMatrix m = gcd_matrix(half, random_set(rng, 60, 6, 2));
    CHECK(min_eigenvalue_shifted(m) == Approx(min_eigenvalue_dense(m)).epsilon(1e-7));
  }
}

TEST_CASE("power iteration reports non-convergence") {
  auto rng = substream(3, 5);
  const GcdMatrix m = gcd_matrix(half, random_set(rng, 80, 8, 2));
  try {
    power_iteration(m, 1e-16, 2);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.iterations() == 2);
    CHECK(e.last_iterate().size() == m.order());
    CHECK(e.last_estimate() > 1.0);
  }
}

TEST_CASE("matrix-free storage above the dense limit") {
  const IndexSet cube = cube_construction(13);
  const GcdMatrix m = gcd_matrix(half, cube);
  CHECK_FALSE(m.is_dense());
  double expected = 1.0;
  for (Index j = 1; j <= 13; ++j) expected *= 1.0 + half.at(j);
  CHECK(spectral_norm(m) == Approx(expected).epsilon(1e-10));
  CHECK(m.max_row_sum() == Approx(expected).epsilon(1e-12));
  CHECK(gcd_matrix(half, cube_construction(12)).is_dense());
}

TEST_CASE("support grouping") {
  const IndexSet same{e1, e1 * 2, e1 * 3};
  const auto blocks = group_by_support(same);
  REQUIRE(blocks.size() == 1);
  CHECK(blocks[0].representative == e1);
  CHECK(blocks[0].block.size() == 3);
  const auto mixed = group_by_support(IndexSet{zero, e1, e1 * 2, e2});
  REQUIRE(mixed.size() == 3);
  CHECK(mixed[0].block == IndexSet{zero});
  CHECK(mixed[1].block == (IndexSet{e1, e1 * 2}));
  CHECK(mixed[2].block == IndexSet{e2});
  for (const auto& blk : group_by_support(cube_construction(4))) CHECK(blk.block.size() == 1);
}

TEST_CASE("weighted square-free form") {
  const std::size_t m5[] = {5};
  CHECK(weighted_sf_form(half, IndexSet{zero}, m5) == Approx(5.0));
  const std::size_t ones[] = {1, 1};
  CHECK(weighted_sf_form(half, IndexSet{zero, e1}, ones) == Approx(gcd_sum(half, IndexSet{zero, e1})));
  const std::size_t sizes[] = {4, 1};
  CHECK(weighted_sf_form(half, IndexSet{zero, e1}, sizes) == Approx(5.0 + 4.0 * t1).epsilon(1e-15));
  const std::size_t wrong[] = {1};
  CHECK_THROWS_AS(weighted_sf_form(half, IndexSet{zero, e1}, wrong), DomainError);
}

TEST_CASE("cube closed form") {
  CHECK(cube_sum_closed_form(half, 1) == Approx(3.4142135623730950488).epsilon(1e-15));
  CHECK(cube_sum_closed_form(half, 2) == Approx(10.770821363360145221).epsilon(1e-15));
  CHECK(cube_sum_closed_form(half, 3) == Approx(31.175358223512389397).epsilon(1e-15));
  CHECK(cube_sum_closed_form(half, 16) == Approx(3054664.6565944447182).epsilon(1e-14));
  CHECK(cube_sum_closed_form(WeightSequence::prime_power(40.0), 6) == Approx(64.0));
  for (unsigned k = 1; k <= 10; ++k) {
    CHECK(gcd_sum(half, cube_construction(k)) == Approx(cube_sum_closed_form(half, k)).epsilon(1e-12));
  }
}

TEST_CASE("diagnostic ratios") {
  auto rng = substream(9, 9);
  const IndexSet b = random_set(rng, 30, 4, 3);
  CHECK(grouping_ratio(half, b) > 0.0);
  CHECK(lambda_gamma_ratio(half, b) > 0.0);
  CHECK(grouping_ratio(half, cube_construction(3)) == Approx(1.0));
}
