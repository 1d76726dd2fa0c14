#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "gcdsum/errors.hpp"
#include "gcdsum/sampling.hpp"
#include "gcdsum/search.hpp"
#include "gcdsum/transforms.hpp"

using namespace gcdsum;
using doctest::Approx;

namespace {
const MultiIndex zero;
const MultiIndex e1 = MultiIndex::basis(1);
const MultiIndex e2 = MultiIndex::basis(2);
const WeightSequence half = WeightSequence::prime_power(0.5);
}  // namespace

TEST_CASE("downset enumeration") {
  CHECK(enumerate_downsets(2, 3) == std::vector<IndexSet>{IndexSet{zero, e1, e2}});
  const auto two = enumerate_downsets(2, 2);
  REQUIRE(two.size() == 2);
  CHECK(std::find(two.begin(), two.end(), IndexSet{zero, e1}) != two.end());
  CHECK(std::find(two.begin(), two.end(), IndexSet{zero, e2}) != two.end());
  for (unsigned m = 0; m <= 6; ++m) CHECK(enumerate_downsets(m, 1) == std::vector<IndexSet>{IndexSet{zero}});

  // Brute-force counts per size.
  const std::vector<std::vector<std::size_t>> counts = {
      {1, 1},
      {1, 2, 1, 1},
      {1, 3, 3, 4, 3, 3, 1, 1},
      {1, 4, 6, 10, 13, 18, 19, 24, 19, 18, 13, 10, 6, 4, 1, 1},
  };
  for (unsigned m = 1; m <= 4; ++m) {
    for (std::size_t n = 1; n <= counts[m - 1].size(); ++n) {
      CHECK(for_each_downset(m, n, [](const IndexSet&) {}) == counts[m - 1][n - 1]);
    }
  }
  // All nonempty downsets of the 5-cube: the Dedekind number 7581 less the empty family.
  std::uint64_t total = 0;
  for (std::size_t n = 1; n <= 32; ++n) {
    total += for_each_downset(5, n, [](const IndexSet& b) { CHECK(is_divisor_closed(b)); });
  }
  CHECK(total == 7580);

  CHECK_THROWS_AS(enumerate_downsets(7, 3), RangeError);
  CHECK_THROWS_AS(enumerate_downsets(3, 9), DomainError);
  CHECK_THROWS_AS(enumerate_downsets(3, 0), DomainError);
}

TEST_CASE("downsets are visited once each") {
  std::set<IndexSet, bool (*)(const IndexSet&, const IndexSet&)> seen(
      [](const IndexSet& a, const IndexSet& b) { return a.members() < b.members(); });
  const std::uint64_t count = for_each_downset(5, 12, [&](const IndexSet& b) { CHECK(seen.insert(b).second); });
  CHECK(count == seen.size());
}

TEST_CASE("exhaustive extremal search") {
  const SearchReport two = extremal_sf(half, 2, 3);
  CHECK(two.gamma == Approx(1.0 + 1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(two.maximizers == std::vector<IndexSet>{IndexSet{zero, e1}});
  CHECK(two.candidates == 3);
  CHECK_FALSE(two.heuristic);

  const SearchReport three = extremal_sf(half, 3, 3);
  CHECK(three.gamma == Approx(6.3854106816800726106 / 3).epsilon(1e-15));
  CHECK(three.maximizers == std::vector<IndexSet>{IndexSet{zero, e1, e2}});

  const SearchReport four = extremal_sf(half, 4, 4);
  CHECK(four.best == Approx(10.770821363360145221).epsilon(1e-15));
  CHECK(four.maximizers == std::vector<IndexSet>{cube_construction(2)});
  CHECK(four.candidates == 10);

  CHECK(extremal_sf(half, 6, 3).best == Approx(19.001892674129289747).epsilon(1e-15));
  CHECK(extremal_sf(WeightSequence::prime_power(0.8), 7, 4).best == Approx(18.057516402759475843).epsilon(1e-15));
  const SearchReport nine = extremal_sf(WeightSequence::prime_power(1.0), 9, 5);
  CHECK(nine.best == Approx(20.885714285714285714).epsilon(1e-15));
  CHECK(nine.candidates == 215);
  CHECK_THROWS_AS(extremal_sf(half, 3, 7), RangeError);
}

TEST_CASE("ties are all reported") {
  // Equal weights make e1 and e2 interchangeable.
  const auto flat = WeightSequence::explicit_list({0.5, 0.5 - 1e-16, 0.2}, TailRule::geometric(0.5));
  const SearchReport r = extremal_sf(flat, 2, 2);
  CHECK(r.maximizers.size() == 2);
}

TEST_CASE("extremal value dominates closed random sets") {
  auto rng = substream(31, 0);
  for (int s = 0; s < 100; ++s) {
    const IndexSet b = random_square_free_set(rng, 10, 4);
    const IndexSet closed = gal_divisor_closure(half, b).set;
    const Index m = std::max<Index>(closed.max_index(), 1);
    CHECK(extremal_sf(half, b.size(), std::max<Index>(m, 4)).best >= gcd_sum(half, closed) * (1 - 1e-12));
  }
}

TEST_CASE("heuristic search") {
  const SearchReport one = local_search(half, 1, 4, 0, 50);
  CHECK(one.maximizers == std::vector<IndexSet>{IndexSet{zero}});
  CHECK(one.best == 1.0);
  CHECK(one.heuristic);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SearchReport r = local_search(half, 4, 4, seed, 200);
    CHECK(r.best >= 10.770821363360145221 * (1 - 1e-12));
    CHECK(r.best <= 10.770821363360145221 * (1 + 1e-12));
  }

  const SearchReport a = local_search(half, 9, 6, 17, 0);
  const SearchReport b = local_search(half, 9, 6, 17, 0);
  CHECK(a.maximizers == b.maximizers);
  CHECK(a.iterations == 0);
  CHECK(is_divisor_closed(a.maximizers[0]));
  CHECK(a.best == Approx(gcd_sum(half, a.maximizers[0])));

  for (std::size_t n : {5u, 8u, 11u}) {
    const double exact = extremal_sf(half, n, 5).best;
    const SearchReport h = local_search(half, n, 5, n, 300);
    CHECK(h.best <= exact * (1 + 1e-12));
    CHECK(is_divisor_closed(h.maximizers[0]));
    CHECK(h.best == Approx(gcd_sum(half, h.maximizers[0])).epsilon(1e-12));
  }
  const SearchReport big = local_search(half, 40, 24, 1, 300);
  CHECK(big.maximizers[0].size() == 40);
  CHECK_THROWS_AS(local_search(half, 17, 4, 0, 1), DomainError);
}

TEST_CASE("cube construction") {
  CHECK(cube_construction(1) == (IndexSet{zero, e1}));
  CHECK(cube_construction(2) == (IndexSet{zero, e1, e2, e1 + e2}));
  CHECK(cube_construction(3).size() == 8);
  CHECK(is_complete(cube_construction(3)));
  CHECK(cube_construction(20).size() == (std::size_t{1} << 20));
  CHECK_THROWS_AS(cube_construction(21), RangeError);
  CHECK_THROWS_AS(cube_construction(0), DomainError);
}
