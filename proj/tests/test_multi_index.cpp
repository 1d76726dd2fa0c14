#include <doctest.h>

#include <random>

#include "gcdsum/errors.hpp"
#include "gcdsum/multi_index.hpp"

using namespace gcdsum;

namespace {
const MultiIndex zero;
const MultiIndex e1 = MultiIndex::basis(1);
const MultiIndex e2 = MultiIndex::basis(2);
const MultiIndex e3 = MultiIndex::basis(3);

MultiIndex random_mi(std::mt19937_64& rng) {
  std::uniform_int_distribution<Exponent> e(0, 3);
  std::vector<Term> terms;
  for (Index j = 1; j <= 6; ++j) terms.push_back({j, e(rng)});
  return MultiIndex(std::move(terms));
}
}  // namespace

TEST_CASE("construction and canonical form") {
  CHECK(MultiIndex({{3, 1}, {1, 2}, {2, 0}}) == MultiIndex::dense({2, 0, 1}));
  CHECK(MultiIndex::dense({0, 0, 0}).is_zero());
  CHECK_THROWS_AS(MultiIndex({{0, 1}}), DomainError);
  CHECK_THROWS_AS(MultiIndex({{2, 1}, {2, 3}}), DomainError);
  CHECK_THROWS_AS(MultiIndex({{2, 0}, {2, 3}}), DomainError);
  const MultiIndex m = MultiIndex::dense({2, 0, 1});
  CHECK(m[1] == 2);
  CHECK(m[2] == 0);
  CHECK(m[9] == 0);
  CHECK(m.max_index() == 3);
  CHECK(m.weighted_degree() == 5);
  CHECK(zero < e1);
  // Lexicographic on the term list: a proper prefix comes first.
  CHECK(e1 < e1 + e2);
  CHECK(e1 + e2 < e2);
}

TEST_CASE("abs_diff") {
  const MultiIndex b = MultiIndex::dense({1, 2, 0, 4});
  CHECK(abs_diff(b, b).is_zero());
  CHECK(abs_diff(e1, e1 + e2) == e2);
  CHECK(abs_diff(MultiIndex::dense({2, 1}), MultiIndex::dense({0, 3})) == MultiIndex::dense({2, 2}));
}

TEST_CASE("lcm and order") {
  const MultiIndex b = MultiIndex::dense({1, 2, 0, 4});
  CHECK(lcm(b, b) == b);
  CHECK(lcm(e1, e2) == e1 + e2);
  CHECK(lcm(MultiIndex::dense({2, 0, 1}), MultiIndex::dense({1, 3, 0})) == MultiIndex::dense({2, 3, 1}));
  CHECK(leq(zero, b));
  CHECK(leq(e1, e1 + e2));
  CHECK_FALSE(leq(e1, e2));
}

TEST_CASE("support and square-freeness") {
  CHECK(support(zero).empty());
  CHECK(support(e3) == std::vector<Index>{3});
  CHECK(support(MultiIndex::dense({2, 0, 1})) == std::vector<Index>{1, 3});
  CHECK(is_square_free(zero));
  CHECK(is_square_free(e1 + e2));
  CHECK_FALSE(is_square_free(MultiIndex::dense({2, 1})));
  CHECK(support_indicator(MultiIndex::dense({3, 0, 2})) == e1 + e3);
}

TEST_CASE("arithmetic") {
  CHECK(e1 * 3 == MultiIndex::dense({3}));
  CHECK((e1 + e2) - e1 == e2);
  CHECK_THROWS_AS(e1 - e2, DomainError);
  CHECK(e1.with_exponent(4, 2) == MultiIndex::dense({1, 0, 0, 2}));
  CHECK((e1 + e2).with_exponent(1, 0) == e2);
}

TEST_CASE("integer correspondence") {
  CHECK(from_integer(1).is_zero());
  CHECK(from_integer(12) == MultiIndex::dense({2, 1}));
  CHECK(to_integer(e1 + e3) == 10);
  CHECK(to_integer(zero) == 1);
  CHECK_THROWS_AS(from_integer(0), DomainError);
  CHECK_THROWS_AS(to_integer(e1 * 64), RangeError);
  CHECK(to_integer(e1 * 63) == (std::uint64_t{1} << 63));
  CHECK_THROWS_AS(to_integer(MultiIndex::basis(4000000000u)), RangeError);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::uint64_t> d(1, 1000000000);
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t n = d(rng);
    CHECK(to_integer(from_integer(n)) == n);
  }
}

TEST_CASE("text form") {
  CHECK(zero.to_string() == "mi");
  CHECK(MultiIndex::dense({2, 0, 1}).to_string() == "mi 1:2 3:1");
  CHECK(MultiIndex::parse("mi 1:2 3:1") == MultiIndex::dense({2, 0, 1}));
  CHECK(MultiIndex::parse("mi") == zero);
  CHECK_THROWS(MultiIndex::parse("mi 3:1 1:2"));
  CHECK_THROWS(MultiIndex::parse("mi 1:0"));
  CHECK_THROWS(MultiIndex::parse("mi 0:1"));
  CHECK_THROWS(MultiIndex::parse("mx 1:1"));
  CHECK_THROWS(MultiIndex::parse("mi 1:x"));
  CHECK_THROWS_AS(MultiIndex::parse("mi 1:99999999999"), RangeError);
}

TEST_CASE("algebraic laws on random multi-indices") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    const MultiIndex a = random_mi(rng), b = random_mi(rng), c = random_mi(rng);
    CHECK(abs_diff(a, b) == abs_diff(b, a));
    if (leq(a, b)) CHECK(abs_diff(a, b) == b - a);
    CHECK(lcm(a, lcm(b, c)) == lcm(lcm(a, b), c));
    CHECK(lcm(a, b) == lcm(b, a));
    CHECK(leq(a, lcm(a, b)));
    CHECK(MultiIndex::parse(a.to_string()) == a);
    CHECK(MultiIndexHash{}(a) == MultiIndexHash{}(MultiIndex(std::vector<Term>(a.terms().begin(), a.terms().end()))));
  }
}
