#include "gcdsum/multi_index.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "gcdsum/errors.hpp"
#include "gcdsum/primes.hpp"

namespace gcdsum {

MultiIndex::MultiIndex(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end());
  Index last = 0;
  for (const Term& t : terms) {
    if (t.index == 0) throw DomainError("multi-index indices are 1-based");
    if (t.index == last) {
      throw DomainError("repeated index " + std::to_string(t.index) + " in multi-index");
    }
    last = t.index;
    if (t.exponent > 0) terms_.push_back(t);
  }
}

MultiIndex MultiIndex::dense(std::initializer_list<Exponent> exponents) {
  return dense(std::span<const Exponent>(exponents.begin(), exponents.size()));
}

MultiIndex MultiIndex::dense(std::span<const Exponent> exponents) {
  MultiIndex m;
  for (std::size_t k = 0; k < exponents.size(); ++k) {
    if (exponents[k] > 0) m.terms_.push_back({static_cast<Index>(k + 1), exponents[k]});
  }
  return m;
}

MultiIndex MultiIndex::basis(Index j, Exponent e) {
  if (j == 0) throw DomainError("multi-index indices are 1-based");
  MultiIndex m;
  if (e > 0) m.terms_.push_back({j, e});
  return m;
}

Exponent MultiIndex::operator[](Index j) const noexcept {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), j,
                             [](const Term& t, Index v) { return t.index < v; });
  return (it != terms_.end() && it->index == j) ? it->exponent : 0;
}

std::uint64_t MultiIndex::weighted_degree() const noexcept {
  std::uint64_t d = 0;
  for (const Term& t : terms_) d += std::uint64_t{t.index} * t.exponent;
  return d;
}

namespace {

// Walks the union of two supports, calling f(index, exp_a, exp_b).
template <typename F>
void merge_walk(const MultiIndex& a, const MultiIndex& b, F&& f) {
  auto ta = a.terms();
  auto tb = b.terms();
  std::size_t i = 0, k = 0;
  while (i < ta.size() || k < tb.size()) {
    if (k == tb.size() || (i < ta.size() && ta[i].index < tb[k].index)) {
      f(ta[i].index, ta[i].exponent, Exponent{0});
      ++i;
    } else if (i == ta.size() || tb[k].index < ta[i].index) {
      f(tb[k].index, Exponent{0}, tb[k].exponent);
      ++k;
    } else {
      f(ta[i].index, ta[i].exponent, tb[k].exponent);
      ++i;
      ++k;
    }
  }
}

}  // namespace

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  std::vector<Term> out;
  merge_walk(*this, other, [&](Index j, Exponent x, Exponent y) { out.push_back({j, x + y}); });
  MultiIndex m;
  m.terms_ = std::move(out);
  return m;
}

MultiIndex MultiIndex::operator-(const MultiIndex& other) const {
  std::vector<Term> out;
  merge_walk(*this, other, [&](Index j, Exponent x, Exponent y) {
    if (y > x) throw DomainError("multi-index subtraction requires other <= this");
    if (x > y) out.push_back({j, x - y});
  });
  MultiIndex m;
  m.terms_ = std::move(out);
  return m;
}

MultiIndex MultiIndex::operator*(Exponent k) const {
  if (k == 0) return {};
  MultiIndex m = *this;
  for (Term& t : m.terms_) t.exponent *= k;
  return m;
}

MultiIndex MultiIndex::with_exponent(Index j, Exponent e) const {
  if (j == 0) throw DomainError("multi-index indices are 1-based");
  MultiIndex m = *this;
  auto it = std::lower_bound(m.terms_.begin(), m.terms_.end(), j,
                             [](const Term& t, Index v) { return t.index < v; });
  if (it != m.terms_.end() && it->index == j) {
    if (e == 0) {
      m.terms_.erase(it);
    } else {
      it->exponent = e;
    }
  } else if (e > 0) {
    m.terms_.insert(it, Term{j, e});
  }
  return m;
}

std::string MultiIndex::to_string() const {
  std::string s = "mi";
  for (const Term& t : terms_) {
    s += ' ';
    s += std::to_string(t.index);
    s += ':';
    s += std::to_string(t.exponent);
  }
  return s;
}

MultiIndex MultiIndex::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string word;
  if (!(in >> word) || word != "mi") throw DomainError("multi-index text must start with 'mi'");
  MultiIndex m;
  while (in >> word) {
    const auto colon = word.find(':');
    if (colon == std::string::npos) throw DomainError("expected j:e, got '" + word + "'");
    std::uint64_t j = 0, e = 0;
    const char* b = word.data();
    auto r1 = std::from_chars(b, b + colon, j);
    auto r2 = std::from_chars(b + colon + 1, b + word.size(), e);
    if (r1.ec != std::errc{} || r1.ptr != b + colon || r2.ec != std::errc{} ||
        r2.ptr != b + word.size()) {
      throw DomainError("malformed term '" + word + "'");
    }
    if (j == 0) throw DomainError("multi-index indices are 1-based");
    if (j > std::numeric_limits<Index>::max() || e > std::numeric_limits<Exponent>::max()) {
      throw RangeError("term '" + word + "' overflows");
    }
    if (e == 0) throw DomainError("zero exponent in term '" + word + "'");
    if (!m.terms_.empty() && m.terms_.back().index >= j) {
      throw DomainError("indices must be strictly increasing");
    }
    m.terms_.push_back({static_cast<Index>(j), static_cast<Exponent>(e)});
  }
  return m;
}

std::size_t MultiIndexHash::operator()(const MultiIndex& m) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const Term& t : m.terms()) {
    h ^= (std::uint64_t{t.index} << 32) | t.exponent;
    h *= 0x100000001b3ull;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

MultiIndex abs_diff(const MultiIndex& a, const MultiIndex& b) {
  std::vector<Term> out;
  merge_walk(a, b, [&](Index j, Exponent x, Exponent y) {
    if (x != y) out.push_back({j, x > y ? x - y : y - x});
  });
  return MultiIndex(std::move(out));
}

MultiIndex lcm(const MultiIndex& a, const MultiIndex& b) {
  std::vector<Term> out;
  merge_walk(a, b, [&](Index j, Exponent x, Exponent y) { out.push_back({j, std::max(x, y)}); });
  return MultiIndex(std::move(out));
}

bool leq(const MultiIndex& a, const MultiIndex& b) {
  auto tb = b.terms();
  std::size_t k = 0;
  for (const Term& t : a.terms()) {
    while (k < tb.size() && tb[k].index < t.index) ++k;
    if (k == tb.size() || tb[k].index != t.index || tb[k].exponent < t.exponent) return false;
  }
  return true;
}

std::vector<Index> support(const MultiIndex& a) {
  std::vector<Index> s;
  s.reserve(a.support_size());
  for (const Term& t : a.terms()) s.push_back(t.index);
  return s;
}

bool is_square_free(const MultiIndex& a) {
  return std::all_of(a.terms().begin(), a.terms().end(),
                     [](const Term& t) { return t.exponent <= 1; });
}

MultiIndex support_indicator(const MultiIndex& a) {
  std::vector<Term> out;
  for (const Term& t : a.terms()) out.push_back({t.index, 1});
  return MultiIndex(std::move(out));
}

MultiIndex from_integer(std::uint64_t n) { return from_integer(n, prime_table()); }

MultiIndex from_integer(std::uint64_t n, PrimeTable& primes) {
  if (n == 0) throw DomainError("from_integer requires n >= 1");
  std::vector<Term> terms;
  for (auto [p, e] : factor(n)) {
    const std::uint64_t j = primes.index_of(p);
    terms.push_back({static_cast<Index>(j), e});
  }
  return MultiIndex(std::move(terms));
}

std::uint64_t to_integer(const MultiIndex& a) { return to_integer(a, prime_table()); }

std::uint64_t to_integer(const MultiIndex& a, PrimeTable& primes) {
  std::uint64_t n = 1;
  for (const Term& t : a.terms()) {
    const std::uint64_t p = primes.prime(t.index);
    for (Exponent k = 0; k < t.exponent; ++k) {
      if (__builtin_mul_overflow(n, p, &n)) {
        throw RangeError(a.to_string() + " does not fit in 64 bits");
      }
    }
  }
  return n;
}

}  // namespace gcdsum
