#include "gcdsum/search.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <random>
#include <unordered_set>

#include "gcdsum/errors.hpp"
#include "gcdsum/transforms.hpp"

namespace gcdsum {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// t^{x} for a square-free mask x over indices 1..m, via byte tables.
class MaskWeights {
 public:
  MaskWeights(const WeightSequence& t, unsigned m) : chunks_(std::max(1u, (m + 7) / 8)) {
    tables_.resize(chunks_);
    for (unsigned c = 0; c < chunks_; ++c) {
      for (unsigned byte = 0; byte < 256; ++byte) {
        double r = 1.0;
        for (unsigned bit = 0; bit < 8; ++bit) {
          const unsigned idx = 8 * c + bit;
          if (((byte >> bit) & 1u) && idx < m) r *= t.at(idx + 1);
        }
        tables_[c][byte] = r;
      }
    }
  }

  double operator()(std::uint64_t x) const noexcept {
    double r = tables_[0][x & 0xff];
    for (unsigned c = 1; c < chunks_; ++c) r *= tables_[c][(x >> (8 * c)) & 0xff];
    return r;
  }

 private:
  unsigned chunks_;
  std::vector<std::array<double, 256>> tables_;
};

template <typename Masks, typename Weight>
double mask_sum(const Masks& masks, const Weight& w) {
  double off = 0.0;
  for (std::size_t a = 0; a < masks.size(); ++a) {
    for (std::size_t b = a + 1; b < masks.size(); ++b) off += w(masks[a] ^ masks[b]);
  }
  return static_cast<double>(masks.size()) + 2.0 * off;
}

void check_search_args(std::size_t n, unsigned m) {
  if (n == 0) throw DomainError("search requires N >= 1");
  if (m < 64 && n > (std::size_t{1} << m)) {
    throw DomainError("N = " + std::to_string(n) + " exceeds the 2^m members available");
  }
}

}  // namespace

IndexSet mask_set(std::span<const std::uint64_t> masks) {
  std::vector<MultiIndex> members;
  members.reserve(masks.size());
  for (std::uint64_t x : masks) {
    std::vector<Term> terms;
    for (unsigned b = 0; b < 64; ++b) {
      if ((x >> b) & 1u) terms.push_back({b + 1, 1});
    }
    members.emplace_back(std::move(terms));
  }
  return IndexSet(std::move(members));
}

std::uint64_t for_each_downset_mask(unsigned m, std::size_t n,
                                    const std::function<void(std::span<const std::uint32_t>)>& visit) {
  if (m > kMaxExhaustiveIndex) {
    throw RangeError("exhaustive downset enumeration refuses m > " + std::to_string(kMaxExhaustiveIndex));
  }
  check_search_args(n, m);
  const std::uint32_t total = std::uint32_t{1} << m;
  std::vector<char> in(total, 0);
  std::vector<std::uint32_t> chosen;
  chosen.reserve(n);
  std::uint64_t count = 0;

  auto includable = [&](std::uint32_t x) {
    for (std::uint32_t rest = x; rest; rest &= rest - 1) {
      if (!in[x ^ (rest & (~rest + 1))]) return false;
    }
    return true;
  };

  std::function<void(std::uint32_t)> rec = [&](std::uint32_t x) {
    if (chosen.size() == n) {
      ++count;
      visit(chosen);
      return;
    }
    if (x == total || chosen.size() + (total - x) < n) return;
    if (includable(x)) {
      in[x] = 1;
      chosen.push_back(x);
      rec(x + 1);
      chosen.pop_back();
      in[x] = 0;
    }
    rec(x + 1);
  };
  rec(0);
  return count;
}

std::uint64_t for_each_downset(unsigned m, std::size_t n, const std::function<void(const IndexSet&)>& visit) {
  return for_each_downset_mask(m, n, [&](std::span<const std::uint32_t> masks) {
    std::vector<std::uint64_t> wide(masks.begin(), masks.end());
    visit(mask_set(wide));
  });
}

std::vector<IndexSet> enumerate_downsets(unsigned m, std::size_t n) {
  std::vector<IndexSet> out;
  for_each_downset(m, n, [&](const IndexSet& s) { out.push_back(s); });
  return out;
}

SearchReport extremal_sf(const WeightSequence& t, std::size_t n, unsigned m) {
  const auto start = Clock::now();
  if (m > kMaxExhaustiveIndex) {
    throw RangeError("exhaustive search refuses m > " + std::to_string(kMaxExhaustiveIndex));
  }
  check_search_args(n, m);
  std::vector<double> f(std::size_t{1} << m);
  for (std::uint32_t x = 0; x < f.size(); ++x) {
    double r = 1.0;
    for (unsigned b = 0; b < m; ++b) {
      if ((x >> b) & 1u) r *= t.at(b + 1);
    }
    f[x] = r;
  }

  SearchReport report;
  report.n = n;
  report.max_index = m;
  report.weights = t.describe();
  double best = -1.0;
  std::vector<std::pair<double, std::vector<std::uint64_t>>> ties;
  report.candidates = for_each_downset_mask(m, n, [&](std::span<const std::uint32_t> masks) {
    const double s = mask_sum(masks, [&](std::uint32_t x) { return f[x]; });
    if (s > best) {
      best = s;
      std::erase_if(ties, [&](const auto& e) { return e.first < best * (1.0 - kTieTolerance); });
    }
    if (s >= best * (1.0 - kTieTolerance)) ties.emplace_back(s, std::vector<std::uint64_t>(masks.begin(), masks.end()));
  });
  report.best = best;
  report.gamma = best / static_cast<double>(n);
  for (const auto& [s, masks] : ties) report.maximizers.push_back(mask_set(masks));
  std::sort(report.maximizers.begin(), report.maximizers.end(),
            [](const IndexSet& a, const IndexSet& b) { return a.members() < b.members(); });
  report.elapsed_ms = ms_since(start);
  return report;
}

namespace {

class DownsetState {
 public:
  explicit DownsetState(unsigned m) : m_(m) {}

  bool contains(std::uint64_t x) const { return members_.contains(x); }
  std::size_t size() const { return order_.size(); }
  const std::vector<std::uint64_t>& masks() const { return order_; }

  void assign(std::vector<std::uint64_t> masks) {
    order_ = std::move(masks);
    std::sort(order_.begin(), order_.end());
    members_ = {order_.begin(), order_.end()};
  }
  void insert(std::uint64_t x) {
    members_.insert(x);
    order_.insert(std::lower_bound(order_.begin(), order_.end(), x), x);
  }
  void erase(std::uint64_t x) {
    members_.erase(x);
    order_.erase(std::lower_bound(order_.begin(), order_.end(), x));
  }

  // Non-members whose immediate subsets are all members.
  std::vector<std::uint64_t> minimal_non_members() const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t x : order_) {
      for (unsigned b = 0; b < m_; ++b) {
        const std::uint64_t y = x | (std::uint64_t{1} << b);
        if (y == x || contains(y)) continue;
        bool ok = true;
        for (std::uint64_t rest = y; rest && ok; rest &= rest - 1) {
          ok = contains(y ^ (rest & (~rest + 1)));
        }
        if (ok) out.push_back(y);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  // Members with no member immediately above them, excluding the zero mask.
  std::vector<std::uint64_t> maximal_members() const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t x : order_) {
      if (x == 0) continue;
      bool maximal = true;
      for (unsigned b = 0; b < m_ && maximal; ++b) {
        const std::uint64_t y = x | (std::uint64_t{1} << b);
        if (y != x && contains(y)) maximal = false;
      }
      if (maximal) out.push_back(x);
    }
    return out;
  }

 private:
  unsigned m_;
  std::unordered_set<std::uint64_t> members_;
  std::vector<std::uint64_t> order_;
};

std::vector<std::uint64_t> to_masks(const IndexSet& s) {
  std::vector<std::uint64_t> out;
  for (const MultiIndex& mi : s) {
    std::uint64_t x = 0;
    for (const Term& term : mi.terms()) x |= std::uint64_t{1} << (term.index - 1);
    out.push_back(x);
  }
  return out;
}

}  // namespace

SearchReport local_search(const WeightSequence& t, std::size_t n, unsigned m, std::uint64_t seed,
                          std::uint64_t iterations) {
  const auto start = Clock::now();
  if (m == 0 || m > 64) throw RangeError("local search needs 1 <= m <= 64");
  check_search_args(n, m);
  const MaskWeights weight(t, m);
  std::mt19937_64 rng(seed);
  auto pick = [&](const std::vector<std::uint64_t>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
  };

  DownsetState state(m);
  state.insert(0);
  while (state.size() < n) state.insert(pick(state.minimal_non_members()));

  double current = mask_sum(state.masks(), weight);
  std::vector<std::uint64_t> best_masks = state.masks();
  double best = current;
  const double t0 = 0.05 * current / static_cast<double>(n);

  auto normalise = [&] {
    const TransformResult r = normalize_to_complete(t, mask_set(state.masks()));
    state.assign(to_masks(r.set));
    current = mask_sum(state.masks(), weight);
  };

  for (std::uint64_t it = 0; it < iterations && n > 1; ++it) {
    const auto maximal = state.maximal_members();
    const std::uint64_t out = pick(maximal);
    state.erase(out);
    auto candidates = state.minimal_non_members();
    std::erase(candidates, out);
    if (candidates.empty()) {
      state.insert(out);
      continue;
    }
    const std::uint64_t in = pick(candidates);
    state.insert(in);
    const double next = mask_sum(state.masks(), weight);
    const double temperature = t0 * (1.0 - static_cast<double>(it) / static_cast<double>(iterations));
    const bool accept = next >= current ||
                        (temperature > 0.0 &&
                         std::uniform_real_distribution<double>(0.0, 1.0)(rng) <
                             std::exp((next - current) / temperature));
    if (accept) {
      current = next;
    } else {
      state.erase(in);
      state.insert(out);
    }
    if ((it + 1) % 16 == 0 || it + 1 == iterations) normalise();
    if (current > best) {
      best = current;
      best_masks = state.masks();
    }
  }

  SearchReport report;
  report.n = n;
  report.max_index = m;
  report.best = best;
  report.gamma = best / static_cast<double>(n);
  report.maximizers.push_back(mask_set(best_masks));
  report.candidates = iterations;
  report.heuristic = true;
  report.weights = t.describe();
  report.seed = seed;
  report.iterations = iterations;
  report.elapsed_ms = ms_since(start);
  return report;
}

IndexSet cube_construction(unsigned k) {
  if (k == 0) throw DomainError("cube order k must be at least 1");
  if (k > kMaxCubeOrder) throw RangeError("cube order k > 20 refused");
  std::vector<MultiIndex> members;
  members.reserve(std::size_t{1} << k);
  for (std::uint32_t x = 0; x < (std::uint32_t{1} << k); ++x) {
    std::vector<Term> terms;
    for (unsigned b = 0; b < k; ++b) {
      if ((x >> b) & 1u) terms.push_back({b + 1, 1});
    }
    members.emplace_back(std::move(terms));
  }
  return IndexSet(std::move(members));
}

}  // namespace gcdsum
