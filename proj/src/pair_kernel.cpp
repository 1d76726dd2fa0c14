#include "pair_kernel.hpp"

#include <algorithm>
#include <map>

namespace gcdsum::detail {

PairKernel::PairKernel(const WeightSequence& t, const IndexSet& b) : n_(b.size()) {
  std::map<Index, std::uint32_t> compact;
  Exponent max_exp = 0;
  for (const MultiIndex& m : b) {
    for (const Term& term : m.terms()) {
      compact.emplace(term.index, 0);
      max_exp = std::max(max_exp, term.exponent);
    }
  }
  std::vector<double> weight;
  weight.reserve(compact.size());
  for (auto& [index, slot] : compact) {
    slot = static_cast<std::uint32_t>(weight.size());
    weight.push_back(t.at(index));
  }

  bitmask_ = max_exp <= 1 && compact.size() <= 64;
  if (bitmask_) {
    chunks_ = std::max<unsigned>(1, static_cast<unsigned>((compact.size() + 7) / 8));
    tables_.assign(chunks_, {});
    for (unsigned c = 0; c < chunks_; ++c) {
      for (unsigned byte = 0; byte < 256; ++byte) {
        double r = 1.0;
        for (unsigned bit = 0; bit < 8; ++bit) {
          const std::size_t slot = 8 * c + bit;
          if ((byte >> bit) & 1u) r *= slot < weight.size() ? weight[slot] : 1.0;
        }
        tables_[c][byte] = r;
      }
    }
    masks_.reserve(n_);
    for (const MultiIndex& m : b) {
      std::uint64_t mask = 0;
      for (const Term& term : m.terms()) mask |= std::uint64_t{1} << compact.at(term.index);
      masks_.push_back(mask);
    }
    return;
  }

  powers_.resize(weight.size());
  for (std::size_t s = 0; s < weight.size(); ++s) {
    powers_[s].resize(max_exp + 1);
    double r = 1.0;
    for (Exponent e = 0; e <= max_exp; ++e) {
      powers_[s][e] = r;
      r *= weight[s];
    }
  }
  sparse_.reserve(n_);
  for (const MultiIndex& m : b) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> row;
    row.reserve(m.support_size());
    for (const Term& term : m.terms()) row.emplace_back(compact.at(term.index), term.exponent);
    sparse_.push_back(std::move(row));
  }
}

double PairKernel::general_term(std::size_t k, std::size_t l) const {
  const auto& a = sparse_[k];
  const auto& c = sparse_[l];
  double r = 1.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < c.size()) {
    if (j == c.size() || (i < a.size() && a[i].first < c[j].first)) {
      r *= powers_[a[i].first][a[i].second];
      ++i;
    } else if (i == a.size() || c[j].first < a[i].first) {
      r *= powers_[c[j].first][c[j].second];
      ++j;
    } else {
      const auto d = a[i].second > c[j].second ? a[i].second - c[j].second : c[j].second - a[i].second;
      r *= powers_[a[i].first][d];
      ++i;
      ++j;
    }
  }
  return r;
}

template <typename F>
double PairKernel::dispatch(F&& f) const {
  switch (chunks_) {
    case 1: return f([this](std::uint64_t x) { return mask_term<1>(x); });
    case 2: return f([this](std::uint64_t x) { return mask_term<2>(x); });
    case 3: return f([this](std::uint64_t x) { return mask_term<3>(x); });
    case 4: return f([this](std::uint64_t x) { return mask_term<4>(x); });
    case 5: return f([this](std::uint64_t x) { return mask_term<5>(x); });
    case 6: return f([this](std::uint64_t x) { return mask_term<6>(x); });
    case 7: return f([this](std::uint64_t x) { return mask_term<7>(x); });
    default: return f([this](std::uint64_t x) { return mask_term<8>(x); });
  }
}

double PairKernel::term(std::size_t k, std::size_t l) const {
  if (!bitmask_) return general_term(k, l);
  return dispatch([&](auto mt) { return mt(masks_[k] ^ masks_[l]); });
}

double PairKernel::upper_row_sum(std::size_t k) const {
  if (!bitmask_) {
    return blocked_sum(k + 1, n_, [&](std::size_t l) { return general_term(k, l); });
  }
  return dispatch([&](auto mt) {
    const std::uint64_t mk = masks_[k];
    const std::uint64_t* masks = masks_.data();
    return blocked_sum(k + 1, n_, [&](std::size_t l) { return mt(mk ^ masks[l]); });
  });
}

double PairKernel::row_dot(std::size_t k, std::span<const double> x) const {
  if (!bitmask_) {
    return blocked_sum(0, n_, [&](std::size_t l) { return general_term(k, l) * x[l]; });
  }
  return dispatch([&](auto mt) {
    const std::uint64_t mk = masks_[k];
    return blocked_sum(0, n_, [&](std::size_t l) { return mt(mk ^ masks_[l]) * x[l]; });
  });
}

double PairKernel::row_sum(std::size_t k) const {
  if (!bitmask_) {
    return blocked_sum(0, n_, [&](std::size_t l) { return general_term(k, l); });
  }
  return dispatch([&](auto mt) {
    const std::uint64_t mk = masks_[k];
    return blocked_sum(0, n_, [&](std::size_t l) { return mt(mk ^ masks_[l]); });
  });
}

}  // namespace gcdsum::detail
