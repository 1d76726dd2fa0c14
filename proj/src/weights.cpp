#include "gcdsum/weights.hpp"

#include <cmath>
#include <sstream>

#include "gcdsum/errors.hpp"
#include "gcdsum/primes.hpp"

namespace gcdsum {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Guard for omega on prime powers: p_j > 2^{1/alpha} must be reachable.
constexpr double kMaxOmegaPrime = 6.0e10;
}  // namespace

WeightSequence WeightSequence::prime_power(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be a positive real");
  return WeightSequence(PrimePower{alpha});
}

WeightSequence WeightSequence::explicit_list(std::vector<double> values, TailRule tail) {
  if (values.empty()) throw DomainError("explicit weight list is empty");
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!(values[k] > 0.0 && values[k] < 1.0)) {
      throw DomainError("weight " + std::to_string(k + 1) + " not in (0,1)");
    }
    if (k > 0 && !(values[k] < values[k - 1])) {
      throw DomainError("weights must be strictly decreasing (index " + std::to_string(k + 1) + ")");
    }
  }
  if (tail.kind == TailRule::Kind::Geometric && !(tail.ratio > 0.0 && tail.ratio < 1.0)) {
    throw DomainError("geometric tail ratio must lie in (0,1)");
  }
  return WeightSequence(Explicit{std::move(values), tail});
}

double WeightSequence::at(Index j) const {
  if (j == 0) throw DomainError("weight indices are 1-based");
  return std::visit(
      overloaded{
          [&](const PrimePower& k) {
            return std::pow(static_cast<double>(prime_table().prime(j)), -k.alpha);
          },
          [&](const Explicit& k) {
            if (j <= k.values.size()) return k.values[j - 1];
            if (k.tail.kind == TailRule::Kind::Constant) return k.values.back();
            return k.values.back() * std::pow(k.tail.ratio, static_cast<double>(j - k.values.size()));
          },
          [&](const Doubled& k) {
            const double x = k.base->at(j);
            return x < 0.5 ? 2.0 * x : x;
          },
      },
      kind_);
}

ExtendedReal WeightSequence::at_extended(Index j) const {
  if (j == 0) throw DomainError("weight indices are 1-based");
  return std::visit(
      overloaded{
          [&](const PrimePower& k) {
            ExtendedReal p(static_cast<double>(prime_table().prime(j)));
            return ExtendedReal(boost::multiprecision::pow(p, -ExtendedReal(k.alpha)));
          },
          [&](const Explicit& k) {
            if (j <= k.values.size()) return ExtendedReal(k.values[j - 1]);
            if (k.tail.kind == TailRule::Kind::Constant) return ExtendedReal(k.values.back());
            return ExtendedReal(ExtendedReal(k.values.back()) *
                                boost::multiprecision::pow(ExtendedReal(k.tail.ratio),
                                                           static_cast<long>(j - k.values.size())));
          },
          [&](const Doubled& k) {
            ExtendedReal x = k.base->at_extended(j);
            return x < ExtendedReal(0.5) ? ExtendedReal(2 * x) : x;
          },
      },
      kind_);
}

bool WeightSequence::is_non_increasing() const noexcept {
  return !std::holds_alternative<Doubled>(kind_);
}

std::optional<double> WeightSequence::alpha() const noexcept {
  if (auto* k = std::get_if<PrimePower>(&kind_)) return k->alpha;
  return std::nullopt;
}

std::string WeightSequence::describe() const {
  return std::visit(overloaded{
                        [](const PrimePower& k) {
                          std::ostringstream s;
                          s << "p^-" << k.alpha;
                          return s.str();
                        },
                        [](const Explicit& k) {
                          std::ostringstream s;
                          s << "explicit[" << k.values.size() << "]";
                          if (k.tail.kind == TailRule::Kind::Constant) {
                            s << "+constant";
                          } else {
                            s << "+geometric(" << k.tail.ratio << ")";
                          }
                          return s.str();
                        },
                        [](const Doubled& k) { return "eta(" + k.base->describe() + ")"; },
                    },
                    kind_);
}

std::size_t WeightSequence::count_above_half() const {
  return std::visit(
      overloaded{
          [&](const PrimePower& k) -> std::size_t {
            // t_j > 1/2  <=>  p_j < 2^{1/alpha}
            const double bound = std::pow(2.0, 1.0 / k.alpha);
            if (bound > kMaxOmegaPrime) throw RangeError("alpha too small to count weights above 1/2");
            std::size_t count = 0;
            for (Index j = 1; at(j) > 0.5; ++j) ++count;
            return count;
          },
          [&](const Explicit& k) -> std::size_t {
            if (k.tail.kind == TailRule::Kind::Constant) {
              throw DomainError("omega requires a vanishing tail; constant tail rejected");
            }
            std::size_t count = 0;
            for (double v : k.values) count += v > 0.5 ? 1 : 0;
            double v = k.values.back();
            while ((v *= k.tail.ratio) > 0.5) ++count;
            return count;
          },
          [&](const Doubled& k) -> std::size_t {
            if (!k.base->is_non_increasing()) {
              throw DomainError("omega of eta requires a non-increasing base sequence");
            }
            // Past the first index with base t_j < 1/4 every term of eta(t) is < 1/2.
            (void)k.base->count_above_half();  // validates the tail
            std::size_t count = 0;
            for (Index j = 1;; ++j) {
              const double x = k.base->at(j);
              if (x < 0.25) break;
              if ((x < 0.5 ? 2.0 * x : x) > 0.5) ++count;
            }
            return count;
          },
      },
      kind_);
}

double weight_at(const WeightSequence& t, Index j) { return t.at(j); }

double power(const WeightSequence& t, const MultiIndex& a) {
  double r = 1.0;
  for (const Term& term : a.terms()) {
    const double w = t.at(term.index);
    for (Exponent e = 0; e < term.exponent; ++e) r *= w;
  }
  return r;
}

ExtendedReal power_extended(const WeightSequence& t, const MultiIndex& a) {
  ExtendedReal r(1);
  for (const Term& term : a.terms()) {
    r *= boost::multiprecision::pow(t.at_extended(term.index), static_cast<long>(term.exponent));
  }
  return r;
}

WeightSequence eta(const WeightSequence& t) {
  return WeightSequence(WeightSequence::Doubled{std::make_shared<const WeightSequence>(t)});
}

std::size_t omega(const WeightSequence& t) { return t.count_above_half(); }

double verify_decay(const WeightSequence& t, Index j_max) {
  if (j_max < 2) throw DomainError("verify_decay requires j_max >= 2");
  prime_table().reserve_count(j_max);
  double sup = 0.0;
  for (Index j = 2; j <= j_max; ++j) {
    const double x = static_cast<double>(j);
    sup = std::max(sup, t.at(j) * std::sqrt(x * std::log(x)));
  }
  return sup;
}

IteratedLogs iterated_logs(double n) {
  if (!(n >= 21.0)) throw DomainError("N must be at least 21 so that log log log N > 0");
  IteratedLogs l{};
  l.log1 = std::log(n);
  l.log2 = std::log(l.log1);
  l.log3 = std::log(l.log2);
  return l;
}

double binary_threshold(double n) { return std::log(n) / std::log(2.0); }

Index threshold_index(double n) {
  // N = 2^k must land exactly on k despite rounding in the quotient.
  return static_cast<Index>(std::floor(binary_threshold(n) + 1e-9));
}

AuxWeights::AuxWeights(WeightSequence base, double n, double c)
    : base_(std::move(base)), n_(n), c_(c), logs_(iterated_logs(n)) {
  if (!(c > 0.0)) throw DomainError("decay constant C must be positive");
  threshold_ = binary_threshold(n);
  threshold_index_ = gcdsum::threshold_index(n);
  slope_ = std::sqrt(c / 6.0) * std::sqrt(logs_.log3 / (logs_.log1 * logs_.log2));
}

double AuxWeights::at(Index j) const {
  if (j == 0) throw DomainError("weight indices are 1-based");
  if (j <= threshold_index_) return base_.at(j);
  const double lj = std::log(static_cast<double>(j));
  if (!(lj > logs_.log2)) {
    throw DomainError("auxiliary weight w_" + std::to_string(j) + " is nonpositive (log j <= log log N)");
  }
  return slope_ * (lj - logs_.log2);
}

double aux_w(const AuxWeights& aw, Index j) { return aw.at(j); }

}  // namespace gcdsum
