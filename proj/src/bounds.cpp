#include "gcdsum/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "gcdsum/compensated.hpp"
#include "gcdsum/errors.hpp"
#include "gcdsum/transforms.hpp"

namespace gcdsum {

namespace {

constexpr double kRelTol = 1e-12;

bool le(double a, double b) { return a <= b + kRelTol * std::abs(b); }

// sqrt(log N log_3 N / log_2 N)
double shape(const IteratedLogs& l) { return std::sqrt(l.log1 * l.log3 / l.log2); }

// Closed form of the integral of 1/(x log x (log x - L)) from x0 to infinity.
double tail_integral(double x0, double l) {
  const double u = std::log(x0);
  return std::log(u / (u - l)) / l;
}

}  // namespace

double theorem1_rhs(double n, double a) { return std::exp(a * shape(iterated_logs(n))); }

double theorem2_rhs(double n, double c, double kappa) {
  if (c < 0.0) throw DomainError("theorem2_rhs needs C >= 0");
  return std::exp(kappa * std::sqrt(c) * shape(iterated_logs(n)));
}

double lower_bound_rhs(double n, double c) {
  const IteratedLogs l = iterated_logs(n);
  return std::exp(c * std::sqrt(l.log1 / l.log2));
}

Lemma3Check lemma3_check(const IndexSet& b, const MultiIndex& beta, std::size_t n) {
  if (!b.contains(beta)) throw DomainError("lemma3_check: " + beta.to_string() + " is not in B");
  if (n == 0) throw DomainError("lemma3_check needs N >= 1");
  const double log_n = std::log(static_cast<double>(n));
  const double x = log_n / std::log(2.0);
  const double first = std::ceil(x - 1e-9);
  Lemma3Check r{true, 0.0, 3.0 * log_n, 0.0, 0};
  CompensatedSum lhs;
  for (const Term& term : beta.terms()) {
    if (static_cast<double>(term.index) < first) continue;
    ++r.large_indices;
    lhs.add(std::log(static_cast<double>(term.index)) - std::log(log_n));
  }
  r.lhs = r.large_indices ? lhs.value() : 0.0;
  r.slack = r.rhs - r.lhs;
  r.holds = r.lhs <= r.rhs;
  return r;
}

TailSum tail_sum(double n) {
  const IteratedLogs l = iterated_logs(n);
  const Index j0 = threshold_index(n) + 1;
  const auto cutoff = static_cast<Index>(kTailCutoff);
  // Smallest terms first.
  CompensatedSum s;
  for (Index j = cutoff; j >= j0; --j) {
    const double jd = static_cast<double>(j);
    const double lj = std::log(jd);
    s.add(1.0 / (jd * lj * (lj - l.log2)));
  }
  s.add(tail_integral(kTailCutoff + 0.5, l.log2));

  TailSum r{};
  r.sum = s.value();
  r.estimate = l.log3 / l.log2;
  r.scaled_gap = std::abs(r.sum - r.estimate) * l.log2;
  r.integral_bound = tail_integral(binary_threshold(n), l.log2);
  r.floor_integral_bound = tail_integral(static_cast<double>(threshold_index(n)), l.log2);
  return r;
}

bool BoundChainReport::all_hold() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const NamedVerdict& v) { return v.holds; });
}

BoundChainReport bound_chain_report(const WeightSequence& t, const IndexSet& b, double c) {
  const std::size_t n = b.size();
  if (n < 21) throw DomainError("bound_chain_report needs N >= 21, got " + std::to_string(n));
  if (!b.is_square_free()) throw DomainError("bound_chain_report needs a square-free set");
  if (!is_complete(b)) throw DomainError("bound_chain_report needs a complete set");
  const Index max_index = std::max<Index>(b.max_index(), 2);
  const double decay = verify_decay(t, max_index);
  if (c < decay) {
    throw DomainError("bound_chain_report needs C >= " + std::to_string(decay) + " (decay of t), got " +
                      std::to_string(c));
  }

  const double nd = static_cast<double>(n);
  const AuxWeights w(t, nd, c);
  const IteratedLogs& logs = w.logs();
  const Index x_floor = w.threshold_index();
  const double x_shape = shape(logs);
  const double sqrt6c = std::sqrt(6.0 * c);

  BoundChainReport rep;
  rep.n = n;
  rep.c = c;
  rep.decay = decay;

  CompensatedSum lower_t;
  for (Index i = 1; i <= x_floor; ++i) lower_t.add(t.at(i));
  const double lower_sum = lower_t.value();
  rep.prod2_factor = std::exp(lower_sum);

  // B* with the lexicographically first witness pair for each member.
  std::unordered_map<MultiIndex, std::pair<std::size_t, std::size_t>, MultiIndexHash> witness;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = k; l < n; ++l) witness.try_emplace(lcm(b[k], b[l]), k, l);
  }
  std::vector<MultiIndex> closure;
  closure.reserve(witness.size());
  for (const auto& [beta, pair] : witness) closure.push_back(beta);
  std::sort(closure.begin(), closure.end());
  rep.closure_size = closure.size();

  auto ratio_at = [&](Index j) { return j <= x_floor ? t.at(j) : t.at(j) * t.at(j) / w.at(j); };
  auto w_power = [&](const MultiIndex& a) {
    double r = 1.0;
    for (const Term& term : a.terms()) r *= std::pow(w.at(term.index), term.exponent);
    return r;
  };
  auto ratio_power = [&](const MultiIndex& a) {
    double r = 1.0;
    for (const Term& term : a.terms()) r *= std::pow(ratio_at(term.index), term.exponent);
    return r;
  };

  bool cs_ok = true, euler_ok = true, exp_ok = true, split_ok = true, large_ok = true, w_ok = true;
  const double large_w_cap = 3.0 * std::sqrt(c / 6.0) * x_shape;
  CompensatedSum lemma_rhs, swap_lhs;
  double max_w_first = 0.0;
  for (const MultiIndex& beta : closure) {
    BetaRecord rec;
    rec.beta = beta;
    rec.witnesses = witness.at(beta);
    CompensatedSum inner, first, second;
    for (const MultiIndex& bk : b) {
      if (!leq(bk, beta)) continue;
      const MultiIndex d = beta - bk;
      inner.add(power(t, d));
      first.add(w_power(d));
      second.add(ratio_power(d));
    }
    rec.inner_t = inner.value();
    rec.cs_first = first.value();
    rec.cs_second = second.value();
    lemma_rhs.add(rec.inner_t * rec.inner_t);
    swap_lhs.add(rec.cs_second);
    cs_ok = cs_ok && le(rec.inner_t * rec.inner_t, rec.cs_first * rec.cs_second);

    double prod = 1.0, prod_i1 = 1.0, prod_i2 = 1.0;
    CompensatedSum i2_sum;
    for (const Term& term : beta.terms()) {
      const double wj = w.at(term.index);
      prod *= 1.0 + wj;
      if (term.index <= x_floor) {
        ++rec.i1_size;
        prod_i1 *= 1.0 + wj;
      } else {
        ++rec.i2_size;
        prod_i2 *= 1.0 + wj;
        i2_sum.add(wj);
      }
    }
    rec.euler_product = prod;
    rec.w_sum_i2 = i2_sum.value();
    rec.w1_factor = std::exp(lower_sum + rec.w_sum_i2);
    rec.w_bound = std::exp(lower_sum + sqrt6c * x_shape);
    euler_ok = euler_ok && le(rec.cs_first, rec.euler_product);
    exp_ok = exp_ok && le(prod_i1, std::exp(lower_sum)) && le(prod_i2, std::exp(rec.w_sum_i2));

    double witness_sum = 0.0;
    for (std::size_t m : {rec.witnesses.first, rec.witnesses.second}) {
      CompensatedSum part;
      for (const Term& term : b[m].terms()) {
        if (term.index > x_floor) part.add(w.at(term.index));
      }
      witness_sum += part.value();
      large_ok = large_ok && le(part.value(), large_w_cap);
    }
    split_ok = split_ok && le(rec.w_sum_i2, witness_sum);
    w_ok = w_ok && le(rec.w_sum_i2, sqrt6c * x_shape) && le(rec.w1_factor, rec.w_bound);
    max_w_first = std::max(max_w_first, rec.cs_first);
    rep.records.push_back(std::move(rec));
  }
  rep.gcd_sum = gcd_sum(t, b);
  rep.lemma_rhs = lemma_rhs.value();

  // J = union of supports, split at the threshold.
  std::vector<Index> j_set;
  for (const MultiIndex& bk : b) {
    for (const Term& term : bk.terms()) j_set.push_back(term.index);
  }
  std::sort(j_set.begin(), j_set.end());
  j_set.erase(std::unique(j_set.begin(), j_set.end()), j_set.end());
  double j_prod = 1.0, j1_prod = 1.0, j2_prod = 1.0;
  CompensatedSum j2_sum, j2_tail;
  bool termwise_ok = true;
  const double termwise_factor = c * sqrt6c * std::sqrt(logs.log1 * logs.log2 / logs.log3);
  for (Index j : j_set) {
    const double r = ratio_at(j);
    j_prod *= 1.0 + r;
    if (j <= x_floor) {
      ++rep.j1_size;
      j1_prod *= 1.0 + r;
    } else {
      ++rep.j2_size;
      j2_prod *= 1.0 + r;
      j2_sum.add(r);
      const double jd = static_cast<double>(j);
      const double g = 1.0 / (jd * std::log(jd) * (std::log(jd) - logs.log2));
      j2_tail.add(g);
      termwise_ok = termwise_ok && le(r, termwise_factor * g);
    }
  }
  rep.j_euler_product = j_prod;
  rep.j2_sum = j2_sum.value();

  CompensatedSum swap_rhs;
  bool f_ok = true;
  for (const MultiIndex& bk : b) {
    CompensatedSum f;
    for (const MultiIndex& beta : closure) {
      if (leq(bk, beta)) f.add(ratio_power(beta - bk));
    }
    swap_rhs.add(f.value());
    f_ok = f_ok && le(f.value(), j_prod);
    rep.max_f = std::max(rep.max_f, f.value());
  }

  rep.tail = tail_sum(nd);
  rep.prod3_holds = le(rep.j2_sum, termwise_factor * rep.tail.floor_integral_bound);
  const double swap_gap = std::abs(swap_lhs.value() - swap_rhs.value());

  rep.verdicts = {
      {"closure_sum_bound", le(rep.gcd_sum, rep.lemma_rhs)},
      {"cauchy_schwarz", cs_ok},
      {"euler_product", euler_ok},
      {"i1_i2_exp_bound", exp_ok},
      {"witness_split", split_ok},
      {"large_index_w_bound", large_ok},
      {"w_exact", w_ok},
      {"summation_swap", swap_gap <= kRelTol * std::max(1.0, swap_lhs.value()) * 16.0},
      {"f_euler_product", f_ok},
      {"prod1", le(j1_prod, rep.prod2_factor) && le(j2_prod, std::exp(rep.j2_sum)) &&
                    le(j_prod, j1_prod * j2_prod * (1.0 + kRelTol))},
      {"prod3_termwise", termwise_ok},
      {"tail_vs_integral", le(j2_tail.value(), rep.tail.sum) && le(rep.tail.sum, rep.tail.floor_integral_bound)},
      {"prod3_exact", rep.prod3_holds},
  };

  const double main_shape = sqrt6c * x_shape;
  rep.ratios = {
      {"w1", rep.prod2_factor / std::exp(c * std::sqrt(logs.log1 / logs.log2))},
      {"w", max_w_first / std::exp(main_shape)},
      {"sum2", rep.max_f / std::exp(main_shape)},
      {"prod3", rep.j2_sum / main_shape},
      {"tail_vs_real_integral", rep.tail.sum / rep.tail.integral_bound},
      {"theorem2", rep.lemma_rhs / (nd * theorem2_rhs(nd, c, 2.0 * std::sqrt(6.0)))},
  };
  return rep;
}

SupersetCheck superset_check(const WeightSequence& t, const IndexSet& b, const IndexSet& b_prime) {
  SupersetCheck r{};
  r.omega = omega(t);
  r.lhs = gcd_sum(t, b);
  r.rhs = std::ldexp(gcd_sum(eta(t), b_prime), static_cast<int>(r.omega));
  r.holds = le(r.lhs, r.rhs);
  return r;
}

}  // namespace gcdsum
