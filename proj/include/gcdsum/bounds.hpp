#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "gcdsum/gcd_sum.hpp"
#include "gcdsum/weights.hpp"

namespace gcdsum {

// exp(A sqrt(log N log_3 N / log_2 N)). N < 21 is a DomainError for all three curves.
double theorem1_rhs(double n, double a);
// exp(kappa sqrt(C) sqrt(log N log_3 N / log_2 N)).
double theorem2_rhs(double n, double c, double kappa);
// exp(c sqrt(log N / log_2 N)).
double lower_bound_rhs(double n, double c);

struct Lemma3Check {
  bool holds;
  double lhs;    // sum over large support indices of (log j - log_2 N)
  double rhs;    // 3 log N
  double slack;  // rhs - lhs
  std::size_t large_indices;
};
// Indices of beta at or above log N / log 2 are the large ones. Throws DomainError if beta is not in B.
Lemma3Check lemma3_check(const IndexSet& b, const MultiIndex& beta, std::size_t n);

inline constexpr double kTailCutoff = 1e7;

struct TailSum {
  double sum;       // sum_{j > log N / log 2} 1 / (j log j (log j - log_2 N))
  double estimate;  // log_3 N / log_2 N
  double scaled_gap;
  // Integral of the summand from log N / log 2 to infinity, in closed form.
  double integral_bound;
  // Integral from the floor of that threshold; a valid upper bound on the sum for every N >= 21.
  double floor_integral_bound;
};
// Direct summation up to j = 1e7 plus the closed-form integral of the remainder.
TailSum tail_sum(double n);

struct BetaRecord {
  MultiIndex beta;
  std::pair<std::size_t, std::size_t> witnesses;  // positions in B with lcm = beta
  std::size_t i1_size = 0;
  std::size_t i2_size = 0;
  double inner_t = 0.0;        // sum_{beta_k <= beta} t^{beta - beta_k}
  double cs_first = 0.0;       // sum_{beta_k <= beta} w^{beta - beta_k}
  double cs_second = 0.0;      // sum_{beta_k <= beta} (t^2 / w)^{beta - beta_k}
  double euler_product = 0.0;  // prod_{j in supp beta} (1 + w_j)
  double w_sum_i2 = 0.0;
  double w1_factor = 0.0;  // exp(sum_{i <= [log N / log 2]} t_i + sum_{I2} w_j)
  double w_bound = 0.0;    // exp(sum_{i <= [log N / log 2]} t_i + sqrt(6C) X)
};

struct NamedVerdict {
  std::string name;
  bool holds;
};
struct NamedRatio {
  std::string name;
  double value;
};

struct BoundChainReport {
  std::size_t n = 0;
  double c = 0.0;
  double decay = 0.0;  // verify_decay up to the largest support index
  std::size_t closure_size = 0;
  double gcd_sum = 0.0;
  double lemma_rhs = 0.0;
  std::vector<BetaRecord> records;
  std::size_t j1_size = 0;
  std::size_t j2_size = 0;
  double max_f = 0.0;  // max_k sum_{beta in B*, beta >= beta_k} (t^2/w)^{beta - beta_k}
  double j_euler_product = 0.0;
  double prod2_factor = 0.0;  // exp(sum_{i <= [log N / log 2]} t_i)
  double j2_sum = 0.0;        // sum_{J2} t_j^2 / w_j
  TailSum tail{};
  bool prod3_holds = false;
  std::vector<NamedVerdict> verdicts;
  std::vector<NamedRatio> ratios;

  bool all_hold() const;
};

// Evaluates every step of the Euler-product argument for one complete
// square-free set. Throws DomainError naming the failed precondition.
BoundChainReport bound_chain_report(const WeightSequence& t, const IndexSet& b, double c);

struct SupersetCheck {
  double lhs;  // S(t, B)
  double rhs;  // 2^omega(t) S(eta(t), B')
  std::size_t omega;
  bool holds;
};
SupersetCheck superset_check(const WeightSequence& t, const IndexSet& b, const IndexSet& b_prime);

}  // namespace gcdsum
