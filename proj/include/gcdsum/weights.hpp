#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gcdsum/multi_index.hpp"
#include "gcdsum/precision.hpp"

namespace gcdsum {

// How an explicit weight list continues past its last entry.
struct TailRule {
  enum class Kind { Constant, Geometric };
  Kind kind = Kind::Geometric;
  // Geometric only: t_{L+k} = t_L * ratio^k, ratio in (0, 1).
  double ratio = 0.5;

  static TailRule constant() { return {Kind::Constant, 1.0}; }
  static TailRule geometric(double r) { return {Kind::Geometric, r}; }
};

// A positive sequence t = (t_j) with t_j in (0, 1), evaluable at any index j >= 1.
//
// Three kinds exist: prime powers t_j = p_j^{-alpha}, an explicit decreasing
// list with a tail rule, and eta(t) of another sequence. The first two are
// non-increasing; eta(t) in general is not.
class WeightSequence {
 public:
  static WeightSequence prime_power(double alpha);
  // Values must lie in (0, 1) and be strictly decreasing.
  static WeightSequence explicit_list(std::vector<double> values, TailRule tail = {});

  double at(Index j) const;
  // Same value evaluated in the precision of the active PrecisionGuard.
  ExtendedReal at_extended(Index j) const;

  bool is_non_increasing() const noexcept;
  std::optional<double> alpha() const noexcept;
  // Short identifier used in traces and reports, e.g. "p^-0.5".
  std::string describe() const;

  // Number of indices j with t_j > 1/2. Throws DomainError when the tail does not vanish.
  std::size_t count_above_half() const;

 private:
  struct PrimePower {
    double alpha;
  };
  struct Explicit {
    std::vector<double> values;
    TailRule tail;
  };
  struct Doubled {
    std::shared_ptr<const WeightSequence> base;
  };

  explicit WeightSequence(std::variant<PrimePower, Explicit, Doubled> kind) : kind_(std::move(kind)) {}

  friend WeightSequence eta(const WeightSequence& t);

  std::variant<PrimePower, Explicit, Doubled> kind_;
};

double weight_at(const WeightSequence& t, Index j);
// t^a = prod over supp a of t_j^{a^{(j)}}; power(t, zero) = 1.
double power(const WeightSequence& t, const MultiIndex& a);
ExtendedReal power_extended(const WeightSequence& t, const MultiIndex& a);

// eta(t)_j = 2 t_j if t_j < 1/2, else t_j.
WeightSequence eta(const WeightSequence& t);
std::size_t omega(const WeightSequence& t);

// sup_{2 <= j <= j_max} t_j sqrt(j log j): the smallest C with t_j <= C / sqrt(j log j) on that range.
double verify_decay(const WeightSequence& t, Index j_max);

// log N, log log N, log log log N. Throws DomainError for N < 21.
struct IteratedLogs {
  double log1;
  double log2;
  double log3;
};
IteratedLogs iterated_logs(double n);

// log N / log 2, and the largest integer index not exceeding it.
double binary_threshold(double n);
Index threshold_index(double n);

// The two-branch auxiliary sequence: w_j = t_j up to log N / log 2, and
// sqrt(C/6) sqrt(log_3 N / (log N log_2 N)) (log j - log_2 N) beyond.
class AuxWeights {
 public:
  AuxWeights(WeightSequence base, double n, double c);

  double at(Index j) const;
  const WeightSequence& base() const noexcept { return base_; }
  double n() const noexcept { return n_; }
  double c() const noexcept { return c_; }
  double threshold() const noexcept { return threshold_; }
  Index threshold_index() const noexcept { return threshold_index_; }
  // Coefficient sqrt(C/6) sqrt(log_3 N / (log N log_2 N)) of the upper branch.
  double slope() const noexcept { return slope_; }
  const IteratedLogs& logs() const noexcept { return logs_; }

 private:
  WeightSequence base_;
  double n_;
  double c_;
  IteratedLogs logs_;
  double threshold_;
  Index threshold_index_;
  double slope_;
};

double aux_w(const AuxWeights& aw, Index j);

}  // namespace gcdsum
