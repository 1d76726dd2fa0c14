#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "gcdsum/gcd_sum.hpp"
#include "gcdsum/precision.hpp"
#include "gcdsum/weights.hpp"

namespace gcdsum {

struct TransformStep {
  std::string description;
  std::size_t set_size;
  double s_before;
  double s_after;
};

// Audit record of a sequence of closure / completeness steps.
struct TransformTrace {
  std::vector<TransformStep> steps;
  IndexSet initial;
  IndexSet final_set;
  std::string weights;
  std::size_t completeness_steps = 0;
};

// Thrown by normalize_to_complete when it exceeds its iteration cap.
class IterationCapError : public std::runtime_error {
 public:
  IterationCapError(const std::string& what, TransformTrace trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const TransformTrace& trace() const noexcept { return trace_; }

 private:
  TransformTrace trace_;
};

// beta in B and e_j <= beta imply beta - e_j in B.
bool is_divisor_closed(const IndexSet& b);
// Divisor closed, and for beta in B, e_j <= beta, i < j: e_i <= beta or beta - e_j + e_i in B.
bool is_complete(const IndexSet& b);

struct TransformResult {
  IndexSet set;
  TransformTrace trace;
};

// Gal's division algorithm. Sweeps indices in ascending order, replacing
// every beta with beta^{(j)} = 1 and beta - e_j missing by beta - e_j, until
// no replacement applies. Requires a square-free set (DomainError otherwise).
// The output depends on the sweep order; ascending order is fixed here.
TransformResult gal_divisor_closure(const WeightSequence& t, const IndexSet& b);

struct SwapPartition {
  IndexSet b0, b1, b2, b3, b4;
};

// Splits a divisor closed square-free B for the pair i < j. B0 holds the
// members mu with mu^{(j)} = 1, mu^{(i)} = 0 and mu - e_j + e_i missing.
// Every other member nu is classified by its base nu0 (nu with coordinates
// i and j cleared): B1 if nu0 + e_i + e_j is in B, else B2 if both nu0 + e_i
// and nu0 + e_j are, else B3 if nu0 + e_i is, else B4.
SwapPartition partition_b1234(const IndexSet& b, Index i, Index j);

struct StepOptions {
  unsigned digits = kCertificationDigits;
  double escalate_below = 1e-9;
};

struct StepResult {
  IndexSet set;
  bool strict;
  double s_before;
  double s_after;
  double margin;            // s_after - s_before in double precision
  bool certified_extended;  // margin recomputed at `digits` precision
  double extended_margin;   // that recomputed margin (rounded to double)
};

// B' = (B \ B0) u {mu - e_j + e_i : mu in B0}. Throws DomainError when B0 is
// empty and ContradictionError if a moved member collides with B \ B0.
StepResult completeness_step(const WeightSequence& t, const IndexSet& b, Index i, Index j,
                             const StepOptions& options = {});

// Diagnostic for the swap argument: recomputes
//   sum_{mu in B0', nu in B\B0} t^{|mu-nu|}
// directly and as c1 s1 + c2 s2 + c3 s3 + c4 s4 with s_r the B0-to-B_r sums.
struct SwapIdentity {
  double lhs;
  double rhs;
  double before;  // sum_{mu in B0, nu in B\B0} t^{|mu-nu|}
  std::array<double, 4> coefficients;
  std::array<double, 4> partial_sums;
  bool identity_holds;
  bool coefficients_at_least_one;
  bool b4_nonempty;
};
SwapIdentity swap_identity(const WeightSequence& t, const IndexSet& b, Index i, Index j);

// Alternates divisor closure and completeness steps (pairs by ascending j,
// then ascending i) until the set is complete. max_iterations = 0 picks a
// cap from the total weighted degree, which every step strictly decreases.
TransformResult normalize_to_complete(const WeightSequence& t, const IndexSet& b,
                                      std::size_t max_iterations = 0);

}  // namespace gcdsum
