#include "gcdsum/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include "gcdsum/compensated.hpp"
#include "gcdsum/errors.hpp"

namespace gcdsum {

namespace {

using MemberSet = std::unordered_set<MultiIndex, MultiIndexHash>;

void require_square_free(const IndexSet& b, const char* op) {
  if (!b.is_square_free()) throw DomainError(std::string(op) + " requires a square-free set");
}

std::set<Index> support_union(const IndexSet& b) {
  std::set<Index> out;
  for (const MultiIndex& m : b) {
    for (const Term& t : m.terms()) out.insert(t.index);
  }
  return out;
}

MultiIndex swap_down(const MultiIndex& mu, Index i, Index j) {
  return mu.with_exponent(j, mu[j] - 1).with_exponent(i, mu[i] + 1);
}

std::vector<MultiIndex> collect_b0(const IndexSet& b, Index i, Index j) {
  std::vector<MultiIndex> b0;
  for (const MultiIndex& mu : b) {
    if (mu[j] == 1 && mu[i] == 0 && !b.contains(swap_down(mu, i, j))) b0.push_back(mu);
  }
  return b0;
}

void validate_pair(const IndexSet& b, Index i, Index j, const char* op) {
  if (i == 0 || i >= j) throw DomainError(std::string(op) + " requires 1 <= i < j");
  require_square_free(b, op);
  if (!is_divisor_closed(b)) throw DomainError(std::string(op) + " requires a divisor closed set");
}

}  // namespace

bool is_divisor_closed(const IndexSet& b) {
  for (const MultiIndex& beta : b) {
    for (const Term& t : beta.terms()) {
      if (!b.contains(beta.with_exponent(t.index, t.exponent - 1))) return false;
    }
  }
  return true;
}

bool is_complete(const IndexSet& b) {
  if (!is_divisor_closed(b)) return false;
  for (const MultiIndex& beta : b) {
    for (const Term& t : beta.terms()) {
      const MultiIndex lowered = beta.with_exponent(t.index, t.exponent - 1);
      for (Index i = 1; i < t.index; ++i) {
        if (beta[i] >= 1) continue;
        if (!b.contains(lowered.with_exponent(i, 1))) return false;
      }
    }
  }
  return true;
}

TransformResult gal_divisor_closure(const WeightSequence& t, const IndexSet& b) {
  require_square_free(b, "gal_divisor_closure");
  TransformResult out{b, {}};
  out.trace.initial = b;
  out.trace.weights = t.describe();
  std::vector<MultiIndex> current = b.members();
  double s = gcd_sum(t, b);
  bool changed = true;
  while (changed) {
    changed = false;
    for (Index j : support_union(IndexSet(current))) {
      MemberSet members(current.begin(), current.end());
      std::size_t replaced = 0;
      for (MultiIndex& beta : current) {
        if (beta[j] != 1) continue;
        MultiIndex lowered = beta.with_exponent(j, 0);
        if (members.contains(lowered)) continue;
        beta = std::move(lowered);
        ++replaced;
      }
      if (replaced == 0) continue;
      changed = true;
      const IndexSet next(current);
      const double s_after = gcd_sum(t, next);
      out.trace.steps.push_back({"divide by e_" + std::to_string(j) + " (" + std::to_string(replaced) +
                                     " replaced)",
                                 current.size(), s, s_after});
      s = s_after;
      current = next.members();
    }
  }
  out.set = IndexSet(std::move(current));
  out.trace.final_set = out.set;
  return out;
}

SwapPartition partition_b1234(const IndexSet& b, Index i, Index j) {
  validate_pair(b, i, j, "partition_b1234");
  std::vector<MultiIndex> parts[5];
  const std::vector<MultiIndex> b0 = collect_b0(b, i, j);
  const IndexSet b0_set(b0);
  for (const MultiIndex& nu : b) {
    if (b0_set.contains(nu)) {
      parts[0].push_back(nu);
      continue;
    }
    const MultiIndex base = nu.with_exponent(i, 0).with_exponent(j, 0);
    const MultiIndex with_i = base.with_exponent(i, 1);
    const MultiIndex with_j = base.with_exponent(j, 1);
    const MultiIndex with_both = with_i.with_exponent(j, 1);
    if (b.contains(with_both)) {
      parts[1].push_back(nu);
    } else if (b.contains(with_i) && b.contains(with_j)) {
      parts[2].push_back(nu);
    } else if (b.contains(with_i)) {
      parts[3].push_back(nu);
    } else {
      parts[4].push_back(nu);
    }
  }
  return {IndexSet(std::move(parts[0])), IndexSet(std::move(parts[1])), IndexSet(std::move(parts[2])),
          IndexSet(std::move(parts[3])), IndexSet(std::move(parts[4]))};
}

StepResult completeness_step(const WeightSequence& t, const IndexSet& b, Index i, Index j,
                             const StepOptions& options) {
  validate_pair(b, i, j, "completeness_step");
  const std::vector<MultiIndex> b0 = collect_b0(b, i, j);
  if (b0.empty()) {
    throw DomainError("completeness step (" + std::to_string(i) + "," + std::to_string(j) +
                      ") is a no-op: B0 is empty");
  }
  const IndexSet b0_set(b0);
  std::vector<MultiIndex> rest;
  for (const MultiIndex& nu : b) {
    if (!b0_set.contains(nu)) rest.push_back(nu);
  }
  const IndexSet rest_set(rest);
  std::vector<MultiIndex> moved;
  std::vector<MultiIndex> next = rest;
  for (const MultiIndex& mu : b0) {
    MultiIndex m = swap_down(mu, i, j);
    if (rest_set.contains(m)) {
      throw ContradictionError("moved member " + m.to_string() + " collides with B \\ B0");
    }
    moved.push_back(m);
    next.push_back(std::move(m));
  }

  StepResult out{IndexSet(std::move(next)), false, 0, 0, 0, false, 0};
  out.s_before = gcd_sum(t, b);
  out.s_after = gcd_sum(t, out.set);
  out.margin = out.s_after - out.s_before;
  out.strict = out.margin > 0.0;
  if (std::fabs(out.margin) < options.escalate_below) {
    // S(B') - S(B) = 2 (sum_{B0' x rest} - sum_{B0 x rest}); the B0 x B0 block is unchanged.
    PrecisionGuard guard(options.digits);
    ExtendedReal diff(0);
    for (std::size_t k = 0; k < b0.size(); ++k) {
      for (const MultiIndex& nu : rest) {
        diff += power_extended(t, abs_diff(moved[k], nu));
        diff -= power_extended(t, abs_diff(b0[k], nu));
      }
    }
    diff *= 2;
    out.certified_extended = true;
    out.extended_margin = static_cast<double>(diff);
    out.strict = diff > 0;
  }
  return out;
}

SwapIdentity swap_identity(const WeightSequence& t, const IndexSet& b, Index i, Index j) {
  const SwapPartition p = partition_b1234(b, i, j);
  SwapIdentity out{};
  const double ti = t.at(i), tj = t.at(j);
  out.coefficients = {1.0, (1.0 + ti * tj + ti) / (1.0 + ti * tj + tj), 1.0 / tj, ti / tj};
  const IndexSet* parts[4] = {&p.b1, &p.b2, &p.b3, &p.b4};
  CompensatedSum lhs, before, rhs;
  for (std::size_t r = 0; r < 4; ++r) {
    CompensatedSum s;
    for (const MultiIndex& mu : p.b0) {
      const MultiIndex moved = swap_down(mu, i, j);
      for (const MultiIndex& nu : *parts[r]) {
        const double d = power(t, abs_diff(mu, nu));
        s.add(d);
        before.add(d);
        lhs.add(power(t, abs_diff(moved, nu)));
      }
    }
    out.partial_sums[r] = s.value();
    rhs.add(out.coefficients[r] * out.partial_sums[r]);
  }
  out.lhs = lhs.value();
  out.rhs = rhs.value();
  out.before = before.value();
  out.identity_holds = std::fabs(out.lhs - out.rhs) <= 1e-12 * std::max(1.0, std::fabs(out.lhs));
  out.coefficients_at_least_one = std::all_of(out.coefficients.begin(), out.coefficients.end(),
                                              [](double c) { return c >= 1.0; });
  out.b4_nonempty = !p.b4.empty();
  return out;
}

TransformResult normalize_to_complete(const WeightSequence& t, const IndexSet& b, std::size_t max_iterations) {
  require_square_free(b, "normalize_to_complete");
  if (max_iterations == 0) {
    std::uint64_t degree = 0;
    for (const MultiIndex& m : b) degree += m.weighted_degree();
    max_iterations = static_cast<std::size_t>(degree) + 1;
  }
  TransformTrace trace;
  trace.initial = b;
  trace.weights = t.describe();
  IndexSet current = b;
  for (;;) {
    TransformResult closed = gal_divisor_closure(t, current);
    for (auto& s : closed.trace.steps) trace.steps.push_back(std::move(s));
    current = std::move(closed.set);
    if (is_complete(current)) break;

    bool stepped = false;
    for (Index j : support_union(current)) {
      for (Index i = 1; i < j && !stepped; ++i) {
        if (collect_b0(current, i, j).empty()) continue;
        if (trace.completeness_steps >= max_iterations) {
          trace.final_set = current;
          throw IterationCapError("normalize_to_complete exceeded its iteration cap", std::move(trace));
        }
        StepResult step = completeness_step(t, current, i, j);
        trace.steps.push_back({"swap e_" + std::to_string(j) + " -> e_" + std::to_string(i), current.size(),
                               step.s_before, step.s_after});
        ++trace.completeness_steps;
        current = std::move(step.set);
        stepped = true;
      }
      if (stepped) break;
    }
    if (!stepped) {
      throw ContradictionError("set is divisor closed and incomplete but no completeness step applies");
    }
  }
  trace.final_set = current;
  return {std::move(current), std::move(trace)};
}

}  // namespace gcdsum
