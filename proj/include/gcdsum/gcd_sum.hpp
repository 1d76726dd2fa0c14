#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "gcdsum/multi_index.hpp"
#include "gcdsum/precision.hpp"
#include "gcdsum/weights.hpp"

namespace gcdsum {

// A finite set B of distinct multi-indices, held in canonical order.
class IndexSet {
 public:
  IndexSet() = default;
  // Sorts into canonical order. Throws DomainError on a repeated member.
  explicit IndexSet(std::vector<MultiIndex> members);
  IndexSet(std::initializer_list<MultiIndex> members);

  static IndexSet from_integers(std::span<const std::uint64_t> ns);

  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  const MultiIndex& operator[](std::size_t k) const { return members_[k]; }
  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }
  const std::vector<MultiIndex>& members() const noexcept { return members_; }

  bool contains(const MultiIndex& m) const;
  bool is_square_free() const;
  Index max_index() const;
  std::size_t max_support() const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<MultiIndex> members_;
};

namespace detail {
class PairKernel;
}

struct SumOptions {
  unsigned workers = 0;  // 0 = default_workers()
};

// S(t,B) = sum_{k,l} t^{|beta_k - beta_l|}, diagonal included.
//
// Rows are summed independently (blocked, with compensated accumulation of
// the blocks) and combined in row order, so the value does not depend on the
// worker count.
double gcd_sum(const WeightSequence& t, const IndexSet& b, const SumOptions& options = {});
// Same sum carried out in the precision of the active PrecisionGuard.
ExtendedReal gcd_sum_extended(const WeightSequence& t, const IndexSet& b);

// sum_{k,l} gcd(n_k,n_l)^{2 alpha} / (n_k n_l)^alpha. Throws DomainError on 0 or duplicates.
double gcd_sum_integers(std::span<const std::uint64_t> ns, double alpha);

// B* = { lcm(beta_k, beta_l) }.
IndexSet lcm_closure(const IndexSet& b);

struct LemmaSumBound {
  double lhs;  // S(t,B)
  double rhs;  // sum over B* of (sum_{beta_k <= beta} t^{beta - beta_k})^2
  bool holds;  // lhs <= rhs (1 + 1e-12)
};
LemmaSumBound lemma_sum_bound(const WeightSequence& t, const IndexSet& b);

// Symmetric matrix (t^{|beta_k - beta_l|}). Stored densely up to
// kDenseMatrixLimit rows; larger matrices recompute entries on the fly.
class GcdMatrix {
 public:
  static constexpr std::size_t kDenseMatrixLimit = 4096;

  GcdMatrix(const WeightSequence& t, const IndexSet& b);
  ~GcdMatrix();
  GcdMatrix(const GcdMatrix&);
  GcdMatrix& operator=(const GcdMatrix&);
  GcdMatrix(GcdMatrix&&) noexcept;
  GcdMatrix& operator=(GcdMatrix&&) noexcept;

  // Only for tests and small hand-built examples; must be symmetric.
  static GcdMatrix from_dense(std::size_t order, std::vector<double> entries);

  std::size_t order() const noexcept { return order_; }
  bool is_dense() const noexcept { return !dense_.empty(); }
  double operator()(std::size_t k, std::size_t l) const;
  void multiply(std::span<const double> x, std::span<double> y) const;
  double max_row_sum() const;
  std::vector<double> to_dense() const;

 private:
  GcdMatrix() = default;

  std::size_t order_ = 0;
  std::vector<double> dense_;
  std::shared_ptr<const detail::PairKernel> kernel_;
};

GcdMatrix gcd_matrix(const WeightSequence& t, const IndexSet& b);

struct PowerIterationResult {
  double eigenvalue;
  std::size_t iterations;
  double residual;  // ||M x - lambda x|| for the final unit iterate
};

// Largest eigenvalue by power iteration from the all-ones vector; stops when
// successive Rayleigh quotients differ by less than tol * current.
PowerIterationResult power_iteration(const GcdMatrix& m, double tol = 1e-13,
                                     std::size_t max_iterations = 200000);
double spectral_norm(const GcdMatrix& m, double tol = 1e-13);

// Smallest eigenvalue: dense symmetric eigensolve for order <= 200, shifted
// power iteration above that.
double min_eigenvalue(const GcdMatrix& m);
double min_eigenvalue_shifted(const GcdMatrix& m, double tol = 1e-13,
                              std::size_t max_iterations = 500000);
double min_eigenvalue_dense(const GcdMatrix& m);

struct SupportBlock {
  MultiIndex representative;  // square-free indicator of the common support
  IndexSet block;
};
// Partition of B by support, in canonical order of the representatives.
std::vector<SupportBlock> group_by_support(const IndexSet& b);

// sum_{k,l} sqrt(sizes_k sizes_l) u^{|beta_k - beta_l|}.
double weighted_sf_form(const WeightSequence& u, const IndexSet& reps,
                        std::span<const std::size_t> sizes);

// prod_{j <= k} (2 + 2 t_j): S(t, cube(k)) in closed form.
double cube_sum_closed_form(const WeightSequence& t, unsigned k);

// Diagnostics reported but never asserted.
// S(u,B) / weighted_sf_form(u, grouped representatives, block sizes).
double grouping_ratio(const WeightSequence& u, const IndexSet& b);
// Lambda / (log N * S/N) for one set, N >= 2.
double lambda_gamma_ratio(const WeightSequence& t, const IndexSet& b);

}  // namespace gcdsum
