#include "gcdsum/gcd_sum.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <unordered_set>

#include "gcdsum/compensated.hpp"
#include "gcdsum/errors.hpp"
#include "gcdsum/parallel.hpp"
#include "pair_kernel.hpp"

namespace gcdsum {

// ---------------------------------------------------------------------------
// IndexSet

IndexSet::IndexSet(std::vector<MultiIndex> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  auto dup = std::adjacent_find(members_.begin(), members_.end());
  if (dup != members_.end()) throw DomainError("repeated member " + dup->to_string());
}

IndexSet::IndexSet(std::initializer_list<MultiIndex> members)
    : IndexSet(std::vector<MultiIndex>(members)) {}

IndexSet IndexSet::from_integers(std::span<const std::uint64_t> ns) {
  std::vector<MultiIndex> members;
  members.reserve(ns.size());
  for (std::uint64_t n : ns) members.push_back(from_integer(n));
  return IndexSet(std::move(members));
}

bool IndexSet::contains(const MultiIndex& m) const {
  return std::binary_search(members_.begin(), members_.end(), m);
}

bool IndexSet::is_square_free() const {
  return std::all_of(members_.begin(), members_.end(),
                     [](const MultiIndex& m) { return gcdsum::is_square_free(m); });
}

Index IndexSet::max_index() const {
  Index r = 0;
  for (const MultiIndex& m : members_) r = std::max(r, m.max_index());
  return r;
}

std::size_t IndexSet::max_support() const {
  std::size_t r = 0;
  for (const MultiIndex& m : members_) r = std::max(r, m.support_size());
  return r;
}

// ---------------------------------------------------------------------------
// Sums

double gcd_sum(const WeightSequence& t, const IndexSet& b, const SumOptions& options) {
  if (b.empty()) return 0.0;
  const detail::PairKernel kernel(t, b);
  const std::size_t n = b.size();
  std::vector<double> rows(n, 0.0);
  parallel_for(n, options.workers, [&](std::size_t k) { rows[k] = kernel.upper_row_sum(k); });
  CompensatedSum off;
  for (double r : rows) off.add(r);
  return static_cast<double>(n) + 2.0 * off.value();
}

ExtendedReal gcd_sum_extended(const WeightSequence& t, const IndexSet& b) {
  ExtendedReal s(0);
  for (std::size_t k = 0; k < b.size(); ++k) {
    s += 1;
    for (std::size_t l = k + 1; l < b.size(); ++l) s += 2 * power_extended(t, abs_diff(b[k], b[l]));
  }
  return s;
}

double gcd_sum_integers(std::span<const std::uint64_t> ns, double alpha) {
  std::vector<std::uint64_t> sorted(ns.begin(), ns.end());
  std::sort(sorted.begin(), sorted.end());
  if (!sorted.empty() && sorted.front() == 0) throw DomainError("integers must be positive");
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw DomainError("integers must be distinct");
  }
  CompensatedSum off;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    for (std::size_t l = k + 1; l < ns.size(); ++l) {
      const auto g = static_cast<double>(std::gcd(ns[k], ns[l]));
      const double ratio = (g / static_cast<double>(ns[k])) * (g / static_cast<double>(ns[l]));
      off.add(std::pow(ratio, alpha));
    }
  }
  return static_cast<double>(ns.size()) + 2.0 * off.value();
}

IndexSet lcm_closure(const IndexSet& b) {
  std::unordered_set<MultiIndex, MultiIndexHash> seen;
  seen.reserve(b.size() * (b.size() + 1) / 2);
  for (std::size_t k = 0; k < b.size(); ++k) {
    for (std::size_t l = k; l < b.size(); ++l) seen.insert(lcm(b[k], b[l]));
  }
  return IndexSet(std::vector<MultiIndex>(seen.begin(), seen.end()));
}

LemmaSumBound lemma_sum_bound(const WeightSequence& t, const IndexSet& b) {
  const IndexSet star = lcm_closure(b);
  CompensatedSum rhs;
  for (const MultiIndex& beta : star) {
    CompensatedSum inner;
    for (const MultiIndex& bk : b) {
      if (leq(bk, beta)) inner.add(power(t, beta - bk));
    }
    const double v = inner.value();
    rhs.add(v * v);
  }
  LemmaSumBound out{};
  out.lhs = gcd_sum(t, b);
  out.rhs = rhs.value();
  out.holds = out.lhs <= out.rhs * (1.0 + 1e-12);
  return out;
}

// ---------------------------------------------------------------------------
// Matrices

GcdMatrix::GcdMatrix(const WeightSequence& t, const IndexSet& b)
    : order_(b.size()), kernel_(std::make_shared<const detail::PairKernel>(t, b)) {
  if (order_ <= kDenseMatrixLimit) {
    dense_.assign(order_ * order_, 0.0);
    for (std::size_t k = 0; k < order_; ++k) {
      dense_[k * order_ + k] = 1.0;
      for (std::size_t l = k + 1; l < order_; ++l) {
        const double v = kernel_->term(k, l);
        dense_[k * order_ + l] = v;
        dense_[l * order_ + k] = v;
      }
    }
  }
}

GcdMatrix::~GcdMatrix() = default;
GcdMatrix::GcdMatrix(const GcdMatrix&) = default;
GcdMatrix& GcdMatrix::operator=(const GcdMatrix&) = default;
GcdMatrix::GcdMatrix(GcdMatrix&&) noexcept = default;
GcdMatrix& GcdMatrix::operator=(GcdMatrix&&) noexcept = default;

GcdMatrix GcdMatrix::from_dense(std::size_t order, std::vector<double> entries) {
  if (entries.size() != order * order) throw DomainError("dense matrix has the wrong number of entries");
  for (std::size_t k = 0; k < order; ++k) {
    for (std::size_t l = 0; l < k; ++l) {
      if (entries[k * order + l] != entries[l * order + k]) throw DomainError("matrix is not symmetric");
    }
  }
  GcdMatrix m;
  m.order_ = order;
  m.dense_ = std::move(entries);
  return m;
}

double GcdMatrix::operator()(std::size_t k, std::size_t l) const {
  if (!dense_.empty()) return dense_[k * order_ + l];
  return kernel_->term(k, l);
}

void GcdMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != order_ || y.size() != order_) throw DomainError("vector length does not match matrix order");
  if (!dense_.empty()) {
    parallel_for(order_, 0, [&](std::size_t k) {
      const double* row = dense_.data() + k * order_;
      y[k] = detail::blocked_sum(0, order_, [&](std::size_t l) { return row[l] * x[l]; });
    });
    return;
  }
  parallel_for(order_, 0, [&](std::size_t k) { y[k] = kernel_->row_dot(k, x); });
}

double GcdMatrix::max_row_sum() const {
  std::vector<double> rows(order_);
  if (!dense_.empty()) {
    for (std::size_t k = 0; k < order_; ++k) {
      const double* row = dense_.data() + k * order_;
      rows[k] = detail::blocked_sum(0, order_, [&](std::size_t l) { return std::fabs(row[l]); });
    }
  } else {
    parallel_for(order_, 0, [&](std::size_t k) { rows[k] = kernel_->row_sum(k); });
  }
  return rows.empty() ? 0.0 : *std::max_element(rows.begin(), rows.end());
}

std::vector<double> GcdMatrix::to_dense() const {
  if (!dense_.empty()) return dense_;
  std::vector<double> out(order_ * order_);
  for (std::size_t k = 0; k < order_; ++k) {
    for (std::size_t l = 0; l < order_; ++l) out[k * order_ + l] = (*this)(k, l);
  }
  return out;
}

GcdMatrix gcd_matrix(const WeightSequence& t, const IndexSet& b) { return GcdMatrix(t, b); }

namespace {

double norm2(std::span<const double> v) {
  CompensatedSum s;
  for (double x : v) s.add(x * x);
  return std::sqrt(s.value());
}

double dot(std::span<const double> a, std::span<const double> b) {
  CompensatedSum s;
  for (std::size_t i = 0; i < a.size(); ++i) s.add(a[i] * b[i]);
  return s.value();
}

// Power iteration for y = apply(x) started from x0.
template <typename Apply>
PowerIterationResult power_iterate(std::size_t n, std::vector<double> x, Apply&& apply, double tol,
                                   std::size_t max_iterations, const char* what) {
  const double nx = norm2(x);
  for (double& v : x) v /= nx;
  std::vector<double> y(n);
  double lambda = 0.0;
  double residual = 0.0;
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    apply(x, y);
    const double next = dot(x, y);
    CompensatedSum r;
    for (std::size_t i = 0; i < n; ++i) r.add((y[i] - next * x[i]) * (y[i] - next * x[i]));
    residual = std::sqrt(r.value());
    const bool converged = it > 1 && std::fabs(next - lambda) < tol * std::fabs(next);
    lambda = next;
    if (converged || residual == 0.0) return {lambda, it, residual};
    const double ny = norm2(y);
    if (ny == 0.0) return {0.0, it, 0.0};
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / ny;
  }
  throw ConvergenceError(std::string(what) + " did not converge", lambda, residual, max_iterations, x);
}

}  // namespace

PowerIterationResult power_iteration(const GcdMatrix& m, double tol, std::size_t max_iterations) {
  const std::size_t n = m.order();
  if (n == 0) throw DomainError("empty matrix");
  return power_iterate(
      n, std::vector<double>(n, 1.0),
      [&](std::span<const double> x, std::span<double> y) { m.multiply(x, y); }, tol, max_iterations,
      "power iteration");
}

double spectral_norm(const GcdMatrix& m, double tol) { return power_iteration(m, tol).eigenvalue; }

double min_eigenvalue_dense(const GcdMatrix& m) {
  const std::size_t n = m.order();
  if (n == 0) throw DomainError("empty matrix");
  const std::vector<double> entries = m.to_dense();
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> a(
      entries.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("symmetric eigensolver failed", 0.0, 0.0, 0, {});
  }
  return solver.eigenvalues().minCoeff();
}

double min_eigenvalue_shifted(const GcdMatrix& m, double tol, std::size_t max_iterations) {
  const std::size_t n = m.order();
  if (n == 0) throw DomainError("empty matrix");
  const double sigma = spectral_norm(m);
  // Deterministic start vector with no special alignment to the Perron vector.
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> x0(n);
  for (double& v : x0) v = dist(rng);
  std::vector<double> tmp(n);
  const auto result = power_iterate(
      n, std::move(x0),
      [&](std::span<const double> x, std::span<double> y) {
        m.multiply(x, tmp);
        for (std::size_t i = 0; i < n; ++i) y[i] = sigma * x[i] - tmp[i];
      },
      tol, max_iterations, "shifted power iteration");
  return sigma - result.eigenvalue;
}

double min_eigenvalue(const GcdMatrix& m) {
  if (m.order() <= 200) return min_eigenvalue_dense(m);
  return min_eigenvalue_shifted(m);
}

// ---------------------------------------------------------------------------
// Support grouping

std::vector<SupportBlock> group_by_support(const IndexSet& b) {
  std::map<MultiIndex, std::vector<MultiIndex>> groups;
  for (const MultiIndex& m : b) groups[support_indicator(m)].push_back(m);
  std::vector<SupportBlock> out;
  out.reserve(groups.size());
  for (auto& [rep, members] : groups) out.push_back({rep, IndexSet(std::move(members))});
  return out;
}

double weighted_sf_form(const WeightSequence& u, const IndexSet& reps, std::span<const std::size_t> sizes) {
  if (reps.size() != sizes.size()) throw DomainError("one size per representative required");
  CompensatedSum s;
  for (std::size_t k = 0; k < reps.size(); ++k) {
    s.add(static_cast<double>(sizes[k]));
    for (std::size_t l = k + 1; l < reps.size(); ++l) {
      const double w = std::sqrt(static_cast<double>(sizes[k]) * static_cast<double>(sizes[l]));
      s.add(2.0 * w * power(u, abs_diff(reps[k], reps[l])));
    }
  }
  return s.value();
}

double cube_sum_closed_form(const WeightSequence& t, unsigned k) {
  if (k == 0) throw DomainError("cube order k must be at least 1");
  double r = 1.0;
  for (Index j = 1; j <= k; ++j) r *= 2.0 + 2.0 * t.at(j);
  return r;
}

double grouping_ratio(const WeightSequence& u, const IndexSet& b) {
  const auto blocks = group_by_support(b);
  std::vector<MultiIndex> reps;
  std::vector<std::size_t> sizes;
  for (const SupportBlock& blk : blocks) {
    reps.push_back(blk.representative);
    sizes.push_back(blk.block.size());
  }
  // group_by_support already yields representatives in canonical order.
  return gcd_sum(u, b) / weighted_sf_form(u, IndexSet(std::move(reps)), sizes);
}

double lambda_gamma_ratio(const WeightSequence& t, const IndexSet& b) {
  if (b.size() < 2) throw DomainError("lambda_gamma_ratio needs N >= 2");
  const double n = static_cast<double>(b.size());
  const double gamma = gcd_sum(t, b) / n;
  return spectral_norm(gcd_matrix(t, b)) / (std::log(n) * gamma);
}

}  // namespace gcdsum
