#include "gcdsum/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fmt/format.h>

#include "gcdsum/bounds.hpp"
#include "gcdsum/errors.hpp"
#include "gcdsum/gcd_sum.hpp"
#include "gcdsum/sampling.hpp"
#include "gcdsum/search.hpp"
#include "gcdsum/transforms.hpp"
#include "gcdsum/weights.hpp"

namespace gcdsum {

namespace {

using Clock = std::chrono::steady_clock;

struct Sizes {
  unsigned cube_identity_max;
  std::size_t extremal_max_n;
  unsigned extremal_max_m;
  std::size_t transform_sets;
  std::size_t sum_bound_sets;
  std::size_t eigen_sets;
  std::size_t integer_sets;
  unsigned rayleigh_cube_max;
  std::size_t rayleigh_sets;
  unsigned sandwich_max;
  unsigned chain_max;
};

constexpr Sizes kQuick{10, 8, 4, 1000, 1000, 100, 100, 8, 20, 12, 7};
constexpr Sizes kFull{14, 10, 5, 10000, 10000, 1000, 1000, 12, 100, 16, 10};

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

class Runner {
 public:
  explicit Runner(const VerifyOptions& o) : opt_(o), size_(o.suite == Suite::Full ? kFull : kQuick) {}

  CriterionResult run(int id) {
    CriterionResult r;
    r.id = id;
    r.title = criterion_title(id);
    const auto start = Clock::now();
    try {
      switch (id) {
        case 1: cube_identity(r); break;
        case 2: extremal_complete(r); break;
        case 3: transform_monotone(r); break;
        case 4: sum_bound(r); break;
        case 5: positive_definite(r); break;
        case 6: integer_consistency(r); break;
        case 7: rayleigh(r); break;
        case 8: bound_sandwich(r); break;
        case 9: large_index_suite(r); break;
        case 10: tail_estimate(r); break;
        case 11: chain_certificate(r); break;
        case 12: eta_omega(r); break;
        default: throw DomainError("no criterion " + std::to_string(id));
      }
    } catch (const DomainError&) {
      throw;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return r;
  }

 private:
  SumOptions sum_opts() const { return {opt_.workers}; }
  std::mt19937_64 rng(int id) const { return substream(opt_.seed, static_cast<std::uint64_t>(id)); }

  void cube_identity(CriterionResult& r) {
    const auto t = WeightSequence::prime_power(0.5);
    double worst = 0.0, last_ms = 0.0;
    for (unsigned k = 1; k <= size_.cube_identity_max; ++k) {
      const IndexSet cube = cube_construction(k);
      const auto start = Clock::now();
      const double s = gcd_sum(t, cube, sum_opts());
      last_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
      worst = std::max(worst, rel_err(s, cube_sum_closed_form(t, k)));
    }
    r.passed = worst <= 1e-10 && last_ms < 120000.0;
    r.detail = fmt::format("k=1..{}: max rel err {:.2e}; k={} took {:.0f} ms", size_.cube_identity_max, worst,
                           size_.cube_identity_max, last_ms);
  }

  void extremal_complete(CriterionResult& r) {
    std::size_t searches = 0, maximizers = 0, bad = 0;
    std::string first_bad;
    for (double alpha : {0.5, 0.8, 1.0}) {
      const auto t = WeightSequence::prime_power(alpha);
      for (unsigned m = 1; m <= size_.extremal_max_m; ++m) {
        for (std::size_t n = 1; n <= size_.extremal_max_n && n <= (std::size_t{1} << m); ++n) {
          const SearchReport rep = extremal_sf(t, n, m);
          ++searches;
          for (const IndexSet& b : rep.maximizers) {
            ++maximizers;
            if (!is_complete(b)) {
              if (!bad++) first_bad = fmt::format("alpha={} m={} N={}", alpha, m, n);
            } else {
              complete_sets_.push_back(b);
            }
          }
        }
      }
    }
    r.passed = bad == 0;
    r.detail = fmt::format("{} searches, {} maximizers, {} incomplete{}", searches, maximizers, bad,
                           bad ? " (first: " + first_bad + ")" : "");
    have_extremal_ = true;
  }

  void transform_monotone(CriterionResult& r) {
    const auto t = WeightSequence::prime_power(0.5);
    auto gen = rng(3);
    std::size_t closure_bad = 0, steps = 0, step_bad = 0, escalated = 0;
    for (std::size_t s = 0; s < size_.transform_sets; ++s) {
      const IndexSet b = random_square_free_set(gen, 12, 8);
      const TransformResult closed = gal_divisor_closure(t, b);
      const double before = gcd_sum(t, b), after = gcd_sum(t, closed.set);
      if (after < before - 1e-12) ++closure_bad;
      const Index top = std::max<Index>(closed.set.max_index(), 1);
      for (Index j = 2; j <= top; ++j) {
        for (Index i = 1; i < j; ++i) {
          if (partition_b1234(closed.set, i, j).b0.empty()) continue;
          const StepResult step = completeness_step(t, closed.set, i, j);
          ++steps;
          if (step.certified_extended) ++escalated;
          if (!step.strict) ++step_bad;
        }
      }
      complete_sets_.push_back(normalize_to_complete(t, b).set);
    }
    have_transforms_ = true;
    r.passed = closure_bad == 0 && step_bad == 0;
    r.detail = fmt::format("{} sets: {} closure decreases; {} steps, {} not strict, {} re-certified at {} digits",
                           size_.transform_sets, closure_bad, steps, step_bad, escalated, kCertificationDigits);
  }

  void sum_bound(CriterionResult& r) {
    auto gen = rng(4);
    const WeightSequence weights[] = {WeightSequence::prime_power(0.5), WeightSequence::prime_power(1.0)};
    std::size_t bad = 0;
    double worst = 0.0;
    for (std::size_t s = 0; s < size_.sum_bound_sets; ++s) {
      const IndexSet b = s % 2 ? random_set(gen, 12, 6, 3) : random_square_free_set(gen, 12, 8);
      const LemmaSumBound lb = lemma_sum_bound(weights[(s / 2) % 2], b);
      if (!lb.holds) ++bad;
      worst = std::max(worst, lb.lhs / lb.rhs);
    }
    r.passed = bad == 0;
    r.detail = fmt::format("{} sets, {} violations, max S/RHS = {:.6f}", size_.sum_bound_sets, bad, worst);
  }

  void positive_definite(CriterionResult& r) {
    auto gen = rng(5);
    std::size_t bad = 0, tested = 0;
    double smallest = INFINITY;
    for (double alpha : {0.5, 1.0}) {
      const auto t = WeightSequence::prime_power(alpha);
      for (std::size_t s = 0; s < size_.eigen_sets; ++s) {
        const IndexSet b = s % 2 ? random_set(gen, 40, 6, 3) : random_square_free_set(gen, 40, 8);
        const double lo = min_eigenvalue(gcd_matrix(t, b));
        ++tested;
        smallest = std::min(smallest, lo);
        if (!(lo > 0.0)) ++bad;
      }
    }
    r.passed = bad == 0;
    r.detail = fmt::format("{} matrices, {} not positive definite, smallest eigenvalue {:.3e}", tested, bad, smallest);
  }

  void integer_consistency(CriterionResult& r) {
    auto gen = rng(6);
    std::size_t bad = 0, tested = 0;
    double worst = 0.0;
    for (double alpha : {0.5, 0.7, 1.0}) {
      const auto t = WeightSequence::prime_power(alpha);
      for (std::size_t s = 0; s < size_.integer_sets; ++s) {
        const auto ns = random_integer_set(gen, 30, 1000000);
        const double direct = gcd_sum_integers(ns, alpha);
        const double lattice = gcd_sum(t, IndexSet::from_integers(ns), sum_opts());
        const double e = rel_err(lattice, direct);
        worst = std::max(worst, e);
        ++tested;
        if (e > 1e-10) ++bad;
      }
    }
    r.passed = bad == 0;
    r.detail = fmt::format("{} sets, {} disagreements, max rel err {:.2e}", tested, bad, worst);
  }

  void rayleigh(CriterionResult& r) {
    std::size_t bad = 0, tested = 0;
    double worst_kron = 0.0;
    auto check = [&](const WeightSequence& t, const IndexSet& b) {
      const GcdMatrix m = gcd_matrix(t, b);
      const double lam = spectral_norm(m);
      const double s = gcd_sum(t, b, sum_opts());
      const double lo = s / static_cast<double>(b.size());
      const double hi = m.max_row_sum();
      ++tested;
      if (lo > lam * (1.0 + 1e-12) || lam > hi * (1.0 + 1e-12)) ++bad;
      return lam;
    };
    const auto half = WeightSequence::prime_power(0.5);
    for (unsigned k = 1; k <= size_.rayleigh_cube_max; ++k) {
      const double lam = check(half, cube_construction(k));
      double kron = 1.0;
      for (Index j = 1; j <= k; ++j) kron *= 1.0 + half.at(j);
      const double e = rel_err(lam, kron);
      worst_kron = std::max(worst_kron, e);
      if (e > 1e-8) ++bad;
    }
    auto gen = rng(7);
    for (std::size_t s = 0; s < size_.rayleigh_sets; ++s) {
      const auto t = WeightSequence::prime_power(s % 2 ? 1.0 : 0.5);
      check(t, s % 3 ? random_set(gen, 200, 8, 2) : random_square_free_set(gen, 200, 10));
    }
    r.passed = bad == 0;
    r.detail = fmt::format("{} sandwiches, {} failures, cube k<={} Kronecker rel err {:.2e}", tested, bad,
                           size_.rayleigh_cube_max, worst_kron);
  }

  void bound_sandwich(CriterionResult& r) {
    const auto t = WeightSequence::prime_power(0.5);
    std::size_t bad = 0;
    double min_low = INFINITY, max_up = 0.0;
    for (unsigned k = 8; k <= size_.sandwich_max; ++k) {
      const double n = std::ldexp(1.0, static_cast<int>(k));
      const double s = gcd_sum(t, cube_construction(k), sum_opts());
      const double low = n * lower_bound_rhs(n, 0.5), up = n * theorem1_rhs(n, 7.0);
      min_low = std::min(min_low, s / low);
      max_up = std::max(max_up, s / up);
      if (!(low <= s && s <= up)) ++bad;
    }
    r.passed = bad == 0;
    r.detail = fmt::format("k=8..{}: {} failures, min S/lower {:.3f}, max S/upper {:.3e}", size_.sandwich_max, bad,
                           min_low, max_up);
  }

  void large_index_suite(CriterionResult& r) {
    if (!have_extremal_) discard(2);
    if (!have_transforms_) discard(3);
    std::size_t members = 0, bad = 0;
    double min_slack = INFINITY;
    for (const IndexSet& b : complete_sets_) {
      for (const MultiIndex& beta : b) {
        const Lemma3Check c = lemma3_check(b, beta, b.size());
        ++members;
        min_slack = std::min(min_slack, c.slack);
        if (!c.holds) ++bad;
      }
    }
    r.passed = bad == 0 && members > 0;
    r.detail = fmt::format("{} complete sets, {} members, {} failures, min slack {:.4f}", complete_sets_.size(),
                           members, bad, min_slack);
  }

  void tail_estimate(CriterionResult& r) {
    double worst = 0.0;
    std::string parts;
    for (double n : {1e4, 1e6, 1e9, 1e12}) {
      const TailSum ts = tail_sum(n);
      worst = std::max(worst, ts.scaled_gap);
      parts += fmt::format(" {:.0e}:{:.3f}", n, ts.scaled_gap);
    }
    r.passed = worst <= 4.0;
    r.detail = "scaled gaps" + parts;
  }

  void chain_certificate(CriterionResult& r) {
    std::size_t reports = 0, failed = 0;
    std::string failures;
    for (double alpha : {0.5, 1.0}) {
      const auto t = WeightSequence::prime_power(alpha);
      for (unsigned k = 5; k <= size_.chain_max; ++k) {
        const BoundChainReport rep = bound_chain_report(t, cube_construction(k), 1.0);
        ++reports;
        for (const NamedVerdict& v : rep.verdicts) {
          if (!v.holds) {
            ++failed;
            failures += fmt::format(" {}@k={},alpha={}", v.name, k, alpha);
          }
        }
      }
    }
    r.passed = failed == 0;
    r.detail = fmt::format("{} reports, {} false verdicts{}", reports, failed, failures);
  }

  void eta_omega(CriterionResult& r) {
    const auto t = WeightSequence::prime_power(0.5);
    const WeightSequence e = eta(t);
    const double expect[] = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(3.0), 2.0 / std::sqrt(5.0), 2.0 / std::sqrt(7.0)};
    double worst = 0.0;
    for (Index j = 1; j <= 4; ++j) worst = std::max(worst, std::abs(e.at(j) - expect[j - 1]));
    const std::size_t w = omega(t);
    r.passed = worst <= 1e-15 && w == 2;
    r.detail = fmt::format("max abs err {:.1e}, omega = {}", worst, w);
  }

  void discard(int id) {
    CriterionResult scratch;
    id == 2 ? extremal_complete(scratch) : transform_monotone(scratch);
  }

  VerifyOptions opt_;
  Sizes size_;
  std::vector<IndexSet> complete_sets_;
  bool have_extremal_ = false;
  bool have_transforms_ = false;
};

}  // namespace

bool VerifyReport::all_passed() const {
  return std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.passed; });
}

std::string criterion_title(int id) {
  static const char* const titles[] = {
      "cube product identity",       "extremal sets are complete", "transform monotonicity",
      "sum bound over lcm closure",  "positive definiteness",      "integer/multi-index consistency",
      "Rayleigh sandwich",           "cube bound sandwich",        "large-index bound on complete sets",
      "tail sum estimate",           "bound-chain certificate",    "eta and omega values",
  };
  if (id < 1 || id > kCriterionCount) throw DomainError("no criterion " + std::to_string(id));
  return titles[id - 1];
}

VerifyReport run_verify(const VerifyOptions& options, const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<int> ids = options.only;
  if (ids.empty()) {
    for (int id = 1; id <= kCriterionCount; ++id) ids.push_back(id);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  for (int id : ids) criterion_title(id);

  Runner runner(options);
  VerifyReport report;
  for (int id : ids) {
    report.results.push_back(runner.run(id));
    if (on_result) on_result(report.results.back());
  }
  return report;
}

std::string format_result_line(const CriterionResult& r) {
  return fmt::format("{} {:>2} {}: {}", r.passed ? "PASS" : "FAIL", r.id, r.title, r.detail);
}

}  // namespace gcdsum
