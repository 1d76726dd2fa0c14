#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace gcdsum {

enum class Suite { Quick, Full };

inline constexpr int kCriterionCount = 12;

struct VerifyOptions {
  Suite suite = Suite::Quick;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  std::vector<int> only;  // empty = all criteria
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double elapsed_ms = 0.0;
};

struct VerifyReport {
  std::vector<CriterionResult> results;
  bool all_passed() const;
};

std::string criterion_title(int id);

// Runs the numbered checks in ascending order; `on_result` sees each result as it completes.
VerifyReport run_verify(const VerifyOptions& options,
                        const std::function<void(const CriterionResult&)>& on_result = {});

// "PASS  3  transform monotonicity: ..." style single line.
std::string format_result_line(const CriterionResult& r);

}  // namespace gcdsum
