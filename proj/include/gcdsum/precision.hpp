#pragma once

#include <mutex>

#include <boost/multiprecision/mpfr.hpp>

namespace gcdsum {

using ExtendedReal = boost::multiprecision::mpfr_float;

inline constexpr unsigned kMinDigits = 15;
inline constexpr unsigned kCertificationDigits = 50;

// Sets the working precision (decimal digits) of ExtendedReal for the
// lifetime of the guard. MPFR's default precision is process-global, so
// guards serialise on a shared mutex.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned digits);
  ~PrecisionGuard();

  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

  unsigned digits() const noexcept { return digits_; }

 private:
  std::unique_lock<std::recursive_mutex> lock_;
  unsigned previous_;
  unsigned digits_;
};

}  // namespace gcdsum
