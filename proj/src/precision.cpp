#include "gcdsum/precision.hpp"

#include <algorithm>

namespace gcdsum {

namespace {
std::recursive_mutex& precision_mutex() {
  static std::recursive_mutex m;
  return m;
}
}  // namespace

PrecisionGuard::PrecisionGuard(unsigned digits)
    : lock_(precision_mutex()),
      previous_(ExtendedReal::default_precision()),
      digits_(std::max(digits, kMinDigits)) {
  ExtendedReal::default_precision(digits_);
}

PrecisionGuard::~PrecisionGuard() { ExtendedReal::default_precision(previous_); }

}  // namespace gcdsum
