#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "gcdsum/gcd_sum.hpp"
#include "gcdsum/weights.hpp"

namespace gcdsum {

// One member per line: a positive decimal integer (mapped through its prime
// factorisation) or `mi j:e ...`. Blank lines and lines starting with '#' are
// skipped. Errors are ParseError carrying the 1-based line number.
IndexSet parse_set_text(std::string_view text, const std::string& source = "<input>");
IndexSet parse_set_file(const std::filesystem::path& path);

// One `mi ...` line per member, canonical order.
std::string format_set(const IndexSet& b);

// One real per line, strictly decreasing, in (0, 1).
WeightSequence parse_weights_text(std::string_view text, TailRule tail, const std::string& source = "<input>");
WeightSequence load_weights_file(const std::filesystem::path& path, TailRule tail);

}  // namespace gcdsum
