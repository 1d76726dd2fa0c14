#include "gcdsum/set_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "gcdsum/errors.hpp"

namespace gcdsum {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    ++line_no;
    const std::string_view body = trim(line);
    if (!body.empty() && body.front() != '#') f(line_no, body);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
}

}  // namespace

IndexSet parse_set_text(std::string_view text, const std::string& source) {
  std::vector<MultiIndex> members;
  std::unordered_map<MultiIndex, std::size_t, MultiIndexHash> seen;
  for_each_line(text, [&](std::size_t line_no, std::string_view body) {
    MultiIndex m;
    try {
      if (body.starts_with("mi")) {
        m = MultiIndex::parse(body);
      } else {
        std::uint64_t n = 0;
        const auto r = std::from_chars(body.data(), body.data() + body.size(), n);
        if (r.ec == std::errc::result_out_of_range) throw RangeError("integer exceeds 64 bits");
        if (r.ec != std::errc{} || r.ptr != body.data() + body.size()) {
          throw DomainError("expected a positive integer or an 'mi' line");
        }
        if (n == 0) throw DomainError("0 has no factorisation");
        m = from_integer(n);
      }
    } catch (const std::exception& e) {
      throw ParseError(source, line_no, e.what());
    }
    const auto [it, inserted] = seen.emplace(m, line_no);
    if (!inserted) {
      throw ParseError(source, line_no,
                       "duplicate member " + m.to_string() + " (first at line " + std::to_string(it->second) + ")");
    }
    members.push_back(std::move(m));
  });
  return IndexSet(std::move(members));
}

IndexSet parse_set_file(const std::filesystem::path& path) { return parse_set_text(read_file(path), path.string()); }

std::string format_set(const IndexSet& b) {
  std::string out;
  for (const MultiIndex& m : b) {
    out += m.to_string();
    out += '\n';
  }
  return out;
}

WeightSequence parse_weights_text(std::string_view text, TailRule tail, const std::string& source) {
  std::vector<double> values;
  std::size_t last_line = 0;
  for_each_line(text, [&](std::size_t line_no, std::string_view body) {
    double v = 0.0;
    const auto r = std::from_chars(body.data(), body.data() + body.size(), v);
    if (r.ec != std::errc{} || r.ptr != body.data() + body.size()) {
      throw ParseError(source, line_no, "expected a real number");
    }
    if (!(v > 0.0 && v < 1.0)) throw ParseError(source, line_no, "weight must lie in (0, 1)");
    if (!values.empty() && !(v < values.back())) {
      throw ParseError(source, line_no, "weights must be strictly decreasing");
    }
    values.push_back(v);
    last_line = line_no;
  });
  if (values.empty()) throw ParseError(source, last_line, "no weights");
  return WeightSequence::explicit_list(std::move(values), tail);
}

WeightSequence load_weights_file(const std::filesystem::path& path, TailRule tail) {
  return parse_weights_text(read_file(path), tail, path.string());
}

}  // namespace gcdsum
