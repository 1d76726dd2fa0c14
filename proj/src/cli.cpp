#include "gcdsum/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fmt/format.h>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "gcdsum/bounds.hpp"
#include "gcdsum/errors.hpp"
#include "gcdsum/gcd_sum.hpp"
#include "gcdsum/parallel.hpp"
#include "gcdsum/search.hpp"
#include "gcdsum/set_io.hpp"
#include "gcdsum/transforms.hpp"
#include "gcdsum/verify.hpp"
#include "gcdsum/weights.hpp"

namespace gcdsum {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

unsigned default_digits() {
  if (const char* env = std::getenv(kDigitsEnv)) {
    try {
      const long v = std::stol(env);
      if (v >= static_cast<long>(kMinDigits)) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return kCertificationDigits;
}

TailRule parse_tail(const std::string& text) {
  if (text == "constant") return TailRule::constant();
  if (text == "geometric") return TailRule::geometric(0.5);
  if (text.starts_with("geometric:")) {
    try {
      const double r = std::stod(text.substr(10));
      if (r > 0.0 && r < 1.0) return TailRule::geometric(r);
    } catch (const std::exception&) {
    }
  }
  throw UsageError("--tail must be 'constant', 'geometric' or 'geometric:<ratio in (0,1)>'");
}

WeightSequence make_weights(const RunConfig& c) {
  if (c.weights_file) return load_weights_file(*c.weights_file, parse_tail(c.tail));
  const double alpha = c.alpha.value_or(0.5);
  if (!(alpha > 0.0)) throw DomainError("--alpha must be positive");
  return WeightSequence::prime_power(alpha);
}

Json config_json(const RunConfig& c) {
  Json j;
  j["subcommand"] = c.subcommand;
  if (c.weights_file) {
    j["weights_file"] = *c.weights_file;
    j["tail"] = c.tail;
  } else {
    j["alpha"] = c.alpha.value_or(0.5);
  }
  if (c.input) j["input"] = *c.input;
  j["seed"] = c.seed;
  j["digits"] = c.digits;
  j["deterministic"] = c.deterministic;
  // The worker count cannot change results, so deterministic reports leave it out.
  if (!c.deterministic) j["workers"] = c.workers ? c.workers : default_workers();
  const std::string& s = c.subcommand;
  if (s == "search") {
    j["n"] = c.n;
    j["max_index"] = c.max_index;
    j["mode"] = c.mode;
    j["iterations"] = c.iterations;
  } else if (s == "transform") {
    j["mode"] = c.mode;
  } else if (s == "matrix") {
    j["quantity"] = c.quantity;
  } else if (s == "bounds") {
    j["curve"] = c.curve;
    j["n_from"] = c.n_from;
    j["n_to"] = c.n_to;
    j["points"] = c.points;
    if (c.constant) j["constant"] = *c.constant;
    if (c.curve == "theorem2") j["kappa"] = c.kappa;
  } else if (s == "certify") {
    if (c.k) j["k"] = c.k;
    j["constant"] = c.constant.value_or(1.0);
  } else if (s == "cube") {
    j["k"] = c.k;
  } else if (s == "verify") {
    j["suite"] = c.suite;
    j["criteria"] = c.criteria;
  } else if (s == "sum") {
    j["extended"] = c.extended;
  }
  return j;
}

Json report_header(const RunConfig& c) {
  Json j;
  j["schema"] = 1;
  j["command"] = c.subcommand;
  j["config"] = config_json(c);
  return j;
}

double elapsed(const RunConfig& c, Clock::time_point start) {
  if (c.deterministic) return 0.0;
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

Json set_json(const IndexSet& b) {
  Json arr = Json::array();
  for (const MultiIndex& m : b) arr.push_back(m.to_string());
  return arr;
}

std::string num(double v) { return fmt::format("{:.17g}", v); }

IndexSet require_input(const RunConfig& c) {
  if (!c.input) throw UsageError(c.subcommand + " needs a set file");
  return parse_set_file(*c.input);
}

std::string resolved_format(const RunConfig& c) {
  if (!c.format.empty()) return c.format;
  if (c.subcommand == "bounds") return "csv";
  if (c.subcommand == "verify") return "text";
  return "json";
}

void require_format(const RunConfig& c, std::initializer_list<const char*> allowed) {
  const std::string f = resolved_format(c);
  for (const char* a : allowed) {
    if (f == a) return;
  }
  throw UsageError("--format " + f + " is not available for " + c.subcommand);
}

SumOptions sum_options(const RunConfig& c) { return {c.workers}; }

int cmd_sum(const RunConfig& c, std::ostream& out) {
  require_format(c, {"json", "csv"});
  const WeightSequence t = make_weights(c);
  const IndexSet b = require_input(c);
  const auto start = Clock::now();
  const double s = gcd_sum(t, b, sum_options(c));
  std::string extended;
  if (c.extended) {
    PrecisionGuard guard(c.digits);
    extended = gcd_sum_extended(t, b).str(static_cast<std::streamsize>(c.digits));
  }
  const double ms = elapsed(c, start);
  const double gamma = b.empty() ? 0.0 : s / static_cast<double>(b.size());
  if (resolved_format(c) == "csv") {
    out << "n,sum,gamma,elapsed_ms\n" << b.size() << ',' << num(s) << ',' << num(gamma) << ',' << num(ms) << '\n';
    return kExitOk;
  }
  Json j = report_header(c);
  j["weights"] = t.describe();
  j["n"] = b.size();
  j["sum"] = s;
  j["gamma"] = gamma;
  if (c.extended) j["sum_extended"] = extended;
  j["elapsed_ms"] = ms;
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_search(const RunConfig& c, std::ostream& out) {
  require_format(c, {"json"});
  if (c.n == 0 || c.max_index == 0) throw UsageError("search needs --n and --max-index");
  const WeightSequence t = make_weights(c);
  SearchReport r;
  if (c.mode == "exhaustive") {
    r = extremal_sf(t, c.n, c.max_index);
  } else if (c.mode == "heuristic") {
    r = local_search(t, c.n, c.max_index, c.seed, c.iterations);
  } else {
    throw UsageError("--mode must be exhaustive or heuristic");
  }
  Json j = report_header(c);
  j["n"] = r.n;
  j["max_index"] = r.max_index;
  j["weights"] = r.weights;
  j["best"] = r.best;
  j["gamma"] = r.gamma;
  Json maxi = Json::array();
  for (const IndexSet& b : r.maximizers) {
    Json entry;
    entry["members"] = set_json(b);
    entry["complete"] = is_complete(b);
    maxi.push_back(std::move(entry));
  }
  j["maximizers"] = std::move(maxi);
  j["candidates"] = r.candidates;
  j["heuristic"] = r.heuristic;
  j["seed"] = r.seed;
  j["iterations"] = r.iterations;
  j["elapsed_ms"] = c.deterministic ? 0.0 : r.elapsed_ms;
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_transform(const RunConfig& c, std::ostream& out) {
  require_format(c, {"json"});
  const WeightSequence t = make_weights(c);
  const IndexSet b = require_input(c);
  TransformResult r;
  if (c.mode == "closure") {
    r = gal_divisor_closure(t, b);
  } else if (c.mode == "complete") {
    r = normalize_to_complete(t, b);
  } else {
    throw UsageError("--mode must be closure or complete");
  }
  out << report_header(c).dump() << '\n';
  std::size_t step_no = 0;
  for (const TransformStep& s : r.trace.steps) {
    Json line;
    line["step"] = ++step_no;
    line["description"] = s.description;
    line["set_size"] = s.set_size;
    line["S_before"] = s.s_before;
    line["S_after"] = s.s_after;
    out << line.dump() << '\n';
  }
  Json final_line;
  final_line["final"] = true;
  final_line["n"] = r.set.size();
  final_line["S_initial"] = gcd_sum(t, b, sum_options(c));
  final_line["S_final"] = gcd_sum(t, r.set, sum_options(c));
  final_line["completeness_steps"] = r.trace.completeness_steps;
  final_line["divisor_closed"] = is_divisor_closed(r.set);
  final_line["complete"] = is_complete(r.set);
  final_line["set"] = set_json(r.set);
  out << final_line.dump() << '\n';
  return kExitOk;
}

int cmd_matrix(const RunConfig& c, std::ostream& out) {
  require_format(c, {"json"});
  if (c.quantity != "spectral" && c.quantity != "min" && c.quantity != "both") {
    throw UsageError("--quantity must be spectral, min or both");
  }
  const WeightSequence t = make_weights(c);
  const IndexSet b = require_input(c);
  const auto start = Clock::now();
  const GcdMatrix m = gcd_matrix(t, b);
  Json j = report_header(c);
  j["n"] = b.size();
  j["sum_over_n"] = gcd_sum(t, b, sum_options(c)) / static_cast<double>(b.size());
  if (c.quantity != "min") {
    const PowerIterationResult p = power_iteration(m);
    j["spectral_norm"] = p.eigenvalue;
    j["power_iterations"] = p.iterations;
    j["residual"] = p.residual;
  }
  if (c.quantity != "spectral") j["min_eigenvalue"] = min_eigenvalue(m);
  j["max_row_sum"] = m.max_row_sum();
  j["elapsed_ms"] = elapsed(c, start);
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_bounds(const RunConfig& c, std::ostream& out) {
  require_format(c, {"csv", "json"});
  if (c.points == 0) throw UsageError("--points must be positive");
  if (!(c.n_from <= c.n_to)) throw UsageError("--n-from must not exceed --n-to");
  double constant = 0.0;
  if (c.curve == "theorem1") {
    constant = c.constant.value_or(7.0);
  } else if (c.curve == "theorem2") {
    constant = c.constant.value_or(1.0);
  } else if (c.curve == "lower") {
    constant = c.constant.value_or(0.5);
  } else {
    throw UsageError("--curve must be theorem1, theorem2 or lower");
  }
  std::vector<std::pair<double, double>> rows;
  const double a = std::log(c.n_from), bnd = std::log(c.n_to);
  for (std::size_t i = 0; i < c.points; ++i) {
    const double n =
        c.points == 1 ? c.n_from : std::exp(a + (bnd - a) * static_cast<double>(i) / static_cast<double>(c.points - 1));
    double v = 0.0;
    if (c.curve == "theorem1") {
      v = theorem1_rhs(n, constant);
    } else if (c.curve == "theorem2") {
      v = theorem2_rhs(n, constant, c.kappa);
    } else {
      v = lower_bound_rhs(n, constant);
    }
    rows.emplace_back(n, v);
  }
  if (resolved_format(c) == "csv") {
    out << "N,value\n";
    for (const auto& [n, v] : rows) out << num(n) << ',' << num(v) << '\n';
    return kExitOk;
  }
  Json j = report_header(c);
  Json pts = Json::array();
  for (const auto& [n, v] : rows) pts.push_back({{"N", n}, {"value", v}});
  j["points"] = std::move(pts);
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_certify(const RunConfig& c, std::ostream& out) {
  require_format(c, {"json"});
  if (c.input.has_value() == (c.k != 0)) throw UsageError("certify needs exactly one of a set file or --k");
  const WeightSequence t = make_weights(c);
  const IndexSet b = c.k ? cube_construction(c.k) : require_input(c);
  const BoundChainReport r = bound_chain_report(t, b, c.constant.value_or(1.0));
  Json j = report_header(c);
  j["n"] = r.n;
  j["C"] = r.c;
  j["decay"] = r.decay;
  j["closure_size"] = r.closure_size;
  j["gcd_sum"] = r.gcd_sum;
  j["lemma_rhs"] = r.lemma_rhs;
  Json verdicts;
  for (const NamedVerdict& v : r.verdicts) verdicts[v.name] = v.holds;
  j["verdicts"] = std::move(verdicts);
  j["all_exact_hold"] = r.all_hold();
  Json ratios;
  for (const NamedRatio& q : r.ratios) ratios[q.name] = q.value;
  j["ratios"] = std::move(ratios);
  j["j1_size"] = r.j1_size;
  j["j2_size"] = r.j2_size;
  j["j_euler_product"] = r.j_euler_product;
  j["prod2_factor"] = r.prod2_factor;
  j["j2_sum"] = r.j2_sum;
  j["max_f"] = r.max_f;
  j["tail"] = {{"sum", r.tail.sum},
               {"estimate", r.tail.estimate},
               {"scaled_gap", r.tail.scaled_gap},
               {"integral_bound", r.tail.integral_bound},
               {"floor_integral_bound", r.tail.floor_integral_bound}};
  j["prod3_holds"] = r.prod3_holds;
  Json recs = Json::array();
  for (const BetaRecord& rec : r.records) {
    Json e;
    e["beta"] = rec.beta.to_string();
    e["witnesses"] = {rec.witnesses.first, rec.witnesses.second};
    e["i1_size"] = rec.i1_size;
    e["i2_size"] = rec.i2_size;
    e["inner_t"] = rec.inner_t;
    e["cs_first"] = rec.cs_first;
    e["cs_second"] = rec.cs_second;
    e["euler_product"] = rec.euler_product;
    e["w_sum_i2"] = rec.w_sum_i2;
    e["w1_factor"] = rec.w1_factor;
    e["w_bound"] = rec.w_bound;
    recs.push_back(std::move(e));
  }
  j["records"] = std::move(recs);
  out << j.dump(2) << '\n';
  return r.all_hold() ? kExitOk : kExitVerifyFailed;
}

int cmd_cube(const RunConfig& c, std::ostream& out) {
  require_format(c, {"json"});
  if (c.k == 0) throw UsageError("cube needs --k");
  const WeightSequence t = make_weights(c);
  const auto start = Clock::now();
  const IndexSet cube = cube_construction(c.k);
  const double closed = cube_sum_closed_form(t, c.k);
  constexpr unsigned kDirectLimit = 16;
  const bool direct = c.k <= kDirectLimit;
  const double s = direct ? gcd_sum(t, cube, sum_options(c)) : closed;
  Json j = report_header(c);
  j["k"] = c.k;
  j["n"] = cube.size();
  j["sum"] = s;
  j["method"] = direct ? "direct" : "closed_form";
  j["closed_form"] = closed;
  j["gamma"] = s / static_cast<double>(cube.size());
  j["complete"] = is_complete(cube);
  j["elapsed_ms"] = elapsed(c, start);
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  require_format(c, {"text", "json"});
  VerifyOptions o;
  if (c.suite == "quick") {
    o.suite = Suite::Quick;
  } else if (c.suite == "full") {
    o.suite = Suite::Full;
  } else {
    throw UsageError("--suite must be quick or full");
  }
  o.seed = c.seed;
  o.workers = c.workers;
  o.only = c.criteria;
  const bool text = resolved_format(c) == "text";
  const VerifyReport r = run_verify(o, [&](const CriterionResult& res) {
    if (text) out << format_result_line(res) << '\n' << std::flush;
  });
  if (text) {
    out << (r.all_passed() ? "verify: all criteria passed" : "verify: FAILED") << '\n';
  } else {
    Json j = report_header(c);
    Json arr = Json::array();
    for (const CriterionResult& res : r.results) {
      arr.push_back({{"id", res.id},
                     {"title", res.title},
                     {"passed", res.passed},
                     {"detail", res.detail},
                     {"elapsed_ms", c.deterministic ? 0.0 : res.elapsed_ms}});
    }
    j["criteria"] = std::move(arr);
    j["passed"] = r.all_passed();
    out << j.dump(2) << '\n';
  }
  return r.all_passed() ? kExitOk : kExitVerifyFailed;
}

void add_weight_options(CLI::App& sub, RunConfig& c) {
  auto* alpha = sub.add_option("--alpha", c.alpha, "Weights t_j = p_j^-alpha (default 0.5)");
  auto* weights = sub.add_option("--weights", c.weights_file, "File of explicit weights, one per line");
  alpha->excludes(weights);
  sub.add_option("--tail", c.tail, "Tail rule for --weights: constant | geometric[:ratio]")->needs(weights);
}

void add_common_options(CLI::App& sub, RunConfig& c) {
  sub.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
  sub.add_option("-o,--output", c.output, "Write the report to this file");
  sub.add_flag("--deterministic", c.deterministic, "Reproducible output: zero timings, omit worker count");
  sub.add_option("--workers", c.workers, "Worker threads (0 = hardware concurrency)");
  sub.add_option("--digits", c.digits, "Decimal digits for extended-precision certification")
      ->check(CLI::Range(static_cast<unsigned>(kMinDigits), 10000u));
  sub.add_option("--seed", c.seed, "Seed for all randomness");
}

}  // namespace

ParseOutcome parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  c.digits = default_digits();
  CLI::App app{"GCD sums over multi-index sets", "gcdsum"};
  app.require_subcommand(1);

  auto* sum = app.add_subcommand("sum", "S(t,B) for a set file");
  sum->add_option("input", c.input, "Set file")->required();
  sum->add_flag("--extended", c.extended, "Also evaluate the sum at --digits precision");

  auto* search = app.add_subcommand("search", "Extremal square-free downsets");
  search->add_option("--n", c.n, "Set size")->required();
  search->add_option("--max-index,-m", c.max_index, "Largest prime index")->required();
  c.mode = "exhaustive";
  search->add_option("--mode", c.mode, "exhaustive | heuristic");
  search->add_option("--iterations", c.iterations, "Heuristic iterations");

  auto* transform = app.add_subcommand("transform", "Divisor closure or completion with a step trace");
  transform->add_option("input", c.input, "Set file")->required();
  auto* tmode = transform->add_option("--mode", c.mode, "closure | complete")->required();
  tmode->check(CLI::IsMember({"closure", "complete"}));

  auto* matrix = app.add_subcommand("matrix", "Extreme eigenvalues of the GCD matrix");
  matrix->add_option("input", c.input, "Set file")->required();
  matrix->add_option("--quantity", c.quantity, "spectral | min | both");

  auto* bounds = app.add_subcommand("bounds", "Tabulate a bound curve");
  bounds->add_option("--curve", c.curve, "theorem1 | theorem2 | lower");
  bounds->add_option("--n-from", c.n_from, "Smallest N (>= 21)");
  bounds->add_option("--n-to", c.n_to, "Largest N");
  bounds->add_option("--points", c.points, "Number of log-spaced points");
  bounds->add_option("--constant", c.constant, "A, C or c depending on the curve");
  bounds->add_option("--kappa", c.kappa, "kappa for the theorem2 curve");

  auto* certify = app.add_subcommand("certify", "Bound-chain certificate for a complete set");
  certify->add_option("input", c.input, "Set file");
  certify->add_option("--k", c.k, "Use the cube of order k instead of a file");
  certify->add_option("--constant", c.constant, "Decay constant C (default 1)");

  auto* cube = app.add_subcommand("cube", "The cube construction of order k");
  cube->add_option("--k", c.k, "Order, 1..20")->required();

  auto* verify = app.add_subcommand("verify", "Run the numbered property checks");
  verify->add_option("--suite", c.suite, "quick | full")->check(CLI::IsMember({"quick", "full"}));
  verify->add_option("--criteria", c.criteria, "Only these criterion numbers")->delimiter(',');

  for (CLI::App* sub : {sum, search, transform, matrix, bounds, certify, cube, verify}) {
    if (sub != verify && sub != bounds) add_weight_options(*sub, c);
    add_common_options(*sub, c);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return {std::nullopt, code == 0 ? kExitOk : kExitError};
  }
  for (CLI::App* sub : app.get_subcommands()) c.subcommand = sub->get_name();
  return {std::move(c), kExitOk};
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::ostringstream buffer;
  int code = kExitOk;
  try {
    if (config.workers) set_default_workers(config.workers);
    const std::string& s = config.subcommand;
    if (s == "sum") {
      code = cmd_sum(config, buffer);
    } else if (s == "search") {
      code = cmd_search(config, buffer);
    } else if (s == "transform") {
      code = cmd_transform(config, buffer);
    } else if (s == "matrix") {
      code = cmd_matrix(config, buffer);
    } else if (s == "bounds") {
      code = cmd_bounds(config, buffer);
    } else if (s == "certify") {
      code = cmd_certify(config, buffer);
    } else if (s == "cube") {
      code = cmd_cube(config, buffer);
    } else if (s == "verify") {
      // Progress lines stream straight to the terminal.
      const bool stream = !config.output && resolved_format(config) == "text";
      code = cmd_verify(config, stream ? out : buffer);
    } else {
      throw UsageError("unknown subcommand '" + s + "'");
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  if (config.output) {
    std::ofstream file(*config.output, std::ios::binary);
    if (!file) {
      err << "error: cannot write " << *config.output << '\n';
      return kExitError;
    }
    file << buffer.str();
  } else {
    out << buffer.str();
  }
  return code;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const ParseOutcome parsed = parse_args(argc, argv, out, err);
  if (!parsed.config) return parsed.exit_code;
  return run(*parsed.config, out, err);
}

}  // namespace gcdsum
