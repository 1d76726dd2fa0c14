#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "gcdsum/cli.hpp"

using namespace gcdsum;
using Json = nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gcdsum");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const char* name) { return std::string(GCDSUM_TEST_DATA) + "/" + name; }

}  // namespace

TEST_CASE("sum report") {
  const Outcome r = cli({"sum", "--alpha", "0.5", data("one_two_three.txt")});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["n"] == 3);
  CHECK(j["sum"].get<double>() == doctest::Approx(6.3854106816800726106).epsilon(1e-14));
  CHECK(j["gamma"].get<double>() == doctest::Approx(2.1284702272266909).epsilon(1e-14));
  CHECK(j.contains("elapsed_ms"));
  CHECK(j["config"]["alpha"] == 0.5);
  CHECK(j["config"]["input"] == data("one_two_three.txt"));

  const Outcome csv = cli({"sum", "--format", "csv", data("mixed.txt")});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("n,sum,gamma,elapsed_ms\n4,", 0) == 0);

  const Outcome ext = cli({"sum", "--extended", "--digits", "30", data("one_two_three.txt")});
  REQUIRE(ext.code == 0);
  CHECK(Json::parse(ext.out)["sum_extended"].get<std::string>().rfind("6.38541068168007261", 0) == 0);
}

TEST_CASE("cube report") {
  const Outcome r = cli({"cube", "--k", "2", "--alpha", "0.5"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["sum"].get<double>() == doctest::Approx(10.770821363360145221).epsilon(1e-14));
  CHECK(j["complete"] == true);
  CHECK(cli({"cube", "--k", "21"}).code == 1);
}

TEST_CASE("search, transform, matrix, certify") {
  const Outcome s = cli({"search", "--n", "4", "--max-index", "4"});
  REQUIRE(s.code == 0);
  const Json sj = Json::parse(s.out);
  CHECK(sj["best"].get<double>() == doctest::Approx(10.770821363360145221));
  CHECK(sj["maximizers"][0]["complete"] == true);
  CHECK(sj["heuristic"] == false);

  const Outcome h = cli({"search", "--n", "6", "-m", "5", "--mode", "heuristic", "--iterations", "50", "--seed", "4"});
  REQUIRE(h.code == 0);
  CHECK(Json::parse(h.out)["heuristic"] == true);
  CHECK(cli({"search", "--n", "6", "-m", "7"}).code == 1);

  const Outcome t = cli({"transform", "--mode", "complete", data("mixed.txt")});
  REQUIRE(t.code == 0);
  std::istringstream lines(t.out);
  std::string line, last;
  std::size_t count = 0;
  while (std::getline(lines, line)) {
    CHECK(Json::parse(line).is_object());
    last = line;
    ++count;
  }
  CHECK(count >= 2);
  CHECK(Json::parse(last)["complete"] == true);

  const Outcome m = cli({"matrix", data("one_two_three.txt")});
  REQUIRE(m.code == 0);
  CHECK(Json::parse(m.out)["min_eigenvalue"].get<double>() == doctest::Approx(0.25777280103144084473));

  const Outcome c = cli({"certify", "--k", "5"});
  REQUIRE(c.code == 0);
  CHECK(Json::parse(c.out)["all_exact_hold"] == true);
  CHECK(cli({"certify", data("one_two_three.txt")}).code == 1);
  CHECK(cli({"certify"}).code == 1);
}

TEST_CASE("bounds curves as CSV") {
  const Outcome r = cli({"bounds", "--curve", "lower", "--n-from", "100", "--n-to", "1e6", "--points", "5"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "N,value");
  std::size_t rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 5);
  CHECK(cli({"bounds", "--curve", "other"}).code == 1);
  CHECK(cli({"bounds", "--n-from", "10"}).code == 1);
  const Outcome j = cli({"bounds", "--curve", "theorem2", "--format", "json", "--points", "2"});
  REQUIRE(j.code == 0);
  CHECK(Json::parse(j.out)["points"].size() == 2);
}

TEST_CASE("input errors") {
  const Outcome dup = cli({"sum", data("duplicate.txt")});
  CHECK(dup.code == 1);
  CHECK(dup.err.find("duplicate.txt:2") != std::string::npos);
  CHECK(cli({"sum", "--alpha", "0.5", "--weights", data("weights.txt"), data("one_two_three.txt")}).code == 1);
  CHECK(cli({"sum", "--tail", "constant", data("one_two_three.txt")}).code == 1);
  CHECK(cli({"sum", "--digits", "10", data("one_two_three.txt")}).code == 1);
  CHECK(cli({"sum", "/nonexistent/set.txt"}).code == 1);
  CHECK(cli({}).code == 1);
  CHECK(cli({"frobnicate"}).code == 1);
  CHECK(cli({"--help"}).code == 0);
  const Outcome w = cli({"sum", "--weights", data("weights.txt"), "--tail", "geometric:0.25", data("one_two_three.txt")});
  REQUIRE(w.code == 0);
  CHECK(Json::parse(w.out)["config"]["tail"] == "geometric:0.25");
}

TEST_CASE("deterministic reports are byte-identical across worker counts") {
  for (const std::vector<std::string>& base : std::vector<std::vector<std::string>>{
           {"sum", data("mixed.txt")},
           {"cube", "--k", "9"},
           {"search", "--n", "9", "-m", "5", "--mode", "heuristic", "--iterations", "100", "--seed", "8"},
           {"matrix", data("mixed.txt")},
           {"transform", "--mode", "complete", data("mixed.txt")},
       }) {
    std::vector<std::string> a = base, b = base, c = base;
    for (auto* v : {&a, &b, &c}) v->push_back("--deterministic");
    b.insert(b.end(), {"--workers", "3"});
    c.insert(c.end(), {"--workers", "1"});
    const Outcome ra = cli(a), rb = cli(b), rc = cli(c);
    REQUIRE(ra.code == 0);
    CHECK(ra.out == rb.out);
    CHECK(ra.out == rc.out);
  }
}

TEST_CASE("output file") {
  const auto path = std::filesystem::temp_directory_path() / "gcdsum_cli_test.json";
  const Outcome r = cli({"cube", "--k", "3", "-o", path.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  CHECK(Json::parse(in)["n"] == 8);
  std::filesystem::remove(path);
}

TEST_CASE("verify subset") {
  const Outcome r = cli({"verify", "--criteria", "10,12"});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS 10") != std::string::npos);
  CHECK(r.out.find("PASS 12") != std::string::npos);
  const Outcome j = cli({"verify", "--criteria", "12", "--format", "json", "--deterministic"});
  REQUIRE(j.code == 0);
  CHECK(Json::parse(j.out)["passed"] == true);
  CHECK(cli({"verify", "--criteria", "13"}).code == 1);
}
