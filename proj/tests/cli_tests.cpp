#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"
#include "stable_extrema/density.hpp"

using namespace stable_extrema;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string file = "cli_out.txt";
  std::remove(file.c_str());
  const int rc = std::system((std::string(STABLE_EXTREMA_CLI) + " " + args + " > " + file + " 2> cli_err.txt").c_str());
  std::ifstream in(file, std::ios::binary);
  return {WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()}};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  for (std::string line; std::getline(ss, line);) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("mellin at the Brownian anchor") {
  const auto r = cli("mellin --alpha 2 --rho 0.5 --s 2");
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"s", "re", "im", "err_est", "method"});
  CHECK(std::abs(std::stod(rows[1][1]) - 1.1283791671) < 1e-10);
}

TEST_CASE("density grid round-trips through CSV") {
  const auto r = cli("density --alpha 3/2 --rho 2/3 --grid 0.1:10:50:log --format csv");
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 51);
  CHECK(rows[0] == std::vector<std::string>{"x", "pdf", "err_est", "method"});
  const auto p = make_params(RationalAlpha::make(3, 2), 2.0 / 3.0);
  double mass = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double x = std::stod(rows[i][0]), v = std::stod(rows[i][1]);
    CHECK(v >= 0.0);
    CHECK(v == pdf(p, x).real());  // 17 digits recover the double exactly
    if (i > 1) mass += 0.5 * (v + std::stod(rows[i - 1][1])) * (x - std::stod(rows[i - 1][0]));
  }
  CHECK(std::abs(mass - (cdf(p, 10.0).real() - cdf(p, 0.1).real())) < 5e-3);
}

TEST_CASE("json documents share one schema") {
  for (const char* args : {"phi --alpha 1.5 --rho 0.5 --z 0.5,1 --format json", "simulate --alpha 2 --rho 0.5 --paths 4 --steps 8 --format json",
                           "verify --suite decay --alpha 1.5 --rho 0.5 --format json"}) {
    const auto r = cli(args);
    CAPTURE(args);
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.contains("meta"));
    CHECK(j["meta"].contains("version"));
    CHECK(j["rows"].is_array());
    CHECK(!j["rows"].empty());
  }
}

TEST_CASE("exit codes") {
  CHECK(cli("verify --suite functional-equations --alpha 1.4142135 --rho 0.45").code == 0);
  CHECK(cli("density --alpha 1.5 --rho 0.9 --x 1").code == 2);
  CHECK(cli("density --alpha 1.5 --rho 0.5 --grid 1:2:0").code == 2);
  CHECK(cli("density --alpha 1.5 --rho 0.5 --x 1 --tol -1").code == 2);
  CHECK(cli("mellin --alpha 1.5 --rho 0.5 --s 1 --bogus").code == 2);
  CHECK(cli("verify --suite nonsense").code == 2);
  // a pole of M is an evaluation failure, not a configuration error
  CHECK(cli("mellin --alpha 1.5 --rho 0.5 --s 0.25").code == 1);
}
