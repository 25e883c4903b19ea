#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "regen/cli.hpp"
#include "regen/errors.hpp"

using namespace regen;
using namespace regen::cli;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("recipe parsing") {
  CHECK(parse_recipe(" blowup_full( base(3, 2) ) ").to_string() == "blowup_full(base(3,2))");
  const auto r = parse_recipe("concat(base(3,2),iterate(base(3,2),2),copy_blowup(base(4,3),1))");
  CHECK(r.children.size() == 3);
  CHECK(r.children[1].integers == std::vector<std::int64_t>{2});
  CHECK_THROWS_AS(parse_recipe("blowup_full(base(3,2)"), regen::InputError);
  CHECK_THROWS_AS(parse_recipe("base(3)"), regen::InputError);
  CHECK_THROWS_AS(parse_recipe("iterate(base(3,2))"), regen::InputError);
  CHECK_THROWS_AS(parse_recipe("shuffle(base(3,2))"), regen::InputError);
  CHECK_THROWS_AS(parse_recipe("base(3,2) x"), regen::InputError);
  CHECK_THROWS_AS(parse_recipe("iterate(2,base(3,2))"), regen::InputError);
}

TEST_CASE("predictions name the right formula") {
  CHECK(predict(parse_recipe("blowup_full(base(3,2))")).source == "p1");
  CHECK(predict(parse_recipe("blowup_full(base(3,2))")).point.file_size == Rational(8, 3));
  CHECK(predict(parse_recipe("concat(base(3,2),base(3,2),base(3,2))")).source == "p2");
  CHECK(predict(parse_recipe("concat(base(4,3),base(3,2))")).source == "sum");
  CHECK(predict(parse_recipe("copy_blowup(base(3,2),1)")).source == "p3");
  CHECK(predict(parse_recipe("filenode_blowup(base(3,2))")).source == "p4");
  CHECK(predict(parse_recipe("filenode_blowup(blowup_simple(base(3,2)))")).source == "filenode_closed_form");
  CHECK(predict(parse_recipe("blowup_simple(concat(base(3,2),base(4,3)))")).source == "lift");
  const auto two = predict(parse_recipe("iterate(base(3,2),2)"));
  CHECK(two.params == tradeoff::SystemParams(5, 4, 4));
  CHECK(two.point.file_size == Rational(10, 3));
}

TEST_CASE("construct and verify") {
  const auto full = run_construct_verify("blowup_full(base(3,2))", {}, constructions::kDefaultSymbolBudget);
  CHECK(full.passed);
  CHECK(full.report["measured"]["alpha"] == 18);
  CHECK(full.report["measured"]["gamma"] == 36);
  CHECK(full.report["measured"]["file_size"] == 48);
  CHECK(full.report["symmetric"] == true);
  CHECK(full.report["match"] == true);

  const auto cat = run_construct_verify("concat(base(3,2),base(3,2),base(3,2))", {}, 1000);
  CHECK(cat.passed);
  CHECK(cat.report["params"]["n"] == 9);
  CHECK(cat.report["measured"]["file_size"] == 6);

  // Composites of composites still verify against their closed forms.
  CHECK(run_construct_verify("filenode_blowup(blowup_simple(base(3,2)))", {}, 1000000).passed);
  CHECK(run_construct_verify("blowup_simple(concat(base(3,2),base(3,2)))", {}, 1000000).passed);

  CHECK_THROWS_AS(run_construct_verify("blowup_full(base(3,2))", {}, 10), regen::ResourceError);
}

TEST_CASE("small curve") {
  const auto rows = parse_csv(run_curve({4, 3, 3}, Rational(1), 3));
  REQUIRE(rows.size() == 5);
  CHECK(rows[0][0] == "gamma");
  // gamma column; p1 at gamma in {1,2,3} gives 2, 8/3, 3
  CHECK(rows[1][0] == "1");
  CHECK(rows[1][2] == "2");
  CHECK(rows[3][0] == "2");
  CHECK(rows[3][2] == "8/3");
  CHECK(rows[4][0] == "3");
  CHECK(rows[4][2] == "3");
  CHECK(rows[2][0] == "3/2");
  CHECK(rows[2][4] == "2");       // P3 point
  CHECK(rows[2].back() == "0");   // not a realizable P1 point
  // capacity at gamma = alpha is sum_j (d-j)/d
  const mpq_class expected = oracle::capacity(3, 3, 1, 1);
  CHECK(rows[1][1] == Rational(expected).to_string());
  CHECK_THROWS_AS(run_curve({4, 3, 3}, Rational(1), 1), regen::InputError);
}

TEST_CASE("golden curves") {
  const std::string dir = REGEN_GOLDEN_DIR;
  CHECK(run_curve({100, 99, 99}, Rational(1), 99) == read_file(dir + "/curve_100_99_99.csv"));
  CHECK(run_curve({100, 80, 85}, Rational(1), 99) == read_file(dir + "/curve_100_80_85.csv"));
  const auto rows = parse_csv(read_file(dir + "/curve_100_99_99.csv"));
  bool seen = false;
  for (const auto& row : rows) {
    if (row[0] == "2") {
      CHECK(row[2] == "200/3");
      seen = true;
    }
  }
  CHECK(seen);
}

TEST_CASE("asymptotic table") {
  AsymptoticRequest req;
  req.base = {2, 1, 1};
  req.s_values = {Rational(1)};
  req.shifts = {10, 1000000};
  const auto rows = parse_csv(run_asymptotic(req));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].size() == 9);
  CHECK(rows[2][1] == "1000000");
  CHECK(Rational::parse(rows[2][3]) >= Rational(999, 1000));
  CHECK(run_asymptotic(req) == run_asymptotic(req));
}

TEST_CASE("compare") {
  const auto j = run_compare({4, 3, 3}, Rational(1), Rational(2));
  CHECK(j["capacity"]["exact"] == "8/3");
  CHECK(j["p1"]["exact"] == "8/3");
  CHECK(j["p1"]["realizable"] == true);
  CHECK(j["timeshare"]["exact"] == "5/2");
  CHECK(j["p2"].is_null());
  const auto out = run_compare({4, 3, 3}, Rational(1), Rational(5));
  CHECK(out["timeshare"].is_null());
  CHECK(out["p1"].is_null());
  CHECK(out["capacity"]["exact"] == "3");
}
