#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "regen/constructions.hpp"
#include "regen/errors.hpp"

using namespace regen;
namespace cs = regen::constructions;

namespace {

SymbolVector random_message(const LinearDss& dss, std::mt19937_64& rng) {
  SymbolVector m(dss.file_size());
  for (auto& s : m) s = static_cast<Symbol>(rng() % dss.field().order());
  return m;
}

std::vector<SymbolVector> pick(const std::vector<SymbolVector>& nodes, const std::vector<std::size_t>& idx) {
  std::vector<SymbolVector> out;
  for (auto i : idx) out.push_back(nodes[i]);
  return out;
}

struct Sweep {
  std::size_t subsets = 0;
  std::size_t pairs = 0;
  std::size_t gamma_min = SIZE_MAX;
  std::size_t gamma_max = 0;
  std::size_t helper_spread = 0;
};

// Independent sweep: every k-subset decodes, every (failed, d-subset) repairs exactly.
Sweep sweep(const LinearDss& dss, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const SymbolVector m = random_message(dss, rng);
  const auto nodes = encode(dss, m);
  const auto n = dss.node_count();
  const auto k = static_cast<std::size_t>(dss.params().k());
  const auto d = static_cast<std::size_t>(dss.params().d());
  Sweep out;
  oracle::subsets(n, k, [&](const std::vector<std::size_t>& s) {
    ++out.subsets;
    REQUIRE(reconstruct(dss, s, pick(nodes, s)) == m);
  });
  for (NodeIndex failed = 0; failed < n; ++failed) {
    oracle::subsets(n - 1, d, [&](std::vector<std::size_t> s) {
      for (auto& i : s) i += i >= failed ? 1 : 0;
      ++out.pairs;
      const auto r = repair(dss, failed, s, pick(nodes, s));
      REQUIRE(r.content == nodes[failed]);
      out.gamma_min = std::min(out.gamma_min, r.bandwidth.total);
      out.gamma_max = std::max(out.gamma_max, r.bandwidth.total);
      std::size_t lo = SIZE_MAX, hi = 0;
      for (const auto& [h, c] : r.bandwidth.per_helper) {
        lo = std::min(lo, c);
        hi = std::max(hi, c);
      }
      out.helper_spread = std::max(out.helper_spread, hi - lo);
    });
  }
  return out;
}

std::size_t ui(const mpz_class& v) { return v.get_ui(); }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("blowup_simple of the xor code") {
  const auto code = cs::blowup_simple(xor_base_322());
  CHECK(code->params() == SystemParams(4, 3, 3));
  CHECK(code->declared() == SymbolPoint{3, 6, 8});
  CHECK(code->node_sizes() == std::vector<std::size_t>(4, 3));
  const auto& meta = dynamic_cast<const cs::PermutedComposite&>(*code).meta();
  CHECK(meta.copies == 4);
  for (std::size_t c = 0; c < 4; ++c) CHECK(meta.copy_layout[c][c] == 3);
  const auto s = sweep(*code, 1);
  CHECK(s.subsets == 4);
  CHECK(s.pairs == 4);
  CHECK(s.gamma_min == 6);
  CHECK(s.gamma_max == 6);
  CHECK(encode(*code, SymbolVector(8, 0)) == std::vector<SymbolVector>(4, SymbolVector(3, 0)));
  CHECK(to_json(*code).dump(2) + "\n" == read_file(std::string(REGEN_GOLDEN_DIR) + "/blowup_simple_xor.json"));
}

TEST_CASE("blowup_simple stores the interleaved copies") {
  // Copy c is empty at position c; the message interleaves (x1..x4, y1..y4).
  const auto code = cs::blowup_simple(xor_base_322());
  const SymbolVector m = {1, 0, 0, 1, 0, 1, 1, 1};  // x = 1001, y = 0111
  const auto nodes = encode(*code, m);
  // position 0 holds base node 0 of copies 1,2,3: x2, x3, x4
  CHECK(nodes[0] == SymbolVector{0, 0, 1});
  // position 3 holds base node 2 (x+y) of copies 0,1,2
  CHECK(nodes[3] == SymbolVector{1, 1, 1});
}

TEST_CASE("blowup_full of the (3,2,2) code") {
  const auto code = cs::blowup_full(rs_base(3, 2));
  CHECK(code->params() == SystemParams(4, 3, 3));
  CHECK(code->declared() == SymbolPoint{18, 36, 48});
  const auto& meta = dynamic_cast<const cs::PermutedComposite&>(*code).meta();
  CHECK(meta.copies == 24);
  std::set<std::vector<std::size_t>> distinct(meta.copy_layout.begin(), meta.copy_layout.end());
  CHECK(distinct.size() == 24);
  const auto s = sweep(*code, 2);
  CHECK(s.gamma_min == 36);
  CHECK(s.gamma_max == 36);
  CHECK(s.helper_spread == 0);
}

TEST_CASE("iterate") {
  const auto once = cs::iterate(rs_base(3, 2), 1);
  CHECK(once->kind() == "blowup_full");
  CHECK(once->declared() == cs::blowup_full(rs_base(3, 2))->declared());
  const auto twice = cs::iterate(rs_base(3, 2), 2);
  CHECK(twice->params() == SystemParams(5, 4, 4));
  // alpha: 3*3!*1 = 18, then 4*4!*18 = 1728; file: 4!*2 = 48, then 5!*48
  CHECK(twice->declared() == SymbolPoint{1728, 3456, 5760});
  CHECK(Rational(5760) / Rational(1728) == Rational(10, 3));
  const auto s = sweep(*twice, 3);
  CHECK(s.gamma_min == 3456);
  CHECK(s.gamma_max == 3456);
  CHECK(s.helper_spread == 0);
  CHECK_THROWS_AS(cs::iterate(rs_base(3, 2), 0), regen::InputError);
  CHECK_THROWS_AS(cs::iterate(rs_base(3, 2), 3, 1'000'000), regen::ResourceError);
  CHECK_THROWS_AS(cs::iterate(rs_base(3, 2), 4), regen::ResourceError);
}

TEST_CASE("concat") {
  const auto code = cs::concat({rs_base(3, 2), rs_base(3, 2), rs_base(3, 2)});
  CHECK(code->params() == SystemParams(9, 8, 8));
  CHECK(code->declared() == SymbolPoint{1, 2, 6});
  const auto s = sweep(*code, 4);
  CHECK(s.subsets == 9);
  CHECK(s.gamma_min == 2);
  CHECK(s.gamma_max == 2);

  const auto single = cs::concat({rs_base(5, 3)});
  CHECK(single->params() == SystemParams(5, 3, 3));
  CHECK(single->declared() == rs_base(5, 3)->declared());

  const auto mixed = cs::concat({rs_base(4, 3), rs_base(3, 2)});
  CHECK(mixed->params() == SystemParams(7, 6, 6));
  CHECK(mixed->file_size() == 5);
  const auto ms = sweep(*mixed, 5);
  CHECK(ms.subsets == 7);
  CHECK(ms.gamma_min == 2);
  CHECK(ms.gamma_max == 3);

  CHECK_THROWS_AS(cs::concat({rs_base(3, 2), rs_base(4, 2)}), regen::InputError);
  CHECK_THROWS_AS(cs::concat({rs_base(3, 2), cs::blowup_simple(rs_base(3, 2))}), regen::InputError);
  CHECK_THROWS_AS(cs::concat({}), regen::InputError);
}

TEST_CASE("copy_blowup") {
  const auto code = cs::copy_blowup(rs_base(3, 2), 1);
  CHECK(code->params() == SystemParams(4, 3, 3));
  CHECK(code->declared() == SymbolPoint{24, 36, 48});
  const auto s = sweep(*code, 6);
  CHECK(s.gamma_min == 36);
  CHECK(s.gamma_max == 36);
  const auto two = cs::copy_blowup(rs_base(4, 3), 2);
  CHECK(two->params() == SystemParams(6, 5, 5));
  // 6! = 720 copies; 2*2*5*4! = 480 of them have the duplicate among the helpers
  CHECK(two->declared() == SymbolPoint{720, 480 + 240 * 3, 720 * 3});
  const auto s2 = sweep(*two, 7);
  CHECK(s2.gamma_min == 1200);
  CHECK(s2.gamma_max == 1200);
  CHECK_THROWS_AS(cs::copy_blowup(rs_base(3, 2), 2), regen::RangeError);
  CHECK_THROWS_AS(cs::copy_blowup(rs_base(3, 2), 0), regen::RangeError);
  CHECK_THROWS_AS(cs::copy_blowup(rs_base(6, 5), 1), regen::ResourceError);
}

TEST_CASE("filenode_blowup") {
  const auto code = cs::filenode_blowup(rs_base(3, 2));
  CHECK(code->params() == SystemParams(4, 2, 2));
  CHECK(code->declared() == SymbolPoint{30, 36, 48});
  const auto s = sweep(*code, 8);
  CHECK(s.subsets == 6);
  CHECK(s.pairs == 12);
  CHECK(s.gamma_min == 36);
  CHECK(s.gamma_max == 36);
  const auto bigger = cs::filenode_blowup(rs_base(4, 2));
  CHECK(bigger->params() == SystemParams(5, 2, 2));
  // 4!(4*1 + 2) and 4!((4-2)*2 + 4)
  CHECK(bigger->declared() == SymbolPoint{144, 192, 240});
  const auto s2 = sweep(*bigger, 9);
  CHECK(s2.gamma_min == 192);
  CHECK(s2.gamma_max == 192);
}

TEST_CASE("closed forms against factorial oracle") {
  for (long n = 2; n <= 5; ++n) {
    for (long k = 1; k < n; ++k) {
      const SystemParams p(n, k, k);
      const SymbolPoint base{3, 7, 11};
      const auto full = cs::blowup_full_point(p, base);
      const mpz_class nf = oracle::factorial(n);
      CHECK(full.alpha == ui(n * nf * 3));
      CHECK(full.gamma == ui(n * nf * 7));
      CHECK(full.file_size == ui(oracle::factorial(n + 1) * 11));
      const auto file = cs::filenode_blowup_point(p, base);
      CHECK(file.alpha == ui(nf * (n * 3 + 11)));
      CHECK(file.gamma == ui(nf * ((n - k) * 7 + (k + k) * 3)));
      for (long l = 1; l < k; ++l) {
        const auto copy = cs::copy_blowup_point(p, base, static_cast<std::size_t>(l));
        const mpz_class all = oracle::factorial(n + l);
        const mpz_class twin = 2 * l * (k + l) * oracle::factorial(n + l - 2);
        CHECK(copy.alpha == ui(all * 3));
        CHECK(copy.gamma == ui(twin * 3 + (all - twin) * 7));
      }
    }
  }
}

TEST_CASE("budget and size guards") {
  CHECK_THROWS_AS(cs::blowup_full(rs_base(6, 2)), regen::ResourceError);
  CHECK_THROWS_AS(cs::blowup_simple(rs_base(10, 5), 20), regen::ResourceError);
  CHECK_NOTHROW(cs::blowup_simple(rs_base(10, 5), 110));
}
