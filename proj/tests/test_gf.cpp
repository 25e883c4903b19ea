#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "regen/gf.hpp"

using namespace regen::gf;

namespace {

FieldMatrix random_matrix(const Field& f, Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  FieldMatrix a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = static_cast<Symbol>(rng() % f.order());
  }
  return a;
}

}  // namespace

TEST_CASE("irreducibility") {
  CHECK(is_irreducible(0x11D, 8));
  CHECK(is_irreducible(0x3, 1));
  CHECK(is_irreducible(0x13, 4));
  CHECK(is_irreducible(0x11B, 8));  // irreducible but not primitive
  CHECK_FALSE(is_irreducible(0x15, 4));
  CHECK_FALSE(is_irreducible(0x100, 8));
  CHECK_THROWS_AS(Field({4, 0x15}), regen::InputError);
  CHECK_THROWS_AS(Field({17, 0x3}), regen::InputError);
}

TEST_CASE("GF(2) and GF(2^8) basics") {
  const Field two = Field::binary();
  CHECK(two.add(1, 1) == 0);
  CHECK(two.mul(1, 1) == 1);
  CHECK(two.inv(1) == 1);
  const Field f = Field::gf256();
  const auto inv = oracle::inverse_table(8, 0x11D);
  CHECK(inv[2] == 142);
  CHECK(f.mul(2, 142) == 1);
  CHECK(f.mul(2, 141) == 7);
  CHECK(f.inv(2) == 142);
  CHECK_THROWS_AS(f.inv(0), regen::DivisionByZeroError);
  for (Symbol a = 1; a != 0 && a < 256; ++a) REQUIRE(f.pow(a, 255) == 1);
}

TEST_CASE("multiplication and inverses match the slow oracle") {
  for (const FieldSpec spec : {FieldSpec{1, 0x3}, FieldSpec{4, 0x13}, FieldSpec{8, 0x11D}, FieldSpec{8, 0x11B}}) {
    const Field f(spec);
    const auto inv = oracle::inverse_table(spec.m, spec.modulus);
    for (std::uint32_t a = 0; a < f.order(); ++a) {
      for (std::uint32_t b = 0; b < f.order(); ++b) {
        REQUIRE(f.mul(static_cast<Symbol>(a), static_cast<Symbol>(b)) == oracle::gf_mul(a, b, spec.m, spec.modulus));
      }
      if (a != 0) REQUIRE(f.inv(static_cast<Symbol>(a)) == inv[a]);
    }
  }
  const Field wide({12, 0x1053});
  std::mt19937_64 rng(3);
  for (int t = 0; t < 5000; ++t) {
    const auto a = static_cast<Symbol>(rng() % wide.order());
    const auto b = static_cast<Symbol>(rng() % wide.order());
    REQUIRE(wide.mul(a, b) == oracle::gf_mul(a, b, 12, 0x1053));
    REQUIRE(wide.mul(a, b) == reference_mul(a, b, wide.spec()));
  }
}

TEST_CASE("field axioms on random samples") {
  std::mt19937_64 rng(5);
  for (const FieldSpec spec : {FieldSpec{1, 0x3}, FieldSpec{4, 0x13}, FieldSpec{8, 0x11D}}) {
    const Field f(spec);
    for (int t = 0; t < 3000; ++t) {
      const auto a = static_cast<Symbol>(rng() % f.order());
      const auto b = static_cast<Symbol>(rng() % f.order());
      const auto c = static_cast<Symbol>(rng() % f.order());
      REQUIRE(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
      REQUIRE(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)));
      REQUIRE(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
      REQUIRE(f.mul(a, b) == f.mul(b, a));
      if (a != 0) REQUIRE(f.mul(a, f.inv(a)) == 1);
    }
  }
}

TEST_CASE("solve") {
  const Field f = Field::gf256();
  std::mt19937_64 rng(9);
  const FieldMatrix b = random_matrix(f, 4, 2, rng);
  CHECK(solve(f, identity(4), b) == b);

  FieldMatrix v(2, 2);
  v << 1, 7, 1, 29;  // rows (1, x) at distinct x
  const FieldMatrix rhs = random_matrix(f, 2, 1, rng);
  const FieldMatrix x = solve(f, v, rhs);
  CHECK(multiply(f, v, x) == rhs);

  FieldMatrix zero_column(3, 3);
  zero_column << 1, 0, 2, 3, 0, 4, 5, 0, 6;
  CHECK_THROWS_AS(solve(f, zero_column, random_matrix(f, 3, 1, rng)), regen::SingularMatrixError);
  CHECK_THROWS_AS(solve(f, identity(3), random_matrix(f, 2, 1, rng)), regen::InputError);

  for (int t = 0; t < 200; ++t) {
    const FieldMatrix a = random_matrix(f, 6, 4, rng);
    if (rank(f, a) < 4) continue;
    const FieldMatrix truth = random_matrix(f, 4, 3, rng);
    REQUIRE(solve(f, a, multiply(f, a, truth)) == truth);
  }
}

TEST_CASE("rank and inverse") {
  const Field f = Field::gf256();
  CHECK(rank(f, FieldMatrix::Zero(3, 5)) == 0);
  FieldMatrix dup(3, 3);
  dup << 1, 2, 3, 1, 2, 3, 4, 5, 6;
  CHECK(rank(f, dup) == 2);
  FieldMatrix twice(4, 3);
  twice << 1, 2, 3, 4, 5, 6, 1, 2, 3, 4, 5, 6;
  CHECK(rank(f, twice) == 2);
  std::mt19937_64 rng(13);
  for (int t = 0; t < 50; ++t) {
    const FieldMatrix a = random_matrix(f, 5, 5, rng);
    if (rank(f, a) < 5) continue;
    REQUIRE(multiply(f, a, inverse(f, a)) == identity(5));
  }
  CHECK_THROWS_AS(inverse(f, dup), regen::SingularMatrixError);
}
