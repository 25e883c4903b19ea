#include "regen/gf.hpp"

#include <bit>
#include <string>
#include <utility>

namespace regen::gf {

namespace {

int degree_of(std::uint32_t poly) { return poly == 0 ? -1 : 31 - std::countl_zero(poly); }

std::uint32_t poly_mod(std::uint32_t value, std::uint32_t divisor) {
  const int dd = degree_of(divisor);
  for (int dv = degree_of(value); dv >= dd; dv = degree_of(value)) value ^= divisor << (dv - dd);
  return value;
}

void check_entries(const Field& field, const FieldMatrix& a) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (!field.contains(a(i, j))) throw InputError("matrix entry " + std::to_string(a(i, j)) + " outside the field");
    }
  }
}

// Reduces `a` in place to reduced row echelon form, applying the same row
// operations to `aug`; returns the pivot column of each pivot row.
std::vector<Eigen::Index> eliminate(const Field& field, FieldMatrix& a, FieldMatrix* aug) {
  std::vector<Eigen::Index> pivots;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < a.cols() && row < a.rows(); ++col) {
    Eigen::Index pivot = row;
    while (pivot < a.rows() && a(pivot, col) == 0) ++pivot;
    if (pivot == a.rows()) continue;
    if (pivot != row) {
      a.row(pivot).swap(a.row(row));
      if (aug != nullptr) aug->row(pivot).swap(aug->row(row));
    }
    const Symbol scale = field.inv(a(row, col));
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(row, j) = field.mul(a(row, j), scale);
    if (aug != nullptr) {
      for (Eigen::Index j = 0; j < aug->cols(); ++j) (*aug)(row, j) = field.mul((*aug)(row, j), scale);
    }
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      const Symbol factor = a(r, col);
      if (r == row || factor == 0) continue;
      for (Eigen::Index j = 0; j < a.cols(); ++j) a(r, j) = field.sub(a(r, j), field.mul(factor, a(row, j)));
      if (aug != nullptr) {
        for (Eigen::Index j = 0; j < aug->cols(); ++j) {
          (*aug)(r, j) = field.sub((*aug)(r, j), field.mul(factor, (*aug)(row, j)));
        }
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

FieldSpec default_spec(int m) {
  static constexpr std::uint32_t kModulus[] = {0x3,   0x7,   0xB,   0x13,   0x25,   0x43,   0x89,   0x11D,
                                               0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443, 0x8003, 0x1100B};
  if (m < 1 || m > 16) throw InputError("field degree m=" + std::to_string(m) + " outside [1,16]");
  return {m, kModulus[m - 1]};
}

bool is_irreducible(std::uint32_t modulus, int m) {
  if (m < 1 || degree_of(modulus) != m) return false;
  for (std::uint32_t divisor = 2; degree_of(divisor) <= m / 2; ++divisor) {
    if (poly_mod(modulus, divisor) == 0) return false;
  }
  return true;
}

Symbol reference_mul(Symbol a, Symbol b, const FieldSpec& spec) {
  std::uint32_t acc = 0;
  std::uint32_t shifted = a;
  for (std::uint32_t bits = b; bits != 0; bits >>= 1) {
    if ((bits & 1U) != 0) acc ^= shifted;
    shifted <<= 1;
    if ((shifted >> spec.m) & 1U) shifted ^= spec.modulus;
  }
  return static_cast<Symbol>(acc);
}

Field::Field(FieldSpec spec) : spec_(spec) {
  if (spec.m < 1 || spec.m > 16) throw InputError("field degree m=" + std::to_string(spec.m) + " outside [1,16]");
  if (!is_irreducible(spec.modulus, spec.m)) {
    throw InputError("modulus " + std::to_string(spec.modulus) + " is not irreducible of degree " +
                     std::to_string(spec.m));
  }
  const std::uint32_t group = order() - 1;
  // Smallest generator of the multiplicative group; the modulus need not be primitive.
  auto is_generator = [&](Symbol g) {
    Symbol x = 1;
    for (std::uint32_t e = 1; e <= group; ++e) {
      x = reference_mul(x, g, spec_);
      if (x == 1) return e == group;
    }
    return false;
  };
  Symbol generator = 1;
  if (group > 1) {
    generator = 2;
    while (!is_generator(generator)) ++generator;
  }
  auto tables = std::make_shared<Tables>();
  tables->exp.resize(2 * static_cast<std::size_t>(group));
  tables->log.assign(order(), 0);
  Symbol x = 1;
  for (std::uint32_t e = 0; e < group; ++e) {
    tables->exp[e] = x;
    tables->exp[e + group] = x;
    tables->log[x] = e;
    x = reference_mul(x, generator, spec_);
  }
  tables_ = std::move(tables);
}

Field Field::gf256() { return Field(FieldSpec{8, 0x11D}); }
Field Field::binary() { return Field(FieldSpec{1, 0x3}); }

Symbol Field::inv(Symbol a) const {
  if (a == 0) throw DivisionByZeroError("inverse of zero in GF(2^" + std::to_string(spec_.m) + ")");
  const std::uint32_t group = order() - 1;
  return tables_->exp[(group - tables_->log[a]) % group];
}

Symbol Field::pow(Symbol a, std::uint64_t exponent) const {
  if (exponent == 0) return 1;
  if (a == 0) return 0;
  const std::uint64_t group = order() - 1;
  return tables_->exp[static_cast<std::size_t>((tables_->log[a] * (exponent % group)) % group)];
}

std::size_t rank(const Field& field, FieldMatrix a) {
  check_entries(field, a);
  return eliminate(field, a, nullptr).size();
}

FieldMatrix solve(const Field& field, const FieldMatrix& a, const FieldMatrix& b) {
  if (a.rows() != b.rows()) throw InputError("solve: A and B have different row counts");
  check_entries(field, a);
  check_entries(field, b);
  FieldMatrix reduced = a;
  FieldMatrix rhs = b;
  const auto pivots = eliminate(field, reduced, &rhs);
  if (static_cast<Eigen::Index>(pivots.size()) < a.cols()) {
    throw SingularMatrixError("solve: matrix has rank " + std::to_string(pivots.size()) + " < " +
                              std::to_string(a.cols()) + " columns");
  }
  for (Eigen::Index r = a.cols(); r < rhs.rows(); ++r) {
    for (Eigen::Index j = 0; j < rhs.cols(); ++j) {
      if (rhs(r, j) != 0) throw InputError("solve: right-hand side is not in the column space");
    }
  }
  // Full column rank: pivots are columns 0..cols-1 in order, so the top block is the solution.
  return rhs.topRows(a.cols());
}

FieldMatrix inverse(const Field& field, const FieldMatrix& a) {
  if (a.rows() != a.cols()) throw InputError("inverse of a non-square matrix");
  return solve(field, a, identity(a.rows()));
}

FieldMatrix column(std::span<const Symbol> values) {
  FieldMatrix out(static_cast<Eigen::Index>(values.size()), 1);
  for (std::size_t i = 0; i < values.size(); ++i) out(static_cast<Eigen::Index>(i), 0) = values[i];
  return out;
}

}  // namespace regen::gf
