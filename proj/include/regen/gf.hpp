#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "regen/errors.hpp"

// Binary extension fields GF(2^m), 1 <= m <= 16, and the dense linear algebra
// the storage codes need on top of them. Matrices are Eigen dense types over
// raw field symbols; every algebraic operation is a free function taking the
// field explicitly, since Eigen's own arithmetic on integers is not field
// arithmetic.
namespace regen::gf {

using Symbol = std::uint16_t;
using SymbolVector = std::vector<Symbol>;
using FieldMatrix = Eigen::Matrix<Symbol, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct FieldSpec {
  int m = 8;
  std::uint32_t modulus = 0x11D;

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

/// A fixed primitive modulus for each degree 1..16 (0x11D for m = 8).
FieldSpec default_spec(int m);

/// Exhaustive trial division by every polynomial of degree 1..m/2.
bool is_irreducible(std::uint32_t modulus, int m);

/// Shift-and-add product reduced by `modulus`; table-free reference multiply.
Symbol reference_mul(Symbol a, Symbol b, const FieldSpec& spec);

class Field {
 public:
  /// Throws InputError unless 1 <= m <= 16 and `modulus` is irreducible of degree m.
  explicit Field(FieldSpec spec);

  /// GF(2^8) with modulus x^8+x^4+x^3+x^2+1 (0x11D).
  static Field gf256();
  /// GF(2).
  static Field binary();

  const FieldSpec& spec() const { return spec_; }
  int degree() const { return spec_.m; }
  std::uint32_t order() const { return std::uint32_t{1} << spec_.m; }
  bool contains(std::uint32_t value) const { return value < order(); }

  Symbol add(Symbol a, Symbol b) const { return static_cast<Symbol>(a ^ b); }
  Symbol sub(Symbol a, Symbol b) const { return add(a, b); }
  Symbol mul(Symbol a, Symbol b) const {
    if (a == 0 || b == 0) return 0;
    return tables_->exp[tables_->log[a] + tables_->log[b]];
  }
  /// Throws DivisionByZeroError for a == 0.
  Symbol inv(Symbol a) const;
  Symbol div(Symbol a, Symbol b) const { return mul(a, inv(b)); }
  Symbol pow(Symbol a, std::uint64_t exponent) const;

  friend bool operator==(const Field& a, const Field& b) { return a.spec_ == b.spec_; }

 private:
  struct Tables {
    std::vector<Symbol> exp;  // doubled so log a + log b never wraps
    std::vector<std::uint32_t> log;
  };

  FieldSpec spec_;
  std::shared_ptr<const Tables> tables_;
};

inline FieldMatrix identity(Eigen::Index size) { return FieldMatrix::Identity(size, size); }

/// Matrix product over the field.
template <typename DerivedA, typename DerivedB>
FieldMatrix multiply(const Field& field, const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.cols() != b.rows()) throw InputError("matrix product dimension mismatch");
  FieldMatrix out = FieldMatrix::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index l = 0; l < a.cols(); ++l) {
      const Symbol coeff = a(i, l);
      if (coeff == 0) continue;
      for (Eigen::Index j = 0; j < b.cols(); ++j) {
        out(i, j) = field.add(out(i, j), field.mul(coeff, b(l, j)));
      }
    }
  }
  return out;
}

/// Matrix-vector product over the field.
template <typename Derived>
SymbolVector multiply(const Field& field, const Eigen::MatrixBase<Derived>& a, std::span<const Symbol> x) {
  if (static_cast<std::size_t>(a.cols()) != x.size()) throw InputError("matrix-vector dimension mismatch");
  SymbolVector out(static_cast<std::size_t>(a.rows()), 0);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    Symbol acc = 0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) acc = field.add(acc, field.mul(a(i, j), x[static_cast<std::size_t>(j)]));
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

/// Row rank by Gaussian elimination.
std::size_t rank(const Field& field, FieldMatrix a);

/// Solves A X = B for A of full column rank (A may be tall).
///
/// Throws SingularMatrixError when A is rank deficient and InputError when the
/// dimensions disagree, an entry is outside the field, or B is not in the
/// column space of A.
FieldMatrix solve(const Field& field, const FieldMatrix& a, const FieldMatrix& b);

/// Inverse of a square nonsingular matrix.
FieldMatrix inverse(const Field& field, const FieldMatrix& a);

/// Column vector view of a symbol vector, for use with `solve`.
FieldMatrix column(std::span<const Symbol> values);

}  // namespace regen::gf
