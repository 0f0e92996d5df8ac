#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace coverforge {

// Arbitrary-precision integer.  All arithmetic in this library is exact.
using Int = mpz_class;

// Dense matrix of arbitrary-precision integers, row-major.
// Matrices with 0 rows and/or 0 columns are legal and denote zero maps.
class IntMatrix {
  public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    // Row-by-row construction for literals in tests and fixtures.
    IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

    static IntMatrix identity(std::size_t n);
    static IntMatrix diagonal(std::size_t rows, std::size_t cols,
                              std::span<const Int> entries);
    static IntMatrix from_columns(std::size_t rows,
                                  const std::vector<std::vector<Int>>& cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Int& operator()(std::size_t i, std::size_t j) const {
        return data_[i * cols_ + j];
    }

    bool operator==(const IntMatrix&) const = default;

    IntMatrix transposed() const;
    std::vector<Int> column(std::size_t j) const;
    std::vector<Int> row(std::size_t i) const;

    // A·v, requires v.size() == cols().
    std::vector<Int> apply(std::span<const Int> v) const;

    bool is_zero() const;

    // Columns of `right` appended after the columns of `*this`.
    IntMatrix concat_cols(const IntMatrix& right) const;
    // Columns [first, last) of *this.
    IntMatrix slice_cols(std::size_t first, std::size_t last) const;

    std::string to_string() const;

  private:
    std::size_t rows_, cols_;
    std::vector<Int> data_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);

// Deterministic total order / key on matrices (shape first, then entries).
bool lex_less(const IntMatrix& a, const IntMatrix& b);
std::string matrix_key(const IntMatrix& m);

// U·A·V = D with U, V unimodular and D diagonal, D(i,i) >= 0,
// D(i,i) | D(i+1,i+1).  The nonzero diagonal entries are the invariant
// factors of coker(A).
struct SnfResult {
    IntMatrix U; // rows x rows
    IntMatrix D; // rows x cols
    IntMatrix V; // cols x cols
};

SnfResult snf(const IntMatrix& a);

// Column-style Hermite normal form H = A·W, W unimodular.  Pivot rows are
// strictly increasing left to right, pivots are positive, entries left of a
// pivot in its row lie in [0, pivot), and zero columns are gathered on the
// right.  The form is the canonical representative of the column lattice.
IntMatrix hnf(const IntMatrix& a);

struct HnfTransform {
    IntMatrix H;
    IntMatrix W; // A·W = H
    std::vector<std::size_t> pivot_rows; // pivot row of column j, j < rank
    std::size_t rank;
};

HnfTransform hnf_with_transform(const IntMatrix& a);

// Integral solution of A·x = b, if one exists.  Throws input_error on a
// dimension mismatch.
std::optional<std::vector<Int>> solve(const IntMatrix& a, std::span<const Int> b);

// Basis of {x : A·x = 0} as a (saturated) subgroup of Z^cols, one basis
// vector per column.
IntMatrix kernel_basis(const IntMatrix& a);

std::size_t rank(const IntMatrix& a);

// Determinant by fraction-free (Bareiss) elimination; square input only.
Int det(const IntMatrix& a);

// Inverse of a matrix with det = ±1; throws internal_error otherwise.
IntMatrix unimodular_inverse(const IntMatrix& u);

// gcd of a vector's entries (nonnegative; 0 for the empty/zero vector).
Int gcd_vec(std::span<const Int> v);

} // namespace coverforge
