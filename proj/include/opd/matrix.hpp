#ifndef OPD_MATRIX_HPP
#define OPD_MATRIX_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opd/field.hpp"

namespace opd {

using SparseCol = std::vector<std::pair<int, Scalar>>;  // sorted by row, no zeros

/* Exact matrix over a FieldSpec, stored column-sparse.  Rows x cols may be 0.
 * Dense elimination routines (rank/kernel/solve) are used only on small sizes. */
class Matrix {
  public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(FieldSpec f, int rows, int cols) : field_(f), rows_(rows), cols_(cols), col_(cols) {}
    static Matrix identity(FieldSpec f, int n);
    static Matrix zero(FieldSpec f, int rows, int cols) { return Matrix(f, rows, cols); }
    static Matrix from_dense(FieldSpec f, const std::vector<std::vector<Scalar>>& rows);
    /* Single-entry-per-column matrix: col j has value vals[j] at row rowof[j]; row -1 = zero column. */
    static Matrix from_index_map(FieldSpec f, int rows, const std::vector<int>& rowof,
                                 const std::vector<Scalar>& vals);
    static Matrix permutation_matrix(FieldSpec f, const std::vector<int>& rowof);

    const FieldSpec& field() const { return field_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    void set(int r, int c, const Scalar& v);       // overwrite one entry
    void add_to(int r, int c, const Scalar& v);    // accumulate one entry
    Scalar at(int r, int c) const;
    const SparseCol& col(int c) const { return col_[c]; }
    void set_col(int c, SparseCol v);

    Matrix operator*(const Matrix& o) const;  // composition: this ∘ o
    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix scaled(const Scalar& s) const;
    Matrix operator-() const;
    Matrix kron(const Matrix& o) const;  // row (i,i') -> i*o.rows+i', col (j,j') -> j*o.cols+j'
    Matrix transpose() const;
    bool operator==(const Matrix& o) const;
    bool operator!=(const Matrix& o) const { return !(*this == o); }
    bool is_zero() const;

    SparseCol apply(const SparseCol& v) const;  // matrix * sparse vector

    /* Stack blocks diagonally: result = diag(this, o). */
    Matrix direct_sum(const Matrix& o) const;
    /* Horizontal concatenation [this | o] (same row count). */
    Matrix hcat(const Matrix& o) const;
    /* Sub-matrix picking the given rows/cols in order. */
    Matrix select_rows(const std::vector<int>& rows) const;
    Matrix select_cols(const std::vector<int>& cols) const;

    int rank() const;
    /* Basis of the null space, as columns. */
    Matrix kernel() const;
    /* Column-space basis: the subset of column indices forming a pivot basis. */
    std::vector<int> pivot_columns() const;
    /* Solve this * X = B exactly; empty optional if inconsistent. */
    std::optional<Matrix> solve(const Matrix& b) const;
    Matrix inverse_of_square() const;

    std::vector<std::vector<Scalar>> to_dense() const;
    std::string str() const;

  private:
    FieldSpec field_;
    int rows_, cols_;
    std::vector<SparseCol> col_;
};

/* Quotient of k^dim by the span of the given columns: proj is q x dim, sect is dim x q,
 * proj*sect = id_q, proj*span = 0, and ker(proj) = span. */
struct QuotientData {
    Matrix proj;
    Matrix sect;
};
QuotientData quotient_by_span(const FieldSpec& f, int dim, const Matrix& span_cols);

}  // namespace opd

#endif
