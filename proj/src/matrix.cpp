#include "opd/matrix.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

namespace opd {

Matrix Matrix::identity(FieldSpec f, int n)
{
    Matrix m(f, n, n);
    Scalar one = Scalar::one(f);
    for (int i = 0; i < n; ++i)
        m.col_[i].push_back({i, one});
    return m;
}

Matrix Matrix::from_dense(FieldSpec f, const std::vector<std::vector<Scalar>>& rows)
{
    int r = (int)rows.size();
    int c = r == 0 ? 0 : (int)rows[0].size();
    Matrix m(f, r, c);
    for (int i = 0; i < r; ++i) {
        require((int)rows[i].size() == c, "ragged dense matrix");
        for (int j = 0; j < c; ++j)
            if (!rows[i][j].is_zero())
                m.col_[j].push_back({i, rows[i][j]});
    }
    for (auto& cl : m.col_)
        std::sort(cl.begin(), cl.end(), [](auto& a, auto& b) { return a.first < b.first; });
    return m;
}

Matrix Matrix::from_index_map(FieldSpec f, int rows, const std::vector<int>& rowof,
                              const std::vector<Scalar>& vals)
{
    require(rowof.size() == vals.size(), "index map size mismatch");
    Matrix m(f, rows, (int)rowof.size());
    for (int j = 0; j < (int)rowof.size(); ++j) {
        if (rowof[j] < 0)
            continue;
        require(rowof[j] < rows, "row index out of range");
        if (!vals[j].is_zero())
            m.col_[j].push_back({rowof[j], vals[j]});
    }
    return m;
}

Matrix Matrix::permutation_matrix(FieldSpec f, const std::vector<int>& rowof)
{
    std::vector<Scalar> ones(rowof.size(), Scalar::one(f));
    return from_index_map(f, (int)rowof.size(), rowof, ones);
}

void Matrix::set(int r, int c, const Scalar& v)
{
    require(r >= 0 && r < rows_ && c >= 0 && c < cols_, "matrix index out of range");
    auto& cl = col_[c];
    auto it = std::lower_bound(cl.begin(), cl.end(), r,
                               [](const auto& e, int row) { return e.first < row; });
    if (it != cl.end() && it->first == r) {
        if (v.is_zero())
            cl.erase(it);
        else
            it->second = v;
    }
    else if (!v.is_zero())
        cl.insert(it, {r, v});
}

void Matrix::add_to(int r, int c, const Scalar& v)
{
    if (v.is_zero())
        return;
    auto& cl = col_[c];
    auto it = std::lower_bound(cl.begin(), cl.end(), r,
                               [](const auto& e, int row) { return e.first < row; });
    if (it != cl.end() && it->first == r) {
        it->second = it->second + v;
        if (it->second.is_zero())
            cl.erase(it);
    }
    else
        cl.insert(it, {r, v});
}

Scalar Matrix::at(int r, int c) const
{
    const auto& cl = col_[c];
    auto it = std::lower_bound(cl.begin(), cl.end(), r,
                               [](const auto& e, int row) { return e.first < row; });
    if (it != cl.end() && it->first == r)
        return it->second;
    return Scalar::zero(field_);
}

void Matrix::set_col(int c, SparseCol v)
{
    std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a.first < b.first; });
    col_[c] = std::move(v);
}

static SparseCol combine(SparseCol terms)
{
    std::sort(terms.begin(), terms.end(), [](auto& a, auto& b) { return a.first < b.first; });
    SparseCol out;
    for (auto& [r, v] : terms) {
        if (!out.empty() && out.back().first == r)
            out.back().second = out.back().second + v;
        else
            out.push_back({r, v});
        if (!out.empty() && out.back().second.is_zero())
            out.pop_back();
    }
    return out;
}

SparseCol Matrix::apply(const SparseCol& v) const
{
    SparseCol acc;
    for (const auto& [j, s] : v) {
        require(j >= 0 && j < cols_, "vector index out of matrix range");
        for (const auto& [r, a] : col_[j])
            acc.push_back({r, a * s});
    }
    return combine(std::move(acc));
}

Matrix Matrix::operator*(const Matrix& o) const
{
    require(field_ == o.field_, "matrix field mismatch");
    require(cols_ == o.rows_, "matrix shape mismatch in product: ", rows_, "x", cols_, " * ",
            o.rows_, "x", o.cols_);
    Matrix m(field_, rows_, o.cols_);
    for (int j = 0; j < o.cols_; ++j)
        m.col_[j] = apply(o.col_[j]);
    return m;
}

Matrix Matrix::operator+(const Matrix& o) const
{
    require(field_ == o.field_ && rows_ == o.rows_ && cols_ == o.cols_, "matrix add mismatch");
    Matrix m(field_, rows_, cols_);
    for (int j = 0; j < cols_; ++j) {
        SparseCol t = col_[j];
        t.insert(t.end(), o.col_[j].begin(), o.col_[j].end());
        m.col_[j] = combine(std::move(t));
    }
    return m;
}

Matrix Matrix::operator-(const Matrix& o) const { return *this + (-o); }

Matrix Matrix::scaled(const Scalar& s) const
{
    Matrix m(field_, rows_, cols_);
    if (s.is_zero())
        return m;
    for (int j = 0; j < cols_; ++j) {
        m.col_[j] = col_[j];
        for (auto& e : m.col_[j])
            e.second = e.second * s;
    }
    return m;
}

Matrix Matrix::operator-() const { return scaled(-Scalar::one(field_)); }

Matrix Matrix::kron(const Matrix& o) const
{
    require(field_ == o.field_, "matrix field mismatch");
    Matrix m(field_, rows_ * o.rows_, cols_ * o.cols_);
    for (int j = 0; j < cols_; ++j)
        for (int j2 = 0; j2 < o.cols_; ++j2) {
            SparseCol cl;
            for (const auto& [r, a] : col_[j])
                for (const auto& [r2, b] : o.col_[j2])
                    cl.push_back({r * o.rows_ + r2, a * b});
            m.col_[j * o.cols_ + j2] = combine(std::move(cl));
        }
    return m;
}

Matrix Matrix::transpose() const
{
    Matrix m(field_, cols_, rows_);
    for (int j = 0; j < cols_; ++j)
        for (const auto& [r, v] : col_[j])
            m.col_[r].push_back({j, v});
    for (auto& cl : m.col_)
        std::sort(cl.begin(), cl.end(), [](auto& a, auto& b) { return a.first < b.first; });
    return m;
}

bool Matrix::operator==(const Matrix& o) const
{
    if (field_ != o.field_ || rows_ != o.rows_ || cols_ != o.cols_)
        return false;
    return col_ == o.col_;
}

bool Matrix::is_zero() const
{
    for (const auto& cl : col_)
        if (!cl.empty())
            return false;
    return true;
}

Matrix Matrix::direct_sum(const Matrix& o) const
{
    require(field_ == o.field_, "matrix field mismatch");
    Matrix m(field_, rows_ + o.rows_, cols_ + o.cols_);
    for (int j = 0; j < cols_; ++j)
        m.col_[j] = col_[j];
    for (int j = 0; j < o.cols_; ++j) {
        SparseCol cl = o.col_[j];
        for (auto& e : cl)
            e.first += rows_;
        m.col_[cols_ + j] = std::move(cl);
    }
    return m;
}

Matrix Matrix::hcat(const Matrix& o) const
{
    require(field_ == o.field_ && rows_ == o.rows_, "hcat shape mismatch");
    Matrix m(field_, rows_, cols_ + o.cols_);
    for (int j = 0; j < cols_; ++j)
        m.col_[j] = col_[j];
    for (int j = 0; j < o.cols_; ++j)
        m.col_[cols_ + j] = o.col_[j];
    return m;
}

Matrix Matrix::select_rows(const std::vector<int>& rows) const
{
    std::vector<int> where(rows_, -1);
    for (int i = 0; i < (int)rows.size(); ++i)
        where[rows[i]] = i;
    Matrix m(field_, (int)rows.size(), cols_);
    for (int j = 0; j < cols_; ++j) {
        SparseCol cl;
        for (const auto& [r, v] : col_[j])
            if (where[r] >= 0)
                cl.push_back({where[r], v});
        m.col_[j] = combine(std::move(cl));
    }
    return m;
}

Matrix Matrix::select_cols(const std::vector<int>& cols) const
{
    Matrix m(field_, rows_, (int)cols.size());
    for (int j = 0; j < (int)cols.size(); ++j)
        m.col_[j] = col_[cols[j]];
    return m;
}

/* Dense row-echelon workhorse.  Reduces a copy of the dense rows in place and
 * returns the pivot (row, col) list.  Full reduced form (RREF). */
namespace {
struct Echelon {
    std::vector<std::vector<Scalar>> a;
    std::vector<std::pair<int, int>> pivots;  // (row, col)
};

Echelon echelonize(std::vector<std::vector<Scalar>> a, int ncols)
{
    Echelon e;
    int prow = 0;
    for (int c = 0; c < ncols && prow < (int)a.size(); ++c) {
        int sel = -1;
        for (int r = prow; r < (int)a.size(); ++r)
            if (!a[r][c].is_zero()) {
                sel = r;
                break;
            }
        if (sel < 0)
            continue;
        std::swap(a[prow], a[sel]);
        Scalar inv = a[prow][c].inverse();
        for (int j = c; j < ncols; ++j)
            a[prow][j] = a[prow][j] * inv;
        for (int r = 0; r < (int)a.size(); ++r) {
            if (r == prow || a[r][c].is_zero())
                continue;
            Scalar m = a[r][c];
            for (int j = c; j < ncols; ++j)
                a[r][j] = a[r][j] - m * a[prow][j];
        }
        e.pivots.push_back({prow, c});
        ++prow;
    }
    e.a = std::move(a);
    return e;
}
}  // namespace

std::vector<std::vector<Scalar>> Matrix::to_dense() const
{
    std::vector<std::vector<Scalar>> rows(rows_, std::vector<Scalar>(cols_, Scalar::zero(field_)));
    for (int j = 0; j < cols_; ++j)
        for (const auto& [r, v] : col_[j])
            rows[r][j] = v;
    return rows;
}

int Matrix::rank() const
{
    return (int)echelonize(to_dense(), cols_).pivots.size();
}

Matrix Matrix::kernel() const
{
    Echelon e = echelonize(to_dense(), cols_);
    std::vector<char> is_pivot(cols_, 0);
    std::vector<int> pivot_row(cols_, -1);
    for (auto& [r, c] : e.pivots) {
        is_pivot[c] = 1;
        pivot_row[c] = r;
    }
    std::vector<int> free_cols;
    for (int c = 0; c < cols_; ++c)
        if (!is_pivot[c])
            free_cols.push_back(c);
    Matrix k(field_, cols_, (int)free_cols.size());
    for (int idx = 0; idx < (int)free_cols.size(); ++idx) {
        int fc = free_cols[idx];
        SparseCol cl;
        cl.push_back({fc, Scalar::one(field_)});
        for (int c = 0; c < cols_; ++c)
            if (is_pivot[c] && !e.a[pivot_row[c]][fc].is_zero())
                cl.push_back({c, -e.a[pivot_row[c]][fc]});
        k.set_col(idx, std::move(cl));
    }
    return k;
}

std::vector<int> Matrix::pivot_columns() const
{
    Echelon e = echelonize(to_dense(), cols_);
    std::vector<int> out;
    for (auto& [r, c] : e.pivots)
        out.push_back(c);
    return out;
}

std::optional<Matrix> Matrix::solve(const Matrix& b) const
{
    require(b.rows() == rows_, "solve shape mismatch");
    // eliminate on [A | B]
    Matrix aug = hcat(b);
    Echelon e = echelonize(aug.to_dense(), cols_ + b.cols());
    std::vector<int> pivot_of_col(cols_, -1);
    for (auto& [r, c] : e.pivots) {
        if (c >= cols_)
            return std::nullopt;  // pivot in the RHS: inconsistent
        pivot_of_col[c] = r;
    }
    Matrix x(field_, cols_, b.cols());
    for (int j = 0; j < b.cols(); ++j) {
        SparseCol cl;
        for (int c = 0; c < cols_; ++c)
            if (pivot_of_col[c] >= 0 && !e.a[pivot_of_col[c]][cols_ + j].is_zero())
                cl.push_back({c, e.a[pivot_of_col[c]][cols_ + j]});
        x.set_col(j, std::move(cl));
    }
    // rows without pivots must be consistent; echelonize guarantees zero rows there,
    // but verify to catch inconsistent systems with pivot rows exhausted
    if (!((*this) * x == b))
        return std::nullopt;
    return x;
}

Matrix Matrix::inverse_of_square() const
{
    require(rows_ == cols_, "inverse of non-square matrix");
    auto x = solve(identity(field_, rows_));
    require(x.has_value(), "matrix not invertible");
    return *x;
}

std::string Matrix::str() const
{
    std::ostringstream os;
    auto d = to_dense();
    os << rows_ << "x" << cols_ << " [";
    for (int i = 0; i < rows_; ++i) {
        os << (i ? "; " : "");
        for (int j = 0; j < cols_; ++j)
            os << (j ? " " : "") << d[i][j].str();
    }
    os << "]";
    return os.str();
}

QuotientData quotient_by_span(const FieldSpec& f, int dim, const Matrix& span_cols)
{
    require(span_cols.rows() == dim, "span dimension mismatch");
    // Echelonize the span transposed: rows are spanning vectors.
    Echelon e = echelonize(span_cols.transpose().to_dense(), dim);
    std::vector<char> is_pivot(dim, 0);
    for (auto& [r, c] : e.pivots)
        is_pivot[c] = 1;
    std::vector<int> rep;  // non-pivot coordinates survive in the quotient
    for (int c = 0; c < dim; ++c)
        if (!is_pivot[c])
            rep.push_back(c);
    int q = (int)rep.size();
    // proj: reduce e_i by the echelon rows, keep non-pivot coords
    Matrix proj(f, q, dim);
    for (int i = 0; i < dim; ++i) {
        // residue of e_i: e_i minus, for each echelon row with pivot p, coefficient e_i[p] * row
        // e_i has a single 1 at i; if i is a pivot col of row r, residue = e_i - row_r
        SparseCol cl;
        if (!is_pivot[i]) {
            for (int k = 0; k < q; ++k)
                if (rep[k] == i)
                    cl.push_back({k, Scalar::one(f)});
        }
        else {
            int row = -1;
            for (auto& [r, c] : e.pivots)
                if (c == i)
                    row = r;
            for (int k = 0; k < q; ++k) {
                const Scalar& v = e.a[row][rep[k]];
                if (!v.is_zero())
                    cl.push_back({k, -v});
            }
        }
        proj.set_col(i, std::move(cl));
    }
    Matrix sect(f, dim, q);
    for (int k = 0; k < q; ++k)
        sect.set(rep[k], k, Scalar::one(f));
    return {std::move(proj), std::move(sect)};
}

}  // namespace opd
