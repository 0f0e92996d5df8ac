#include "coverforge/intmat.hpp"

#include "coverforge/errors.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace coverforge {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_)
            throw input_error("ragged matrix literal");
        for (long v : r)
            data_.emplace_back(v);
    }
}

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::diagonal(std::size_t rows, std::size_t cols,
                              std::span<const Int> entries) {
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < entries.size() && i < rows && i < cols; ++i)
        m(i, i) = entries[i];
    return m;
}

IntMatrix IntMatrix::from_columns(std::size_t rows,
                                  const std::vector<std::vector<Int>>& cols) {
    IntMatrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != rows)
            throw input_error("column length mismatch");
        for (std::size_t i = 0; i < rows; ++i)
            m(i, j) = cols[j][i];
    }
    return m;
}

IntMatrix IntMatrix::transposed() const {
    IntMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            m(j, i) = (*this)(i, j);
    return m;
}

std::vector<Int> IntMatrix::column(std::size_t j) const {
    std::vector<Int> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        c[i] = (*this)(i, j);
    return c;
}

std::vector<Int> IntMatrix::row(std::size_t i) const {
    std::vector<Int> r(cols_);
    for (std::size_t j = 0; j < cols_; ++j)
        r[j] = (*this)(i, j);
    return r;
}

std::vector<Int> IntMatrix::apply(std::span<const Int> v) const {
    if (v.size() != cols_)
        throw input_error("matrix-vector dimension mismatch");
    std::vector<Int> out(rows_, Int(0));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            out[i] += (*this)(i, j) * v[j];
    return out;
}

bool IntMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const Int& v) { return v == 0; });
}

IntMatrix IntMatrix::concat_cols(const IntMatrix& right) const {
    if (rows_ != right.rows_)
        throw input_error("concat_cols: row count mismatch");
    IntMatrix m(rows_, cols_ + right.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j)
            m(i, j) = (*this)(i, j);
        for (std::size_t j = 0; j < right.cols_; ++j)
            m(i, cols_ + j) = right(i, j);
    }
    return m;
}

IntMatrix IntMatrix::slice_cols(std::size_t first, std::size_t last) const {
    IntMatrix m(rows_, last - first);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = first; j < last; ++j)
            m(i, j - first) = (*this)(i, j);
    return m;
}

std::string IntMatrix::to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i ? "; " : "");
        for (std::size_t j = 0; j < cols_; ++j)
            os << (j ? "," : "") << (*this)(i, j).get_str();
    }
    os << "]";
    return os.str();
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.rows())
        throw input_error("matrix product dimension mismatch");
    IntMatrix m(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Int& aik = a(i, k);
            if (aik == 0)
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                m(i, j) += aik * b(k, j);
        }
    return m;
}

bool lex_less(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows() != b.rows())
        return a.rows() < b.rows();
    if (a.cols() != b.cols())
        return a.cols() < b.cols();
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            int c = cmp(a(i, j), b(i, j));
            if (c != 0)
                return c < 0;
        }
    return false;
}

std::string matrix_key(const IntMatrix& m) {
    std::ostringstream os;
    os << m.rows() << 'x' << m.cols() << ':';
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            os << m(i, j).get_str() << ',';
    return os.str();
}

namespace {

void row_swap(IntMatrix& a, std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < a.cols(); ++k)
        std::swap(a(i, k), a(j, k));
}

void col_swap(IntMatrix& a, std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < a.rows(); ++k)
        std::swap(a(k, i), a(k, j));
}

// row_i += q * row_j
void row_axpy(IntMatrix& a, std::size_t i, std::size_t j, const Int& q) {
    for (std::size_t k = 0; k < a.cols(); ++k)
        a(i, k) += q * a(j, k);
}

// col_i += q * col_j
void col_axpy(IntMatrix& a, std::size_t i, std::size_t j, const Int& q) {
    for (std::size_t k = 0; k < a.rows(); ++k)
        a(k, i) += q * a(k, j);
}

void row_negate(IntMatrix& a, std::size_t i) {
    for (std::size_t k = 0; k < a.cols(); ++k)
        a(i, k) = -a(i, k);
}

void col_negate(IntMatrix& a, std::size_t j) {
    for (std::size_t k = 0; k < a.rows(); ++k)
        a(k, j) = -a(k, j);
}

Int trunc_quot(const Int& num, const Int& den) {
    Int q;
    mpz_tdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return q;
}

Int floor_quot(const Int& num, const Int& den) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return q;
}

bool divisible(const Int& num, const Int& den) {
    return mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t()) != 0;
}

} // namespace

SnfResult snf(const IntMatrix& a0) {
    const std::size_t m = a0.rows(), n = a0.cols();
    IntMatrix a = a0;
    IntMatrix u = IntMatrix::identity(m);
    IntMatrix v = IntMatrix::identity(n);
    const std::size_t lim = std::min(m, n);

    for (std::size_t t = 0; t < lim; ++t) {
        for (;;) {
            // Smallest nonzero |entry| of the trailing submatrix becomes the pivot.
            std::size_t pi = t, pj = t;
            bool found = false;
            Int best;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j) {
                    if (a(i, j) == 0)
                        continue;
                    Int av = abs(a(i, j));
                    if (!found || av < best) {
                        best = av;
                        pi = i;
                        pj = j;
                        found = true;
                    }
                }
            if (!found) {
                // Trailing submatrix is zero: no more pivots anywhere.
                t = lim;
                break;
            }
            if (pi != t) {
                row_swap(a, t, pi);
                row_swap(u, t, pi);
            }
            if (pj != t) {
                col_swap(a, t, pj);
                col_swap(v, t, pj);
            }

            bool changed = false;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (a(i, t) == 0)
                    continue;
                Int q = -trunc_quot(a(i, t), a(t, t));
                row_axpy(a, i, t, q);
                row_axpy(u, i, t, q);
                if (a(i, t) != 0)
                    changed = true;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (a(t, j) == 0)
                    continue;
                Int q = -trunc_quot(a(t, j), a(t, t));
                col_axpy(a, j, t, q);
                col_axpy(v, j, t, q);
                if (a(t, j) != 0)
                    changed = true;
            }
            if (changed)
                continue; // remainders left; re-pick a smaller pivot

            // Pivot divides its cross; force it to divide the rest too.
            bool fixed = false;
            for (std::size_t i = t + 1; i < m && !fixed; ++i)
                for (std::size_t j = t + 1; j < n && !fixed; ++j)
                    if (!divisible(a(i, j), a(t, t))) {
                        row_axpy(a, t, i, Int(1));
                        row_axpy(u, t, i, Int(1));
                        fixed = true;
                    }
            if (!fixed)
                break;
        }
        if (t >= lim)
            break;
        if (a(t, t) < 0) {
            row_negate(a, t);
            row_negate(u, t);
        }
    }
    return SnfResult{std::move(u), std::move(a), std::move(v)};
}

namespace {

struct HnfState {
    IntMatrix h;
    IntMatrix w;
    std::vector<std::size_t> pivot_rows;
};

HnfState hnf_impl(const IntMatrix& a) {
    const std::size_t m = a.rows(), n = a.cols();
    HnfState st{a, IntMatrix::identity(n), {}};
    IntMatrix& h = st.h;
    IntMatrix& w = st.w;
    std::size_t c = 0;

    for (std::size_t i = 0; i < m && c < n; ++i) {
        std::size_t first = n;
        for (std::size_t j = c; j < n; ++j)
            if (h(i, j) != 0) {
                first = j;
                break;
            }
        if (first == n)
            continue;
        if (first != c) {
            col_swap(h, c, first);
            col_swap(w, c, first);
        }
        for (std::size_t j = c + 1; j < n; ++j) {
            if (h(i, j) == 0)
                continue;
            // Unimodular 2-column transform sending (h_ic, h_ij) to (g, 0).
            Int g, p, q;
            mpz_gcdext(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t(),
                       h(i, c).get_mpz_t(), h(i, j).get_mpz_t());
            Int alpha = h(i, c) / g;
            Int beta = h(i, j) / g;
            for (std::size_t k = 0; k < m; ++k) {
                Int nc = p * h(k, c) + q * h(k, j);
                Int nj = alpha * h(k, j) - beta * h(k, c);
                h(k, c) = nc;
                h(k, j) = nj;
            }
            for (std::size_t k = 0; k < n; ++k) {
                Int nc = p * w(k, c) + q * w(k, j);
                Int nj = alpha * w(k, j) - beta * w(k, c);
                w(k, c) = nc;
                w(k, j) = nj;
            }
        }
        if (h(i, c) < 0) {
            col_negate(h, c);
            col_negate(w, c);
        }
        for (std::size_t j = 0; j < c; ++j) {
            if (h(i, j) == 0)
                continue;
            Int q = -floor_quot(h(i, j), h(i, c));
            col_axpy(h, j, c, q);
            col_axpy(w, j, c, q);
        }
        st.pivot_rows.push_back(i);
        ++c;
    }
    return st;
}

} // namespace

IntMatrix hnf(const IntMatrix& a) { return hnf_impl(a).h; }

HnfTransform hnf_with_transform(const IntMatrix& a) {
    HnfState st = hnf_impl(a);
    std::size_t r = st.pivot_rows.size();
    return HnfTransform{std::move(st.h), std::move(st.w), std::move(st.pivot_rows), r};
}

std::optional<std::vector<Int>> solve(const IntMatrix& a, std::span<const Int> b) {
    if (b.size() != a.rows())
        throw input_error("solve: right-hand side length does not match row count");
    HnfTransform t = hnf_with_transform(a);
    std::vector<Int> residual(b.begin(), b.end());
    std::vector<Int> y(a.cols(), Int(0));
    for (std::size_t j = 0; j < t.rank; ++j) {
        std::size_t p = t.pivot_rows[j];
        // Rows above the pivot row that are not pivot rows must already be 0.
        if (!divisible(residual[p], t.H(p, j)))
            return std::nullopt;
        Int q = residual[p] / t.H(p, j);
        if (q != 0)
            for (std::size_t i = 0; i < a.rows(); ++i)
                residual[i] -= q * t.H(i, j);
        y[j] = q;
    }
    for (std::size_t i = 0; i < a.rows(); ++i)
        if (residual[i] != 0)
            return std::nullopt;
    std::vector<Int> x = t.W.apply(y);
    return x;
}

IntMatrix kernel_basis(const IntMatrix& a) {
    HnfTransform t = hnf_with_transform(a);
    return t.W.slice_cols(t.rank, a.cols());
}

std::size_t rank(const IntMatrix& a) { return hnf_with_transform(a).rank; }

Int det(const IntMatrix& a) {
    if (a.rows() != a.cols())
        throw input_error("det: matrix not square");
    const std::size_t n = a.rows();
    if (n == 0)
        return 1;
    IntMatrix b = a;
    int sign = 1;
    Int prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (b(k, k) == 0) {
            std::size_t piv = n;
            for (std::size_t i = k + 1; i < n; ++i)
                if (b(i, k) != 0) {
                    piv = i;
                    break;
                }
            if (piv == n)
                return 0;
            row_swap(b, k, piv);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Int num = b(i, j) * b(k, k) - b(i, k) * b(k, j);
                Int q, r;
                mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(),
                            prev.get_mpz_t());
                if (r != 0)
                    throw internal_error("Bareiss division not exact");
                b(i, j) = q;
            }
            b(i, k) = 0;
        }
        prev = b(k, k);
    }
    return sign * b(n - 1, n - 1);
}

IntMatrix unimodular_inverse(const IntMatrix& u) {
    if (u.rows() != u.cols())
        throw internal_error("unimodular_inverse: matrix not square");
    SnfResult s = snf(u);
    if (s.D != IntMatrix::identity(u.rows()))
        throw internal_error("unimodular_inverse: matrix is not unimodular");
    return s.V * s.U;
}

Int gcd_vec(std::span<const Int> v) {
    Int g = 0;
    for (const Int& x : v)
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    return g;
}

} // namespace coverforge
