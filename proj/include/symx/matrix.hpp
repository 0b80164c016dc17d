#pragma once

#include "scalar.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace symx {

/// Dense matrix over an arbitrary coefficient ring (rationals, complexes,
/// or polynomials). Eigen handles all floating-point linear algebra; this
/// type exists for exact arithmetic and for parameter-valued entries.
template <class C>
struct Mat {
    int rows = 0, cols = 0;
    std::vector<C> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a((size_t)r * c, ScalarTraits<C>::zero()) {}

    C& operator()(int i, int j) { return a[(size_t)i * cols + j]; }
    const C& operator()(int i, int j) const { return a[(size_t)i * cols + j]; }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = ScalarTraits<C>::one();
        return m;
    }

    friend Mat operator*(const Mat& x, const Mat& y) {
        if (x.cols != y.rows) throw std::invalid_argument("Mat: dimension mismatch in product");
        Mat r(x.rows, y.cols);
        for (int i = 0; i < x.rows; ++i)
            for (int k = 0; k < x.cols; ++k) {
                const C& xik = x(i, k);
                if (ScalarTraits<C>::is_zero(xik)) continue;
                for (int j = 0; j < y.cols; ++j) r(i, j) = r(i, j) + xik * y(k, j);
            }
        return r;
    }

    friend Mat operator-(const Mat& x, const Mat& y) {
        if (x.rows != y.rows || x.cols != y.cols)
            throw std::invalid_argument("Mat: dimension mismatch in difference");
        Mat r(x.rows, x.cols);
        for (size_t i = 0; i < x.a.size(); ++i) r.a[i] = x.a[i] - y.a[i];
        return r;
    }

    std::vector<C> column(int j) const {
        std::vector<C> v((size_t)rows);
        for (int i = 0; i < rows; ++i) v[i] = (*this)(i, j);
        return v;
    }
};

template <class S>
Mat<Complex> mat_to_complex(const Mat<S>& m) {
    Mat<Complex> r(m.rows, m.cols);
    for (size_t i = 0; i < m.a.size(); ++i) r.a[i] = to_complex(m.a[i]);
    return r;
}

inline Eigen::MatrixXcd to_eigen(const Mat<Complex>& m) {
    Eigen::MatrixXcd e(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) e(i, j) = m(i, j);
    return e;
}

inline Mat<Complex> from_eigen(const Eigen::MatrixXcd& e) {
    Mat<Complex> m((int)e.rows(), (int)e.cols());
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) m(i, j) = e(i, j);
    return m;
}

/// Row-reduce over a field, greedy leftmost pivots, in place.
/// Returns the pivot column of each pivot row in order.
template <class C>
std::vector<int> rref_in_place(Mat<C>& m) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols && row < m.rows; ++col) {
        int p = -1;
        for (int i = row; i < m.rows; ++i)
            if (!ScalarTraits<C>::is_zero(m(i, col))) {
                p = i;
                break;
            }
        if (p < 0) continue;
        if (p != row)
            for (int j = 0; j < m.cols; ++j) std::swap(m(p, j), m(row, j));
        C inv = ScalarTraits<C>::one() / m(row, col);
        for (int j = col; j < m.cols; ++j) m(row, j) = m(row, j) * inv;
        for (int i = 0; i < m.rows; ++i) {
            if (i == row || ScalarTraits<C>::is_zero(m(i, col))) continue;
            C f = m(i, col);
            for (int j = col; j < m.cols; ++j) m(i, j) = m(i, j) - f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

/// Solution of A x = b as an affine subspace: one particular solution plus a
/// nullspace basis. Convention: free variables are the non-pivot columns of
/// the RREF; the particular solution zeroes all of them, and the basis vector
/// attached to free column f has coordinate f equal to one.
template <class C>
struct AffineSolve {
    bool consistent = false;
    std::vector<C> particular;
    std::vector<std::vector<C>> nullbasis;
};

template <class C>
AffineSolve<C> solve_affine_exact(const Mat<C>& A, const std::vector<C>& b) {
    if ((int)b.size() != A.rows) throw std::invalid_argument("solve_affine_exact: bad rhs length");
    Mat<C> m(A.rows, A.cols + 1);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) m(i, j) = A(i, j);
        m(i, A.cols) = b[i];
    }
    auto piv = rref_in_place(m);
    AffineSolve<C> out;
    if (!piv.empty() && piv.back() == A.cols) return out;  // pivot in the rhs column
    out.consistent = true;
    std::vector<int> pivot_of_col(A.cols, -1);
    for (size_t r = 0; r < piv.size(); ++r) pivot_of_col[piv[r]] = (int)r;
    out.particular.assign(A.cols, ScalarTraits<C>::zero());
    for (size_t r = 0; r < piv.size(); ++r) out.particular[piv[r]] = m((int)r, A.cols);
    for (int f = 0; f < A.cols; ++f) {
        if (pivot_of_col[f] >= 0) continue;
        std::vector<C> v(A.cols, ScalarTraits<C>::zero());
        v[f] = ScalarTraits<C>::one();
        for (size_t r = 0; r < piv.size(); ++r)
            v[piv[r]] = ScalarTraits<C>::zero() - m((int)r, f);
        out.nullbasis.push_back(std::move(v));
    }
    return out;
}

/// Numeric rank with a relative singular-value cutoff.
inline int numeric_rank(const Eigen::MatrixXcd& m, double rel_tol) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > rel_tol * s(0)) ++r;
    return r;
}

}  // namespace symx
