#pragma once

#include "matrix.hpp"
#include "multi_index.hpp"
#include "poly.hpp"
#include "scalar.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <vector>

namespace symx {

namespace detail {
template <class S>
S div_int(const S& c, std::int64_t v);
template <>
inline Complex div_int<Complex>(const Complex& c, std::int64_t v) { return c / double(v); }
template <>
inline Rational div_int<Rational>(const Rational& c, std::int64_t v) { return c / Rational(v); }
}  // namespace detail

enum class NormKind { hilbert_schmidt, coefficient };

/// Symmetric order-d tensor over C^{n+1} in affine labeling: the entry at
/// exponent vector alpha (|alpha| <= d over the last n coordinates) is the
/// tensor entry whose d slots hold d-|alpha| zeros and alpha_i copies of i.
/// Entries are stored densely over the canonical enumeration of labels.
/// Treat instances as immutable values; builders construct and return them.
template <class S>
struct SymTensor {
    int n = 0, d = 0;
    std::vector<MultiIndex> labels;
    std::map<MultiIndex, int, CanonicalLess> pos;
    std::vector<S> val;

    SymTensor() = default;
    SymTensor(int n_, int d_) : n(n_), d(d_), labels(enumerate_upto(n_, d_)) {
        for (int i = 0; i < (int)labels.size(); ++i) pos.emplace(labels[i], i);
        val.assign(labels.size(), ScalarTraits<S>::zero());
    }

    int size() const { return (int)labels.size(); }

    const S& at(const MultiIndex& a) const {
        auto it = pos.find(a);
        if (it == pos.end()) throw std::invalid_argument("SymTensor::at: label out of range");
        return val[it->second];
    }

    void set(const MultiIndex& a, S v) {
        auto it = pos.find(a);
        if (it == pos.end()) throw std::invalid_argument("SymTensor::set: label out of range");
        val[it->second] = std::move(v);
    }

    /// The polynomial A(x) = sum_alpha multinomial(d;alpha) A_alpha x_0^{d-|alpha|} x^alpha.
    Poly<S> to_poly() const {
        Poly<S> p(n + 1);
        for (int i = 0; i < size(); ++i) {
            const MultiIndex& a = labels[i];
            MultiIndex b(n + 1, 0);
            b[0] = d - mi_degree(a);
            for (int j = 0; j < n; ++j) b[j + 1] = a[j];
            p.add_term(std::move(b), val[i] * ScalarTraits<S>::from_int(multinomial(d, a)));
        }
        return p;
    }

    friend SymTensor operator+(const SymTensor& x, const SymTensor& y) {
        check_shape(x, y);
        SymTensor r = x;
        for (int i = 0; i < r.size(); ++i) r.val[i] = r.val[i] + y.val[i];
        return r;
    }

    friend SymTensor operator-(const SymTensor& x, const SymTensor& y) {
        check_shape(x, y);
        SymTensor r = x;
        for (int i = 0; i < r.size(); ++i) r.val[i] = r.val[i] - y.val[i];
        return r;
    }

    SymTensor scaled(const S& s) const {
        SymTensor r = *this;
        for (auto& v : r.val) v = v * s;
        return r;
    }

    double norm(NormKind kind = NormKind::coefficient) const {
        double acc = 0.0;
        for (int i = 0; i < size(); ++i) {
            double w = double(multinomial(d, labels[i]));
            double m = scalar_abs(val[i]);
            acc += (kind == NormKind::hilbert_schmidt) ? w * m * m : (w * m) * (w * m);
        }
        return std::sqrt(acc);
    }

    /// Flattening with row labels of degree <= k and column labels of degree
    /// <= d-k; entry (gamma, delta) is A_{gamma+delta}.
    Mat<S> catalecticant(int k) const {
        if (k < 0 || k > d) throw std::invalid_argument("catalecticant: k out of range");
        auto rows = enumerate_upto(n, k), cols = enumerate_upto(n, d - k);
        Mat<S> m((int)rows.size(), (int)cols.size());
        for (int i = 0; i < m.rows; ++i)
            for (int j = 0; j < m.cols; ++j) m(i, j) = at(mi_add(rows[i], cols[j]));
        return m;
    }

private:
    static void check_shape(const SymTensor& x, const SymTensor& y) {
        if (x.n != y.n || x.d != y.d)
            throw std::invalid_argument("SymTensor: shape mismatch");
    }
};

/// Read tensor entries off a homogeneous degree-d polynomial in x_0..x_n:
/// A_alpha = coeff(x_0^{d-|alpha|} x^alpha) / multinomial(d; alpha).
template <class S>
SymTensor<S> tensor_from_poly(const Poly<S>& p, int d) {
    int n = p.nvars - 1;
    if (n < 0) throw std::invalid_argument("tensor_from_poly: polynomial has no variables");
    SymTensor<S> t(n, d);
    for (auto& [b, c] : p.terms) {
        if (mi_degree(b) != d)
            throw std::invalid_argument("tensor_from_poly: polynomial not homogeneous of degree d");
        MultiIndex a(b.begin() + 1, b.end());
        t.set(a, detail::div_int<S>(c, multinomial(d, a)));
    }
    return t;
}

/// Pairing <p, A> = sum_alpha p_alpha A_alpha for p of degree <= d in the
/// affine variables.
template <class S>
S apolar_pair(const Poly<S>& p, const SymTensor<S>& t) {
    if (p.nvars > t.n) throw std::invalid_argument("apolar_pair: too many variables");
    if (p.degree() > t.d) throw std::invalid_argument("apolar_pair: degree exceeds tensor order");
    S acc = ScalarTraits<S>::zero();
    for (auto& [a, c] : p.widened(t.n).terms) acc = acc + c * t.at(a);
    return acc;
}

/// lambda * (1, v)^{(d)}: entry at alpha is lambda * v^alpha.
template <class S>
SymTensor<S> rank_one(int d, const S& lambda, const std::vector<S>& v) {
    int n = (int)v.size();
    SymTensor<S> t(n, d);
    for (int i = 0; i < t.size(); ++i) {
        S m = lambda;
        const MultiIndex& a = t.labels[i];
        for (int j = 0; j < n; ++j)
            for (int e = 0; e < a[j]; ++e) m = m * v[j];
        t.val[i] = m;
    }
    return t;
}

/// lambda * u^{(d)} for a projective point u in C^{n+1}:
/// entry at alpha is lambda * u_0^{d-|alpha|} * prod u_i^{alpha_i}.
template <class S>
SymTensor<S> rank_one_hom(int d, const S& lambda, const std::vector<S>& u) {
    int n = (int)u.size() - 1;
    SymTensor<S> t(n, d);
    for (int i = 0; i < t.size(); ++i) {
        const MultiIndex& a = t.labels[i];
        S m = lambda;
        for (int e = 0; e < t.d - mi_degree(a); ++e) m = m * u[0];
        for (int j = 0; j < n; ++j)
            for (int e = 0; e < a[j]; ++e) m = m * u[j + 1];
        t.val[i] = m;
    }
    return t;
}

/// Weighted sum of affine terms lambda_j (1,v_j)^{(d)} and projective terms.
struct Decomposition {
    int n = 0, d = 0;
    std::vector<Complex> lambdas;
    std::vector<std::vector<Complex>> points;
    std::vector<Complex> hom_lambdas;
    std::vector<std::vector<Complex>> hom_points;  // length n+1 each

    int rank() const { return (int)(lambdas.size() + hom_lambdas.size()); }
};

inline SymTensor<Complex> reconstruct(const Decomposition& dec) {
    SymTensor<Complex> acc(dec.n, dec.d);
    for (size_t j = 0; j < dec.lambdas.size(); ++j)
        acc = acc + rank_one<Complex>(dec.d, dec.lambdas[j], dec.points[j]);
    for (size_t j = 0; j < dec.hom_lambdas.size(); ++j)
        acc = acc + rank_one_hom<Complex>(dec.d, dec.hom_lambdas[j], dec.hom_points[j]);
    return acc;
}

struct ResidualReport {
    double abs_error = 0.0;
    double rel_error = 0.0;
};

inline ResidualReport decomposition_residual(const SymTensor<Complex>& A, const Decomposition& dec,
                                             NormKind kind = NormKind::coefficient) {
    ResidualReport r;
    r.abs_error = (A - reconstruct(dec)).norm(kind);
    double na = A.norm(kind);
    r.rel_error = na > 0 ? r.abs_error / na : r.abs_error;
    return r;
}

template <class S>
SymTensor<Complex> tensor_to_complex(const SymTensor<S>& t) {
    SymTensor<Complex> r(t.n, t.d);
    for (int i = 0; i < t.size(); ++i) r.val[i] = to_complex(t.val[i]);
    return r;
}

/// Largest numeric rank among the nontrivial flattenings; lower bound for
/// the decomposition rank and the rank-escalation start.
inline int max_flattening_rank(const SymTensor<Complex>& t, double rel_tol = 1e-8) {
    int best = 0;
    int lo = (t.d >= 2) ? 1 : 0, hi = (t.d >= 2) ? t.d - 1 : 0;
    for (int k = lo; k <= hi; ++k)
        best = std::max(best, numeric_rank(to_eigen(t.catalecticant(k)), rel_tol));
    return best;
}

}  // namespace symx
