#pragma once

#include "multi_index.hpp"
#include "scalar.hpp"

#include <map>
#include <sstream>
#include <utility>
#include <vector>

namespace symx {

/// Sparse multivariate polynomial over a coefficient ring C.
/// Terms are kept in canonical monomial order with exact-zero coefficients
/// removed, so two polynomials are equal iff their term maps are equal.
/// C may itself be a Poly (see ScalarTraits<Poly<S>> below), which is how
/// parameter-dependent coefficients are represented.
template <class C>
struct Poly {
    int nvars = 0;
    std::map<MultiIndex, C, CanonicalLess> terms;

    Poly() = default;
    explicit Poly(int nv) : nvars(nv) {}

    static Poly constant(int nv, C c) {
        Poly p(nv);
        p.add_term(MultiIndex(nv, 0), std::move(c));
        return p;
    }

    static Poly monomial(int nv, MultiIndex a, C c) {
        Poly p(nv);
        p.add_term(std::move(a), std::move(c));
        return p;
    }

    static Poly variable(int nv, int i, C c) { return monomial(nv, mi_unit(nv, i), std::move(c)); }

    bool is_zero() const { return terms.empty(); }

    int degree() const {
        int d = 0;
        for (auto& [a, c] : terms) d = std::max(d, mi_degree(a));
        return d;
    }

    void add_term(MultiIndex a, C c) {
        if (ScalarTraits<C>::is_zero(c)) return;
        if ((int)a.size() != nvars) a.resize(nvars, 0);
        auto it = terms.find(a);
        if (it == terms.end()) {
            terms.emplace(std::move(a), std::move(c));
        } else {
            it->second = it->second + c;
            if (ScalarTraits<C>::is_zero(it->second)) terms.erase(it);
        }
    }

    C coeff(const MultiIndex& a) const {
        auto it = terms.find(a);
        return it == terms.end() ? ScalarTraits<C>::zero() : it->second;
    }

    /// Exponent vectors are padded to the wider variable count when two
    /// polynomials built over different nvars meet in arithmetic.
    Poly widened(int nv) const {
        if (nv == nvars) return *this;
        Poly r(nv);
        for (auto& [a, c] : terms) {
            MultiIndex b(a);
            b.resize(nv, 0);
            r.add_term(std::move(b), c);
        }
        return r;
    }

    friend Poly operator+(const Poly& x, const Poly& y) {
        int nv = std::max(x.nvars, y.nvars);
        Poly r = x.widened(nv);
        for (auto& [a, c] : y.widened(nv).terms) r.add_term(a, c);
        return r;
    }

    friend Poly operator-(const Poly& x, const Poly& y) {
        int nv = std::max(x.nvars, y.nvars);
        Poly r = x.widened(nv);
        for (auto& [a, c] : y.widened(nv).terms) r.add_term(a, ScalarTraits<C>::zero() - c);
        return r;
    }

    friend Poly operator*(const Poly& x, const Poly& y) {
        int nv = std::max(x.nvars, y.nvars);
        Poly xa = x.widened(nv), ya = y.widened(nv);
        Poly r(nv);
        for (auto& [a, ca] : xa.terms)
            for (auto& [b, cb] : ya.terms) r.add_term(mi_add(a, b), ca * cb);
        return r;
    }

    Poly operator-() const {
        Poly r(nvars);
        for (auto& [a, c] : terms) r.add_term(a, ScalarTraits<C>::zero() - c);
        return r;
    }

    Poly scaled(const C& s) const {
        Poly r(nvars);
        for (auto& [a, c] : terms) r.add_term(a, c * s);
        return r;
    }

    friend bool operator==(const Poly& x, const Poly& y) {
        return x.widened(std::max(x.nvars, y.nvars)).terms ==
               y.widened(std::max(x.nvars, y.nvars)).terms;
    }

    /// Evaluate at a point. V must admit conversion from C via to_complex /
    /// identity; powers are cached per variable.
    template <class V>
    V eval(const std::vector<V>& pt) const {
        if ((int)pt.size() != nvars) throw std::invalid_argument("Poly::eval: wrong point length");
        std::vector<int> maxe(nvars, 0);
        for (auto& [a, c] : terms)
            for (int i = 0; i < nvars; ++i) maxe[i] = std::max(maxe[i], a[i]);
        std::vector<std::vector<V>> pw(nvars);
        for (int i = 0; i < nvars; ++i) {
            pw[i].resize(maxe[i] + 1, ScalarTraits<V>::one());
            for (int e = 1; e <= maxe[i]; ++e) pw[i][e] = pw[i][e - 1] * pt[i];
        }
        V acc = ScalarTraits<V>::zero();
        for (auto& [a, c] : terms) {
            V t = convert_coeff<V>(c);
            for (int i = 0; i < nvars; ++i)
                if (a[i]) t = t * pw[i][a[i]];
            acc = acc + t;
        }
        return acc;
    }

    Poly derivative(int i) const {
        Poly r(nvars);
        for (auto& [a, c] : terms) {
            if (a[i] == 0) continue;
            MultiIndex b(a);
            b[i] -= 1;
            r.add_term(std::move(b), c * ScalarTraits<C>::from_int(a[i]));
        }
        return r;
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (auto& [a, c] : terms) m = std::max(m, scalar_abs(c));
        return m;
    }

    std::string to_string(const char* var = "y") const {
        if (terms.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [a, c] : terms) {
            if (!first) os << " + ";
            first = false;
            os << "(" << coeff_str(c) << ")";
            for (int i = 0; i < nvars; ++i) {
                if (!a[i]) continue;
                os << "*" << var << (i + 1);
                if (a[i] > 1) os << "^" << a[i];
            }
        }
        return os.str();
    }

private:
    template <class V>
    static V convert_coeff(const C& c) {
        if constexpr (std::is_same_v<V, C>)
            return c;
        else
            return V(to_complex(c));
    }

    static std::string coeff_str(const Complex& c) {
        std::ostringstream os;
        os << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i";
        return os.str();
    }
    static std::string coeff_str(const Rational& q) {
        std::ostringstream os;
        os << q;
        return os.str();
    }
    template <class X>
    static std::string coeff_str(const X& x) {
        std::ostringstream os;
        os << "<" << x.to_string("w") << ">";
        return os.str();
    }
};

/// Polynomials form a coefficient ring themselves; empty term map is the
/// zero element regardless of nvars (arithmetic widens as needed).
template <class S>
struct ScalarTraits<Poly<S>> {
    static Poly<S> zero() { return Poly<S>(0); }
    static Poly<S> one() { return Poly<S>::constant(0, ScalarTraits<S>::one()); }
    static bool is_zero(const Poly<S>& p) { return p.is_zero(); }
    static Poly<S> from_int(std::int64_t v) {
        return v == 0 ? zero() : Poly<S>::constant(0, ScalarTraits<S>::from_int(v));
    }
    static constexpr bool exact = ScalarTraits<S>::exact;
};

inline double scalar_abs(const Poly<Complex>& p) { return p.max_abs_coeff(); }

/// Polynomial whose coefficients are polynomials in solver parameters w.
template <class S>
using ParamPoly = Poly<Poly<S>>;

template <class S>
Poly<Complex> poly_to_complex(const Poly<S>& p) {
    Poly<Complex> r(p.nvars);
    for (auto& [a, c] : p.terms) r.add_term(a, to_complex(c));
    return r;
}

/// Evaluate the parameter polynomials at w, collapsing to a plain poly.
template <class S>
Poly<S> specialize(const ParamPoly<S>& p, const std::vector<S>& w) {
    Poly<S> r(p.nvars);
    for (auto& [a, c] : p.terms) r.add_term(a, c.widened((int)w.size()).template eval<S>(w));
    return r;
}

/// p(x_0,...,x_n) with x_0 := 1; result lives in the remaining n variables.
template <class C>
Poly<C> dehomogenize(const Poly<C>& p) {
    if (p.nvars < 1) throw std::invalid_argument("dehomogenize: no variables");
    Poly<C> r(p.nvars - 1);
    for (auto& [a, c] : p.terms) r.add_term(MultiIndex(a.begin() + 1, a.end()), c);
    return r;
}

/// Homogenize a degree <= d polynomial in y_1..y_n to degree d in x_0..x_n.
template <class C>
Poly<C> homogenize(const Poly<C>& p, int d) {
    if (p.degree() > d) throw std::invalid_argument("homogenize: degree exceeds d");
    Poly<C> r(p.nvars + 1);
    for (auto& [a, c] : p.terms) {
        MultiIndex b(p.nvars + 1, 0);
        b[0] = d - mi_degree(a);
        for (int i = 0; i < p.nvars; ++i) b[i + 1] = a[i];
        r.add_term(std::move(b), c);
    }
    return r;
}

template <class C>
bool is_homogeneous(const Poly<C>& p) {
    int d = -1;
    for (auto& [a, c] : p.terms) {
        if (d < 0) d = mi_degree(a);
        if (mi_degree(a) != d) return false;
    }
    return true;
}

/// p(M x): substitute each variable x_i by the linear form sum_j M(i,j) x_j.
/// M is given row-major as rows[i] = coefficients of the form replacing x_i.
template <class C>
Poly<C> substitute_linear(const Poly<C>& p, const std::vector<std::vector<C>>& rows) {
    int nv_out = rows.empty() ? 0 : (int)rows[0].size();
    std::vector<Poly<C>> forms;
    forms.reserve(rows.size());
    for (auto& r : rows) {
        Poly<C> f(nv_out);
        for (int j = 0; j < nv_out; ++j) f.add_term(mi_unit(nv_out, j), r[j]);
        forms.push_back(std::move(f));
    }
    Poly<C> acc(nv_out);
    for (auto& [a, c] : p.terms) {
        Poly<C> t = Poly<C>::constant(nv_out, c);
        for (int i = 0; i < p.nvars; ++i)
            for (int e = 0; e < a[i]; ++e) t = t * forms[i];
        acc = acc + t;
    }
    return acc;
}

}  // namespace symx
