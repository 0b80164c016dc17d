#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace symx {

/// Exponent vector of a monomial. Length = number of variables.
using MultiIndex = std::vector<int>;

inline int mi_degree(const MultiIndex& a) {
    int s = 0;
    for (int e : a) s += e;
    return s;
}

/// Canonical order: graded first, then descending standard lex within a
/// degree, so for three variables (2,0,0) precedes (1,1,0) precedes
/// (1,0,1) precedes (0,2,0) precedes (0,1,1) precedes (0,0,2).
inline bool canonical_less(const MultiIndex& a, const MultiIndex& b) {
    int da = mi_degree(a), db = mi_degree(b);
    if (da != db) return da < db;
    return a > b;  // lexicographically greater comes first within a degree
}

struct CanonicalLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const {
        return canonical_less(a, b);
    }
};

inline MultiIndex mi_add(const MultiIndex& a, const MultiIndex& b) {
    MultiIndex r(a);
    for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

/// a - b; requires b <= a componentwise.
inline MultiIndex mi_sub(const MultiIndex& a, const MultiIndex& b) {
    MultiIndex r(a);
    for (size_t i = 0; i < r.size(); ++i) {
        r[i] -= b[i];
        if (r[i] < 0) throw std::invalid_argument("mi_sub: negative exponent");
    }
    return r;
}

inline bool mi_divides(const MultiIndex& a, const MultiIndex& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline MultiIndex mi_unit(int n, int i) {
    MultiIndex e(n, 0);
    e[i] = 1;
    return e;
}

inline std::string mi_to_string(const MultiIndex& a) {
    std::string s = "(";
    for (size_t i = 0; i < a.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(a[i]);
    }
    return s + ")";
}

inline std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;  // exact: product of i consecutive ints is divisible by i!
    }
    return r;
}

/// multinomial(d; d-|a|, a_1, ..., a_n), the monomial's coefficient in the
/// d-th power of a generic linear form. Requires |a| <= d.
inline std::int64_t multinomial(int d, const MultiIndex& a) {
    int rem = d - mi_degree(a);
    if (rem < 0) throw std::invalid_argument("multinomial: |alpha| > d");
    std::int64_t r = 1;
    int used = 0;
    auto take = [&](int k) {
        for (int i = 1; i <= k; ++i) r = r * (used + i) / i;
        used += k;
    };
    take(rem);
    for (int e : a) take(e);
    return r;
}

namespace detail {
inline void enum_exact(int n, int deg, MultiIndex& cur, int pos, std::vector<MultiIndex>& out) {
    if (pos == n - 1) {
        cur[pos] = deg;
        out.push_back(cur);
        return;
    }
    for (int e = deg; e >= 0; --e) {  // descending lex within the degree
        cur[pos] = e;
        enum_exact(n, deg - e, cur, pos + 1, out);
    }
    cur[pos] = 0;
}
}  // namespace detail

/// All exponent vectors in n variables of degree exactly deg, canonical order.
inline std::vector<MultiIndex> enumerate_degree(int n, int deg) {
    std::vector<MultiIndex> out;
    if (n == 0) {
        if (deg == 0) out.push_back({});
        return out;
    }
    MultiIndex cur(n, 0);
    detail::enum_exact(n, deg, cur, 0, out);
    return out;
}

/// All exponent vectors in n variables of degree at most d, canonical order.
inline std::vector<MultiIndex> enumerate_upto(int n, int d) {
    std::vector<MultiIndex> out;
    for (int t = 0; t <= d; ++t) {
        auto layer = enumerate_degree(n, t);
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

}  // namespace symx
