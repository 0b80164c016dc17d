#pragma once

#include "errors.hpp"
#include "multi_index.hpp"

#include <map>
#include <set>
#include <vector>

namespace symx {

/// A candidate basis B0 of monomials (containing 1) together with its
/// border: dB1 = (B0 u y_1 B0 u ... u y_n B0) \ B0. B0 keeps the order it
/// was given in (normal-form coordinates refer to it); dB1 is canonical.
struct BorderCtx {
    int n = 0;
    std::vector<MultiIndex> B0;
    std::vector<MultiIndex> dB1;
    std::map<MultiIndex, int, CanonicalLess> b0_pos;
    std::map<MultiIndex, int, CanonicalLess> db1_pos;
    int maxdeg_B0 = 0;

    int r() const { return (int)B0.size(); }

    bool in_B0(const MultiIndex& a) const { return b0_pos.count(a) > 0; }
    bool in_dB1(const MultiIndex& a) const { return db1_pos.count(a) > 0; }
};

inline BorderCtx make_border_ctx(int n, std::vector<MultiIndex> B0) {
    BorderCtx ctx;
    ctx.n = n;
    ctx.B0 = std::move(B0);
    for (int i = 0; i < (int)ctx.B0.size(); ++i) {
        if ((int)ctx.B0[i].size() != n) throw Error("border: B0 monomial has wrong length");
        if (!ctx.b0_pos.emplace(ctx.B0[i], i).second) throw Error("border: duplicate B0 monomial");
        ctx.maxdeg_B0 = std::max(ctx.maxdeg_B0, mi_degree(ctx.B0[i]));
    }
    if (!ctx.in_B0(MultiIndex(n, 0))) throw Error("border: B0 must contain the constant monomial");
    std::set<MultiIndex, CanonicalLess> border;
    for (const auto& b : ctx.B0)
        for (int i = 0; i < n; ++i) {
            MultiIndex s = mi_add(b, mi_unit(n, i));
            if (!ctx.in_B0(s)) border.insert(std::move(s));
        }
    ctx.dB1.assign(border.begin(), border.end());
    for (int i = 0; i < (int)ctx.dB1.size(); ++i) ctx.db1_pos.emplace(ctx.dB1[i], i);
    return ctx;
}

/// Smallest k such that the monomial gamma lies within distance k of B0,
/// i.e. gamma = beta + delta with beta in B0 and |delta| = k. Exists for all
/// gamma because 1 is in B0.
inline int border_distance(const BorderCtx& ctx, const MultiIndex& gamma) {
    int best = mi_degree(gamma);
    for (const auto& b : ctx.B0)
        if (mi_divides(b, gamma)) best = std::min(best, mi_degree(gamma) - mi_degree(b));
    return best;
}

}  // namespace symx
