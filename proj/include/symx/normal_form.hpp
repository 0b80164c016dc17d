#pragma once

#include "border.hpp"
#include "errors.hpp"
#include "matrix.hpp"
#include "poly.hpp"

#include <map>
#include <vector>

namespace symx {

/// Rewrites polynomials onto the span of B0 using a generating matrix G
/// (r x |dB1|, column j = the B0-coordinates that the j-th border monomial
/// reduces to). The coefficient ring is generic: plain numbers give numeric
/// normal forms, polynomial entries give parameter-dependent ones, and
/// rational entries keep everything exact.
template <class C>
class NormalFormer {
public:
    NormalFormer(const BorderCtx& ctx, const Mat<C>& G) : ctx_(ctx), G_(G) {
        if (G.rows != ctx.r() || G.cols != (int)ctx.dB1.size())
            throw Error("normal_form: G must be r x |dB1| (missing or extra columns)");
    }

    /// B0-coordinates of the normal form of a single monomial.
    const std::vector<C>& monomial(const MultiIndex& gamma) {
        auto it = memo_.find(gamma);
        if (it != memo_.end()) return it->second;
        std::vector<C> out(ctx_.r(), ScalarTraits<C>::zero());
        if (auto b = ctx_.b0_pos.find(gamma); b != ctx_.b0_pos.end()) {
            out[b->second] = ScalarTraits<C>::one();
        } else if (auto e = ctx_.db1_pos.find(gamma); e != ctx_.db1_pos.end()) {
            out = G_.column(e->second);
        } else {
            // Reduce along a shortest route to B0: peel a variable of
            // gamma - beta for a nearest divisor beta, so coefficient degrees
            // in the entries of G stay within border_distance(gamma).
            int best = 0, bestk = mi_degree(gamma) + 1;
            for (int s = 0; s < ctx_.r(); ++s)
                if (mi_divides(ctx_.B0[s], gamma)) {
                    int k = mi_degree(gamma) - mi_degree(ctx_.B0[s]);
                    if (k < bestk) {
                        bestk = k;
                        best = s;
                    }
                }
            const MultiIndex& beta = ctx_.B0[best];  // 0 lies in B0, so some divisor exists
            int i = 0;
            while (gamma[i] <= beta[i]) ++i;  // gamma != beta: some coordinate exceeds
            MultiIndex prev(gamma);
            prev[i] -= 1;
            const std::vector<C> sub = monomial(prev);  // copy: recursion may grow memo_
            for (int s = 0; s < ctx_.r(); ++s) {
                if (ScalarTraits<C>::is_zero(sub[s])) continue;
                MultiIndex shifted = mi_add(ctx_.B0[s], mi_unit(ctx_.n, i));
                accumulate(out, shifted, sub[s]);
            }
        }
        return memo_.emplace(std::move(gamma), std::move(out)).first->second;
    }

    Poly<C> operator()(const Poly<C>& p) {
        std::vector<C> acc(ctx_.r(), ScalarTraits<C>::zero());
        for (auto& [gamma, c] : p.widened(ctx_.n).terms) {
            const std::vector<C>& nf = monomial(gamma);
            for (int s = 0; s < ctx_.r(); ++s) acc[s] = acc[s] + c * nf[s];
        }
        Poly<C> out(ctx_.n);
        for (int s = 0; s < ctx_.r(); ++s) out.add_term(ctx_.B0[s], acc[s]);
        return out;
    }

private:
    void accumulate(std::vector<C>& out, const MultiIndex& shifted, const C& w) {
        if (auto b = ctx_.b0_pos.find(shifted); b != ctx_.b0_pos.end()) {
            out[b->second] = out[b->second] + w;
        } else {
            auto e = ctx_.db1_pos.find(shifted);
            // shifted = b + e_i with b in B0, so it lies in B0 u dB1 by construction
            for (int s = 0; s < ctx_.r(); ++s) out[s] = out[s] + w * G_(s, e->second);
        }
    }

    const BorderCtx& ctx_;
    const Mat<C>& G_;
    std::map<MultiIndex, std::vector<C>, CanonicalLess> memo_;
};

template <class C>
Poly<C> normal_form(const Poly<C>& p, const Mat<C>& G, const BorderCtx& ctx) {
    NormalFormer<C> nf(ctx, G);
    return nf(p);
}

/// Degree bound for the parameter dependence of NF(p): coefficients of the
/// normal form are polynomials of degree at most max_gamma border_distance
/// in the entries of G (hence in the parameters when G is affine in them).
template <class S>
int param_degree_bound(const Poly<S>& p, const BorderCtx& ctx) {
    int k = 0;
    for (auto& [gamma, c] : p.terms) {
        MultiIndex g(gamma);
        g.resize(ctx.n, 0);
        k = std::max(k, border_distance(ctx, g));
    }
    return k;
}

/// Multiplication-by-y_i matrices on span(B0) induced by G: column t holds
/// the B0-coordinates of the reduction of y_i * B0[t].
template <class C>
std::vector<Mat<C>> mult_matrices(const Mat<C>& G, const BorderCtx& ctx) {
    if (G.rows != ctx.r() || G.cols != (int)ctx.dB1.size())
        throw Error("mult_matrices: G must be r x |dB1|");
    std::vector<Mat<C>> ms;
    ms.reserve(ctx.n);
    for (int i = 0; i < ctx.n; ++i) {
        Mat<C> m(ctx.r(), ctx.r());
        for (int t = 0; t < ctx.r(); ++t) {
            MultiIndex shifted = mi_add(ctx.B0[t], mi_unit(ctx.n, i));
            if (auto b = ctx.b0_pos.find(shifted); b != ctx.b0_pos.end()) {
                m(b->second, t) = ScalarTraits<C>::one();
            } else {
                int col = ctx.db1_pos.at(shifted);
                for (int s = 0; s < ctx.r(); ++s) m(s, t) = G(s, col);
            }
        }
        ms.push_back(std::move(m));
    }
    return ms;
}

}  // namespace symx
