#pragma once

#include "border.hpp"
#include "errors.hpp"
#include "matrix.hpp"
#include "normal_form.hpp"
#include "poly.hpp"
#include "tensor.hpp"

#include <Eigen/Dense>

#include <vector>

namespace symx {

/// Linear system determining one generating-matrix column: unknowns are the
/// B0-coordinates c with sum_i c_i A_{beta_i+gamma} = A_{alpha+gamma} for all
/// shifts gamma with |gamma| <= d - max(|alpha|, deg B0).
template <class S>
struct ColumnSystem {
    std::vector<MultiIndex> rows;
    Mat<S> A;
    std::vector<S> b;
};

template <class S>
ColumnSystem<S> build_linear_system(const SymTensor<S>& T, const MultiIndex& alpha,
                                    const BorderCtx& ctx) {
    if (T.n != ctx.n) throw Error("build_linear_system: variable count mismatch");
    int budget = T.d - std::max(mi_degree(alpha), ctx.maxdeg_B0);
    if (budget < 0)
        throw EmptyRowSet("build_linear_system: no admissible shifts for " + mi_to_string(alpha) +
                          " at order " + std::to_string(T.d));
    ColumnSystem<S> sys;
    sys.rows = enumerate_upto(T.n, budget);
    sys.A = Mat<S>((int)sys.rows.size(), ctx.r());
    sys.b.resize(sys.rows.size());
    for (int g = 0; g < (int)sys.rows.size(); ++g) {
        for (int i = 0; i < ctx.r(); ++i) sys.A(g, i) = T.at(mi_add(ctx.B0[i], sys.rows[g]));
        sys.b[g] = T.at(mi_add(alpha, sys.rows[g]));
    }
    return sys;
}

/// Affine family G(w) = C + sum_k w_k N_k of generating matrices: column j
/// varies over the solution space of its column system, with its own block
/// of parameters. m = total parameter count.
template <class S>
struct GenMatrixFamily {
    BorderCtx ctx;
    Mat<S> C;                                          // particular solutions
    std::vector<std::vector<std::vector<S>>> nullbasis;  // [column][k] = r-vector
    std::vector<int> offset;                           // first parameter of each column
    int m = 0;

    int r() const { return ctx.r(); }
    int cols() const { return (int)ctx.dB1.size(); }

    Mat<S> evaluate(const std::vector<S>& w) const {
        if ((int)w.size() != m) throw Error("GenMatrixFamily::evaluate: wrong parameter count");
        Mat<S> G = C;
        for (int j = 0; j < cols(); ++j)
            for (int k = 0; k < (int)nullbasis[j].size(); ++k)
                for (int s = 0; s < r(); ++s)
                    G(s, j) = G(s, j) + nullbasis[j][k][s] * w[offset[j] + k];
        return G;
    }

    /// Entries as polynomials in w (affine), for parametric normal forms.
    Mat<Poly<S>> entries() const {
        Mat<Poly<S>> G(r(), cols());
        for (int j = 0; j < cols(); ++j)
            for (int s = 0; s < r(); ++s) {
                Poly<S> e(m);
                e.add_term(MultiIndex(m, 0), C(s, j));
                for (int k = 0; k < (int)nullbasis[j].size(); ++k)
                    e.add_term(mi_unit(m, offset[j] + k), nullbasis[j][k][s]);
                G(s, j) = std::move(e);
            }
        return G;
    }
};

/// Exact parameterization over a field with exact arithmetic: RREF with
/// greedy leftmost pivots; free coordinates are the non-pivot B0 positions,
/// the particular solution zeroes them, and each basis vector carries a one
/// in its free coordinate.
template <class S>
GenMatrixFamily<S> parameterize_G_exact(const SymTensor<S>& T, const BorderCtx& ctx) {
    static_assert(ScalarTraits<S>::exact, "parameterize_G_exact needs exact arithmetic");
    GenMatrixFamily<S> fam;
    fam.ctx = ctx;
    fam.C = Mat<S>(ctx.r(), (int)ctx.dB1.size());
    fam.nullbasis.resize(ctx.dB1.size());
    fam.offset.resize(ctx.dB1.size());
    for (int j = 0; j < (int)ctx.dB1.size(); ++j) {
        auto sys = build_linear_system(T, ctx.dB1[j], ctx);
        auto sol = solve_affine_exact(sys.A, sys.b);
        if (!sol.consistent) throw InconsistentSystem(ctx.dB1[j], -1.0);
        for (int s = 0; s < ctx.r(); ++s) fam.C(s, j) = sol.particular[s];
        fam.offset[j] = fam.m;
        fam.nullbasis[j] = std::move(sol.nullbasis);
        fam.m += (int)fam.nullbasis[j].size();
    }
    return fam;
}

/// Numeric parameterization: SVD minimum-norm particular solution plus an
/// orthonormal nullspace basis per column. Nullspace cutoff is relative
/// (null_tol * sigma_max); a column whose system is inconsistent beyond
/// consistency_tol * (1 + ||b||) raises InconsistentSystem.
inline GenMatrixFamily<Complex> parameterize_G(const SymTensor<Complex>& T, const BorderCtx& ctx,
                                               double null_tol = 1e-10,
                                               double consistency_tol = 1e-8) {
    GenMatrixFamily<Complex> fam;
    fam.ctx = ctx;
    fam.C = Mat<Complex>(ctx.r(), (int)ctx.dB1.size());
    fam.nullbasis.resize(ctx.dB1.size());
    fam.offset.resize(ctx.dB1.size());
    for (int j = 0; j < (int)ctx.dB1.size(); ++j) {
        auto sys = build_linear_system(T, ctx.dB1[j], ctx);
        Eigen::MatrixXcd A = to_eigen(sys.A);
        Eigen::VectorXcd b(A.rows());
        for (int i = 0; i < A.rows(); ++i) b(i) = sys.b[i];
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        double smax = sv.size() ? sv(0) : 0.0;
        int rank = 0;
        for (int i = 0; i < sv.size(); ++i)
            if (sv(i) > null_tol * smax && sv(i) > 0.0) ++rank;
        Eigen::VectorXcd ub = svd.matrixU().adjoint() * b;
        Eigen::VectorXcd c = Eigen::VectorXcd::Zero(ctx.r());
        for (int i = 0; i < rank; ++i) c += (ub(i) / sv(i)) * svd.matrixV().col(i);
        double res = (A * c - b).norm();
        if (res > consistency_tol * (1.0 + b.norm()))
            throw InconsistentSystem(ctx.dB1[j], res);
        for (int s = 0; s < ctx.r(); ++s) fam.C(s, j) = c(s);
        fam.offset[j] = fam.m;
        for (int k = rank; k < ctx.r(); ++k)
            fam.nullbasis[j].push_back(
                std::vector<Complex>(svd.matrixV().col(k).data(),
                                     svd.matrixV().col(k).data() + ctx.r()));
        fam.m += (int)fam.nullbasis[j].size();
    }
    return fam;
}

template <class S>
GenMatrixFamily<Complex> family_to_complex(const GenMatrixFamily<S>& f) {
    GenMatrixFamily<Complex> g;
    g.ctx = f.ctx;
    g.C = mat_to_complex(f.C);
    g.offset = f.offset;
    g.m = f.m;
    g.nullbasis.resize(f.nullbasis.size());
    for (size_t j = 0; j < f.nullbasis.size(); ++j)
        for (auto& vec : f.nullbasis[j]) {
            std::vector<Complex> v;
            for (auto& x : vec) v.push_back(to_complex(x));
            g.nullbasis[j].push_back(std::move(v));
        }
    return g;
}

/// Polynomial system in the parameters w whose zeros are exactly the
/// parameter values where the border reduction is a genuine quotient-ring
/// structure on the variety: all commutator entries of the multiplication
/// matrices plus all B0-coefficients of the normal forms of the chart
/// equations. Near-zero and scalar-multiple duplicates are pruned.
struct ResidualSystem {
    int m = 0;
    std::vector<Poly<Complex>> polys;
    std::vector<std::vector<Poly<Complex>>> jac;
    size_t raw_count = 0;  // before pruning and dedup

    size_t size() const { return polys.size(); }

    Eigen::VectorXcd eval(const Eigen::VectorXcd& w) const {
        std::vector<Complex> wv(w.data(), w.data() + w.size());
        Eigen::VectorXcd out(polys.size());
        for (size_t i = 0; i < polys.size(); ++i) out(i) = polys[i].eval<Complex>(wv);
        return out;
    }

    Eigen::MatrixXcd jacobian(const Eigen::VectorXcd& w) const {
        std::vector<Complex> wv(w.data(), w.data() + w.size());
        Eigen::MatrixXcd J((int)polys.size(), m);
        for (size_t i = 0; i < polys.size(); ++i)
            for (int j = 0; j < m; ++j) J((int)i, j) = jac[i][j].eval<Complex>(wv);
        return J;
    }
};

namespace detail {
inline bool scalar_multiple_of(const Poly<Complex>& p, const Poly<Complex>& q, double tol) {
    if (p.terms.size() != q.terms.size()) return false;
    Complex ratio(0, 0);
    auto it = p.terms.begin();
    auto jt = q.terms.begin();
    for (; it != p.terms.end(); ++it, ++jt) {
        if (it->first != jt->first) return false;
        if (ratio == Complex(0, 0)) {
            ratio = it->second / jt->second;
            continue;
        }
        if (std::abs(it->second - ratio * jt->second) >
            tol * (std::abs(it->second) + std::abs(ratio * jt->second) + 1e-300))
            return false;
    }
    return true;
}
}  // namespace detail

inline ResidualSystem build_residual_system(const GenMatrixFamily<Complex>& fam,
                                            const std::vector<Poly<Complex>>& chart_gens) {
    ResidualSystem rs;
    rs.m = fam.m;
    Mat<Poly<Complex>> G = fam.entries();
    auto Ms = mult_matrices(G, fam.ctx);
    std::vector<Poly<Complex>> raw;
    for (int i = 0; i < fam.ctx.n; ++i)
        for (int j = i + 1; j < fam.ctx.n; ++j) {
            Mat<Poly<Complex>> comm = Ms[i] * Ms[j] - Ms[j] * Ms[i];
            for (auto& e : comm.a) raw.push_back(e.widened(fam.m));
        }
    for (const auto& g : chart_gens) {
        ParamPoly<Complex> lifted(fam.ctx.n);
        for (auto& [a, c] : g.widened(fam.ctx.n).terms)
            lifted.add_term(a, Poly<Complex>::constant(fam.m, c));
        ParamPoly<Complex> nf = normal_form(lifted, G, fam.ctx);
        for (auto& [a, c] : nf.terms) raw.push_back(c.widened(fam.m));
    }
    rs.raw_count = raw.size();
    double scale = 0.0;
    for (auto& p : raw) scale = std::max(scale, p.max_abs_coeff());
    double drop = 1e-12 * std::max(1.0, scale);
    for (auto& p : raw) {
        if (p.max_abs_coeff() <= drop) continue;
        bool dup = false;
        for (auto& q : rs.polys)
            if (detail::scalar_multiple_of(p, q, 1e-10)) {
                dup = true;
                break;
            }
        if (!dup) rs.polys.push_back(p);
    }
    rs.jac.resize(rs.polys.size());
    for (size_t i = 0; i < rs.polys.size(); ++i)
        for (int j = 0; j < rs.m; ++j) rs.jac[i].push_back(rs.polys[i].derivative(j));
    return rs;
}

}  // namespace symx
