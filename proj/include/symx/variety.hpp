#pragma once

#include "errors.hpp"
#include "matrix.hpp"
#include "poly.hpp"
#include "rng.hpp"
#include "tensor.hpp"

#include <Eigen/Dense>

#include <optional>
#include <utility>
#include <vector>

namespace symx {

/// A projective variety X in P^n given by homogeneous generators in
/// x_0..x_n, together with its dehomogenized chart Y = X n {x_0 = 1} in
/// y_1..y_n. dimX is the dimension of the affine cone over X.
template <class S>
struct VarietySpec {
    int n = 0;
    std::vector<Poly<S>> gens_h;  // homogeneous, input order preserved
    std::vector<Poly<S>> gens;    // dehomogenized chart equations
    std::optional<int> dimX;
    std::vector<std::vector<S>> witness;  // optional points on Y (length n)
};

template <class S>
VarietySpec<S> make_variety(int n, std::vector<Poly<S>> gens_h,
                            std::optional<int> dimX = std::nullopt,
                            std::vector<std::vector<S>> witness = {}) {
    VarietySpec<S> X;
    X.n = n;
    X.dimX = dimX;
    X.witness = std::move(witness);
    for (auto& g : gens_h) {
        if (g.is_zero()) continue;
        if (g.nvars != n + 1) throw Error("variety: generator must live in x_0..x_n");
        int deg = -1;
        for (auto& [a, c] : g.terms) {
            if (deg < 0) deg = mi_degree(a);
            if (mi_degree(a) != deg) throw Error("variety: generator not homogeneous");
        }
        X.gens.push_back(dehomogenize(g));
        X.gens_h.push_back(std::move(g));
    }
    for (auto& w : X.witness)
        if ((int)w.size() != n) throw Error("variety: witness point must have n coordinates");
    return X;
}

template <class S>
VarietySpec<Complex> variety_to_complex(const VarietySpec<S>& X) {
    VarietySpec<Complex> Y;
    Y.n = X.n;
    Y.dimX = X.dimX;
    for (auto& g : X.gens_h) Y.gens_h.push_back(poly_to_complex(g));
    for (auto& g : X.gens) Y.gens.push_back(poly_to_complex(g));
    for (auto& w : X.witness) {
        std::vector<Complex> v;
        for (auto& c : w) v.push_back(to_complex(c));
        Y.witness.push_back(std::move(v));
    }
    return Y;
}

struct MembershipReport {
    bool member = true;
    double worst = 0.0;      // largest pairing magnitude seen
    double threshold = 0.0;  // 0 for exact arithmetic
    std::optional<std::pair<int, MultiIndex>> violation;  // first (generator, shift)
};

/// Tests A in S^d(X) by pairing A against every shifted generator
/// dehom(f_t * x^beta) with |beta| = d - deg f_t. Exact coefficient rings
/// demand exact zeroes; floating point uses tol * (1 + ||A||_HS).
template <class S>
MembershipReport membership(const SymTensor<S>& A, const VarietySpec<S>& X, double tol = 1e-8) {
    if (A.n != X.n) throw Error("membership: variable count mismatch");
    MembershipReport rep;
    rep.threshold = ScalarTraits<S>::exact ? 0.0 : tol * (1.0 + A.norm(NormKind::hilbert_schmidt));
    for (int t = 0; t < (int)X.gens_h.size(); ++t) {
        int dt = X.gens_h[t].degree();
        if (dt > A.d) continue;
        for (const auto& beta : enumerate_degree(X.n + 1, A.d - dt)) {
            Poly<S> shifted = X.gens_h[t] * Poly<S>::monomial(X.n + 1, beta, ScalarTraits<S>::one());
            S v = apolar_pair(dehomogenize(shifted), A);
            double mag = scalar_abs(v);
            rep.worst = std::max(rep.worst, mag);
            bool bad = ScalarTraits<S>::exact ? !ScalarTraits<S>::is_zero(v) : mag > rep.threshold;
            if (bad && !rep.violation) {
                rep.member = false;
                rep.violation = std::make_pair(t, beta);
            }
        }
    }
    return rep;
}

/// dim I(X)_d: numeric rank of the coefficient matrix of all shifted
/// generators f_t * x^beta over the degree-d monomials of P^n.
template <class S>
int ideal_dim_at_degree(const VarietySpec<S>& X, int d, double rel_tol = 1e-8) {
    auto cols = enumerate_degree(X.n + 1, d);
    std::map<MultiIndex, int, CanonicalLess> colpos;
    for (int j = 0; j < (int)cols.size(); ++j) colpos.emplace(cols[j], j);
    std::vector<std::vector<Complex>> rows;
    for (const auto& gh : X.gens_h) {
        int dt = gh.degree();
        if (dt > d) continue;
        Poly<Complex> g = poly_to_complex(gh);
        for (const auto& beta : enumerate_degree(X.n + 1, d - dt)) {
            Poly<Complex> shifted = g * Poly<Complex>::monomial(X.n + 1, beta, 1.0);
            std::vector<Complex> row(cols.size(), 0.0);
            for (auto& [a, c] : shifted.terms) row[colpos.at(a)] = c;
            rows.push_back(std::move(row));
        }
    }
    if (rows.empty()) return 0;
    Eigen::MatrixXcd m((int)rows.size(), (int)cols.size());
    for (int i = 0; i < (int)rows.size(); ++i)
        for (int j = 0; j < (int)cols.size(); ++j) m(i, j) = rows[i][j];
    return numeric_rank(m, rel_tol);
}

/// Dimension of the degree-d coordinate ring slice: binom(n+d,d) - dim I(X)_d.
template <class S>
int hilbert_value(const VarietySpec<S>& X, int d, double rel_tol = 1e-8) {
    return (int)binomial(X.n + d, d) - ideal_dim_at_degree(X, d, rel_tol);
}

/// ceil(hilbert_value / dimX): the generic number of terms needed at order d.
template <class S>
int expected_generic_rank(const VarietySpec<S>& X, int d, double rel_tol = 1e-8) {
    if (!X.dimX) throw Error("expected_generic_rank: dimX unknown; estimate it first");
    int h = hilbert_value(X, d, rel_tol);
    int dim = *X.dimX;
    if (dim <= 0) throw Error("expected_generic_rank: dimX must be positive");
    return (h + dim - 1) / dim;
}

/// Cone dimension n+1 - rank(Jacobian of the homogeneous generators) at a
/// witness point u on X (u has n+1 coordinates).
template <class S>
int estimate_dimX(const VarietySpec<S>& X, const std::vector<Complex>& u, double rel_tol = 1e-8) {
    if ((int)u.size() != X.n + 1) throw Error("estimate_dimX: witness needs n+1 coordinates");
    double unorm = 0.0;
    for (auto& c : u) unorm += std::norm(c);
    unorm = std::sqrt(unorm);
    Eigen::MatrixXcd J((int)X.gens_h.size(), X.n + 1);
    for (int t = 0; t < (int)X.gens_h.size(); ++t) {
        Poly<Complex> g = poly_to_complex(X.gens_h[t]);
        double res = std::abs(g.eval<Complex>(u));
        if (res > 1e-6 * (1.0 + std::pow(unorm, g.degree())))
            throw Error("estimate_dimX: witness does not lie on X");
        for (int j = 0; j <= X.n; ++j) J(t, j) = g.derivative(j).eval<Complex>(u);
    }
    return X.n + 1 - numeric_rank(J, rel_tol);
}

namespace detail {

/// Damped Gauss-Newton on F(y) = 0 (least-squares step, step halving).
/// Returns true when every |F_i| <= per-row tolerance tols[i].
inline bool gauss_newton(const std::vector<Poly<Complex>>& F,
                         const std::vector<std::vector<Poly<Complex>>>& JF,
                         std::vector<Complex>& y, const std::vector<double>& tols,
                         int max_iters) {
    int n = (int)y.size(), m = (int)F.size();
    auto eval_F = [&](const std::vector<Complex>& pt, Eigen::VectorXcd& out) {
        for (int i = 0; i < m; ++i) out(i) = F[i].eval<Complex>(pt);
    };
    Eigen::VectorXcd f(m), fn(m);
    eval_F(y, f);
    for (int it = 0; it < max_iters; ++it) {
        bool ok = true;
        for (int i = 0; i < m; ++i)
            if (std::abs(f(i)) > tols[i]) { ok = false; break; }
        if (ok) return true;
        Eigen::MatrixXcd J(m, n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) J(i, j) = JF[i][j].eval<Complex>(y);
        Eigen::VectorXcd step = J.colPivHouseholderQr().solve(-f);
        if (!step.allFinite()) return false;
        double t = 1.0;
        std::vector<Complex> yn(n);
        for (int h = 0; h < 12; ++h, t *= 0.5) {
            for (int j = 0; j < n; ++j) yn[j] = y[j] + t * step(j);
            eval_F(yn, fn);
            if (fn.norm() < f.norm()) break;
        }
        if (fn.norm() >= f.norm()) return false;  // stalled
        y = yn;
        f = fn;
    }
    for (int i = 0; i < m; ++i)
        if (std::abs(f(i)) > tols[i]) return false;
    return true;
}

inline std::vector<std::vector<Poly<Complex>>> jacobian_polys(
    const std::vector<Poly<Complex>>& F, int n) {
    std::vector<std::vector<Poly<Complex>>> J;
    J.reserve(F.size());
    for (auto& f : F) {
        std::vector<Poly<Complex>> row;
        for (int j = 0; j < n; ++j) row.push_back(f.widened(n).derivative(j));
        J.push_back(std::move(row));
    }
    return J;
}

}  // namespace detail

/// Random points on the chart Y: each point solves the generators plus
/// enough random affine-linear slices to cut the solution set to dimension
/// zero, via damped Gauss-Newton from random complex starts.
/// Accepts a point when |g_t(y)| <= 1e-10 * (1 + ||y||^deg g_t) for all t.
template <class S>
std::vector<std::vector<Complex>> sample_Y(const VarietySpec<S>& X, int count, Rng& rng,
                                           int max_retries = 40) {
    int n = X.n;
    std::vector<std::vector<Complex>> out;
    if (X.gens.empty()) {
        for (int i = 0; i < count; ++i) out.push_back(rng.cgauss_vec(n));
        return out;
    }
    std::vector<Poly<Complex>> gens;
    for (auto& g : X.gens) gens.push_back(poly_to_complex(g).widened(n));
    auto Jg = detail::jacobian_polys(gens, n);
    auto accept_tols = [&](const std::vector<Complex>& y) {
        double ny = 0.0;
        for (auto& c : y) ny += std::norm(c);
        ny = std::sqrt(ny);
        std::vector<double> tols;
        for (auto& g : gens) tols.push_back(1e-10 * (1.0 + std::pow(ny, g.degree())));
        return tols;
    };

    // Affine slice codimension: from dimX when present, else from the
    // Jacobian rank at one converged pre-solution.
    int q = -1;
    if (X.dimX) q = std::max(0, *X.dimX - 1);
    for (int attempt = 0; q < 0 && attempt < max_retries; ++attempt) {
        std::vector<Complex> y = rng.cgauss_vec(n);
        if (!detail::gauss_newton(gens, Jg, y, accept_tols(y), 60)) continue;
        Eigen::MatrixXcd J((int)gens.size(), n);
        for (int i = 0; i < (int)gens.size(); ++i)
            for (int j = 0; j < n; ++j) J(i, j) = Jg[i][j].eval<Complex>(y);
        q = n - numeric_rank(J, 1e-6);
    }
    if (q < 0) throw SampleFailure("sample_Y: could not reach the variety to estimate its dimension");

    for (int i = 0; i < count; ++i) {
        bool got = false;
        for (int attempt = 0; attempt < max_retries && !got; ++attempt) {
            std::vector<Poly<Complex>> F = gens;
            for (int s = 0; s < q; ++s) {
                Poly<Complex> line(n);
                for (int j = 0; j < n; ++j) line.add_term(mi_unit(n, j), rng.cgauss());
                line.add_term(MultiIndex(n, 0), rng.cgauss());
                F.push_back(std::move(line));
            }
            auto JF = detail::jacobian_polys(F, n);
            std::vector<Complex> y = rng.cgauss_vec(n);
            std::vector<double> tols = accept_tols(y);
            tols.resize(F.size(), 1e-9);
            if (!detail::gauss_newton(F, JF, y, tols, 80)) continue;
            // Re-check against the generator tolerances at the final point.
            auto final_tols = accept_tols(y);
            got = true;
            for (size_t t = 0; t < gens.size(); ++t)
                if (std::abs(gens[t].eval<Complex>(y)) > final_tols[t]) got = false;
            if (got) out.push_back(y);
        }
        if (!got) throw SampleFailure("sample_Y: Newton refinement failed repeatedly");
    }
    return out;
}

/// Greedy basis selection: walk monomials in canonical order up to the
/// smallest degree cap D with binom(n+D,D) >= 3r, keeping a monomial iff it
/// increases the rank of the evaluation matrix on max(5r,40) sampled points.
/// Returns the first r independent monomials (always starting with 1).
template <class S>
std::vector<MultiIndex> select_B0(const VarietySpec<S>& X, int r, Rng& rng) {
    int n = X.n;
    if (r < 1) throw Error("select_B0: rank must be positive");
    int D = 0;
    while (binomial(n + D, D) < 3 * (std::int64_t)r) ++D;
    int s = std::max(5 * r, 40);
    auto pts = sample_Y(X, s, rng);
    std::vector<MultiIndex> kept;
    Eigen::MatrixXcd Q(s, 0);
    for (const auto& mono : enumerate_upto(n, D)) {
        Eigen::VectorXcd v(s);
        Poly<Complex> p = Poly<Complex>::monomial(n, mono, 1.0);
        for (int i = 0; i < s; ++i) v(i) = p.eval<Complex>(pts[i]);
        double nv = v.norm();
        if (nv == 0.0) continue;
        v /= nv;
        Eigen::VectorXcd res = v - Q * (Q.adjoint() * v);
        if (res.norm() <= 1e-6) continue;  // dependent on the kept ones over Y
        kept.push_back(mono);
        Q.conservativeResize(Eigen::NoChange, Q.cols() + 1);
        Q.col(Q.cols() - 1) = res / res.norm();
        if ((int)kept.size() == r) return kept;
    }
    throw Error("select_B0: fewer than r independent monomials up to the degree cap");
}

/// Largest |g_t(v_j)| over all generators and affine points, plus the
/// homogeneous generators at projective points.
template <class S>
double variety_violation(const VarietySpec<S>& X, const Decomposition& dec) {
    double worst = 0.0;
    for (auto& v : dec.points)
        for (auto& g : X.gens) {
            Poly<Complex> gc = poly_to_complex(g).widened(X.n);
            worst = std::max(worst, std::abs(gc.eval<Complex>(v)));
        }
    for (auto& u : dec.hom_points)
        for (auto& gh : X.gens_h) {
            Poly<Complex> ghc = poly_to_complex(gh);
            worst = std::max(worst, std::abs(ghc.eval<Complex>(u)));
        }
    return worst;
}

}  // namespace symx
