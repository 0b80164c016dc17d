#pragma once

#include "border.hpp"
#include "errors.hpp"
#include "normal_form.hpp"
#include "rng.hpp"
#include "tensor.hpp"
#include "variety.hpp"

#include <Eigen/Dense>

#include <vector>

namespace symx {

/// The border relations as polynomials: for each border monomial y^alpha,
/// phi_alpha(y) = sum_s G(s,alpha) y^{B0_s} - y^alpha. Common zeros of these
/// are the candidate decomposition points.
inline std::vector<Poly<Complex>> border_polys(const Mat<Complex>& G, const BorderCtx& ctx) {
    std::vector<Poly<Complex>> out;
    for (int j = 0; j < (int)ctx.dB1.size(); ++j) {
        Poly<Complex> p(ctx.n);
        for (int s = 0; s < ctx.r(); ++s) p.add_term(ctx.B0[s], G(s, j));
        p.add_term(ctx.dB1[j], Complex(-1.0, 0.0));
        out.push_back(std::move(p));
    }
    return out;
}

struct RootOptions {
    int max_retries = 6;
    double cluster_tol = 1e-6;   // relative eigenvalue separation demanded
    int polish_iters = 12;
};

/// Joint eigenvector extraction: eigen-decompose the transpose of a random
/// combination sum_i xi_i M_i; each eigenvector q yields the point with
/// coordinates v_i = (q* M_i^T q)/(q* q). Clustered eigenvalues trigger a
/// fresh combination; persistent clustering is reported as defective.
/// Roots are then polished by Gauss-Newton on the border relations.
inline std::vector<std::vector<Complex>> extract_roots(const Mat<Complex>& G, const BorderCtx& ctx,
                                                       Rng& rng, const RootOptions& opt = {},
                                                       double* commutation = nullptr) {
    auto Ms = mult_matrices(G, ctx);
    int r = ctx.r(), n = ctx.n;
    std::vector<Eigen::MatrixXcd> M(n);
    for (int i = 0; i < n; ++i) M[i] = to_eigen(Ms[i]);
    if (commutation) {
        double worst = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                worst = std::max(worst,
                                 (M[i] * M[j] - M[j] * M[i]).cwiseAbs().maxCoeff());
        *commutation = worst;
    }

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces;
    bool separated = false;
    for (int attempt = 0; attempt < opt.max_retries && !separated; ++attempt) {
        Eigen::VectorXcd xi(n);
        for (int i = 0; i < n; ++i) xi(i) = rng.cgauss();
        xi /= xi.norm();
        Eigen::MatrixXcd Mxi = Eigen::MatrixXcd::Zero(r, r);
        for (int i = 0; i < n; ++i) Mxi += xi(i) * M[i];
        ces.compute(Mxi.transpose());
        if (ces.info() != Eigen::Success) continue;
        const auto& ev = ces.eigenvalues();
        double scale = 1.0 + ev.cwiseAbs().maxCoeff();
        separated = true;
        for (int a = 0; a < r && separated; ++a)
            for (int b = a + 1; b < r; ++b)
                if (std::abs(ev(a) - ev(b)) < opt.cluster_tol * scale) {
                    separated = false;
                    break;
                }
    }
    if (!separated)
        throw DefectiveSpectrum("extract_roots: eigenvalues stay clustered; "
                                "the multiplication structure looks defective");

    std::vector<std::vector<Complex>> roots;
    for (int k = 0; k < r; ++k) {
        Eigen::VectorXcd q = ces.eigenvectors().col(k);
        double qn = q.squaredNorm();
        std::vector<Complex> v(n);
        for (int i = 0; i < n; ++i) v[i] = q.dot(M[i].transpose() * q) / qn;
        roots.push_back(std::move(v));
    }

    // Polish on the border relations (quadratic convergence, machine precision).
    auto phi = border_polys(G, ctx);
    auto Jphi = detail::jacobian_polys(phi, n);
    for (auto& v : roots) {
        std::vector<Complex> cand = v;
        std::vector<double> tols(phi.size(), 1e-13);
        detail::gauss_newton(phi, Jphi, cand, tols, opt.polish_iters);
        double before = 0.0, after = 0.0;
        for (auto& p : phi) {
            before = std::max(before, std::abs(p.eval<Complex>(v)));
            after = std::max(after, std::abs(p.eval<Complex>(cand)));
        }
        if (after < before) v = cand;
    }
    return roots;
}

struct LambdaSolve {
    std::vector<Complex> lambdas;
    double lsq_residual = 0.0;
};

/// Global least squares for the weights: rows over every label alpha,
/// W(alpha, j) = v_j^alpha, right-hand side the tensor entries. A numerically
/// rank-deficient W (coalesced points) is reported as an error.
inline LambdaSolve solve_lambdas(const SymTensor<Complex>& A,
                                 const std::vector<std::vector<Complex>>& pts,
                                 double rank_tol = 1e-10) {
    int N = A.size(), r = (int)pts.size();
    Eigen::MatrixXcd W(N, r);
    Eigen::VectorXcd a(N);
    for (int i = 0; i < N; ++i) {
        const MultiIndex& alpha = A.labels[i];
        for (int j = 0; j < r; ++j) {
            Complex m(1.0, 0.0);
            for (int t = 0; t < A.n; ++t)
                for (int e = 0; e < alpha[t]; ++e) m *= pts[j][t];
            W(i, j) = m;
        }
        a(i) = A.val[i];
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(W, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0 || sv(sv.size() - 1) <= rank_tol * sv(0))
        throw RankDeficientWeights("solve_lambdas: evaluation matrix is rank deficient "
                                   "(points likely coalesced)");
    Eigen::VectorXcd lam = svd.solve(a);
    LambdaSolve out;
    out.lambdas.assign(lam.data(), lam.data() + r);
    out.lsq_residual = (W * lam - a).norm();
    return out;
}

}  // namespace symx
