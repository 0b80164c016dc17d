#pragma once

#include "genpoly.hpp"
#include "rng.hpp"

#include <Eigen/Dense>

#include <optional>

namespace symx {

struct LMOptions {
    int max_iters = 200;
    double target_inf = 1e-12;  // stop once the residual is this small
    double mu0 = 1e-3;
    double step_tol = 1e-15;
};

struct LMOutcome {
    Eigen::VectorXcd w;
    double resid_inf = 0.0;
    int iters = 0;
};

/// Levenberg-Marquardt on a holomorphic least-squares system, run over the
/// real embedding: variables (Re w, Im w), residuals (Re F, Im F), and the
/// real Jacobian assembled from the complex one as [[Re J, -Im J],
/// [Im J, Re J]] (F is holomorphic, so no conjugate derivatives appear).
inline LMOutcome lm_minimize(const ResidualSystem& rs, const Eigen::VectorXcd& w0,
                             const LMOptions& opt = {}) {
    const int m = rs.m;
    const int R = (int)rs.size();
    auto real_resid = [&](const Eigen::VectorXcd& w) {
        Eigen::VectorXcd f = rs.eval(w);
        Eigen::VectorXd rr(2 * R);
        rr << f.real(), f.imag();
        return rr;
    };
    Eigen::VectorXcd w = w0;
    Eigen::VectorXd rho = real_resid(w);
    double mu = opt.mu0;
    LMOutcome out;
    for (out.iters = 0; out.iters < opt.max_iters; ++out.iters) {
        if (rho.lpNorm<Eigen::Infinity>() <= opt.target_inf) break;
        Eigen::MatrixXcd Jc = rs.jacobian(w);
        Eigen::MatrixXd J(2 * R, 2 * m);
        J.topLeftCorner(R, m) = Jc.real();
        J.topRightCorner(R, m) = -Jc.imag();
        J.bottomLeftCorner(R, m) = Jc.imag();
        J.bottomRightCorner(R, m) = Jc.real();
        Eigen::MatrixXd H = J.transpose() * J;
        Eigen::VectorXd g = J.transpose() * rho;
        Eigen::VectorXd diag = H.diagonal().cwiseMax(1e-12);
        bool accepted = false;
        for (int tries = 0; tries < 30; ++tries) {
            Eigen::MatrixXd Hd = H;
            Hd.diagonal() += mu * diag;
            Eigen::VectorXd step = Hd.ldlt().solve(-g);
            if (!step.allFinite()) {
                mu *= 4.0;
                continue;
            }
            Eigen::VectorXcd wn = w;
            for (int j = 0; j < m; ++j) wn(j) += Complex(step(j), step(m + j));
            Eigen::VectorXd rn = real_resid(wn);
            if (rn.squaredNorm() < rho.squaredNorm()) {
                double stepn = step.norm();
                w = wn;
                rho = rn;
                mu = std::max(mu / 3.0, 1e-14);
                accepted = true;
                if (stepn <= opt.step_tol * (1.0 + w.norm())) out.iters = opt.max_iters;
                break;
            }
            mu *= 4.0;
        }
        if (!accepted) break;  // stalled in a local minimum
    }
    out.w = w;
    Eigen::VectorXcd f = rs.eval(w);
    out.resid_inf = f.size() ? f.lpNorm<Eigen::Infinity>() : 0.0;
    return out;
}

/// Multistart search for parameters solving the residual system: complex
/// normal starts at cycling scales, first start reaching residual_tol wins
/// (deterministic given the rng substream). Zero-parameter systems reduce
/// to checking the constant residuals.
inline std::optional<Eigen::VectorXcd> solve_w(const ResidualSystem& rs, int restarts,
                                               double residual_tol, Rng& rng,
                                               double* achieved = nullptr,
                                               const LMOptions& opt = {}) {
    if (rs.m == 0) {
        Eigen::VectorXcd w0(0);
        double r = rs.size() ? rs.eval(w0).lpNorm<Eigen::Infinity>() : 0.0;
        if (achieved) *achieved = r;
        if (r <= residual_tol) return w0;
        return std::nullopt;
    }
    if (rs.size() == 0) {  // unconstrained parameters: any value works
        Eigen::VectorXcd w = Eigen::VectorXcd::Zero(rs.m);
        if (achieved) *achieved = 0.0;
        return w;
    }
    static const double scales[] = {1.0, 0.3, 3.0};
    double best = std::numeric_limits<double>::infinity();
    for (int t = 0; t < restarts; ++t) {
        double scale = scales[t % 3];
        Eigen::VectorXcd w0(rs.m);
        for (int j = 0; j < rs.m; ++j) w0(j) = scale * rng.cgauss();
        LMOutcome res = lm_minimize(rs, w0, opt);
        best = std::min(best, res.resid_inf);
        if (res.resid_inf <= residual_tol) {
            if (achieved) *achieved = res.resid_inf;
            return res.w;
        }
    }
    if (achieved) *achieved = best;
    return std::nullopt;
}

}  // namespace symx
