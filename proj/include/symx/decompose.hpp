#pragma once

#include "errors.hpp"
#include "genpoly.hpp"
#include "lm.hpp"
#include "roots.hpp"
#include "tensor.hpp"
#include "variety.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace symx {

enum class RootMethod { schur_combination };
enum class GenericChange { automatic, off, force };

struct SolverConfig {
    int restarts = 60;
    int max_iters = 300;
    double residual_tol = 1e-8;
    double newton_damping = 0.5;  // line-search shrink factor for Newton refinements
    std::uint64_t seed = 0;
    int rank_min = 1;
    int rank_max = 12;
    RootMethod root_method = RootMethod::schur_combination;

    double flattening_tol = 1e-8;   // singular-value cutoff for the rank lower bound
    double nullspace_tol = 1e-10;   // singular-value cutoff in the column solves
    double consistency_tol = 1e-8;  // column-system consistency threshold
    double verify_rel_tol = 1e-6;   // acceptance: rel_error of the reconstruction
    double variety_tol = 1e-6;      // acceptance: scaled on-variety violation
    NormKind norm_kind = NormKind::coefficient;
    GenericChange generic_change = GenericChange::automatic;
    std::optional<std::vector<MultiIndex>> B0_override;
};

struct AttemptRecord {
    int rank = 0;
    std::string stage;   // where the attempt ended
    std::string detail;
    double solver_residual = -1.0;
};

struct DecompositionResult {
    Decomposition decomposition;
    int rank_used = 0;
    double solver_residual = 0.0;
    double abs_error = 0.0;
    double rel_error = 0.0;
    double on_variety_violation = 0.0;
    bool used_generic_change = false;
    std::uint64_t seed = 0;
    std::vector<AttemptRecord> trace;
};

/// Unitary change of coordinates on C^{n+1}; A'(x) = A(Lx) sends decomposition
/// points u to L^T u, and generators h to h o L^{-T}.
struct CoordChange {
    Eigen::MatrixXcd L;
    Eigen::MatrixXcd LinvT;
};

inline CoordChange random_unitary_change(int dim, Rng& rng) {
    Eigen::MatrixXcd Ginit(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) Ginit(i, j) = rng.cgauss();
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Ginit);
    CoordChange cc;
    cc.L = qr.householderQ();
    cc.LinvT = cc.L.conjugate();  // unitary: L^{-T} = conj(L)
    return cc;
}

namespace detail {
inline std::vector<std::vector<Complex>> matrix_rows(const Eigen::MatrixXcd& M) {
    std::vector<std::vector<Complex>> rows(M.rows());
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j) rows[i].push_back(M(i, j));
    return rows;
}
}  // namespace detail

inline SymTensor<Complex> transform_tensor(const SymTensor<Complex>& A, const CoordChange& cc) {
    Poly<Complex> p = substitute_linear(A.to_poly(), detail::matrix_rows(cc.L));
    return tensor_from_poly(p, A.d);
}

inline VarietySpec<Complex> transform_variety(const VarietySpec<Complex>& X,
                                              const CoordChange& cc) {
    std::vector<Poly<Complex>> gens;
    for (auto& h : X.gens_h) gens.push_back(substitute_linear(h, detail::matrix_rows(cc.LinvT)));
    VarietySpec<Complex> Y = make_variety<Complex>(X.n, std::move(gens), X.dimX);
    for (auto& wy : X.witness) {
        std::vector<Complex> u(X.n + 1);
        u[0] = 1.0;
        for (int i = 0; i < X.n; ++i) u[i + 1] = wy[i];
        Eigen::Map<Eigen::VectorXcd> uv(u.data(), X.n + 1);
        Eigen::VectorXcd up = cc.L.transpose() * uv;
        if (std::abs(up(0)) > 1e-8 * up.norm()) {
            std::vector<Complex> w2(X.n);
            for (int i = 0; i < X.n; ++i) w2[i] = up(i + 1) / up(0);
            Y.witness.push_back(std::move(w2));
        }
    }
    return Y;
}

/// Map a decomposition of the transformed tensor back: u_j = L^{-T} (1, v'_j),
/// re-entering the affine chart when u_0 is safely nonzero and keeping the
/// term projective otherwise.
inline Decomposition pull_back(const Decomposition& dec, const CoordChange& cc,
                               double chart_tol = 1e-8) {
    Decomposition out;
    out.n = dec.n;
    out.d = dec.d;
    auto handle = [&](Complex lam, const Eigen::VectorXcd& up) {
        Eigen::VectorXcd u = cc.LinvT * up;
        if (std::abs(u(0)) > chart_tol * u.norm()) {
            Complex u0d(1.0, 0.0);
            for (int e = 0; e < dec.d; ++e) u0d *= u(0);
            std::vector<Complex> v(dec.n);
            for (int i = 0; i < dec.n; ++i) v[i] = u(i + 1) / u(0);
            out.lambdas.push_back(lam * u0d);
            out.points.push_back(std::move(v));
        } else {
            // Keep the term projective, normalized so the point has unit norm
            // (the d-th power of the scale moves into the weight).
            double s = u.norm();
            Complex sd(1.0, 0.0);
            for (int e = 0; e < dec.d; ++e) sd *= s;
            u /= s;
            out.hom_lambdas.push_back(lam * sd);
            out.hom_points.push_back(std::vector<Complex>(u.data(), u.data() + u.size()));
        }
    };
    for (size_t j = 0; j < dec.lambdas.size(); ++j) {
        Eigen::VectorXcd up(dec.n + 1);
        up(0) = 1.0;
        for (int i = 0; i < dec.n; ++i) up(i + 1) = dec.points[j][i];
        handle(dec.lambdas[j], up);
    }
    for (size_t j = 0; j < dec.hom_lambdas.size(); ++j) {
        Eigen::VectorXcd up(dec.n + 1);
        for (int i = 0; i <= dec.n; ++i) up(i) = dec.hom_points[j][i];
        handle(dec.hom_lambdas[j], up);
    }
    return out;
}

namespace detail {

struct AttemptSuccess {
    Decomposition dec;
    int rank = 0;
    double solver_residual = 0.0;
    double abs_error = 0.0, rel_error = 0.0, violation = 0.0;
};

inline double violation_gate(const VarietySpec<Complex>& X, const Decomposition& dec,
                             double variety_tol) {
    double maxnorm = 0.0;
    for (auto& v : dec.points) {
        double nv = 0.0;
        for (auto& c : v) nv += std::norm(c);
        maxnorm = std::max(maxnorm, std::sqrt(nv));
    }
    int maxdeg = 1;
    for (auto& g : X.gens_h) maxdeg = std::max(maxdeg, g.degree());
    return variety_tol * (1.0 + std::pow(maxnorm, maxdeg));
}

inline std::optional<AttemptSuccess> attempt_rank(const SymTensor<Complex>& A,
                                                  const VarietySpec<Complex>& X, int r,
                                                  const SolverConfig& cfg,
                                                  const std::string& tag,
                                                  std::vector<AttemptRecord>& trace,
                                                  bool& fatal) {
    fatal = false;
    AttemptRecord rec;
    rec.rank = r;
    auto fail = [&](const std::string& stage, const std::string& detail) {
        rec.stage = stage;
        rec.detail = detail;
        trace.push_back(rec);
        return std::nullopt;
    };
    try {
        std::vector<MultiIndex> B0;
        if (cfg.B0_override && (int)cfg.B0_override->size() == r) {
            B0 = *cfg.B0_override;
        } else {
            Rng rb = derive_rng(cfg.seed, tag + "/b0", r);
            B0 = select_B0(X, r, rb);
        }
        BorderCtx ctx = make_border_ctx(X.n, B0);
        GenMatrixFamily<Complex> fam =
            parameterize_G(A, ctx, cfg.nullspace_tol, cfg.consistency_tol);
        ResidualSystem rs = build_residual_system(fam, X.gens);
        Rng rs_rng = derive_rng(cfg.seed, tag + "/solve", r);
        double achieved = -1.0;
        LMOptions lmopt;
        lmopt.max_iters = cfg.max_iters;
        auto w = solve_w(rs, cfg.restarts, cfg.residual_tol, rs_rng, &achieved, lmopt);
        rec.solver_residual = achieved;
        if (!w) return fail("solve", "no parameter value reached tolerance (best " +
                                         std::to_string(achieved) + ")");
        std::vector<Complex> wv(w->data(), w->data() + w->size());
        Mat<Complex> G = fam.evaluate(wv);
        Rng xr = derive_rng(cfg.seed, tag + "/xi", r);
        auto roots = extract_roots(G, ctx, xr);
        auto lam = solve_lambdas(A, roots);
        AttemptSuccess s;
        s.dec.n = A.n;
        s.dec.d = A.d;
        s.dec.lambdas = lam.lambdas;
        s.dec.points = roots;
        s.rank = r;
        s.solver_residual = achieved;
        ResidualReport rep = decomposition_residual(A, s.dec, cfg.norm_kind);
        s.abs_error = rep.abs_error;
        s.rel_error = rep.rel_error;
        s.violation = variety_violation(X, s.dec);
        if (s.rel_error > cfg.verify_rel_tol)
            return fail("verify", "reconstruction rel_error " + std::to_string(s.rel_error));
        if (s.violation > violation_gate(X, s.dec, cfg.variety_tol))
            return fail("verify", "on-variety violation " + std::to_string(s.violation));
        rec.stage = "success";
        trace.push_back(rec);
        return s;
    } catch (const InconsistentSystem& e) {
        return fail("parameterize", e.what());
    } catch (const EmptyRowSet& e) {
        fatal = true;  // larger ranks only shrink the row budget further
        return fail("parameterize", e.what());
    } catch (const DefectiveSpectrum& e) {
        return fail("extract", e.what());
    } catch (const RankDeficientWeights& e) {
        return fail("weights", e.what());
    } catch (const SampleFailure& e) {
        return fail("sample", e.what());
    } catch (const Error& e) {
        fatal = true;
        return fail("abort", e.what());
    }
}

inline std::optional<AttemptSuccess> run_rank_loop(const SymTensor<Complex>& A,
                                                   const VarietySpec<Complex>& X, int r_start,
                                                   const SolverConfig& cfg,
                                                   const std::string& tag,
                                                   std::vector<AttemptRecord>& trace) {
    for (int r = r_start; r <= cfg.rank_max; ++r) {
        bool fatal = false;
        auto s = attempt_rank(A, X, r, cfg, tag, trace, fatal);
        if (s) return s;
        if (fatal) break;
    }
    return std::nullopt;
}

inline std::string trace_to_string(const std::vector<AttemptRecord>& trace) {
    std::ostringstream os;
    for (auto& t : trace)
        os << "rank " << t.rank << " [" << t.stage << "] " << t.detail << "\n";
    return os.str();
}

}  // namespace detail

/// Full pipeline: rank escalation from max(rank_min, flattening bound), each
/// rank attempt = basis selection, generating-matrix parameterization,
/// parameter solve, root extraction, weight solve, and a from-scratch
/// verification (reconstruction error plus on-variety violation). If every
/// rank fails directly, one random unitary change of coordinates is tried
/// and the result pulled back. Throws NoDecomposition when nothing passes.
inline DecompositionResult decompose(const SymTensor<Complex>& A, const VarietySpec<Complex>& X,
                                     const SolverConfig& cfg = {}) {
    if (A.n != X.n) throw Error("decompose: tensor and variety variable counts differ");
    std::vector<AttemptRecord> trace;
    int r0 = std::max(cfg.rank_min, max_flattening_rank(A, cfg.flattening_tol));
    r0 = std::max(r0, 1);
    if (r0 > cfg.rank_max) {
        trace.push_back({r0, "abort",
                         "flattening lower bound exceeds rank_max", -1.0});
        throw NoDecomposition("decompose: flattening rank bound " + std::to_string(r0) +
                                  " exceeds rank_max " + std::to_string(cfg.rank_max),
                              detail::trace_to_string(trace));
    }

    auto finalize = [&](detail::AttemptSuccess&& s, bool used_gc) {
        DecompositionResult out;
        out.decomposition = std::move(s.dec);
        out.rank_used = s.rank;
        out.solver_residual = s.solver_residual;
        out.abs_error = s.abs_error;
        out.rel_error = s.rel_error;
        out.on_variety_violation = s.violation;
        out.used_generic_change = used_gc;
        out.seed = cfg.seed;
        out.trace = std::move(trace);
        return out;
    };

    if (cfg.generic_change != GenericChange::force) {
        auto direct = detail::run_rank_loop(A, X, r0, cfg, "direct", trace);
        if (direct) return finalize(std::move(*direct), false);
    }

    if (cfg.generic_change != GenericChange::off) {
        Rng gr = derive_rng(cfg.seed, "gc/L");
        CoordChange cc = random_unitary_change(A.n + 1, gr);
        SymTensor<Complex> A2 = transform_tensor(A, cc);
        VarietySpec<Complex> X2 = transform_variety(X, cc);
        auto moved = detail::run_rank_loop(A2, X2, r0, cfg, "gc", trace);
        if (moved) {
            detail::AttemptSuccess s;
            s.dec = pull_back(moved->dec, cc);
            s.rank = moved->rank;
            s.solver_residual = moved->solver_residual;
            ResidualReport rep = decomposition_residual(A, s.dec, cfg.norm_kind);
            s.abs_error = rep.abs_error;
            s.rel_error = rep.rel_error;
            s.violation = variety_violation(X, s.dec);
            bool ok = s.rel_error <= cfg.verify_rel_tol &&
                      s.violation <= detail::violation_gate(X, s.dec, cfg.variety_tol);
            if (ok) return finalize(std::move(s), true);
            trace.push_back({moved->rank, "verify",
                             "pulled-back decomposition failed re-verification (rel_error " +
                                 std::to_string(s.rel_error) + ")",
                             moved->solver_residual});
        }
    }

    throw NoDecomposition("decompose: no rank in [" + std::to_string(r0) + ", " +
                              std::to_string(cfg.rank_max) + "] produced a verified decomposition",
                          detail::trace_to_string(trace));
}

}  // namespace symx
