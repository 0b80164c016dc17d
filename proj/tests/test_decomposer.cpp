#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace symx;
using tu::mi;

namespace {

SolverConfig seeded(std::uint64_t s) {
    SolverConfig cfg;
    cfg.seed = s;
    return cfg;
}

bool trace_has(const std::vector<AttemptRecord>& tr, int rank, const std::string& stage) {
    for (auto& t : tr)
        if (t.rank == rank && t.stage == stage) return true;
    return false;
}

// Rank-one symmetric tensor helpers for planted instances.
SymTensor<Complex> planted(int d, const std::vector<Complex>& lams,
                           const std::vector<std::vector<Complex>>& pts) {
    SymTensor<Complex> A((int)pts[0].size(), d);
    for (size_t j = 0; j < pts.size(); ++j) A = A + rank_one<Complex>(d, lams[j], pts[j]);
    return A;
}

}  // namespace

TEST(DecomposerTest, GeneralCubicRankThreePipeline) {
    auto A = tu::load_tensor("general_cubic.tensor.json");
    auto X = tu::load_variety("segre2.variety.json");
    auto res = decompose(A, X, seeded(0));

    EXPECT_EQ(res.rank_used, 3);
    EXPECT_FALSE(res.used_generic_change);
    EXPECT_LE(res.abs_error, 1e-12);
    EXPECT_LE(res.rel_error, 1e-12);
    EXPECT_LE(res.on_variety_violation, 1e-8);
    EXPECT_LE(res.solver_residual, 1e-8);
    ASSERT_FALSE(res.trace.empty());
    EXPECT_TRUE(trace_has(res.trace, 3, "success"));

    const double t = 3.4655446902326913;  // sqrt(12.01)
    std::vector<std::vector<Complex>> want{
        {Complex(3, 0), Complex(1, 0), Complex(3, 0)},
        {Complex(1, 0), Complex((0.9 - t) / 2, 0), Complex((0.9 - t) / 2, 0)},
        {Complex(1, 0), Complex((0.9 + t) / 2, 0), Complex((0.9 + t) / 2, 0)}};
    EXPECT_TRUE(tu::match_points(res.decomposition.points, want, 1e-6));
    EXPECT_TRUE(tu::match_scalars(res.decomposition.lambdas,
                                  {Complex(2, 0), Complex(-0.73533, 0), Complex(-2.26467, 0)},
                                  1e-3));
    auto rr = decomposition_residual(A, res.decomposition, NormKind::hilbert_schmidt);
    EXPECT_LE(rr.rel_error, 1e-10);
}

TEST(DecomposerTest, VariableCountMismatchThrows) {
    auto A = tu::load_tensor("parabola.tensor.json");
    auto X = tu::load_variety("segre2.variety.json");
    EXPECT_THROW(decompose(A, X, seeded(0)), Error);
}

TEST(DecomposerTest, ParabolaEscalatesToRankFour) {
    auto A = tu::load_tensor("parabola.tensor.json");
    auto X = tu::load_variety("parabola.variety.json");
    auto res = decompose(A, X, seeded(0));

    EXPECT_EQ(res.rank_used, 4);
    EXPECT_FALSE(res.used_generic_change);
    EXPECT_LE(res.abs_error, 1e-10);
    // Rank 3 was attempted and did not succeed.
    bool rank3_failed = false;
    for (auto& t : res.trace)
        if (t.rank == 3 && t.stage != "success") rank3_failed = true;
    EXPECT_TRUE(rank3_failed);
    EXPECT_FALSE(trace_has(res.trace, 3, "success"));
    EXPECT_TRUE(trace_has(res.trace, 4, "success"));

    Poly<Complex> g = poly_to_complex(X.gens[0]);
    for (auto& v : res.decomposition.points) EXPECT_LE(std::abs(g.eval<Complex>(v)), 1e-6);
}

TEST(DecomposerTest, NodalCurveEscalatesToRankFive) {
    auto A = tu::load_tensor("nodal_curve.tensor.json");
    auto X = tu::load_variety("nodal_curve.variety.json");
    auto res = decompose(A, X, seeded(0));

    EXPECT_EQ(res.rank_used, 5);
    EXPECT_LE(res.abs_error, 1e-9);
    EXPECT_LE(res.rel_error, 1e-8);
    EXPECT_FALSE(trace_has(res.trace, 3, "success"));
    EXPECT_FALSE(trace_has(res.trace, 4, "success"));
    EXPECT_TRUE(trace_has(res.trace, 5, "success"));
    // Both smaller ranks appear in the trace.
    EXPECT_TRUE(std::any_of(res.trace.begin(), res.trace.end(),
                            [](const AttemptRecord& t) { return t.rank == 3; }));
    EXPECT_TRUE(std::any_of(res.trace.begin(), res.trace.end(),
                            [](const AttemptRecord& t) { return t.rank == 4; }));
}

TEST(DecomposerTest, TwoPlanesRankFiveFrozenPoints) {
    auto A = tu::load_tensor("two_planes.tensor.json");
    auto X = tu::load_variety("two_planes.variety.json");
    auto res = decompose(A, X, seeded(0));

    EXPECT_EQ(res.rank_used, 5);
    EXPECT_LE(res.abs_error, 1e-10);
    ASSERT_EQ(res.decomposition.points.size(), 5u);

    EXPECT_TRUE(tu::contains_point(res.decomposition.points,
                                   {Complex(-2, 0), Complex(-1, 0), Complex(-1, 0)}, 1e-6));
    EXPECT_TRUE(tu::contains_point(res.decomposition.points,
                                   {Complex(-1, 0), Complex(1, 0), Complex(1, 0)}, 1e-6));
    EXPECT_TRUE(tu::contains_point(res.decomposition.points,
                                   {Complex(1, 0), Complex(0, 0), Complex(-2, 0)}, 1e-6));
    EXPECT_TRUE(tu::match_scalars(res.decomposition.lambdas,
                                  {Complex(1, 0), Complex(-1, 0), Complex(1, 0),
                                   Complex(-1.249, 0), Complex(2.249, 0)},
                                  1e-3));
    // Every recovered point sits on one of the two planes.
    for (auto& v : res.decomposition.points)
        EXPECT_LE(std::abs((v[2] - v[1]) * (v[0] - Complex(1, 0))), 1e-8);
}

TEST(DecomposerTest, MonkeySaddleRankSix) {
    auto A = tu::load_tensor("monkey_saddle.tensor.json");
    auto X = tu::load_variety("monkey_saddle.variety.json");
    auto res = decompose(A, X, seeded(0));

    EXPECT_EQ(res.rank_used, 6);
    EXPECT_LE(res.rel_error, 1e-8);
    EXPECT_LE(res.on_variety_violation, 1e-6 * 100.0);  // scaled gate upper bound
    EXPECT_TRUE(trace_has(res.trace, 6, "success"));
}

TEST(DecomposerTest, SpaceCurveRankSix) {
    auto A = tu::load_tensor("space_curve.tensor.json");
    auto X = tu::load_variety("space_curve.variety.json");
    EXPECT_EQ(max_flattening_rank(A), 5);
    auto res = decompose(A, X, seeded(0));

    EXPECT_EQ(res.rank_used, 6);
    EXPECT_LE(res.rel_error, 1e-6);
    for (auto& v : res.decomposition.points)
        for (auto& g : X.gens) {
            Poly<Complex> gc = poly_to_complex(g);
            EXPECT_LE(std::abs(gc.eval<Complex>(v)), 1e-5);
        }
}

TEST(DecomposerTest, QuarticSurfaceInvariants) {
    auto A = tu::load_tensor("quartic_surface.tensor.json");
    auto X = tu::load_variety("quartic_surface.variety.json");
    EXPECT_TRUE(membership(A, X).member);
    EXPECT_EQ(max_flattening_rank(A), 10);
    EXPECT_EQ(hilbert_value(X, 4), 41);
}

TEST(DecomposerTest, ExtractRootsRecoversPlantedPoints) {
    // Interpolate a generating matrix from three planted points and check the
    // eigen extraction returns exactly those points.
    std::vector<std::vector<Complex>> pts{{Complex(1, 0), Complex(2, 0)},
                                          {Complex(3, 0), Complex(-1, 0)},
                                          {Complex(0, 0), Complex(1, 0)}};
    auto ctx = make_border_ctx(2, {mi({0, 0}), mi({1, 0}), mi({0, 1})});
    Eigen::MatrixXcd M(3, 3);
    for (int j = 0; j < 3; ++j) {
        M(j, 0) = 1.0;
        M(j, 1) = pts[j][0];
        M(j, 2) = pts[j][1];
    }
    Mat<Complex> G(3, (int)ctx.dB1.size());
    for (int c = 0; c < (int)ctx.dB1.size(); ++c) {
        Eigen::VectorXcd rhs(3);
        for (int j = 0; j < 3; ++j) {
            Complex m(1, 0);
            for (int t = 0; t < 2; ++t)
                for (int e = 0; e < ctx.dB1[c][t]; ++e) m *= pts[j][t];
            rhs(j) = m;
        }
        Eigen::VectorXcd col = M.fullPivLu().solve(rhs);
        for (int s = 0; s < 3; ++s) G(s, c) = col(s);
    }
    Rng rng = derive_rng(4, "roots/planted");
    double comm = -1.0;
    auto roots = extract_roots(G, ctx, rng, {}, &comm);
    EXPECT_LE(comm, 1e-10);
    EXPECT_TRUE(tu::match_points(roots, pts, 1e-8));

    // The border relations vanish at every extracted root.
    for (auto& p : border_polys(G, ctx))
        for (auto& v : roots) EXPECT_LE(std::abs(p.eval<Complex>(v)), 1e-9);
}

TEST(DecomposerTest, ExtractRootsReportsDefectiveStructure) {
    // One border column encoding (y-1)^2 = 0: the multiplication matrix is a
    // Jordan block, eigenvalues never separate.
    auto ctx = make_border_ctx(1, {mi({0}), mi({1})});
    Mat<Complex> G(2, 1);
    G(0, 0) = Complex(-1, 0);
    G(1, 0) = Complex(2, 0);
    Rng rng = derive_rng(9, "roots/defective");
    EXPECT_THROW(extract_roots(G, ctx, rng), DefectiveSpectrum);
}

TEST(DecomposerTest, SolveLambdasOracle) {
    std::vector<std::vector<Complex>> pts{{Complex(2, 0), Complex(3, 0)},
                                          {Complex(-1, 0), Complex(0.5, 0)}};
    auto A = planted(3, {Complex(2, 0), Complex(-1, 0)}, pts);
    auto sol = solve_lambdas(A, pts);
    ASSERT_EQ(sol.lambdas.size(), 2u);
    EXPECT_TRUE(tu::match_scalars(sol.lambdas, {Complex(2, 0), Complex(-1, 0)}, 1e-10));
    EXPECT_LE(sol.lsq_residual, 1e-10);

    std::vector<std::vector<Complex>> dup{pts[0], pts[0]};
    EXPECT_THROW(solve_lambdas(A, dup), RankDeficientWeights);
}

TEST(DecomposerTest, GenericChangeRecoversDegeneratePoints) {
    // (0,1)^(x3) + (1,1)^(x3): one term sits on the hyperplane at infinity, so
    // no direct chart decomposition at rank 2 exists.
    SymTensor<Complex> A(1, 3);
    A.set(mi({0}), Complex(1, 0));
    A.set(mi({1}), Complex(1, 0));
    A.set(mi({2}), Complex(1, 0));
    A.set(mi({3}), Complex(2, 0));
    auto X = make_variety<Complex>(1, {}, 2);
    SolverConfig cfg = seeded(0);
    cfg.rank_min = 2;
    cfg.rank_max = 2;
    auto res = decompose(A, X, cfg);

    EXPECT_TRUE(res.used_generic_change);
    EXPECT_EQ(res.rank_used, 2);
    EXPECT_LE(res.rel_error, 1e-8);
    ASSERT_EQ(res.decomposition.points.size(), 1u);
    ASSERT_EQ(res.decomposition.hom_points.size(), 1u);
    EXPECT_LE(std::abs(res.decomposition.points[0][0] - Complex(1, 0)), 1e-7);
    EXPECT_LE(std::abs(res.decomposition.lambdas[0] - Complex(1, 0)), 1e-7);
    const auto& hp = res.decomposition.hom_points[0];
    EXPECT_LE(std::abs(hp[0]), 1e-6);
    EXPECT_NEAR(std::abs(hp[1]), 1.0, 1e-9);
    EXPECT_NEAR(std::abs(res.decomposition.hom_lambdas[0]), 1.0, 1e-7);
    // The direct attempt failed before the coordinate change.
    EXPECT_TRUE(trace_has(res.trace, 2, "parameterize"));
}

TEST(DecomposerTest, GenericChangeOffReportsFailure) {
    SymTensor<Complex> A(1, 3);
    A.set(mi({0}), Complex(1, 0));
    A.set(mi({1}), Complex(1, 0));
    A.set(mi({2}), Complex(1, 0));
    A.set(mi({3}), Complex(2, 0));
    auto X = make_variety<Complex>(1, {}, 2);
    SolverConfig cfg = seeded(0);
    cfg.rank_min = 2;
    cfg.rank_max = 2;
    cfg.generic_change = GenericChange::off;
    try {
        decompose(A, X, cfg);
        FAIL() << "expected NoDecomposition";
    } catch (const NoDecomposition& e) {
        EXPECT_NE(std::string(e.what()).find("no rank in [2, 2]"), std::string::npos);
        EXPECT_NE(e.trace.find("parameterize"), std::string::npos);
    }
}

TEST(DecomposerTest, ForcedGenericChangeSkipsDirectAttempts) {
    auto A = tu::load_tensor("general_cubic.tensor.json");
    auto X = tu::load_variety("segre2.variety.json");
    SolverConfig cfg = seeded(0);
    cfg.generic_change = GenericChange::force;
    auto res = decompose(A, X, cfg);
    EXPECT_TRUE(res.used_generic_change);
    EXPECT_EQ(res.rank_used, 3);
    EXPECT_LE(res.rel_error, 1e-8);
    // Pulled-back points must reproduce the original decomposition.
    EXPECT_TRUE(tu::contains_point(res.decomposition.points,
                                   {Complex(3, 0), Complex(1, 0), Complex(3, 0)}, 1e-6));
}

TEST(DecomposerTest, DeterministicGivenSeed) {
    auto A = tu::load_tensor("general_cubic.tensor.json");
    auto X = tu::load_variety("segre2.variety.json");
    auto r1 = decompose(A, X, seeded(42));
    auto r2 = decompose(A, X, seeded(42));
    ASSERT_EQ(r1.decomposition.points.size(), r2.decomposition.points.size());
    for (size_t j = 0; j < r1.decomposition.points.size(); ++j) {
        EXPECT_EQ(r1.decomposition.lambdas[j], r2.decomposition.lambdas[j]);
        EXPECT_EQ(r1.decomposition.points[j], r2.decomposition.points[j]);
    }
    EXPECT_EQ(r1.rel_error, r2.rel_error);
}

TEST(DecomposerTest, B0OverrideHonored) {
    auto A = tu::load_tensor("general_cubic.tensor.json");
    auto X = tu::load_variety("segre2.variety.json");
    SolverConfig cfg = seeded(0);
    cfg.B0_override = std::vector<MultiIndex>{mi({0, 0, 0}), mi({0, 1, 0}), mi({0, 0, 1})};
    auto res = decompose(A, X, cfg);
    EXPECT_EQ(res.rank_used, 3);
    EXPECT_TRUE(tu::contains_point(res.decomposition.points,
                                   {Complex(3, 0), Complex(1, 0), Complex(3, 0)}, 1e-6));

    // An override without the constant monomial is rejected by basis
    // validation and aborts the search.
    SolverConfig bad = seeded(0);
    bad.generic_change = GenericChange::off;
    bad.B0_override = std::vector<MultiIndex>{mi({1, 0, 0}), mi({0, 1, 0}), mi({0, 0, 1})};
    try {
        decompose(A, X, bad);
        FAIL() << "expected NoDecomposition";
    } catch (const NoDecomposition& e) {
        EXPECT_NE(e.trace.find("abort"), std::string::npos);
    }
}

TEST(DecomposerTest, FlatteningBoundExceedsRankMax) {
    auto A = tu::load_tensor("parabola.tensor.json");
    auto X = tu::load_variety("parabola.variety.json");
    SolverConfig cfg = seeded(0);
    cfg.rank_max = 2;  // flattening bound is 3
    try {
        decompose(A, X, cfg);
        FAIL() << "expected NoDecomposition";
    } catch (const NoDecomposition& e) {
        EXPECT_NE(std::string(e.what()).find("exceeds rank_max"), std::string::npos);
        EXPECT_NE(e.trace.find("abort"), std::string::npos);
    }
}

TEST(DecomposerTest, PullBackRoundTripsAffinePoints) {
    // A change of coordinates followed by pull_back reproduces an affine
    // decomposition exactly (up to reordering).
    Rng rng = derive_rng(31, "decomp/pullback");
    CoordChange cc = random_unitary_change(3, rng);
    Decomposition dec;
    dec.n = 2;
    dec.d = 3;
    dec.lambdas = {Complex(2, 0), Complex(-1, 1)};
    dec.points = {{Complex(1, 0), Complex(-2, 0)}, {Complex(0.5, 0.5), Complex(3, 0)}};
    SymTensor<Complex> A = reconstruct(dec);

    // Express A in moved coordinates, move the decomposition there, pull back.
    SymTensor<Complex> A2 = transform_tensor(A, cc);
    Decomposition moved;
    moved.n = 2;
    moved.d = 3;
    for (size_t j = 0; j < dec.points.size(); ++j) {
        Eigen::VectorXcd u(3);
        u(0) = 1.0;
        u(1) = dec.points[j][0];
        u(2) = dec.points[j][1];
        Eigen::VectorXcd up = cc.L.transpose() * u;
        Complex s = up(0);
        moved.lambdas.push_back(dec.lambdas[j] * s * s * s);
        moved.points.push_back({up(1) / s, up(2) / s});
    }
    EXPECT_LE(decomposition_residual(A2, moved, NormKind::hilbert_schmidt).rel_error, 1e-10);
    Decomposition back = pull_back(moved, cc);
    EXPECT_LE(decomposition_residual(A, back, NormKind::hilbert_schmidt).rel_error, 1e-10);
    EXPECT_TRUE(tu::match_points(back.points, dec.points, 1e-8));
}
