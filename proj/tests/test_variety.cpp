#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace symx;
using tu::mi;
using tu::q;

TEST(VarietyTest, MakeVarietyValidation) {
    Poly<Complex> inhom(3);
    inhom.add_term(mi({1, 0, 0}), Complex(1, 0));
    inhom.add_term(mi({0, 2, 0}), Complex(1, 0));
    EXPECT_THROW(make_variety<Complex>(2, {inhom}), Error);

    Poly<Complex> wrongvars(2);
    wrongvars.add_term(mi({1, 0}), Complex(1, 0));
    EXPECT_THROW(make_variety<Complex>(2, {wrongvars}), Error);

    // Zero generators are dropped; dehomogenized chart equations are stored.
    Poly<Complex> zero(3);
    Poly<Complex> g(3);
    g.add_term(mi({0, 0, 2}), Complex(1, 0));
    g.add_term(mi({1, 1, 0}), Complex(-1, 0));
    auto X = make_variety<Complex>(2, {zero, g});
    ASSERT_EQ(X.gens_h.size(), 1u);
    ASSERT_EQ(X.gens.size(), 1u);
    EXPECT_EQ(X.gens[0].coeff(mi({0, 2})), Complex(1, 0));
    EXPECT_EQ(X.gens[0].coeff(mi({1, 0})), Complex(-1, 0));

    EXPECT_THROW(make_variety<Complex>(2, {}, std::nullopt, {{Complex(1, 0)}}), Error);
}

TEST(VarietyTest, MembershipExactOnSegre) {
    auto A = tu::load_tensor_exact("general_cubic.tensor.json");
    auto X = tu::load_variety_exact("segre2.variety.json");
    auto rep = membership(A, X);
    EXPECT_TRUE(rep.member);
    EXPECT_EQ(rep.threshold, 0.0);  // exact arithmetic demands exact zeros
    EXPECT_EQ(rep.worst, 0.0);
}

TEST(VarietyTest, MembershipNumericOnParabola) {
    auto A = tu::load_tensor("parabola.tensor.json");
    auto X = tu::load_variety("parabola.variety.json");
    auto rep = membership(A, X);
    EXPECT_TRUE(rep.member);
    EXPECT_GT(rep.threshold, 0.0);
}

TEST(VarietyTest, MembershipRejectsFixtures) {
    {
        auto A = tu::load_tensor_exact("membership_curve.tensor.json");
        auto X = tu::load_variety_exact("membership_curve.variety.json");
        auto rep = membership(A, X);
        EXPECT_FALSE(rep.member);
        ASSERT_TRUE(rep.violation.has_value());
    }
    {
        auto A = tu::load_tensor("membership_quartic.tensor.json");
        auto X = tu::load_variety("membership_quartic.variety.json");
        EXPECT_FALSE(membership(A, X).member);
    }
}

TEST(VarietyTest, SynthesizedTensorsPassAndPerturbationsFail) {
    auto X = tu::load_variety("two_planes.variety.json");
    Rng rng = derive_rng(3, "variety/synth");
    for (int trial = 0; trial < 5; ++trial) {
        auto pts = sample_Y(X, 4, rng);
        SymTensor<Complex> A(X.n, 3);
        for (auto& v : pts) A = A + rank_one<Complex>(3, rng.cgauss(), v);
        EXPECT_TRUE(membership(A, X).member) << "trial " << trial;

        // Perturb by the dual tensor of an ideal element: pairing against
        // that element becomes a sum of squared magnitudes.
        Poly<Complex> shifted = X.gens_h[0] * Poly<Complex>::monomial(X.n + 1, mi({1, 0, 0, 0}), 1.0);
        Poly<Complex> p = dehomogenize(shifted);
        SymTensor<Complex> B(X.n, 3);
        double s2 = 0.0;
        for (auto& [a, c] : p.terms) {
            B.set(a, std::conj(c));
            s2 += std::norm(c);
        }
        ASSERT_GT(s2, 0.0);
        double eps = 1e-2 * (1.0 + A.norm(NormKind::hilbert_schmidt));
        auto rep = membership(A + B.scaled(eps), X);
        EXPECT_FALSE(rep.member) << "trial " << trial;
    }
}

TEST(VarietyTest, IdealDimensionAndHilbertValues) {
    auto segre = tu::load_variety("segre2.variety.json");
    EXPECT_EQ(ideal_dim_at_degree(segre, 2), 1);
    EXPECT_EQ(ideal_dim_at_degree(segre, 3), 4);  // one quadric times the linear forms
    EXPECT_EQ(hilbert_value(segre, 3), 16);

    auto parabola = tu::load_variety("parabola.variety.json");
    EXPECT_EQ(hilbert_value(parabola, 3), 7);

    auto free3 = tu::load_variety("free3.variety.json");
    EXPECT_EQ(hilbert_value(free3, 3), 20);  // binom(6,3)

    auto nodal = tu::load_variety("nodal_curve.variety.json");
    EXPECT_EQ(hilbert_value(nodal, 3), 9);
}

TEST(VarietyTest, ExpectedGenericRankValues) {
    auto segre = tu::load_variety("segre2.variety.json");
    EXPECT_EQ(expected_generic_rank(segre, 3), 6);  // ceil(16/3)
    auto nodal = tu::load_variety("nodal_curve.variety.json");
    EXPECT_EQ(expected_generic_rank(nodal, 3), 5);  // ceil(9/2)
    auto free3 = tu::load_variety("free3.variety.json");
    EXPECT_EQ(expected_generic_rank(free3, 3), 5);  // ceil(20/4)

    VarietySpec<Complex> nodim = tu::load_variety("nodal_curve.variety.json");
    nodim.dimX.reset();
    EXPECT_THROW(expected_generic_rank(nodim, 3), Error);
}

TEST(VarietyTest, EstimateDimXFromWitness) {
    auto parabola = tu::load_variety("parabola.variety.json");
    std::vector<Complex> u{Complex(1, 0), Complex(2, 0), Complex(1, 0)};
    EXPECT_EQ(estimate_dimX(parabola, u), 2);

    auto segre = tu::load_variety("segre2.variety.json");
    std::vector<Complex> us{Complex(1, 0), Complex(2, 0), Complex(3, 0), Complex(6, 0)};
    EXPECT_EQ(estimate_dimX(segre, us), 3);

    std::vector<Complex> off{Complex(1, 0), Complex(2, 0), Complex(0, 0), Complex(5, 0)};
    EXPECT_THROW(estimate_dimX(segre, off), Error);
}

TEST(VarietyTest, SampleYLandsOnChart) {
    auto parabola = tu::load_variety("parabola.variety.json");
    Rng rng = derive_rng(11, "variety/sample");
    auto pts = sample_Y(parabola, 10, rng);
    ASSERT_EQ(pts.size(), 10u);
    Poly<Complex> g = poly_to_complex(parabola.gens[0]);
    for (auto& y : pts) {
        double ny = std::sqrt(std::norm(y[0]) + std::norm(y[1]));
        EXPECT_LE(std::abs(g.eval<Complex>(y)), 1e-8 * (1.0 + ny * ny));
    }

    auto planes = tu::load_variety("two_planes.variety.json");
    auto pts2 = sample_Y(planes, 8, rng);
    Poly<Complex> g2 = poly_to_complex(planes.gens[0]).widened(3);
    for (auto& y : pts2) EXPECT_LE(std::abs(g2.eval<Complex>(y)), 1e-6);

    auto free3 = tu::load_variety("free3.variety.json");
    EXPECT_EQ(sample_Y(free3, 7, rng).size(), 7u);
}

TEST(VarietyTest, SelectB0FrozenSets) {
    struct Case {
        const char* variety;
        int r;
        std::vector<MultiIndex> expect;
    };
    std::vector<Case> cases{
        {"segre2.variety.json", 3, {mi({0, 0, 0}), mi({1, 0, 0}), mi({0, 1, 0})}},
        {"parabola.variety.json", 4, {mi({0, 0}), mi({1, 0}), mi({0, 1}), mi({2, 0})}},
        {"nodal_curve.variety.json",
         5,
         {mi({0, 0}), mi({1, 0}), mi({0, 1}), mi({2, 0}), mi({1, 1})}},
        {"two_planes.variety.json",
         5,
         {mi({0, 0, 0}), mi({1, 0, 0}), mi({0, 1, 0}), mi({0, 0, 1}), mi({2, 0, 0})}},
        {"monkey_saddle.variety.json",
         6,
         {mi({0, 0, 0}), mi({1, 0, 0}), mi({0, 1, 0}), mi({0, 0, 1}), mi({2, 0, 0}),
          mi({1, 1, 0})}},
    };
    for (const auto& c : cases) {
        auto X = tu::load_variety(c.variety);
        Rng r1 = derive_rng(5, "variety/b0");
        EXPECT_EQ(select_B0(X, c.r, r1), c.expect) << c.variety;
        // The greedy selection is stable across sampling seeds.
        Rng r2 = derive_rng(99, "variety/b0-alt");
        EXPECT_EQ(select_B0(X, c.r, r2), c.expect) << c.variety << " (alternate seed)";
    }
}

TEST(VarietyTest, SelectB0DropsDependentMonomials) {
    // On the parabola chart y2^2 equals y1 - 1, so y2^2 is never kept.
    auto X = tu::load_variety("parabola.variety.json");
    Rng rng = derive_rng(7, "variety/b0-dep");
    auto B0 = select_B0(X, 6, rng);
    EXPECT_EQ(std::count(B0.begin(), B0.end(), mi({0, 2})), 0);
    EXPECT_EQ(B0.size(), 6u);
}

TEST(VarietyTest, VarietyViolationMeasuresWorstGenerator) {
    auto X = tu::load_variety("parabola.variety.json");
    Decomposition dec;
    dec.n = 2;
    dec.d = 3;
    dec.lambdas = {Complex(1, 0), Complex(2, 0)};
    dec.points = {{Complex(2, 0), Complex(1, 0)}, {Complex(5, 0), Complex(2, 0)}};
    EXPECT_LE(variety_violation(X, dec), 1e-12);

    dec.points[1] = {Complex(0, 0), Complex(0, 0)};
    EXPECT_NEAR(variety_violation(X, dec), 1.0, 1e-12);

    // Projective terms are checked against the homogeneous generators.
    dec.points.pop_back();
    dec.lambdas.pop_back();
    dec.hom_lambdas = {Complex(1, 0)};
    dec.hom_points = {{Complex(0, 0), Complex(0, 0), Complex(1, 0)}};
    EXPECT_NEAR(variety_violation(X, dec), 1.0, 1e-12);  // x2^2 term survives
}

TEST(VarietyTest, MembershipVariableMismatchThrows) {
    auto A = tu::load_tensor("parabola.tensor.json");
    auto X = tu::load_variety("segre2.variety.json");
    EXPECT_THROW(membership(A, X), Error);
}
