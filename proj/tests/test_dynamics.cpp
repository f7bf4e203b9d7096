#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"

using namespace lslab;

namespace {

const PartReport& part(const TheoremReport& r, const std::string& name) {
    const auto* p = r.part(name);
    if (!p) throw std::runtime_error("missing part " + name);
    return *p;
}

PointSet sublevel(const DynamicalPair& p, double c) {
    PointSet s = 0;
    for (std::size_t x = 0; x < p.space().size(); ++x)
        if (p.f(x) <= c) s |= bit(x);
    return s;
}

/// Σ over fixed values d in ]a, b] of the category of F ∩ f^{-1}(d).
long long slice_sum_oracle(const DynamicalPair& p, double a, double b) {
    const auto& X = p.space();
    std::set<double> levels;
    for (std::size_t x = 0; x < X.size(); ++x)
        if (p.map()(x) == x && p.f(x) > a && p.f(x) <= b) levels.insert(p.f(x));
    long long sum = 0;
    for (double d : levels) {
        PointSet s = 0;
        for (std::size_t x = 0; x < X.size(); ++x)
            if (p.map()(x) == x && p.f(x) == d) s |= bit(x);
        const auto c = oracle::gcat(X, s);
        if (c == oracle::kInf) return oracle::kInf;
        sum += c;
    }
    return sum;
}

}  // namespace

TEST(Dynamics, VFlowHomotopicToIdentity) {
    const auto fx = fixtures::V_flow();
    const auto e = CategoryEngine::classical(fx.pair.space());
    const auto r = verify_homotopic_to_identity_bounds(fx.pair, e, fx.a, fx.b);
    EXPECT_EQ(r.verdict(), Verdict::InequalityHolds);
    for (const auto& p : r.parts) EXPECT_TRUE(dominates(p.lhs, p.rhs)) << p.part;
    EXPECT_EQ(part(r, "I").rhs.minuend, ExtNat(1));
    EXPECT_EQ(part(r, "I").rhs.subtrahend, ExtNat(0));
}

TEST(Dynamics, WedgePairBoundIsStrict) {
    const auto fx = fixtures::WEDGE();
    const auto e = CategoryEngine::classical(fx.pair.space());
    const auto r = verify_homotopic_to_identity_bounds(fx.pair, e, fx.a, fx.b);
    EXPECT_EQ(r.verdict(), Verdict::InequalityHolds);
    EXPECT_EQ(part(r, "I").rhs.minuend, ExtNat(2));
    EXPECT_EQ(part(r, "I").rhs.subtrahend, ExtNat(2));
    EXPECT_EQ(part(r, "II").rhs.minuend, ExtNat(1));
    EXPECT_EQ(part(r, "semi").rhs.minuend, ExtNat(1));
    EXPECT_EQ(part(r, "III").rhs.minuend, ExtNat(1));
    EXPECT_EQ(part(r, "I").lhs, ExtNat(1));
}

TEST(Dynamics, HalfCircleModBoundIsStrict) {
    const auto fx = fixtures::HALFCIRC_SQ();
    const auto e = CategoryEngine::classical(fx.pair.space());
    const auto r = verify_homotopic_to_identity_bounds(fx.pair, e, fx.a, fx.b);
    EXPECT_EQ(part(r, "II").rhs.minuend, ExtNat(0));
    EXPECT_EQ(part(r, "III").rhs.minuend, ExtNat(1));
    EXPECT_EQ(r.verdict(), Verdict::InequalityHolds);
}

TEST(Dynamics, NonHomotopicMapIsRejected) {
    const auto X = fixtures::C4();
    const auto swap = SpaceMap::from_labels(X, {{"p", "q"}, {"q", "p"}});
    const DynamicalPair p(X, swap, {1, 1, 2, 2});
    const auto e = CategoryEngine::classical(X);
    try {
        verify_homotopic_to_identity_bounds(p, e, 0, Bound{2});
        FAIL() << "expected an error";
    } catch (const Error& err) {
        EXPECT_EQ(err.kind(), Error::Kind::FenceNotFound);
    }
}

TEST(Dynamics, BoundChainOnRandomInstances) {
    std::mt19937_64 rng(51);
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const auto inst = random_instance(rng, 5);
        const auto& X = inst.pair.space();
        const auto e = CategoryEngine::classical(X);
        HomotopicToIdentityOptions opt;
        opt.homotopy = inst.fence;
        const auto r = verify_homotopic_to_identity_bounds(inst.pair, e, inst.a, Bound{inst.b}, opt);
        const auto& I = part(r, "I");
        const auto& II = part(r, "II");
        const auto& semi = part(r, "semi");
        const auto& III = part(r, "III");
        EXPECT_GE(III.rhs.minuend, semi.rhs.minuend);
        EXPECT_GE(semi.rhs.minuend, II.rhs.minuend);
        EXPECT_TRUE(dominates(II.rhs.minuend, I.rhs));
        for (const auto* p : {&I, &II, &semi, &III}) EXPECT_NE(p->verdict, Verdict::Violation) << p->part;

        const PointSet fa = sublevel(inst.pair, inst.a), fb = sublevel(inst.pair, inst.b);
        EXPECT_EQ(oracle::value(I.lhs), slice_sum_oracle(inst.pair, inst.a, inst.b));
        EXPECT_EQ(oracle::value(I.rhs.minuend), oracle::gcat(X, fb));
        EXPECT_EQ(oracle::value(I.rhs.subtrahend), oracle::gcat(X, fa));
        EXPECT_EQ(oracle::value(II.rhs.minuend), oracle::gcat_rel(X, fb, fa, oracle::Rel::pair));
        EXPECT_EQ(oracle::value(semi.rhs.minuend), oracle::gcat_rel(X, fb, fa, oracle::Rel::semi));
        EXPECT_EQ(oracle::value(III.rhs.minuend), oracle::gcat_rel(X, fb, fa, oracle::Rel::mod));
        ++checked;
    }
    EXPECT_EQ(checked, 300);
}

TEST(Dynamics, InfiniteUpperBound) {
    const auto fx = fixtures::V_flow();
    const auto e = CategoryEngine::classical(fx.pair.space());
    const auto r = verify_homotopic_to_identity_bounds(fx.pair, e, fx.a, Bound::inf());
    EXPECT_EQ(r.part("semi"), nullptr);
    EXPECT_EQ(part(r, "I").rhs.minuend, ExtNat(1));
    EXPECT_THROW(verify_homotopy_equivalence_bounds(fx.pair, e, fx.a, Bound::inf()), Error);
}

TEST(Dynamics, ConstantMapOnCircleIsNotAHomotopyEquivalence) {
    const auto fx = fixtures::C4_constant();
    const auto e = CategoryEngine::classical(fx.pair.space());
    const auto r = verify_homotopy_equivalence_bounds(fx.pair, e, fx.a, fx.b);
    EXPECT_EQ(r.verdict(), Verdict::HypothesisFailed);
    const auto failed = violated(r.hypotheses);
    EXPECT_NE(std::find(failed.begin(), failed.end(), "homotopy_equivalence"), failed.end());
    EXPECT_EQ(part(r, "a").lhs, ExtNat(1));
    EXPECT_EQ(part(r, "a").rhs.minuend, ExtNat(2));
}

TEST(Dynamics, SemiflowRestPointsAreFixedPoints) {
    std::mt19937_64 rng(52);
    for (int trial = 0; trial < 100; ++trial) {
        const auto inst = random_instance(rng, 6);
        const auto& phi = inst.pair.map();
        PointSet R = 0;
        for (std::size_t x = 0; x < phi.source_size(); ++x) {
            std::size_t y = x;
            bool rest = true;
            for (std::size_t n = 0; n < phi.source_size() + 1 && rest; ++n) {
                y = phi(y);
                rest = y == x;
            }
            if (rest) R |= bit(x);
        }
        EXPECT_EQ(rest_points(phi), R);
        EXPECT_EQ(R, phi.fixed_points());
    }
}

TEST(Dynamics, SemiflowOnVFlow) {
    const auto fx = fixtures::V_flow();
    const auto e = CategoryEngine::classical(fx.pair.space());
    const auto r = verify_semiflow(fx.pair, e);
    EXPECT_EQ(part(r, "a").verdict, Verdict::InequalityHolds);
    EXPECT_EQ(part(r, "a").lhs, ExtNat(2));
    EXPECT_EQ(part(r, "b").verdict, Verdict::HypothesisFailed);
    EXPECT_EQ(r.verdict(), Verdict::HypothesisFailed);
}

TEST(Dynamics, SemiflowOnDiscreteSpaceUsesEveryPart) {
    const auto X = FiniteSpace::discrete(3);
    const DynamicalPair p(X, SpaceMap::identity(3), {0, 1, 2});
    const auto r = verify_semiflow(p, CategoryEngine::classical(X));
    EXPECT_EQ(r.verdict(), Verdict::InequalityHolds);
    EXPECT_EQ(part(r, "b").lhs, ExtNat(3));
    EXPECT_EQ(part(r, "a").rhs.minuend, ExtNat(3));
}

TEST(Dynamics, HomeomorphismWithReferenceClass) {
    const auto X = fixtures::C4();
    const DynamicalPair p(X, SpaceMap::identity(4), {0, 0, 1, 1});
    const CategoryEngine e(GroupAction::trivial(X), HomogeneousClass::point(GroupAction::trivial(X)), Limits{},
                           {fixtures::V()});
    const auto r = verify_homeomorphism_bounds(p, e, -1, 1);
    EXPECT_EQ(r.verdict(), Verdict::InequalityHolds);
    for (const auto& pr : r.parts) EXPECT_TRUE(dominates(pr.lhs, pr.rhs)) << pr.part;
}

TEST(Dynamics, NonDeformableSlicesOnCircle) {
    const auto X = fixtures::C4();
    const DynamicalPair p(X, SpaceMap::identity(4), {0, 0, 0, 0});
    const auto e = CategoryEngine::classical(X);
    const auto r = detect_non_deformable_slices(p, e, -1, 0);
    EXPECT_EQ(r.fixed_value_count, 1u);
    EXPECT_TRUE(r.applies);
    ASSERT_EQ(r.slices.size(), 1u);
    EXPECT_EQ(r.slices.front(), X.all());
}

TEST(Dynamics, ConditionDMatchesLyapunov) {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 100; ++trial) {
        const auto X = oracle::random_space(rng, 1 + trial % 6);
        const auto maps = enumerate_maps(X, X.all());
        const auto phi = maps[std::uniform_int_distribution<std::size_t>(0, maps.size() - 1)(rng)];
        std::vector<double> f(X.size());
        for (auto& v : f) v = std::uniform_int_distribution<int>(0, 4)(rng);
        const DynamicalPair p(X, phi, f);
        bool lyap = true;
        for (std::size_t x = 0; x < X.size(); ++x)
            if (phi(x) != x && !(f[phi(x)] < f[x])) lyap = false;
        const auto d = check_condition_D(p, X.all());
        EXPECT_EQ(d.holds, lyap);
        EXPECT_EQ(is_lyapunov(p).holds, lyap);
    }
}

TEST(Dynamics, SplitSublevelTakesModBoundOutOfForce) {
    const auto X = FiniteSpace::from_relation({"x0", "x1", "x2", "x3"}, {{"x0", "x1"}, {"x2", "x1"}, {"x3", "x1"}});
    const DynamicalPair p(X, SpaceMap::identity(4), {0, 2, 0, 3});
    const auto e = CategoryEngine::classical(X);
    const auto r = verify_homotopic_to_identity_bounds(p, e, 1.5, Bound{3.5});
    const auto& III = part(r, "III");
    EXPECT_TRUE(III.rhs.minuend.is_infinite());
    EXPECT_EQ(III.lhs, ExtNat(2));
    EXPECT_EQ(III.verdict, Verdict::HypothesisFailed);
    const auto failed = violated(III.hypotheses);
    EXPECT_NE(std::find(failed.begin(), failed.end(), "neighborhood_deformable_mod"), failed.end());
    EXPECT_NE(std::find(failed.begin(), failed.end(), "mod_index_axioms"), failed.end());
    EXPECT_EQ(part(r, "II").verdict, Verdict::InequalityHolds);
}
