#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"

using namespace lslab;

namespace {

struct Axioms {
    bool mono = true, cont = true, sub = true;
};

/// Axioms by direct quantification over all sets.
Axioms brute_axioms(const IndexFunction& nu) {
    const auto& X = nu.space();
    const PointSet all = X.all();
    Axioms r;
    for (PointSet Y = 0; Y <= all; ++Y)
        for (PointSet A = 0; A <= all; ++A)
            for (PointSet B = 0; B <= all; ++B) {
                if ((A & ~B) == 0 && nu(A, Y) > nu(B, Y)) r.mono = false;
                if (nu(A | B, Y) > nu(A, Y) + nu(B, 0)) r.sub = false;
            }
    const auto opens = oracle::opens(X);
    for (PointSet A = 0; A <= all; ++A) {
        if (X.closure(A) != A) continue;
        bool found = false;
        for (auto U : opens) {
            if (A & ~U) continue;
            bool agree = true;
            for (PointSet Y = 0; Y <= all && agree; ++Y) agree = nu(A, Y) == nu(U, Y);
            found = found || agree;
        }
        if (!found) r.cont = false;
    }
    return r;
}

bool only_trivial_cycles(const SpaceMap& phi) {
    for (std::size_t x = 0; x < phi.source_size(); ++x) {
        std::vector<bool> seen(phi.source_size(), false);
        std::size_t y = x;
        while (!seen[y]) {
            seen[y] = true;
            y = phi(y);
        }
        if (phi(y) != y) return false;
    }
    return true;
}

/// Random continuous map without nontrivial cycles and a strict Lyapunov
/// function for it (integer values, fixed points at random levels).
DynamicalPair random_pair(std::mt19937_64& rng, std::size_t n) {
    while (true) {
        const auto X = oracle::random_space(rng, n);
        const auto maps = enumerate_maps(X, X.all());
        const auto phi = maps[std::uniform_int_distribution<std::size_t>(0, maps.size() - 1)(rng)];
        if (!only_trivial_cycles(phi)) continue;
        std::vector<double> f(n, -1);
        std::uniform_int_distribution<int> level(0, 3);
        for (std::size_t x = 0; x < n; ++x)
            if (phi(x) == x) f[x] = level(rng);
        for (std::size_t pass = 0; pass < n; ++pass)
            for (std::size_t x = 0; x < n; ++x)
                if (f[x] < 0 && f[phi(x)] >= 0) f[x] = f[phi(x)] + 1 + level(rng) % 2;
        return DynamicalPair(X, phi, f);
    }
}

PointSet sublevel(const DynamicalPair& p, double c) {
    PointSet s = 0;
    for (std::size_t x = 0; x < p.space().size(); ++x)
        if (p.f(x) <= c) s |= bit(x);
    return s;
}

}  // namespace

TEST(IndexEngine, TruncatedValuesOnFixtures) {
    const auto C = fixtures::C4();
    const auto e = shared_classical(C);
    const auto nu1 = make_nu(1, 5, e);
    EXPECT_EQ(nu1(C.all()), 2);
    EXPECT_EQ(make_nu(1, 1, e)(C.all()), 1);
    const auto A = fixtures::ARC3();
    const auto ea = shared_classical(A);
    EXPECT_EQ(make_nu(3, 4, ea)(A.all(), A.parse_set({"l", "r"})), 1);
    EXPECT_EQ(make_nu(2, 4, ea)(A.all(), A.parse_set({"l", "r"})), 0);
    EXPECT_THROW(make_nu(4, 2, e), Error);
    EXPECT_THROW(make_nu(1, 0, e), Error);
}

TEST(IndexEngine, ValuesMatchOracle) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const auto X = oracle::random_space(rng, 1 + trial % 5);
        const auto e = shared_classical(X);
        const long long N = 1 + trial % 4;
        const auto n1 = make_nu(1, N, e), n2 = make_nu(2, N, e), n3 = make_nu(3, N, e);
        for (int k = 0; k < 6; ++k) {
            const PointSet A = static_cast<PointSet>(rng()) & X.all();
            const PointSet Y = static_cast<PointSet>(rng()) & X.all();
            EXPECT_EQ(n1(A, Y), std::min(N, oracle::gcat(X, A)));
            EXPECT_EQ(n2(A, Y), std::min(N, oracle::gcat_rel(X, A, Y, oracle::Rel::pair)));
            EXPECT_EQ(n3(A, Y), std::min(N, oracle::gcat_rel(X, A, Y, oracle::Rel::mod)));
        }
    }
}

TEST(IndexEngine, TruncationCoherence) {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 40; ++trial) {
        const auto X = oracle::random_space(rng, 1 + trial % 6);
        const auto e = shared_classical(X);
        for (int variant = 1; variant <= 3; ++variant) {
            const auto big = make_nu(variant, 9, e);
            for (long long N = 1; N <= 4; ++N) {
                const auto small = make_nu(variant, N, e);
                const PointSet A = static_cast<PointSet>(rng()) & X.all();
                const PointSet Y = static_cast<PointSet>(rng()) & X.all();
                EXPECT_EQ(small(A, Y), std::min(N, big(A, Y)));
            }
        }
    }
}

TEST(IndexEngine, AxiomCheckerMatchesBruteForce) {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 30; ++trial) {
        const auto X = oracle::random_space(rng, 1 + trial % 4);
        const auto e = shared_classical(X);
        for (int variant = 1; variant <= 3; ++variant) {
            const auto nu = make_nu(variant, 1 + trial % 3, e);
            const auto lib = check_axioms(nu);
            const auto ref = brute_axioms(nu);
            EXPECT_FALSE(lib.sampled);
            EXPECT_EQ(lib.monotonicity.holds, ref.mono) << variant;
            EXPECT_EQ(lib.continuity.holds, ref.cont) << variant;
            EXPECT_EQ(lib.subadditivity.holds, ref.sub) << variant;
        }
    }
}

TEST(IndexEngine, FirstTwoVariantsSatisfyAxiomsOnFixtures) {
    for (const auto& X : {fixtures::V(), fixtures::C4(), fixtures::ARC3()}) {
        const auto e = shared_classical(X);
        for (int variant = 1; variant <= 2; ++variant)
            for (long long N : {1, 2, 5}) EXPECT_TRUE(check_axioms(make_nu(variant, N, e)).holds()) << X.format(X.all());
    }
    const auto G = fixtures::C4_conjugation();
    const auto eg = std::make_shared<CategoryEngine>(G, HomogeneousClass::point(G));
    for (int variant = 1; variant <= 2; ++variant) EXPECT_TRUE(check_axioms(make_nu(variant, 5, eg)).holds());
}

TEST(IndexEngine, ModVariantFailsSubadditivityOnCircle) {
    const auto C = fixtures::C4();
    const auto nu = make_nu(3, 5, shared_classical(C));
    const PointSet pq = C.parse_set({"p", "q"});
    // Every open set containing p and q is C4, which cannot be deformed
    // onto {p, q} while keeping p and q in place.
    EXPECT_EQ(nu(pq, pq), 5);
    EXPECT_EQ(nu(0, pq), 0);
    EXPECT_EQ(nu(pq, 0), 2);
    const auto r = check_axioms(nu);
    EXPECT_TRUE(r.monotonicity.holds);
    EXPECT_FALSE(r.subadditivity.holds);
    ASSERT_EQ(r.subadditivity.witness.size(), 3u);
    const auto& w = r.subadditivity.witness;
    EXPECT_GT(nu(w[0] | w[1], w[2]), nu(w[0], w[2]) + nu(w[1], 0));
    EXPECT_TRUE(check_axioms(make_nu(3, 1, shared_classical(C))).holds());
    for (const auto& X : {fixtures::V(), fixtures::ARC3()})
        EXPECT_TRUE(check_axioms(make_nu(3, 5, shared_classical(X))).holds());
}

TEST(IndexEngine, CardinalityFailsContinuityOnV) {
    const auto V = fixtures::V();
    const IndexFunction card(V, [](PointSet A, PointSet) { return popcount(A); }, "card");
    const auto r = check_axioms(card);
    EXPECT_TRUE(r.monotonicity.holds);
    EXPECT_TRUE(r.subadditivity.holds);
    EXPECT_FALSE(r.continuity.holds);
    EXPECT_EQ(r.continuity.witness.front(), V.parse_set({"c"}));
}

TEST(IndexEngine, SupervarianceUnderMapsHomotopicToIdentity) {
    std::mt19937_64 rng(44);
    for (int trial = 0; trial < 60; ++trial) {
        const auto X = oracle::random_space(rng, 1 + trial % 6);
        const auto phi = random_map_near_identity(rng, X, 3);
        ASSERT_TRUE(homotopic(X, phi, SpaceMap::identity(X.size())));
        const auto nu = make_nu(1, 6, shared_classical(X));
        EXPECT_TRUE(check_supervariance(nu, phi, 0).holds);
    }
}

TEST(IndexEngine, ConstantMapIsNotSupervariant) {
    const auto fx = fixtures::C4_constant();
    const auto nu = make_nu(1, 5, shared_classical(fx.pair.space()));
    const auto v = check_supervariance(nu, fx.pair.map(), 0);
    EXPECT_FALSE(v.holds);
    ASSERT_TRUE(v.witness);
    EXPECT_LT(v.index_of_image, v.index_of_set);
}

TEST(IndexEngine, IterationCountIsMinimal) {
    std::mt19937_64 rng(45);
    int checked = 0;
    for (int trial = 0; checked < 200 && trial < 5000; ++trial) {
        const auto p = random_pair(rng, 1 + trial % 7);
        std::uniform_int_distribution<int> lv(-1, 6);
        double a = lv(rng) + 0.5, b = lv(rng) + 0.5;
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        const auto& X = p.space();
        PointSet top = 0;
        for (std::size_t x = 0; x < X.size(); ++x)
            if (p.map()(x) == x && p.f(x) == b) top |= bit(x);
        const PointSet U = X.up_closure(top);
        IterationResult r;
        try {
            r = iterate_into_sublevel(p, U, a, b);
        } catch (const Error& e) {
            ASSERT_EQ(e.kind(), Error::Kind::HypothesisUnmet);
            continue;
        }
        const PointSet S = sublevel(p, b) & ~U, T = sublevel(p, a);
        auto image_after = [&](int n) {
            PointSet s = S;
            for (int k = 0; k < n; ++k) {
                PointSet t = 0;
                for (std::size_t x = 0; x < X.size(); ++x)
                    if ((s >> x) & 1u) t |= bit(p.map()(x));
                s = t;
            }
            return s;
        };
        EXPECT_EQ(image_after(r.n) & ~T, 0u);
        if (r.n > 0) { EXPECT_NE(image_after(r.n - 1) & ~T, 0u); }
        EXPECT_LE(r.n, r.bound);
        ++checked;
    }
    EXPECT_EQ(checked, 200);
}

TEST(IndexEngine, SublevelMarginIsAdmissible) {
    std::mt19937_64 rng(46);
    int checked = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const auto p = random_pair(rng, 1 + trial % 7);
        const auto& X = p.space();
        const double a = std::uniform_int_distribution<int>(0, 4)(rng) + 0.5;
        const PointSet U = X.up_closure(sublevel(p, a)) | X.up_closure(p.map().apply(sublevel(p, a)));
        double d = 0;
        try {
            d = sublevel_margin(p, U, a, 1.0);
        } catch (const Error&) {
            continue;
        }
        EXPECT_GT(d, 0);
        EXPECT_EQ(p.map().apply(sublevel(p, a + d)) & ~U, 0u);
        ++checked;
    }
    EXPECT_GT(checked, 50);
}

TEST(IndexEngine, CriticalValuesOnPassingInstances) {
    std::mt19937_64 rng(47);
    int passing = 0;
    for (int trial = 0; trial < 150; ++trial) {
        auto inst = random_instance(rng, 6);
        const auto e = shared_classical(inst.pair.space());
        const auto nu = make_nu(1 + trial % 2, 6, e);
        const auto r = verify_index_inequality(nu, inst.pair, inst.a, inst.b);
        EXPECT_NE(r.verdict, Verdict::Violation);
        if (r.verdict != Verdict::InequalityHolds) continue;
        ++passing;
        const auto& t = r.table;
        EXPECT_TRUE(t.nondecreasing());
        EXPECT_TRUE(t.within_band());
        EXPECT_TRUE(t.claims_hold());
        EXPECT_TRUE(t.all_in_fixed_values());
        EXPECT_TRUE(t.multiplicities_hold());
        const PointSet fa = sublevel(inst.pair, inst.a);
        for (const auto& cv : t.values) {
            double best = inst.b;
            for (double c = std::floor(inst.a); c <= inst.b; c += 0.5)
                if (c >= inst.a && nu(sublevel(inst.pair, c), fa) >= cv.k) {
                    best = c;
                    break;
                }
            if (nu(sublevel(inst.pair, inst.a), fa) >= cv.k) best = inst.a;
            EXPECT_EQ(cv.c, best);
        }
    }
    EXPECT_GT(passing, 50);
}

TEST(IndexEngine, MainInequalityOnFixtures) {
    {
        const auto fx = fixtures::V_flow();
        const auto r = verify_index_inequality(make_nu(1, 5, shared_classical(fx.pair.space())), fx.pair, fx.a, fx.b.value);
        EXPECT_EQ(r.verdict, Verdict::InequalityHolds);
        EXPECT_GE(r.lhs, r.rhs);
    }
    {
        const auto fx = fixtures::C4_constant();
        const auto r = verify_index_inequality(make_nu(1, 5, shared_classical(fx.pair.space())), fx.pair, fx.a, fx.b.value);
        EXPECT_EQ(r.lhs, 1);
        EXPECT_EQ(r.rhs, 2);
        EXPECT_EQ(r.verdict, Verdict::HypothesisFailed);
        ASSERT_EQ(r.failed.size(), 1u);
        EXPECT_EQ(r.failed.front(), "supervariance");
    }
}

TEST(IndexEngine, RejectsEmptyBand) {
    const auto fx = fixtures::V_flow();
    const auto nu = make_nu(1, 5, shared_classical(fx.pair.space()));
    EXPECT_THROW(verify_index_inequality(nu, fx.pair, 1, 1), Error);
    EXPECT_THROW(critical_values(nu, fx.pair, 2, 1), Error);
}
