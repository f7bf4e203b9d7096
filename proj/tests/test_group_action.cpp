#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"

using namespace lslab;

namespace {

using Perm = std::vector<Point>;

std::set<Perm> closure_of(const std::vector<SpaceMap>& gens, std::size_t n) {
    std::set<Perm> out{SpaceMap::identity(n).image()};
    bool grew = true;
    while (grew) {
        grew = false;
        for (auto a : std::vector<Perm>(out.begin(), out.end()))
            for (const auto& g : gens) {
                Perm c(n);
                for (std::size_t x = 0; x < n; ++x) c[x] = g(a[x]);
                grew |= out.insert(c).second;
            }
    }
    return out;
}

std::vector<SpaceMap> automorphisms(const FiniteSpace& X) {
    std::vector<SpaceMap> out;
    for (const auto& m : enumerate_maps(X, X.all()))
        if (m.is_automorphism(X)) out.push_back(m);
    return out;
}

/// Point-class category with invariant opens, G-maps and G-fences, by
/// explicit enumeration.
long long point_class_gcat(const GroupAction& G) {
    const auto& X = G.space();
    const PointSet fixed = G.fixed_points();
    std::vector<PointSet> family;
    for (auto U : oracle::opens(X)) {
        if (!U || !G.is_invariant(U)) continue;
        const auto pts = oracle::members(U, X.size());
        auto equivariant = [&](const oracle::Img& g) {
            std::vector<int> full(X.size(), -1);
            for (std::size_t i = 0; i < pts.size(); ++i) full[pts[i]] = g[i];
            for (std::size_t e = 0; e < G.order(); ++e)
                for (auto x : pts)
                    if (full[G.act(e, x)] != static_cast<int>(G.act(e, full[x]))) return false;
            return true;
        };
        auto to_fixed_point = [&](const oracle::Img& g) {
            return std::all_of(g.begin(), g.end(), [&](int v) { return v == g[0]; }) && oracle::in_set(fixed, g[0]);
        };
        if (oracle::reaches(X, U, to_fixed_point, equivariant)) family.push_back(U);
    }
    return oracle::min_cover(X.all(), family);
}

}  // namespace

TEST(GroupAction, ConjugationOrbits) {
    const auto G = fixtures::C4_conjugation();
    const auto& X = G.space();
    EXPECT_EQ(G.order(), 2u);
    EXPECT_EQ(G.orbits().size(), 3u);
    EXPECT_EQ(G.orbit(X.require_index("U")), X.parse_set({"U", "L"}));
    EXPECT_EQ(G.fixed_points(), X.parse_set({"p", "q"}));
    EXPECT_TRUE(G.is_invariant(X.parse_set({"U", "L"})));
    EXPECT_FALSE(G.is_invariant(X.parse_set({"U"})));
    EXPECT_EQ(G.saturate(X.parse_set({"U", "p"})), X.parse_set({"U", "L", "p"}));
}

TEST(GroupAction, RejectsNonAutomorphism) {
    const auto X = fixtures::V();
    try {
        GroupAction::generate(X, {SpaceMap::from_labels(X, {{"c", "a"}, {"a", "c"}})});
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), Error::Kind::NotAnAutomorphism);
        EXPECT_NE(std::string(e.what()).find("breaks the order"), std::string::npos);
    }
}

TEST(GroupAction, GeneratedGroupMatchesClosure) {
    std::mt19937_64 rng(31);
    int nontrivial = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const auto X = oracle::random_space(rng, 2 + trial % 5, 0.3);
        const auto autos = automorphisms(X);
        std::vector<SpaceMap> gens;
        for (int k = 0; k < 2; ++k) gens.push_back(autos[std::uniform_int_distribution<std::size_t>(0, autos.size() - 1)(rng)]);
        const auto ref = closure_of(gens, X.size());
        if (ref.size() > Limits{}.group_order) {
            EXPECT_THROW(GroupAction::generate(X, gens), Error);
            continue;
        }
        const auto G = GroupAction::generate(X, gens);
        ASSERT_EQ(G.order(), ref.size());
        std::set<Perm> elems;
        for (std::size_t e = 0; e < G.order(); ++e) elems.insert(G.element_map(e).image());
        EXPECT_EQ(elems, ref);
        nontrivial += G.order() > 1;

        for (std::size_t g = 0; g < G.order(); ++g) {
            EXPECT_EQ(G.compose(g, G.inverse(g)), G.compose(G.inverse(g), g));
            for (std::size_t h = 0; h < G.order(); ++h)
                for (std::size_t x = 0; x < X.size(); ++x) EXPECT_EQ(G.act(G.compose(g, h), x), G.act(g, G.act(h, x)));
        }
        for (std::size_t x = 0; x < X.size(); ++x) {
            PointSet orb = 0;
            std::size_t stab = 0;
            for (const auto& p : ref) {
                orb |= bit(p[x]);
                stab += p[x] == x;
            }
            EXPECT_EQ(G.orbit(x), orb);
            EXPECT_EQ(static_cast<std::size_t>(popcount(G.stabilizer(x))), stab);
            EXPECT_EQ(stab * static_cast<std::size_t>(popcount(orb)), G.order());
        }
    }
    EXPECT_GT(nontrivial, 5);
}

TEST(GroupAction, SubgroupsAreClosed) {
    const auto X = FiniteSpace::discrete(4);
    const auto G = GroupAction::generate(X, {SpaceMap(Perm{1, 2, 3, 0}), SpaceMap(Perm{1, 0, 2, 3})});
    EXPECT_EQ(G.order(), 24u);
    const auto subs = G.subgroups();
    EXPECT_EQ(subs.size(), 30u);
    for (auto H : subs) {
        for_each_point(H, [&](std::size_t a) {
            EXPECT_TRUE(contains(H, G.inverse(a)));
            for_each_point(H, [&](std::size_t b) { EXPECT_TRUE(contains(H, G.compose(a, b))); });
        });
    }
}

TEST(GroupAction, GMapCheck) {
    const auto G = fixtures::C4_conjugation();
    const auto& X = G.space();
    EXPECT_TRUE(G.is_G_map(SpaceMap::identity(4)));
    EXPECT_TRUE(G.is_G_map(SpaceMap::constant(4, X.all(), X.require_index("p"))));
    EXPECT_FALSE(G.is_G_map(SpaceMap::constant(4, X.all(), X.require_index("U"))));
}

TEST(GroupAction, QuotientOfConjugation) {
    const auto G = fixtures::C4_conjugation();
    const auto q = quotient(G);
    EXPECT_EQ(q.space.size(), 3u);
    EXPECT_TRUE(q.projection.is_order_preserving(G.space(), q.space));
    EXPECT_TRUE(is_contractible_in(q.space, q.space.all()).contractible);
}

TEST(GroupAction, PointClassCategoryMatchesOracle) {
    const auto G = fixtures::C4_conjugation();
    const CategoryEngine e(G, HomogeneousClass::point(G));
    EXPECT_EQ(oracle::value(e.gcat(G.space().all())), point_class_gcat(G));
    EXPECT_EQ(e.gcat(G.space().all()), ExtNat(2));

    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 30; ++trial) {
        const auto X = oracle::random_space(rng, 2 + trial % 4, 0.3);
        const auto autos = automorphisms(X);
        const auto H = GroupAction::generate(X, {autos[std::uniform_int_distribution<std::size_t>(0, autos.size() - 1)(rng)]});
        const CategoryEngine eh(H, HomogeneousClass::point(H));
        EXPECT_EQ(oracle::value(eh.gcat(X.all())), point_class_gcat(H)) << trial;
    }
}

TEST(GroupAction, ClassInclusion) {
    const auto G = fixtures::C4_conjugation();
    const auto all = HomogeneousClass::all(G);
    EXPECT_TRUE(all.includes(G, HomogeneousClass::point(G)));
    EXPECT_TRUE(all.includes(G, HomogeneousClass::free(G)));
    const CategoryEngine big(G, all), small(G, HomogeneousClass::point(G));
    EXPECT_LE(big.gcat(G.space().all()), small.gcat(G.space().all()));
}
