#pragma once

// Small finite spaces used throughout the tests, the corpus and the CLI.

#include <string>
#include <vector>

#include "lslab/dynamical_pair.hpp"
#include "lslab/group_action.hpp"
#include "lslab/simplicial.hpp"
#include "lslab/space.hpp"

namespace lslab::fixtures {

/// c < a, c < b.
inline FiniteSpace V() { return FiniteSpace::from_relation({"c", "a", "b"}, {{"c", "a"}, {"c", "b"}}); }

/// Minimal finite model of the circle: p, q < U, L.
inline FiniteSpace C4() {
    return FiniteSpace::from_relation({"p", "q", "U", "L"}, {{"p", "U"}, {"p", "L"}, {"q", "U"}, {"q", "L"}});
}

/// l > m < r: an arc whose endpoints l, r are open points.
inline FiniteSpace ARC3() { return FiniteSpace::from_relation({"l", "m", "r"}, {{"m", "l"}, {"m", "r"}}); }

/// Two copies of C4 sharing the minimal point p.
inline FiniteSpace TWO_CIRCLES() {
    return FiniteSpace::from_relation({"p", "q1", "U1", "L1", "q2", "U2", "L2"},
                                      {{"p", "U1"}, {"p", "L1"}, {"q1", "U1"}, {"q1", "L1"},
                                       {"p", "U2"}, {"p", "L2"}, {"q2", "U2"}, {"q2", "L2"}});
}

/// The first circle of TWO_CIRCLES.
inline PointSet TWO_CIRCLES_S(const FiniteSpace& X) { return X.parse_set({"p", "q1", "U1", "L1"}); }

/// Z/2 acting on C4 by swapping U and L (conjugation on the circle).
inline GroupAction C4_conjugation() {
    const auto X = C4();
    return GroupAction::generate(X, {SpaceMap::from_labels(X, {{"U", "L"}, {"L", "U"}})});
}

/// Face poset of the 7-vertex torus (42 points).
inline FiniteSpace T2() { return face_poset(torus7()); }

/// A dynamical pair together with the band ]a, b] it is examined on.
struct BandFixture {
    DynamicalPair pair;
    double a;
    Bound b;
};

/// FIX-V with phi(b) = a and f = (c:0, a:1, b:2).
inline BandFixture V_flow() {
    const auto X = V();
    return {DynamicalPair(X, SpaceMap::from_labels(X, {{"b", "a"}}), {0, 1, 2}), -1, Bound{2}};
}

/// C4 collapsed onto p, f = (p:0, q:1, U:2, L:2).
inline BandFixture C4_constant() {
    const auto X = C4();
    return {DynamicalPair(X, SpaceMap::constant(4, X.all(), 0), {0, 1, 2, 2}), -1, Bound{2}};
}

/// TWO_CIRCLES, phi = id, f = 0 on the second circle and 1 on the rest of
/// the first: gcat_X(X, f^0) = 1 while gcat f^1 - gcat f^0 = 2 - 2.
inline BandFixture WEDGE() {
    const auto X = TWO_CIRCLES();
    return {DynamicalPair(X, SpaceMap::identity(X.size()), {0, 1, 1, 1, 0, 0, 0}), 0, Bound{1}};
}

/// ARC3, phi = id, f = (l:0, m:1, r:0): gcat_X(X mod f^0) = 1 while
/// gcat_X(X, f^0) = 0.
inline BandFixture HALFCIRC_SQ() {
    const auto X = ARC3();
    return {DynamicalPair(X, SpaceMap::identity(X.size()), {0, 1, 0}), 0, Bound{1}};
}

}  // namespace lslab::fixtures
