#pragma once

// Finite groups acting on finite spaces by order-automorphisms.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lslab/core.hpp"
#include "lslab/space.hpp"

namespace lslab {

/// Bitmask over group element indices (groups have at most 64 elements).
using ElementSet = std::uint64_t;

class GroupAction {
public:
    GroupAction() = default;

    static GroupAction trivial(const FiniteSpace& X) {
        GroupAction g;
        g.space_ = X;
        g.elements_.push_back(SpaceMap::identity(X.size()).image());
        g.build_tables();
        return g;
    }

    /// Closes the generators under composition. Each generator must be an
    /// order-automorphism; the first failing pair is reported.
    static GroupAction generate(const FiniteSpace& X, const std::vector<SpaceMap>& generators,
                                const Limits& limits = {}) {
        for (std::size_t k = 0; k < generators.size(); ++k) {
            const auto& g = generators[k];
            if (g.source_size() != X.size() || !g.is_bijective_endomap())
                throw Error(Error::Kind::NotAnAutomorphism,
                            "generator " + std::to_string(k) + " is not a bijection of the points");
            for (std::size_t x = 0; x < X.size(); ++x)
                for (std::size_t y = 0; y < X.size(); ++y)
                    if (X.leq(x, y) != X.leq(g(x), g(y)))
                        throw Error(Error::Kind::NotAnAutomorphism,
                                    "generator " + std::to_string(k) + " breaks the order at (" + X.label(x) +
                                        ", " + X.label(y) + "): " + X.label(x) + (X.leq(x, y) ? " <= " : " !<= ") +
                                        X.label(y) + " but images " + X.label(g(x)) +
                                        (X.leq(g(x), g(y)) ? " <= " : " !<= ") + X.label(g(y)));
        }
        GroupAction ga;
        ga.space_ = X;
        using Perm = std::vector<Point>;
        std::vector<Perm> elems{SpaceMap::identity(X.size()).image()};
        std::set<Perm> seen(elems.begin(), elems.end());
        for (std::size_t i = 0; i < elems.size(); ++i) {
            for (const auto& gen : generators) {
                Perm p(X.size());
                for (std::size_t x = 0; x < X.size(); ++x) p[x] = gen(elems[i][x]);
                if (seen.insert(p).second) {
                    elems.push_back(p);
                    if (elems.size() > limits.group_order || elems.size() > 64)
                        throw Error(Error::Kind::GroupTooLarge,
                                    "generated group exceeds " + std::to_string(limits.group_order) + " elements");
                }
            }
        }
        ga.elements_ = std::move(elems);
        ga.build_tables();
        return ga;
    }

    const FiniteSpace& space() const { return space_; }
    std::size_t order() const { return elements_.size(); }
    bool is_trivial() const { return order() == 1; }
    ElementSet all_elements() const { return full_set(order()); }

    std::size_t act(std::size_t g, std::size_t x) const { return elements_[g][x]; }
    SpaceMap element_map(std::size_t g) const { return SpaceMap(elements_[g]); }
    std::size_t compose(std::size_t g, std::size_t h) const { return mult_[g][h]; }  // g∘h
    std::size_t inverse(std::size_t g) const { return inv_[g]; }

    PointSet act_set(std::size_t g, PointSet s) const {
        PointSet out = 0;
        for_each_point(s, [&](std::size_t x) { out |= bit(elements_[g][x]); });
        return out;
    }

    PointSet orbit(std::size_t x) const { return orbit_[x]; }

    std::vector<PointSet> orbits(PointSet within) const {
        std::vector<PointSet> out;
        PointSet left = within;
        while (left) {
            const auto x = static_cast<std::size_t>(std::countr_zero(left));
            out.push_back(orbit_[x]);
            left &= ~orbit_[x];
        }
        return out;
    }

    std::vector<PointSet> orbits() const { return orbits(space_.all()); }

    /// GA: the union of orbits meeting s.
    PointSet saturate(PointSet s) const {
        PointSet out = 0;
        for_each_point(s, [&](std::size_t x) { out |= orbit_[x]; });
        return out;
    }

    bool is_invariant(PointSet s) const { return saturate(s) == s; }

    ElementSet stabilizer(std::size_t x) const { return stab_[x]; }

    ElementSet setwise_stabilizer(PointSet s) const {
        ElementSet out = 0;
        for (std::size_t g = 0; g < order(); ++g)
            if (act_set(g, s) == s) out |= bit(g);
        return out;
    }

    PointSet fixed_points() const {
        PointSet out = 0;
        for (std::size_t x = 0; x < space_.size(); ++x)
            if (orbit_[x] == bit(x)) out |= bit(x);
        return out;
    }

    ElementSet conjugate(ElementSet h, std::size_t g) const {
        ElementSet out = 0;
        for_each_point(h, [&](std::size_t e) { out |= bit(compose(compose(g, e), inverse(g))); });
        return out;
    }

    bool are_conjugate(ElementSet h1, ElementSet h2) const {
        for (std::size_t g = 0; g < order(); ++g)
            if (conjugate(h1, g) == h2) return true;
        return false;
    }

    ElementSet generated_subgroup(ElementSet gens) const {
        ElementSet h = bit(0) | gens;
        bool grown = true;
        while (grown) {
            grown = false;
            for_each_point(h, [&](std::size_t a) {
                for_each_point(h, [&](std::size_t b) {
                    const auto c = compose(a, b);
                    if (!contains(h, c)) {
                        h |= bit(c);
                        grown = true;
                    }
                });
            });
        }
        return h;
    }

    /// All subgroups, ascending by mask.
    std::vector<ElementSet> subgroups() const {
        std::set<ElementSet> found{bit(0)};
        std::vector<ElementSet> frontier{bit(0)};
        while (!frontier.empty()) {
            std::vector<ElementSet> next;
            for (auto h : frontier)
                for (std::size_t g = 0; g < order(); ++g) {
                    if (contains(h, g)) continue;
                    const auto k = generated_subgroup(h | bit(g));
                    if (found.insert(k).second) next.push_back(k);
                }
            frontier = std::move(next);
        }
        return {found.begin(), found.end()};
    }

    bool is_G_map(const SpaceMap& phi) const {
        const PointSet dom = phi.domain();
        for (std::size_t g = 0; g < order(); ++g)
            for (std::size_t x = 0; x < space_.size(); ++x) {
                if (!contains(dom, x)) continue;
                const auto gx = act(g, x);
                if (!contains(dom, gx)) return false;
                if (phi(gx) != act(g, phi(x))) return false;
            }
        return true;
    }

    /// True when f takes the same value along every orbit.
    template <typename Values>
    bool is_invariant_function(const Values& f) const {
        for (std::size_t g = 0; g < order(); ++g)
            for (std::size_t x = 0; x < space_.size(); ++x)
                if (f[act(g, x)] != f[x]) return false;
        return true;
    }

    /// The action restricted to an invariant subspace.
    GroupAction restricted(const FiniteSpace::Subspace& sub) const {
        std::vector<SpaceMap> gens;
        std::vector<std::size_t> local(space_.size(), kNoPoint);
        for (std::size_t k = 0; k < sub.embedding.size(); ++k) local[sub.embedding[k]] = k;
        for (std::size_t g = 0; g < order(); ++g) {
            std::vector<Point> p(sub.embedding.size());
            for (std::size_t k = 0; k < sub.embedding.size(); ++k) {
                const auto img = local.at(act(g, sub.embedding[k]));
                if (img == kNoPoint) throw Error(Error::Kind::InvalidArgument, "subspace is not invariant");
                p[k] = static_cast<Point>(img);
            }
            gens.emplace_back(std::move(p));
        }
        return generate(sub.space, gens, Limits{.group_order = 64});
    }

private:
    void build_tables() {
        const std::size_t n = space_.size();
        const std::size_t m = elements_.size();
        std::map<std::vector<Point>, std::size_t> index;
        for (std::size_t g = 0; g < m; ++g) index[elements_[g]] = g;
        mult_.assign(m, std::vector<std::size_t>(m));
        inv_.assign(m, 0);
        for (std::size_t g = 0; g < m; ++g)
            for (std::size_t h = 0; h < m; ++h) {
                std::vector<Point> p(n);
                for (std::size_t x = 0; x < n; ++x) p[x] = elements_[g][elements_[h][x]];
                mult_[g][h] = index.at(p);
                if (mult_[g][h] == 0) inv_[g] = h;
            }
        orbit_.assign(n, 0);
        stab_.assign(n, 0);
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t g = 0; g < m; ++g) {
                orbit_[x] |= bit(elements_[g][x]);
                if (elements_[g][x] == x) stab_[x] |= bit(g);
            }
    }

    FiniteSpace space_;
    std::vector<std::vector<Point>> elements_;
    std::vector<std::vector<std::size_t>> mult_;
    std::vector<std::size_t> inv_;
    std::vector<PointSet> orbit_;
    std::vector<ElementSet> stab_;
};

/// A class of homogeneous G-spaces G/H, stored as subgroup representatives.
class HomogeneousClass {
public:
    HomogeneousClass() = default;
    explicit HomogeneousClass(std::vector<ElementSet> subgroups) : subgroups_(std::move(subgroups)) {}

    /// {G/G}: the one-point orbit.
    static HomogeneousClass point(const GroupAction& G) { return HomogeneousClass({G.all_elements()}); }
    /// {G/e}: the free orbit.
    static HomogeneousClass free(const GroupAction&) { return HomogeneousClass({bit(0)}); }
    static HomogeneousClass all(const GroupAction& G) { return HomogeneousClass(G.subgroups()); }

    const std::vector<ElementSet>& subgroups() const { return subgroups_; }

    /// Whether G/H for H conjugate to `h` is in the class.
    bool contains_type(const GroupAction& G, ElementSet h) const {
        return std::any_of(subgroups_.begin(), subgroups_.end(),
                           [&](ElementSet k) { return G.are_conjugate(k, h); });
    }

    bool includes(const GroupAction& G, const HomogeneousClass& other) const {
        return std::all_of(other.subgroups_.begin(), other.subgroups_.end(),
                           [&](ElementSet h) { return contains_type(G, h); });
    }

private:
    std::vector<ElementSet> subgroups_;
};

/// Orbit space X/G: orbits ordered by O1 <= O2 iff some x in O1 is below
/// some y in O2. `projection` sends each point to its orbit index.
struct Quotient {
    FiniteSpace space;
    SpaceMap projection;
};

inline Quotient quotient(const GroupAction& G) {
    const auto& X = G.space();
    const auto orbs = G.orbits();
    std::vector<Point> proj(X.size());
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < orbs.size(); ++k) {
        std::string l;
        for_each_point(orbs[k], [&](std::size_t x) {
            proj[x] = static_cast<Point>(k);
            l += (l.empty() ? "" : "|") + X.label(x);
        });
        labels.push_back("[" + l + "]");
    }
    std::vector<std::pair<std::string, std::string>> pairs;
    for (std::size_t x = 0; x < X.size(); ++x)
        for (std::size_t y = 0; y < X.size(); ++y)
            if (X.less(x, y) && proj[x] != proj[y]) pairs.emplace_back(labels[proj[x]], labels[proj[y]]);
    return Quotient{FiniteSpace::from_relation(labels, pairs), SpaceMap(std::move(proj))};
}

}  // namespace lslab
