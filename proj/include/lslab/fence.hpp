#pragma once

// Homotopy of maps between finite spaces, modeled as fences: sequences of
// continuous maps whose consecutive members are pointwise comparable.
//
// If f <= g pointwise, f and g are joined by a chain of maps that differ on a
// single orbit at a time (change f to g on an orbit maximal among the points
// where they differ). Fence components are therefore the components of the
// single-orbit mutation graph, which the search below explores lazily.

#include <deque>
#include <functional>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lslab/core.hpp"
#include "lslab/group_action.hpp"
#include "lslab/space.hpp"

namespace lslab {

struct FenceCertificate {
    std::vector<SpaceMap> maps;  // g_0, ..., g_m

    std::size_t steps() const { return maps.empty() ? 0 : maps.size() - 1; }
    const SpaceMap& front() const { return maps.front(); }
    const SpaceMap& back() const { return maps.back(); }

    /// Consecutive maps comparable, every map continuous (and equivariant
    /// when an action is given), all on the same domain.
    bool validate(const FiniteSpace& X, const GroupAction* G = nullptr) const {
        if (maps.empty()) return false;
        const PointSet dom = maps.front().domain();
        for (std::size_t i = 0; i < maps.size(); ++i) {
            if (maps[i].domain() != dom || !maps[i].is_order_preserving(X, X)) return false;
            if (G && !G->is_G_map(maps[i])) return false;
            if (i > 0 && !maps[i - 1].comparable(maps[i], X)) return false;
        }
        return true;
    }

    FenceCertificate reversed() const { return FenceCertificate{{maps.rbegin(), maps.rend()}}; }

    /// Concatenation; other must start where this ends.
    FenceCertificate followed_by(const FenceCertificate& other) const {
        FenceCertificate out = *this;
        out.maps.insert(out.maps.end(), other.maps.begin() + 1, other.maps.end());
        return out;
    }
};

/// The space of continuous (equivariant) maps from an invariant subspace
/// `domain` of X into X, optionally restricted to maps sending `keep_from`
/// into `keep_into`.
struct MapSpaceSpec {
    const FiniteSpace* X = nullptr;
    const GroupAction* G = nullptr;  // null means trivial group
    PointSet domain = 0;
    PointSet keep_from = 0;
    PointSet keep_into = ~PointSet{0};
};

class MapSearch {
public:
    using Key = std::uint64_t;

    MapSearch(MapSpaceSpec spec, const Limits& limits = {}) : spec_(spec), limits_(limits) {
        const auto& X = *spec_.X;
        if (X.size() > 16 || static_cast<std::size_t>(popcount(spec_.domain)) > 16 ||
            X.size() > limits_.map_points)
            throw Error(Error::Kind::SizeCapExceeded, "fence search exceeds the map enumeration cap (" +
                                                          std::to_string(limits_.map_points) + " points)");
        dom_ = points_of(spec_.domain);
        pos_.assign(X.size(), kNoPoint);
        for (std::size_t k = 0; k < dom_.size(); ++k) pos_[dom_[k]] = static_cast<Point>(k);
        if (spec_.G) {
            for (auto o : spec_.G->orbits(spec_.domain)) reps_.push_back(static_cast<std::size_t>(std::countr_zero(o)));
        } else {
            reps_ = dom_;
        }
    }

    Key encode(const SpaceMap& m) const {
        Key k = 0;
        for (std::size_t i = 0; i < dom_.size(); ++i) k |= Key{m(dom_[i])} << (4 * i);
        return k;
    }

    SpaceMap decode(Key k) const {
        std::vector<Point> img(spec_.X->size(), kNoPoint);
        for (std::size_t i = 0; i < dom_.size(); ++i) img[dom_[i]] = static_cast<Point>((k >> (4 * i)) & 0xf);
        return SpaceMap(std::move(img));
    }

    std::size_t image_at(Key k, std::size_t x) const { return (k >> (4 * pos_[x])) & 0xf; }

    PointSet image_set(Key k) const {
        PointSet out = 0;
        for (std::size_t i = 0; i < dom_.size(); ++i) out |= bit((k >> (4 * i)) & 0xf);
        return out;
    }

    bool admissible(const SpaceMap& m) const {
        const auto& X = *spec_.X;
        if (m.source_size() != X.size() || m.domain() != spec_.domain) return false;
        if (!m.is_order_preserving(X, X)) return false;
        if (spec_.G && !spec_.G->is_G_map(m)) return false;
        return is_subset(m.apply(spec_.keep_from & spec_.domain), spec_.keep_into);
    }

    /// Neighbors in deterministic order: orbit representative ascending, then
    /// new value ascending.
    template <typename Visit>
    void for_each_neighbor(Key k, Visit&& visit) const {
        const auto& X = *spec_.X;
        for (auto x : reps_) {
            const std::size_t cur = image_at(k, x);
            const PointSet candidates = (X.up(cur) | X.down(cur)) & ~bit(cur);
            for_each_point(candidates, [&](std::size_t v) {
                if (contains(spec_.keep_from, x) && !contains(spec_.keep_into, v)) return;
                Key next = k;
                PointSet changed = 0;
                if (spec_.G) {
                    const auto& G = *spec_.G;
                    if (!is_subset(G.stabilizer(x), G.stabilizer(v))) return;
                    for (std::size_t g = 0; g < G.order(); ++g) {
                        const auto gx = G.act(g, x);
                        const auto gv = G.act(g, v);
                        next = (next & ~(Key{0xf} << (4 * pos_[gx]))) | (Key{gv} << (4 * pos_[gx]));
                        changed |= bit(gx);
                    }
                } else {
                    next = (next & ~(Key{0xf} << (4 * pos_[x]))) | (Key{v} << (4 * pos_[x]));
                    changed = bit(x);
                }
                if (!continuous_at(next, changed)) return;
                visit(next);
            });
        }
    }

    /// Breadth-first search from `start` for a map satisfying `goal`. The
    /// returned fence is a shortest one and deterministic.
    std::optional<FenceCertificate> find(const SpaceMap& start, const std::function<bool(Key)>& goal) const {
        if (!admissible(start)) throw Error(Error::Kind::InvalidArgument, "start map is not admissible");
        const Key s = encode(start);
        std::unordered_map<Key, Key> parent;
        parent.emplace(s, s);
        std::deque<Key> queue{s};
        while (!queue.empty()) {
            const Key k = queue.front();
            queue.pop_front();
            if (goal(k)) return path_to(parent, k);
            for_each_neighbor(k, [&](Key n) {
                if (parent.emplace(n, k).second) {
                    if (parent.size() > limits_.max_search_states)
                        throw Error(Error::Kind::SizeCapExceeded, "fence search state budget exhausted");
                    queue.push_back(n);
                }
            });
        }
        return std::nullopt;
    }

    /// Every map in the fence component of `start`.
    std::vector<Key> component(const SpaceMap& start) const {
        if (!admissible(start)) throw Error(Error::Kind::InvalidArgument, "start map is not admissible");
        const Key s = encode(start);
        std::unordered_set<Key> seen{s};
        std::vector<Key> order{s};
        for (std::size_t i = 0; i < order.size(); ++i) {
            for_each_neighbor(order[i], [&](Key n) {
                if (seen.insert(n).second) {
                    if (seen.size() > limits_.max_search_states)
                        throw Error(Error::Kind::SizeCapExceeded, "fence search state budget exhausted");
                    order.push_back(n);
                }
            });
        }
        return order;
    }

    const MapSpaceSpec& spec() const { return spec_; }

private:
    bool continuous_at(Key k, PointSet changed) const {
        const auto& X = *spec_.X;
        bool ok = true;
        for_each_point(changed, [&](std::size_t u) {
            if (!ok) return;
            const std::size_t fu = image_at(k, u);
            for_each_point(X.down(u) & spec_.domain, [&](std::size_t w) {
                if (!X.leq(image_at(k, w), fu)) ok = false;
            });
            for_each_point(X.up(u) & spec_.domain, [&](std::size_t w) {
                if (!X.leq(fu, image_at(k, w))) ok = false;
            });
        });
        return ok;
    }

    FenceCertificate path_to(const std::unordered_map<Key, Key>& parent, Key k) const {
        std::vector<SpaceMap> rev;
        while (true) {
            rev.push_back(decode(k));
            const Key p = parent.at(k);
            if (p == k) break;
            k = p;
        }
        return FenceCertificate{{rev.rbegin(), rev.rend()}};
    }

    MapSpaceSpec spec_;
    Limits limits_;
    std::vector<std::size_t> dom_;
    std::vector<Point> pos_;
    std::vector<std::size_t> reps_;
};

/// A fence from g1 to g2 (same domain), or nullopt when they lie in different
/// components.
inline std::optional<FenceCertificate> homotopic(const FiniteSpace& X, const SpaceMap& g1, const SpaceMap& g2,
                                                 const Limits& limits = {}) {
    if (g1.domain() != g2.domain()) throw Error(Error::Kind::InvalidArgument, "maps have different domains");
    MapSearch search({&X, nullptr, g1.domain()}, limits);
    const auto target = search.encode(g2);
    return search.find(g1, [&](MapSearch::Key k) { return k == target; });
}

inline std::optional<FenceCertificate> G_homotopic(const GroupAction& G, const SpaceMap& g1, const SpaceMap& g2,
                                                   const Limits& limits = {}) {
    if (g1.domain() != g2.domain()) throw Error(Error::Kind::InvalidArgument, "maps have different domains");
    if (!G.is_G_map(g1) || !G.is_G_map(g2)) throw Error(Error::Kind::InvalidArgument, "maps must be equivariant");
    MapSearch search({&G.space(), &G, g1.domain()}, limits);
    const auto target = search.encode(g2);
    return search.find(g1, [&](MapSearch::Key k) { return k == target; });
}

struct Contractibility {
    bool contractible = false;
    std::optional<FenceCertificate> certificate;
};

/// Whether the inclusion A -> X is fence-homotopic to a constant map.
inline Contractibility is_contractible_in(const FiniteSpace& X, PointSet A, const Limits& limits = {}) {
    if (!A) throw Error(Error::Kind::InvalidArgument, "subset must be nonempty");
    MapSearch search({&X, nullptr, A}, limits);
    auto fence = search.find(SpaceMap::inclusion(X.size(), A),
                             [&](MapSearch::Key k) { return popcount(search.image_set(k)) == 1; });
    return Contractibility{fence.has_value(), std::move(fence)};
}

/// W is G-deformable to Y: a G-fence from the inclusion of W ends in a map
/// with image in Y. With `mod`, every stage also sends W∩Y into Y.
inline std::optional<FenceCertificate> deformation_to(const GroupAction& G, PointSet W, PointSet Y, bool mod,
                                                      const Limits& limits = {}) {
    const auto& X = G.space();
    if (!W) return FenceCertificate{{SpaceMap::inclusion(X.size(), 0)}};
    MapSpaceSpec spec{&X, G.is_trivial() ? nullptr : &G, W};
    if (mod) {
        spec.keep_from = W & Y;
        spec.keep_into = Y;
    }
    MapSearch search(spec, limits);
    return search.find(SpaceMap::inclusion(X.size(), W),
                       [&](MapSearch::Key k) { return is_subset(search.image_set(k), Y); });
}

/// Orbits Gx and Gy are equivalent when f agrees on them, they have the same
/// orbit type, and each is G-deformable into the other.
template <typename Values>
inline bool orbit_equivalent(const GroupAction& G, std::size_t x, std::size_t y, const Values& f,
                             const Limits& limits = {}) {
    const PointSet ox = G.orbit(x), oy = G.orbit(y);
    if (ox == oy) return true;
    if (f[x] != f[y]) return false;
    if (!G.are_conjugate(G.stabilizer(x), G.stabilizer(y))) return false;
    return deformation_to(G, ox, oy, false, limits).has_value() && deformation_to(G, oy, ox, false, limits).has_value();
}

}  // namespace lslab
