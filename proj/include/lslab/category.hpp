#pragma once

// Equivariant Lusternik-Schnirelmann category of finite G-spaces: plain,
// relative (pair / mod / semi), closed and reference-class variants, with
// re-checkable cover certificates.

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "lslab/core.hpp"
#include "lslab/fence.hpp"
#include "lslab/group_action.hpp"
#include "lslab/simplicial.hpp"
#include "lslab/space.hpp"

namespace lslab {

enum class CatMode { plain, pair, mod, semi, closed, classB };

inline const char* to_string(CatMode m) {
    switch (m) {
    case CatMode::plain: return "plain";
    case CatMode::pair: return "pair";
    case CatMode::mod: return "mod";
    case CatMode::semi: return "semi";
    case CatMode::closed: return "closed";
    case CatMode::classB: return "classB";
    }
    return "?";
}

inline std::optional<CatMode> parse_cat_mode(const std::string& s) {
    for (auto m : {CatMode::plain, CatMode::pair, CatMode::mod, CatMode::semi, CatMode::closed, CatMode::classB})
        if (s == to_string(m)) return m;
    return std::nullopt;
}

struct CatQuery {
    PointSet A = 0;
    PointSet Y = 0;
    CatMode mode = CatMode::plain;
};

struct CoverPiece {
    enum class Role { deformation, categorical, reference };
    Role role = Role::categorical;
    PointSet set = 0;
    std::optional<FenceCertificate> fence;  // from the inclusion of `set`
    std::size_t reference = 0;              // index into the reference class (classB)
};

inline const char* to_string(CoverPiece::Role r) {
    switch (r) {
    case CoverPiece::Role::deformation: return "deformation";
    case CoverPiece::Role::categorical: return "categorical";
    case CoverPiece::Role::reference: return "reference";
    }
    return "?";
}

struct CatResult {
    ExtNat value;
    std::vector<CoverPiece> cover;
};

/// Whether the subspace s of X is order-isomorphic to B.
inline bool order_isomorphic(const FiniteSpace& X, PointSet s, const FiniteSpace& B) {
    const auto pts = points_of(s);
    if (pts.size() != B.size()) return false;
    const std::size_t n = pts.size();
    std::vector<std::size_t> image(n);
    std::vector<char> used(n, 0);
    auto degree = [&](std::size_t i) { return std::make_pair(popcount(X.up(pts[i]) & s), popcount(X.down(pts[i]) & s)); };
    auto bdegree = [&](std::size_t j) { return std::make_pair(popcount(B.up(j)), popcount(B.down(j))); };
    auto rec = [&](auto&& self, std::size_t k) -> bool {
        if (k == n) return true;
        for (std::size_t j = 0; j < n; ++j) {
            if (used[j] || degree(k) != bdegree(j)) continue;
            bool ok = true;
            for (std::size_t i = 0; i < k && ok; ++i)
                ok = X.leq(pts[i], pts[k]) == B.leq(image[i], j) && X.leq(pts[k], pts[i]) == B.leq(j, image[i]);
            if (!ok) continue;
            used[j] = 1;
            image[k] = j;
            if (self(self, k + 1)) return true;
            used[j] = 0;
        }
        return false;
    };
    return rec(rec, 0);
}

/// Exact minimum covers by members of a family of sets: for every target T,
/// the least number of members whose union contains T, with a witness.
class CoverTable {
public:
    static constexpr std::uint8_t kNone = 0xff;

    CoverTable() = default;

    CoverTable(std::size_t n, const std::vector<PointSet>& members) : n_(n) {
        // Breadth-first over reachable unions: the level of a union is the
        // fewest members producing it exactly.
        parent_.emplace(0, std::make_pair(PointSet{0}, PointSet{0}));
        std::vector<PointSet> frontier{0};
        const std::size_t size = std::size_t{1} << n;
        level_.assign(size, kNone);
        witness_.assign(size, 0);
        level_[0] = 0;
        std::uint8_t lvl = 0;
        while (!frontier.empty()) {
            std::vector<PointSet> next;
            ++lvl;
            for (auto u : frontier)
                for (auto m : members) {
                    const auto v = u | m;
                    if (parent_.emplace(v, std::make_pair(u, m)).second) {
                        level_[v] = lvl;
                        next.push_back(v);
                    }
                }
            frontier = std::move(next);
        }
        for (std::size_t t = 0; t < size; ++t) witness_[t] = static_cast<PointSet>(t);
        // Superset-minimum transform.
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t t = 0; t < size; ++t) {
                if (t >> i & 1u) continue;
                const auto u = t | (std::size_t{1} << i);
                if (level_[u] < level_[t]) {
                    level_[t] = level_[u];
                    witness_[t] = witness_[u];
                }
            }
    }

    ExtNat cost(PointSet target) const {
        const auto l = level_.at(target);
        return l == kNone ? ExtNat::infinite() : ExtNat(l);
    }

    /// Members of a minimum cover of target (empty when none exists).
    std::vector<PointSet> cover(PointSet target) const {
        std::vector<PointSet> out;
        if (level_.at(target) == kNone) return out;
        for (PointSet u = witness_[target]; u != 0; u = parent_.at(u).first) out.push_back(parent_.at(u).second);
        std::reverse(out.begin(), out.end());
        return out;
    }

private:
    std::size_t n_ = 0;
    std::vector<std::uint8_t> level_;
    std::vector<PointSet> witness_;
    std::unordered_map<PointSet, std::pair<PointSet, PointSet>> parent_;
};

/// Category computations for one G-space and one class of orbit types.
/// Catalogs and deformation results are cached; all methods are safe to call
/// concurrently.
class CategoryEngine {
public:
    CategoryEngine(GroupAction G, HomogeneousClass cls, Limits limits = {},
                   std::vector<FiniteSpace> references = {})
        : G_(std::move(G)), class_(std::move(cls)), limits_(limits), references_(std::move(references)) {
        G_.space().check_subset_cap(limits_);
        for (auto h : G_.subgroups())
            if (class_.contains_type(G_, h)) admissible_subgroups_.push_back(h);
        for (auto s : G_.space().open_sets(limits_))
            if (G_.is_invariant(s)) invariant_opens_.push_back(s);
        for (auto s : G_.space().closed_sets(limits_))
            if (G_.is_invariant(s)) invariant_closed_.push_back(s);
        auto by_size = [](PointSet a, PointSet b) {
            return popcount(a) != popcount(b) ? popcount(a) < popcount(b) : a < b;
        };
        std::sort(invariant_opens_.begin(), invariant_opens_.end(), by_size);
        std::sort(invariant_closed_.begin(), invariant_closed_.end(), by_size);
    }

    /// Trivial action with the one-point class: classical category.
    static CategoryEngine classical(const FiniteSpace& X, const Limits& limits = {},
                                    std::vector<FiniteSpace> references = {}) {
        auto G = GroupAction::trivial(X);
        auto cls = HomogeneousClass::point(G);
        return CategoryEngine(std::move(G), std::move(cls), limits, std::move(references));
    }

    const FiniteSpace& space() const { return G_.space(); }
    const GroupAction& action() const { return G_; }
    const HomogeneousClass& orbit_class() const { return class_; }
    const Limits& limits() const { return limits_; }
    const std::vector<FiniteSpace>& references() const { return references_; }
    const std::vector<PointSet>& invariant_opens() const { return invariant_opens_; }
    const std::vector<PointSet>& invariant_closed() const { return invariant_closed_; }

    /// Whether an equivariant map h: W -> X factors as beta∘alpha through
    /// some G/H in the class.
    bool is_factorized(PointSet W, const SpaceMap& h) const {
        const auto f = factorization_probe(W);
        std::vector<Point> img(space().size(), kNoPoint);
        for_each_point(W, [&](std::size_t x) { img[x] = h(x); });
        return f(img);
    }

    /// Fence from the inclusion of the invariant set W to a factorized map.
    std::optional<FenceCertificate> categorical_certificate(PointSet W) const {
        if (!G_.is_invariant(W)) throw Error(Error::Kind::InvalidArgument, "set is not invariant");
        if (!W) return FenceCertificate{{SpaceMap::inclusion(space().size(), 0)}};
        MapSearch search({&space(), G_.is_trivial() ? nullptr : &G_, W}, limits_);
        const auto probe = factorization_probe(W);
        std::vector<Point> img(space().size(), kNoPoint);
        const auto pts = points_of(W);
        return search.find(SpaceMap::inclusion(space().size(), W), [&](MapSearch::Key k) {
            for (auto x : pts) img[x] = static_cast<Point>(search.image_at(k, x));
            return probe(img);
        });
    }

    bool is_categorical(PointSet W) const {
        {
            std::lock_guard lock(mutex_);
            auto it = categorical_.find(W);
            if (it != categorical_.end()) return it->second;
        }
        const bool v = categorical_certificate(W).has_value();
        std::lock_guard lock(mutex_);
        categorical_.emplace(W, v);
        return v;
    }

    /// Fence from the inclusion of W ending in Y (every stage keeping W∩Y in Y
    /// when `mod`).
    std::optional<FenceCertificate> deformation_certificate(PointSet W, PointSet Y, bool mod) const {
        if (W && !Y) return std::nullopt;
        return deformation_to(G_, W, Y, mod, limits_);
    }

    bool is_deformable(PointSet W, PointSet Y, bool mod) const {
        if (!W) return true;
        if (!Y) return false;
        if (is_subset(W, Y)) return true;
        const auto key = std::make_tuple(W, Y, mod);
        {
            std::lock_guard lock(mutex_);
            auto it = deformable_.find(key);
            if (it != deformable_.end()) return it->second;
        }
        const bool v = deformation_certificate(W, Y, mod).has_value();
        std::lock_guard lock(mutex_);
        deformable_.emplace(key, v);
        return v;
    }

    /// Maximal categorical invariant opens (or closed sets).
    const std::vector<PointSet>& categorical_catalog(bool closed = false) const {
        std::lock_guard lock(mutex_);
        auto& slot = closed ? closed_catalog_ : open_catalog_;
        if (!slot) slot = build_catalog(closed ? invariant_closed_ : invariant_opens_);
        return *slot;
    }

    ExtNat gcat(PointSet A) const { return table(CatMode::plain).cost(G_.saturate(A)); }

    ExtNat gcat_closed(PointSet A) const { return table(CatMode::closed).cost(G_.saturate(A)); }

    ExtNat gcat_classB(PointSet A) const { return table(CatMode::classB).cost(G_.saturate(A)); }

    ExtNat gcat_pair(PointSet A, PointSet Y) const { return relative(A, Y, CatMode::pair).value; }
    ExtNat gcat_mod(PointSet A, PointSet Y) const { return relative(A, Y, CatMode::mod).value; }
    ExtNat gcat_semi(PointSet A, PointSet Y) const { return relative(A, Y, CatMode::semi).value; }

    ExtNat value(const CatQuery& q) const {
        switch (q.mode) {
        case CatMode::plain: return gcat(q.A);
        case CatMode::closed: return gcat_closed(q.A);
        case CatMode::classB: return gcat_classB(q.A);
        default: return relative(q.A, q.Y, q.mode).value;
        }
    }

    /// Value with a full certificate.
    CatResult compute(const CatQuery& q) const {
        if (q.A & ~space().all() || q.Y & ~space().all())
            throw Error(Error::Kind::InvalidArgument, "query sets exceed the space");
        CatResult out;
        switch (q.mode) {
        case CatMode::plain:
        case CatMode::closed:
        case CatMode::classB: {
            const auto& t = table(q.mode);
            const PointSet target = G_.saturate(q.A);
            out.value = t.cost(target);
            for (auto s : t.cover(target)) out.cover.push_back(piece_for(s, q.mode));
            return out;
        }
        default: {
            const auto rel = relative(q.A, q.Y, q.mode);
            out.value = rel.value;
            if (out.value.is_infinite()) return out;
            const bool mod = q.mode == CatMode::mod;
            out.cover.push_back(CoverPiece{CoverPiece::Role::deformation, rel.a0,
                                           deformation_certificate(rel.a0, G_.saturate(q.Y), mod), 0});
            for (auto s : table(CatMode::plain).cover(G_.saturate(q.A) & ~rel.a0))
                out.cover.push_back(piece_for(s, CatMode::plain));
            return out;
        }
        }
    }

    /// Re-checks a certificate from scratch. Returns an empty string when
    /// valid, else the first problem found.
    std::string validate(const CatQuery& q, const CatResult& r) const {
        const auto& X = space();
        const PointSet A = G_.saturate(q.A);
        const PointSet Y = G_.saturate(q.Y);
        if (r.value.is_infinite()) return r.cover.empty() ? "" : "infinite value with a cover";
        PointSet covered = 0;
        long long counted = 0;
        for (const auto& p : r.cover) {
            if (!G_.is_invariant(p.set)) return "piece " + X.format(p.set) + " is not invariant";
            const bool closed = q.mode == CatMode::closed;
            if (closed ? !X.is_closed(p.set) : !X.is_open(p.set))
                return "piece " + X.format(p.set) + (closed ? " is not closed" : " is not open");
            covered |= p.set;
            if (p.role == CoverPiece::Role::reference) {
                if (p.reference >= references_.size() || !order_isomorphic(X, p.set, references_[p.reference]))
                    return "piece " + X.format(p.set) + " does not match its reference space";
                ++counted;
                continue;
            }
            if (!p.fence || !p.fence->validate(X, G_.is_trivial() ? nullptr : &G_))
                return "piece " + X.format(p.set) + " has no valid fence";
            if (!(p.fence->front() == SpaceMap::inclusion(X.size(), p.set)))
                return "fence for " + X.format(p.set) + " does not start at the inclusion";
            if (p.role == CoverPiece::Role::categorical) {
                if (!is_factorized(p.set, p.fence->back())) return "fence for " + X.format(p.set) + " does not end factorized";
                ++counted;
            } else {
                if (!is_subset(p.fence->back().image_set(), Y)) return "deformation of " + X.format(p.set) + " does not end in Y";
                if (q.mode == CatMode::mod)
                    for (const auto& m : p.fence->maps)
                        if (!is_subset(m.apply(p.set & Y), Y)) return "mod deformation leaves Y";
                if ((q.mode == CatMode::mod || q.mode == CatMode::semi) && !is_subset(A & Y, p.set))
                    return "deformation piece does not contain A∩Y";
            }
        }
        if (!is_subset(A, covered)) return "pieces do not cover A";
        if (ExtNat(counted) != r.value) return "piece count " + std::to_string(counted) + " differs from value " + r.value.str();
        return "";
    }

private:
    struct Relative {
        ExtNat value = ExtNat::infinite();
        PointSet a0 = 0;
    };

    Relative relative(PointSet A, PointSet Y, CatMode mode) const {
        A = G_.saturate(A);
        Y = G_.saturate(Y);
        const bool mod = mode == CatMode::mod;
        const PointSet must = (mode == CatMode::mod || mode == CatMode::semi) ? (A & Y) : 0;
        const auto& t = table(CatMode::plain);
        Relative best;
        for (auto a0 : maximal_deformable(Y, mod)) {
            if (!is_subset(must, a0)) continue;
            const auto c = t.cost(A & ~a0);
            if (c < best.value || (c == best.value && best.value.is_finite() && a0 < best.a0)) {
                best.value = c;
                best.a0 = a0;
            }
        }
        return best;
    }

    /// Maximal invariant opens deformable to Y, in decreasing size.
    std::vector<PointSet> maximal_deformable(PointSet Y, bool mod) const {
        {
            std::lock_guard lock(mutex_);
            auto it = maximal_deformable_.find({Y, mod});
            if (it != maximal_deformable_.end()) return it->second;
        }
        std::vector<PointSet> out;
        for (auto it = invariant_opens_.rbegin(); it != invariant_opens_.rend(); ++it) {
            const auto W = *it;
            if (std::any_of(out.begin(), out.end(), [&](PointSet m) { return is_subset(W, m); })) continue;
            if (is_deformable(W, Y, mod)) out.push_back(W);
        }
        std::lock_guard lock(mutex_);
        maximal_deformable_.emplace(std::make_pair(Y, mod), out);
        return out;
    }

    std::vector<PointSet> build_catalog(const std::vector<PointSet>& candidates) const {
        // Ascending size: a superset of a non-categorical set is never
        // categorical.
        std::vector<PointSet> yes, no;
        for (auto W : candidates) {
            if (!W) continue;
            if (std::any_of(no.begin(), no.end(), [&](PointSet m) { return is_subset(m, W); })) continue;
            bool v;
            auto it = categorical_.find(W);
            if (it != categorical_.end()) {
                v = it->second;
            } else {
                v = categorical_certificate(W).has_value();
                categorical_.emplace(W, v);
            }
            (v ? yes : no).push_back(W);
        }
        std::vector<PointSet> maximal;
        for (auto it = yes.rbegin(); it != yes.rend(); ++it)
            if (std::none_of(maximal.begin(), maximal.end(), [&](PointSet m) { return is_subset(*it, m); }))
                maximal.push_back(*it);
        std::sort(maximal.begin(), maximal.end());
        return maximal;
    }

    const CoverTable& table(CatMode mode) const {
        std::unique_lock lock(mutex_);
        auto& slot = mode == CatMode::closed ? closed_table_ : mode == CatMode::classB ? classB_table_ : open_table_;
        if (slot) return *slot;
        lock.unlock();
        std::vector<PointSet> members;
        if (mode == CatMode::classB) {
            for (auto W : invariant_opens_)
                if (W && reference_of(W)) members.push_back(W);
        } else {
            members = categorical_catalog(mode == CatMode::closed);
        }
        CoverTable t(space().size(), members);
        lock.lock();
        if (!slot) slot = std::move(t);
        return *slot;
    }

    std::optional<std::size_t> reference_of(PointSet W) const {
        for (std::size_t i = 0; i < references_.size(); ++i)
            if (order_isomorphic(space(), W, references_[i])) return i;
        return std::nullopt;
    }

    CoverPiece piece_for(PointSet s, CatMode mode) const {
        if (mode == CatMode::classB) return CoverPiece{CoverPiece::Role::reference, s, std::nullopt, *reference_of(s)};
        return CoverPiece{CoverPiece::Role::categorical, s, categorical_certificate(s), 0};
    }

    /// Predicate on image vectors (indexed by point, kNoPoint off W).
    std::function<bool(const std::vector<Point>&)> factorization_probe(PointSet W) const {
        const auto& X = space();
        auto comps = X.components(W);
        if (G_.is_trivial()) {
            const bool point_allowed = !admissible_subgroups_.empty();
            return [W, point_allowed](const std::vector<Point>& img) {
                if (!point_allowed) return false;
                Point v = kNoPoint;
                bool ok = true;
                for_each_point(W, [&](std::size_t x) {
                    if (v == kNoPoint) v = img[x];
                    else if (img[x] != v) ok = false;
                });
                return ok;
            };
        }
        // Component orbit representatives and their setwise stabilizers.
        std::vector<PointSet> reps;
        std::vector<ElementSet> stabs;
        PointSet seen = 0;
        for (auto c : comps) {
            if (c & seen) continue;
            for (std::size_t g = 0; g < G_.order(); ++g) seen |= G_.act_set(g, c);
            reps.push_back(c);
            stabs.push_back(G_.setwise_stabilizer(c));
        }
        std::vector<std::pair<ElementSet, std::size_t>> bases;  // (H, x0) with H ⊆ Stab(x0)
        for (auto h : admissible_subgroups_)
            for (std::size_t x0 = 0; x0 < X.size(); ++x0)
                if (is_subset(h, G_.stabilizer(x0))) bases.emplace_back(h, x0);
        const GroupAction* G = &G_;
        return [comps, reps, stabs, bases, G](const std::vector<Point>& img) {
            for (auto c : comps) {
                const auto v = img[static_cast<std::size_t>(std::countr_zero(c))];
                bool same = true;
                for_each_point(c, [&](std::size_t x) { same = same && img[x] == v; });
                if (!same) return false;
            }
            for (const auto& [h, x0] : bases) {
                bool ok = true;
                for (std::size_t j = 0; j < reps.size() && ok; ++j) {
                    const auto v = img[static_cast<std::size_t>(std::countr_zero(reps[j]))];
                    bool found = false;
                    for (std::size_t g = 0; g < G->order() && !found; ++g)
                        found = G->act(g, x0) == v && is_subset(stabs[j], G->conjugate(h, g));
                    ok = found;
                }
                if (ok) return true;
            }
            return false;
        };
    }

    GroupAction G_;
    HomogeneousClass class_;
    Limits limits_;
    std::vector<FiniteSpace> references_;
    std::vector<ElementSet> admissible_subgroups_;
    std::vector<PointSet> invariant_opens_;
    std::vector<PointSet> invariant_closed_;

    mutable std::recursive_mutex mutex_;
    mutable std::unordered_map<PointSet, bool> categorical_;
    mutable std::map<std::tuple<PointSet, PointSet, bool>, bool> deformable_;
    mutable std::map<std::pair<PointSet, bool>, std::vector<PointSet>> maximal_deformable_;
    mutable std::optional<std::vector<PointSet>> open_catalog_, closed_catalog_;
    mutable std::optional<CoverTable> open_table_, closed_table_, classB_table_;
};

// ---------------------------------------------------------------------------
// Structural checks

/// A G-map psi with psi∘phi and phi∘psi G-fence-homotopic to the identity.
inline std::optional<SpaceMap> homotopy_inverse(const GroupAction& G, const SpaceMap& phi, const Limits& limits = {}) {
    const auto& X = G.space();
    if (phi.domain() != X.all() || !phi.is_order_preserving(X, X) || !G.is_G_map(phi)) return std::nullopt;
    if (!is_homotopy_equivalence(X, phi)) return std::nullopt;
    auto works = [&](const SpaceMap& psi) {
        const auto id = SpaceMap::identity(X.size());
        return G_homotopic(G, phi.then(psi), id, limits) && G_homotopic(G, psi.then(phi), id, limits);
    };
    const auto c = core(X);
    const auto induced = c.inclusion.then(phi).then(c.retraction);
    std::vector<Point> inv(induced.source_size());
    for (std::size_t i = 0; i < inv.size(); ++i) inv[induced(i)] = static_cast<Point>(i);
    const SpaceMap candidate = c.retraction.then(SpaceMap(inv)).then(c.inclusion);
    if (G.is_G_map(candidate) && works(candidate)) return candidate;
    for (const auto& psi : enumerate_maps(X, X.all(), limits))
        if (G.is_G_map(psi) && works(psi)) return psi;
    return std::nullopt;
}

struct PreimageReport {
    PointSet preimage = 0;
    bool preimage_open = false;
    bool preimage_categorical = false;
    SpaceMap inverse;                     // psi
    SpaceMap composite;                   // psi∘h∘phi on the preimage, h the factorized end map for U
    std::optional<FenceCertificate> fence;  // inclusion of the preimage to the composite
};

/// The preimage of an open categorical set under a G-homotopy equivalence
/// is open and categorical, witnessed by the composite psi∘(beta∘alpha)∘phi.
inline PreimageReport check_categorical_preimages(const CategoryEngine& engine, const SpaceMap& phi, PointSet U) {
    const auto& X = engine.space();
    const auto& G = engine.action();
    if (!X.is_open(U) || !G.is_invariant(U))
        throw Error(Error::Kind::HypothesisUnmet, "U must be an open invariant set");
    auto cert = engine.categorical_certificate(U);
    if (!cert) throw Error(Error::Kind::HypothesisUnmet, "U = " + X.format(U) + " is not categorical");
    auto psi = homotopy_inverse(G, phi, engine.limits());
    if (!psi) throw Error(Error::Kind::HypothesisUnmet, "map is not a G-homotopy equivalence");
    PreimageReport r;
    r.inverse = *psi;
    r.preimage = phi.preimage(U);
    r.preimage_open = X.is_open(r.preimage);
    const SpaceMap h = cert->back();
    std::vector<Point> img(X.size(), kNoPoint);
    for_each_point(r.preimage, [&](std::size_t x) { img[x] = (*psi)(h(phi(x))); });
    r.composite = SpaceMap(std::move(img));
    if (r.preimage) {
        MapSearch search({&X, G.is_trivial() ? nullptr : &G, r.preimage}, engine.limits());
        const auto target = search.encode(r.composite);
        r.fence = search.find(SpaceMap::inclusion(X.size(), r.preimage), [&](MapSearch::Key k) { return k == target; });
    } else {
        r.fence = FenceCertificate{{SpaceMap::inclusion(X.size(), 0)}};
    }
    r.preimage_categorical = r.fence.has_value() && engine.is_factorized(r.preimage, r.composite);
    return r;
}

/// Shared classical engine, for index functions that keep it alive.
inline std::shared_ptr<CategoryEngine> shared_classical(const FiniteSpace& X, const Limits& limits = {}) {
    auto G = GroupAction::trivial(X);
    auto cls = HomogeneousClass::point(G);
    return std::make_shared<CategoryEngine>(std::move(G), std::move(cls), limits);
}

/// The engine of an invariant subset A viewed as a G-space of its own, with
/// the class re-expressed on the restricted group.
inline std::unique_ptr<CategoryEngine> subspace_engine(const CategoryEngine& engine, PointSet A) {
    const auto& X = engine.space();
    if (!A) throw Error(Error::Kind::InvalidArgument, "subspace must be nonempty");
    if (!engine.action().is_invariant(A)) throw Error(Error::Kind::InvalidArgument, "subspace must be invariant");
    auto sub = X.subspace(A);
    const auto Gs = engine.action().restricted(sub);
    std::vector<ElementSet> mapped;
    for (auto h : engine.orbit_class().subgroups()) {
        ElementSet m = 0;
        for_each_point(h, [&](std::size_t g) {
            for (std::size_t k = 0; k < Gs.order(); ++k) {
                bool same = true;
                for (std::size_t i = 0; i < sub.embedding.size() && same; ++i)
                    same = sub.embedding[Gs.act(k, i)] == engine.action().act(g, sub.embedding[i]);
                if (same) m |= bit(k);
            }
        });
        mapped.push_back(Gs.generated_subgroup(m));
    }
    return std::make_unique<CategoryEngine>(Gs, HomogeneousClass(mapped), engine.limits());
}

struct ClosedChainReport {
    ExtNat intrinsic;         // gcat A
    ExtNat intrinsic_closed;  // closed category of A as a space
    ExtNat closed_in_X;       // closed category of A in X
    ExtNat open_in_X;         // gcat_X A
    bool first = false;       // gcat A >= closed gcat A
    bool second = false;      // closed gcat A >= closed gcat_X A
    bool equality = false;    // closed gcat_X A == gcat_X A
    bool asserted = false;    // hypotheses hold (discrete space), so the chain must hold
    bool holds() const { return first && second && equality; }
};

inline ClosedChainReport check_closed_subspace_chain(const CategoryEngine& engine, PointSet A) {
    const auto& X = engine.space();
    if (!X.is_closed(A) || !engine.action().is_invariant(A))
        throw Error(Error::Kind::InvalidArgument, "A must be a closed invariant set");
    ClosedChainReport r;
    r.closed_in_X = engine.gcat_closed(A);
    r.open_in_X = engine.gcat(A);
    if (A) {
        const auto intrinsic = subspace_engine(engine, A);
        r.intrinsic = intrinsic->gcat(intrinsic->space().all());
        r.intrinsic_closed = intrinsic->gcat_closed(intrinsic->space().all());
    }
    r.first = r.intrinsic >= r.intrinsic_closed;
    r.second = r.intrinsic_closed >= r.closed_in_X;
    r.equality = r.closed_in_X == r.open_in_X;
    r.asserted = X.is_discrete();
    return r;
}

/// 1 + Z/2 cup-length of the order complex, taken over the component of
/// largest cup-length when X is disconnected. Never exceeds cat X.
inline std::size_t cuplength_lower_bound(const FiniteSpace& X) {
    std::size_t best = 0;
    for (auto c : X.components(X.all())) {
        const auto sub = X.subspace(c);
        best = std::max(best, cuplength(order_complex(sub.space)));
    }
    return best + 1;
}

}  // namespace lslab
