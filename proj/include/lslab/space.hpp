#pragma once

// Finite T0 spaces as posets. Opens are up-sets, closed sets are down-sets.

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lslab/core.hpp"

namespace lslab {

class FiniteSpace {
public:
    FiniteSpace() = default;

    /// Builds the reflexive-transitive closure of `pairs` ([lower, upper]) and
    /// checks antisymmetry. Unknown labels and duplicates are rejected.
    static FiniteSpace from_relation(std::vector<std::string> labels,
                                     const std::vector<std::pair<std::string, std::string>>& pairs) {
        FiniteSpace s = blank(std::move(labels));
        for (const auto& [lo, hi] : pairs) {
            const auto i = s.require_index(lo);
            const auto j = s.require_index(hi);
            s.up_[i] |= bit(j);
        }
        // Warshall closure on bit rows.
        const std::size_t n = s.size();
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                if (contains(s.up_[i], k)) s.up_[i] |= s.up_[k];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (contains(s.up_[i], j) && contains(s.up_[j], i))
                    throw Error(Error::Kind::NotAPartialOrder,
                                "antisymmetry violated by (" + s.labels_[i] + ", " + s.labels_[j] + ", " +
                                    s.labels_[i] + "): " + s.labels_[i] + " <= " + s.labels_[j] + " <= " +
                                    s.labels_[i]);
        s.finish();
        return s;
    }

    /// Strict constructor from a full relation matrix (leq[i][j] means i <= j);
    /// every order axiom is checked and a witness triple reported.
    static FiniteSpace from_matrix(std::vector<std::string> labels, const std::vector<std::vector<bool>>& leq) {
        FiniteSpace s = blank(std::move(labels));
        const std::size_t n = s.size();
        if (leq.size() != n) throw Error(Error::Kind::InvalidArgument, "relation matrix has wrong size");
        for (std::size_t i = 0; i < n; ++i) {
            if (leq[i].size() != n) throw Error(Error::Kind::InvalidArgument, "relation matrix has wrong size");
            for (std::size_t j = 0; j < n; ++j)
                if (leq[i][j]) s.up_[i] |= bit(j);
        }
        const auto& L = s.labels_;
        for (std::size_t i = 0; i < n; ++i)
            if (!contains(s.up_[i], i))
                throw Error(Error::Kind::NotAPartialOrder,
                            "reflexivity violated by (" + L[i] + ", " + L[i] + ", " + L[i] + ")");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j && contains(s.up_[i], j) && contains(s.up_[j], i))
                    throw Error(Error::Kind::NotAPartialOrder,
                                "antisymmetry violated by (" + L[i] + ", " + L[j] + ", " + L[i] + ")");
                if (!contains(s.up_[i], j)) continue;
                for (std::size_t k = 0; k < n; ++k)
                    if (contains(s.up_[j], k) && !contains(s.up_[i], k))
                        throw Error(Error::Kind::NotAPartialOrder,
                                    "transitivity violated by (" + L[i] + ", " + L[j] + ", " + L[k] + ")");
            }
        s.finish();
        return s;
    }

    static FiniteSpace discrete(std::size_t n) {
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
        return from_relation(std::move(labels), {});
    }

    std::size_t size() const { return labels_.size(); }
    PointSet all() const { return full_set(size()); }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    const std::vector<std::string>& labels() const { return labels_; }

    std::optional<std::size_t> index_of(const std::string& label) const {
        auto it = std::find(labels_.begin(), labels_.end(), label);
        if (it == labels_.end()) return std::nullopt;
        return static_cast<std::size_t>(it - labels_.begin());
    }

    std::size_t require_index(const std::string& label) const {
        auto i = index_of(label);
        if (!i) throw Error(Error::Kind::ValidationError, "unknown point '" + label + "'");
        return *i;
    }

    bool leq(std::size_t i, std::size_t j) const { return contains(up_[i], j); }
    bool less(std::size_t i, std::size_t j) const { return i != j && leq(i, j); }
    bool comparable(std::size_t i, std::size_t j) const { return leq(i, j) || leq(j, i); }

    /// {j : i <= j}
    PointSet up(std::size_t i) const { return up_[i]; }
    /// {j : j <= i}
    PointSet down(std::size_t i) const { return down_[i]; }

    PointSet up_closure(PointSet s) const {
        PointSet out = 0;
        for_each_point(s, [&](std::size_t i) { out |= up_[i]; });
        return out;
    }

    /// Topological closure: the smallest down-set containing s.
    PointSet closure(PointSet s) const {
        PointSet out = 0;
        for_each_point(s, [&](std::size_t i) { out |= down_[i]; });
        return out;
    }

    bool is_open(PointSet s) const { return up_closure(s) == s; }
    bool is_closed(PointSet s) const { return closure(s) == s; }

    bool is_discrete() const {
        for (std::size_t i = 0; i < size(); ++i)
            if (up_[i] != bit(i)) return false;
        return true;
    }

    PointSet minimal_points(PointSet s) const {
        PointSet out = 0;
        for_each_point(s, [&](std::size_t i) {
            if ((down_[i] & s) == bit(i)) out |= bit(i);
        });
        return out;
    }

    PointSet maximal_points(PointSet s) const {
        PointSet out = 0;
        for_each_point(s, [&](std::size_t i) {
            if ((up_[i] & s) == bit(i)) out |= bit(i);
        });
        return out;
    }

    /// Connected components of the comparability graph restricted to s.
    std::vector<PointSet> components(PointSet s) const {
        std::vector<PointSet> out;
        PointSet left = s;
        while (left) {
            PointSet comp = left & (~left + 1);
            PointSet frontier = comp;
            while (frontier) {
                PointSet next = 0;
                for_each_point(frontier, [&](std::size_t i) { next |= (up_[i] | down_[i]) & s; });
                frontier = next & ~comp;
                comp |= next;
            }
            out.push_back(comp);
            left &= ~comp;
        }
        return out;
    }

    bool is_connected() const { return size() > 0 && components(all()).size() == 1; }

    /// All open sets (up-sets), in increasing mask order.
    std::vector<PointSet> open_sets(const Limits& limits = {}) const {
        check_subset_cap(limits);
        std::vector<PointSet> out;
        for (PointSet s = 0;; ++s) {
            if (is_open(s)) out.push_back(s);
            if (s == all()) break;
        }
        return out;
    }

    std::vector<PointSet> closed_sets(const Limits& limits = {}) const {
        check_subset_cap(limits);
        std::vector<PointSet> out;
        for (PointSet s = 0;; ++s) {
            if (is_closed(s)) out.push_back(s);
            if (s == all()) break;
        }
        return out;
    }

    void check_subset_cap(const Limits& limits) const {
        if (size() > limits.subset_points)
            throw Error(Error::Kind::SizeCapExceeded, "space has " + std::to_string(size()) +
                                                          " points; subset-level cap is " +
                                                          std::to_string(limits.subset_points));
    }

    void check_map_cap(const Limits& limits) const {
        if (size() > limits.map_points)
            throw Error(Error::Kind::SizeCapExceeded, "space has " + std::to_string(size()) +
                                                          " points; map enumeration cap is " +
                                                          std::to_string(limits.map_points));
    }

    /// The subspace on s with the induced order; `embedding[k]` is the index
    /// in this space of the k-th point of the subspace.
    struct Subspace;
    Subspace subspace(PointSet s) const;

    /// Pairs (i, j) with i < j and nothing strictly between them.
    std::vector<std::pair<std::size_t, std::size_t>> cover_relations() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = 0; j < size(); ++j) {
                if (!less(i, j)) continue;
                const PointSet between = (up_[i] & down_[j]) & ~(bit(i) | bit(j));
                if (!between) out.emplace_back(i, j);
            }
        return out;
    }

    std::string format(PointSet s) const {
        std::string out = "{";
        bool first = true;
        for_each_point(s, [&](std::size_t i) {
            if (!first) out += ",";
            out += labels_[i];
            first = false;
        });
        return out + "}";
    }

    PointSet parse_set(const std::vector<std::string>& labels) const {
        PointSet s = 0;
        for (const auto& l : labels) s |= bit(require_index(l));
        return s;
    }

    friend bool operator==(const FiniteSpace& a, const FiniteSpace& b) {
        return a.labels_ == b.labels_ && a.up_ == b.up_;
    }

private:
    static FiniteSpace blank(std::vector<std::string> labels) {
        if (labels.empty()) throw Error(Error::Kind::EmptySpace, "a finite space needs at least one point");
        if (labels.size() > kMaxPoints)
            throw Error(Error::Kind::SizeCapExceeded, "at most 64 points are supported");
        std::vector<std::string> sorted = labels;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw Error(Error::Kind::ValidationError, "duplicate point label");
        FiniteSpace s;
        s.labels_ = std::move(labels);
        s.up_.assign(s.labels_.size(), 0);
        for (std::size_t i = 0; i < s.labels_.size(); ++i) s.up_[i] = bit(i);
        return s;
    }

    void finish() {
        down_.assign(size(), 0);
        for (std::size_t i = 0; i < size(); ++i)
            for_each_point(up_[i], [&](std::size_t j) { down_[j] |= bit(i); });
    }

    std::vector<std::string> labels_;
    std::vector<PointSet> up_;
    std::vector<PointSet> down_;
};

struct FiniteSpace::Subspace {
    FiniteSpace space;
    std::vector<std::size_t> embedding;

    PointSet lift(PointSet local) const {
        PointSet out = 0;
        for_each_point(local, [&](std::size_t k) { out |= bit(embedding[k]); });
        return out;
    }

    PointSet restrict(PointSet global) const {
        PointSet out = 0;
        for (std::size_t k = 0; k < embedding.size(); ++k)
            if (contains(global, embedding[k])) out |= bit(k);
        return out;
    }
};

inline FiniteSpace::Subspace FiniteSpace::subspace(PointSet s) const {
    Subspace sub;
    sub.embedding = points_of(s);
    std::vector<std::string> labels;
    std::vector<std::pair<std::string, std::string>> pairs;
    for (auto i : sub.embedding) labels.push_back(labels_[i]);
    for (auto i : sub.embedding)
        for (auto j : sub.embedding)
            if (less(i, j)) pairs.emplace_back(labels_[i], labels_[j]);
    sub.space = from_relation(std::move(labels), pairs);
    return sub;
}

/// A continuous map from a subspace of a source space into a target space.
/// `image[i]` is kNoPoint for source points outside the domain.
class SpaceMap {
public:
    SpaceMap() = default;
    explicit SpaceMap(std::vector<Point> image) : image_(std::move(image)) {}

    static SpaceMap identity(std::size_t n) {
        std::vector<Point> img(n);
        for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<Point>(i);
        return SpaceMap(std::move(img));
    }

    static SpaceMap inclusion(std::size_t n, PointSet domain) {
        std::vector<Point> img(n, kNoPoint);
        for_each_point(domain, [&](std::size_t i) { img[i] = static_cast<Point>(i); });
        return SpaceMap(std::move(img));
    }

    static SpaceMap constant(std::size_t n, PointSet domain, std::size_t target) {
        std::vector<Point> img(n, kNoPoint);
        for_each_point(domain, [&](std::size_t i) { img[i] = static_cast<Point>(target); });
        return SpaceMap(std::move(img));
    }

    /// Builds an endomap from label pairs; points not mentioned are fixed.
    static SpaceMap from_labels(const FiniteSpace& X, const std::map<std::string, std::string>& assignment) {
        SpaceMap m = identity(X.size());
        for (const auto& [from, to] : assignment) m.image_[X.require_index(from)] = static_cast<Point>(X.require_index(to));
        return m;
    }

    std::size_t source_size() const { return image_.size(); }
    const std::vector<Point>& image() const { return image_; }
    Point operator()(std::size_t i) const { return image_.at(i); }
    void set(std::size_t i, std::size_t v) { image_.at(i) = static_cast<Point>(v); }

    PointSet domain() const {
        PointSet d = 0;
        for (std::size_t i = 0; i < image_.size(); ++i)
            if (image_[i] != kNoPoint) d |= bit(i);
        return d;
    }

    PointSet apply(PointSet s) const {
        PointSet out = 0;
        for_each_point(s, [&](std::size_t i) {
            if (i < image_.size() && image_[i] != kNoPoint) out |= bit(image_[i]);
        });
        return out;
    }

    PointSet preimage(PointSet s) const {
        PointSet out = 0;
        for (std::size_t i = 0; i < image_.size(); ++i)
            if (image_[i] != kNoPoint && contains(s, image_[i])) out |= bit(i);
        return out;
    }

    PointSet image_set() const { return apply(domain()); }

    bool is_constant() const { return popcount(image_set()) <= 1; }

    PointSet fixed_points() const {
        PointSet out = 0;
        for (std::size_t i = 0; i < image_.size(); ++i)
            if (image_[i] == i) out |= bit(i);
        return out;
    }

    SpaceMap restricted(PointSet domain) const {
        SpaceMap m = *this;
        for (std::size_t i = 0; i < m.image_.size(); ++i)
            if (!contains(domain, i)) m.image_[i] = kNoPoint;
        return m;
    }

    bool is_order_preserving(const FiniteSpace& src, const FiniteSpace& dst) const {
        if (image_.size() != src.size()) return false;
        for (std::size_t i = 0; i < image_.size(); ++i) {
            if (image_[i] == kNoPoint) continue;
            if (image_[i] >= dst.size()) return false;
            for (std::size_t j = 0; j < image_.size(); ++j)
                if (image_[j] != kNoPoint && src.leq(i, j) && !dst.leq(image_[i], image_[j])) return false;
        }
        return true;
    }

    bool is_bijective_endomap() const {
        PointSet seen = 0;
        for (auto v : image_) {
            if (v == kNoPoint || v >= image_.size()) return false;
            seen |= bit(v);
        }
        return popcount(seen) == static_cast<int>(image_.size());
    }

    /// Order-isomorphism of a space onto itself.
    bool is_automorphism(const FiniteSpace& X) const {
        if (!is_bijective_endomap() || !is_order_preserving(X, X)) return false;
        for (std::size_t i = 0; i < X.size(); ++i)
            for (std::size_t j = 0; j < X.size(); ++j)
                if (X.leq(image_[i], image_[j]) && !X.leq(i, j)) return false;
        return true;
    }

    /// Pointwise order on a common domain: this <= other.
    bool pointwise_leq(const SpaceMap& other, const FiniteSpace& dst) const {
        if (image_.size() != other.image_.size()) return false;
        for (std::size_t i = 0; i < image_.size(); ++i) {
            if ((image_[i] == kNoPoint) != (other.image_[i] == kNoPoint)) return false;
            if (image_[i] != kNoPoint && !dst.leq(image_[i], other.image_[i])) return false;
        }
        return true;
    }

    bool comparable(const SpaceMap& other, const FiniteSpace& dst) const {
        return pointwise_leq(other, dst) || other.pointwise_leq(*this, dst);
    }

    /// (outer ∘ this)
    SpaceMap then(const SpaceMap& outer) const {
        std::vector<Point> img(image_.size(), kNoPoint);
        for (std::size_t i = 0; i < image_.size(); ++i)
            if (image_[i] != kNoPoint) img[i] = outer.image_.at(image_[i]);
        return SpaceMap(std::move(img));
    }

    SpaceMap power(int n) const {
        SpaceMap out = identity(image_.size()).restricted(domain());
        for (int k = 0; k < n; ++k) out = out.then(*this);
        return out;
    }

    std::string format(const FiniteSpace& src, const FiniteSpace& dst) const {
        std::string out = "(";
        bool first = true;
        for (std::size_t i = 0; i < image_.size(); ++i) {
            if (image_[i] == kNoPoint) continue;
            if (!first) out += ", ";
            out += src.label(i) + "->" + dst.label(image_[i]);
            first = false;
        }
        return out + ")";
    }

    friend bool operator==(const SpaceMap& a, const SpaceMap& b) { return a.image_ == b.image_; }
    friend bool operator<(const SpaceMap& a, const SpaceMap& b) { return a.image_ < b.image_; }

private:
    std::vector<Point> image_;
};

/// All order-preserving maps from the subspace `domain` of src into dst, in
/// lexicographic order of the image sequence.
inline std::vector<SpaceMap> enumerate_maps(const FiniteSpace& src, PointSet domain, const FiniteSpace& dst,
                                            const Limits& limits = {}) {
    if (static_cast<std::size_t>(popcount(domain)) > limits.map_points || dst.size() > limits.map_points)
        throw Error(Error::Kind::SizeCapExceeded, "map enumeration exceeds the exhaustive cap");
    const auto pts = points_of(domain);
    std::vector<Point> img(src.size(), kNoPoint);
    std::vector<SpaceMap> out;
    std::size_t budget = limits.max_search_states;

    auto rec = [&](auto&& self, std::size_t k) -> void {
        if (k == pts.size()) {
            if (out.size() >= budget) throw Error(Error::Kind::SizeCapExceeded, "too many maps to enumerate");
            out.emplace_back(img);
            return;
        }
        const std::size_t x = pts[k];
        for (std::size_t v = 0; v < dst.size(); ++v) {
            bool ok = true;
            for (std::size_t q = 0; q < k && ok; ++q) {
                const std::size_t y = pts[q];
                if (src.leq(y, x) && !dst.leq(img[y], v)) ok = false;
                if (src.leq(x, y) && !dst.leq(v, img[y])) ok = false;
            }
            if (!ok) continue;
            img[x] = static_cast<Point>(v);
            self(self, k + 1);
        }
        img[x] = kNoPoint;
    };
    rec(rec, 0);
    return out;
}

inline std::vector<SpaceMap> enumerate_maps(const FiniteSpace& X, PointSet domain, const Limits& limits = {}) {
    return enumerate_maps(X, domain, X, limits);
}

/// Result of beat-point removal.
struct CoreResult {
    FiniteSpace space;
    std::vector<std::size_t> kept;  // indices in the original space, ascending
    SpaceMap retraction;            // original -> core indices
    SpaceMap inclusion;             // core -> original indices
    std::vector<std::size_t> removed;  // in removal order
};

/// A point whose strict down-set has a maximum or whose strict up-set has a
/// minimum, within the subspace `alive`. Returns the point it retracts onto.
inline std::optional<std::size_t> beat_target(const FiniteSpace& X, PointSet alive, std::size_t x) {
    const PointSet below = X.down(x) & alive & ~bit(x);
    if (below) {
        const PointSet maxima = X.maximal_points(below);
        if (popcount(maxima) == 1) return static_cast<std::size_t>(std::countr_zero(maxima));
    }
    const PointSet above = X.up(x) & alive & ~bit(x);
    if (above) {
        const PointSet minima = X.minimal_points(above);
        if (popcount(minima) == 1) return static_cast<std::size_t>(std::countr_zero(minima));
    }
    return std::nullopt;
}

/// Stong core: repeatedly removes the lowest-index beat point.
inline CoreResult core(const FiniteSpace& X) {
    PointSet alive = X.all();
    std::vector<std::size_t> target(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) target[i] = i;
    std::vector<std::size_t> removed;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t x = 0; x < X.size(); ++x) {
            if (!contains(alive, x)) continue;
            if (auto t = beat_target(X, alive, x)) {
                alive &= ~bit(x);
                for (auto& v : target)
                    if (v == x) v = *t;
                removed.push_back(x);
                changed = true;
                break;
            }
        }
    }
    auto sub = X.subspace(alive);
    std::vector<std::size_t> local(X.size(), 0);
    for (std::size_t k = 0; k < sub.embedding.size(); ++k) local[sub.embedding[k]] = k;
    std::vector<Point> r(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) r[i] = static_cast<Point>(local[target[i]]);
    std::vector<Point> inc(sub.embedding.size());
    for (std::size_t k = 0; k < sub.embedding.size(); ++k) inc[k] = static_cast<Point>(sub.embedding[k]);
    return CoreResult{sub.space, sub.embedding, SpaceMap(std::move(r)), SpaceMap(std::move(inc)), std::move(removed)};
}

/// A self-map of a finite space is a homotopy equivalence iff the induced
/// self-map of the core is an automorphism.
inline bool is_homotopy_equivalence(const FiniteSpace& X, const SpaceMap& phi) {
    if (phi.source_size() != X.size() || phi.domain() != X.all() || !phi.is_order_preserving(X, X)) return false;
    const CoreResult c = core(X);
    const SpaceMap induced = c.inclusion.then(phi).then(c.retraction);
    return induced.is_automorphism(c.space);
}

}  // namespace lslab
