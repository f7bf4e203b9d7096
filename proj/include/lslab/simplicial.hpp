#pragma once

// Finite simplicial complexes, Z/2 cohomology with cup products, and the
// order-complex / face-poset bridge to finite spaces.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lslab/core.hpp"
#include "lslab/space.hpp"

namespace lslab {

using Simplex = std::vector<std::uint32_t>;  // sorted vertex indices

class SimplicialComplex {
public:
    SimplicialComplex() = default;

    /// Closes the given faces under taking subsets. Vertices never mentioned
    /// in a face still appear as 0-simplices.
    static SimplicialComplex from_faces(std::vector<std::string> vertex_labels, const std::vector<Simplex>& faces) {
        SimplicialComplex K;
        K.labels_ = std::move(vertex_labels);
        std::set<Simplex> all;
        for (std::uint32_t v = 0; v < K.labels_.size(); ++v) all.insert({v});
        for (auto f : faces) {
            std::sort(f.begin(), f.end());
            if (std::adjacent_find(f.begin(), f.end()) != f.end())
                throw Error(Error::Kind::InvalidArgument, "simplex with a repeated vertex");
            if (f.empty()) continue;
            if (f.back() >= K.labels_.size()) throw Error(Error::Kind::InvalidArgument, "simplex vertex out of range");
            if (f.size() > 24) throw Error(Error::Kind::SizeCapExceeded, "simplex dimension too large");
            const std::uint32_t subsets = 1u << f.size();
            for (std::uint32_t m = 1; m < subsets; ++m) {
                Simplex s;
                for (std::size_t i = 0; i < f.size(); ++i)
                    if (m >> i & 1u) s.push_back(f[i]);
                all.insert(std::move(s));
            }
        }
        for (const auto& s : all) {
            const auto d = s.size() - 1;
            if (K.by_dim_.size() <= d) K.by_dim_.resize(d + 1);
            K.index_[s] = K.by_dim_[d].size();
            K.by_dim_[d].push_back(s);
        }
        return K;
    }

    static SimplicialComplex from_labeled_faces(std::vector<std::string> vertex_labels,
                                                const std::vector<std::vector<std::string>>& faces) {
        std::map<std::string, std::uint32_t> idx;
        for (std::uint32_t i = 0; i < vertex_labels.size(); ++i) {
            if (!idx.emplace(vertex_labels[i], i).second)
                throw Error(Error::Kind::InvalidArgument, "duplicate vertex label '" + vertex_labels[i] + "'");
        }
        std::vector<Simplex> fs;
        for (const auto& f : faces) {
            Simplex s;
            for (const auto& l : f) {
                auto it = idx.find(l);
                if (it == idx.end()) throw Error(Error::Kind::InvalidArgument, "unknown vertex '" + l + "'");
                s.push_back(it->second);
            }
            fs.push_back(std::move(s));
        }
        return from_faces(std::move(vertex_labels), fs);
    }

    std::size_t vertex_count() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    int dimension() const { return static_cast<int>(by_dim_.size()) - 1; }

    const std::vector<Simplex>& simplices(int d) const {
        static const std::vector<Simplex> none;
        return (d < 0 || d > dimension()) ? none : by_dim_[d];
    }

    std::size_t count(int d) const { return simplices(d).size(); }

    std::vector<std::size_t> f_vector() const {
        std::vector<std::size_t> out;
        for (const auto& v : by_dim_) out.push_back(v.size());
        return out;
    }

    long long euler_characteristic() const {
        long long chi = 0;
        for (int d = 0; d <= dimension(); ++d) chi += (d % 2 == 0 ? 1 : -1) * static_cast<long long>(count(d));
        return chi;
    }

    std::optional<std::size_t> index_of(const Simplex& s) const {
        auto it = index_.find(s);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    bool contains(const Simplex& s) const { return index_.count(s) > 0; }

    bool is_connected() const {
        if (labels_.empty()) return false;
        std::vector<std::uint32_t> parent(labels_.size());
        for (std::uint32_t i = 0; i < parent.size(); ++i) parent[i] = i;
        auto find = [&](std::uint32_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (const auto& e : simplices(1)) parent[find(e[0])] = find(e[1]);
        const auto root = find(0);
        for (std::uint32_t v = 1; v < parent.size(); ++v)
            if (find(v) != root) return false;
        return true;
    }

    /// The full subcomplex on a vertex subset, with vertices renumbered.
    SimplicialComplex full_subcomplex(const std::vector<std::uint32_t>& vertices) const {
        std::vector<std::int64_t> local(labels_.size(), -1);
        std::vector<std::string> labels;
        for (auto v : vertices) {
            local[v] = static_cast<std::int64_t>(labels.size());
            labels.push_back(labels_[v]);
        }
        std::vector<Simplex> faces;
        for (const auto& dim : by_dim_)
            for (const auto& s : dim) {
                Simplex t;
                bool inside = true;
                for (auto v : s) {
                    if (local[v] < 0) {
                        inside = false;
                        break;
                    }
                    t.push_back(static_cast<std::uint32_t>(local[v]));
                }
                if (inside) faces.push_back(std::move(t));
            }
        return from_faces(std::move(labels), faces);
    }

    std::string format(const Simplex& s) const {
        std::string out = "{";
        for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + labels_[s[i]];
        return out + "}";
    }

private:
    std::vector<std::string> labels_;
    std::vector<std::vector<Simplex>> by_dim_;
    std::map<Simplex, std::size_t> index_;
};

/// Simplices are the nonempty chains of X; vertex i is point i.
inline SimplicialComplex order_complex(const FiniteSpace& X) {
    std::vector<Simplex> chains;
    Simplex cur;
    // Chains are extended upward, so every chain is listed once in increasing
    // order; the simplex itself is sorted by point index.
    auto rec = [&](auto&& self, std::size_t top) -> void {
        Simplex s = cur;
        std::sort(s.begin(), s.end());
        chains.push_back(std::move(s));
        for_each_point(X.up(top) & ~bit(top), [&](std::size_t y) {
            cur.push_back(static_cast<std::uint32_t>(y));
            self(self, y);
            cur.pop_back();
        });
    };
    for (std::size_t x = 0; x < X.size(); ++x) {
        cur = {static_cast<std::uint32_t>(x)};
        rec(rec, x);
    }
    return SimplicialComplex::from_faces(X.labels(), chains);
}

/// Simplices ordered by inclusion.
inline FiniteSpace face_poset(const SimplicialComplex& K) {
    std::vector<Simplex> all;
    for (int d = 0; d <= K.dimension(); ++d)
        for (const auto& s : K.simplices(d)) all.push_back(s);
    if (all.size() > kMaxPoints)
        throw Error(Error::Kind::SizeCapExceeded,
                    "face poset has " + std::to_string(all.size()) + " points; at most 64 are supported");
    std::vector<std::string> labels;
    for (const auto& s : all) labels.push_back(K.format(s));
    std::vector<std::pair<std::string, std::string>> pairs;
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = 0; j < all.size(); ++j)
            if (all[i].size() + 1 == all[j].size() && std::includes(all[j].begin(), all[j].end(), all[i].begin(), all[i].end()))
                pairs.emplace_back(labels[i], labels[j]);
    return FiniteSpace::from_relation(std::move(labels), pairs);
}

/// Boundary of the 2-simplex.
inline SimplicialComplex triangle_boundary() {
    return SimplicialComplex::from_faces({"0", "1", "2"}, {{0, 1}, {1, 2}, {0, 2}});
}

inline SimplicialComplex cycle_complex(std::size_t n) {
    std::vector<std::string> labels;
    std::vector<Simplex> edges;
    for (std::uint32_t i = 0; i < n; ++i) {
        labels.push_back(std::to_string(i));
        edges.push_back({i, static_cast<std::uint32_t>((i + 1) % n)});
    }
    return SimplicialComplex::from_faces(std::move(labels), edges);
}

/// The 7-vertex (Moebius) torus: triangles {i,i+1,i+3} and {i,i+2,i+3} mod 7.
inline SimplicialComplex torus7() {
    std::vector<std::string> labels;
    std::vector<Simplex> tris;
    for (std::uint32_t i = 0; i < 7; ++i) {
        labels.push_back(std::to_string(i));
        tris.push_back({i, (i + 1) % 7, (i + 3) % 7});
        tris.push_back({i, (i + 2) % 7, (i + 3) % 7});
    }
    return SimplicialComplex::from_faces(std::move(labels), tris);
}

// ---------------------------------------------------------------------------
// Z/2 linear algebra

/// A Z/2 vector (cochain coefficients) packed into 64-bit words.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    std::size_t size() const { return n_; }
    bool get(std::size_t i) const { return (w_[i / 64] >> (i % 64)) & 1u; }
    void set(std::size_t i, bool v = true) {
        if (v) w_[i / 64] |= std::uint64_t{1} << (i % 64);
        else w_[i / 64] &= ~(std::uint64_t{1} << (i % 64));
    }
    void flip(std::size_t i) { w_[i / 64] ^= std::uint64_t{1} << (i % 64); }

    BitVector& operator^=(const BitVector& o) {
        for (std::size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
        return *this;
    }

    bool any() const {
        for (auto w : w_)
            if (w) return true;
        return false;
    }

    /// Index of the lowest set bit, or size() when zero.
    std::size_t lowest() const {
        for (std::size_t k = 0; k < w_.size(); ++k)
            if (w_[k]) return k * 64 + static_cast<std::size_t>(std::countr_zero(w_[k]));
        return n_;
    }

    std::size_t popcount() const {
        std::size_t c = 0;
        for (auto w : w_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    friend bool operator==(const BitVector& a, const BitVector& b) { return a.n_ == b.n_ && a.w_ == b.w_; }
    friend bool operator<(const BitVector& a, const BitVector& b) { return a.w_ < b.w_; }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

/// Row-echelon basis with pivots at the lowest set bit, fully reduced.
class EchelonBasis {
public:
    explicit EchelonBasis(std::size_t n = 0) : n_(n) {}

    BitVector reduce(BitVector v) const {
        for (const auto& [pivot, row] : rows_)
            if (v.get(pivot)) v ^= row;
        return v;
    }

    /// Adds v if independent; returns whether it was added.
    bool insert(const BitVector& v) {
        BitVector r = reduce(v);
        if (!r.any()) return false;
        const auto p = r.lowest();
        for (auto& [pivot, row] : rows_)
            if (row.get(p)) row ^= r;
        rows_.emplace(p, std::move(r));
        return true;
    }

    std::size_t rank() const { return rows_.size(); }

private:
    std::size_t n_;
    std::map<std::size_t, BitVector> rows_;
};

struct Cochain {
    int degree = 0;
    BitVector coeffs;
};

/// Z/2 cohomology of a complex: coboundary operators, cocycle bases, and
/// representatives of a basis of H^p for every p.
class Cohomology {
public:
    explicit Cohomology(const SimplicialComplex& K) : K_(&K) {
        const int top = K.dimension();
        boundaries_.reserve(top + 1);
        classes_.resize(top + 1);
        for (int p = 0; p <= top; ++p) {
            EchelonBasis B(K.count(p));
            if (p > 0)
                for (std::size_t i = 0; i < K.count(p - 1); ++i) {
                    BitVector e(K.count(p - 1));
                    e.set(i);
                    B.insert(coboundary({p - 1, e}).coeffs);
                }
            boundaries_.push_back(B);
            EchelonBasis ext = B;
            for (auto& z : cocycle_basis(p))
                if (ext.insert(z)) classes_[p].push_back(Cochain{p, z});
        }
    }

    explicit Cohomology(SimplicialComplex&&) = delete;

    const SimplicialComplex& complex() const { return *K_; }

    Cochain coboundary(const Cochain& c) const {
        const int p = c.degree;
        Cochain out{p + 1, BitVector(K_->count(p + 1))};
        const auto& higher = K_->simplices(p + 1);
        for (std::size_t j = 0; j < higher.size(); ++j) {
            bool v = false;
            for (std::size_t drop = 0; drop < higher[j].size(); ++drop) {
                Simplex face;
                for (std::size_t k = 0; k < higher[j].size(); ++k)
                    if (k != drop) face.push_back(higher[j][k]);
                if (c.coeffs.get(*K_->index_of(face))) v = !v;
            }
            out.coeffs.set(j, v);
        }
        return out;
    }

    bool is_cocycle(const Cochain& c) const { return !coboundary(c).coeffs.any(); }

    /// Canonical representative of the class of a cocycle (zero iff
    /// the cocycle is a coboundary).
    BitVector canonical(const Cochain& c) const {
        if (c.degree > K_->dimension()) return BitVector(0);
        return boundaries_[c.degree].reduce(c.coeffs);
    }

    bool is_coboundary(const Cochain& c) const { return !canonical(c).any(); }

    /// Representatives of a basis of H^p.
    const std::vector<Cochain>& basis(int p) const {
        static const std::vector<Cochain> none;
        return (p < 0 || p > K_->dimension()) ? none : classes_[p];
    }

    std::size_t betti(int p) const { return basis(p).size(); }

    /// Front face / back face cup product on simplices ordered by vertex index.
    Cochain cup(const Cochain& a, const Cochain& b) const {
        const int p = a.degree, q = b.degree;
        Cochain out{p + q, BitVector(K_->count(p + q))};
        const auto& top = K_->simplices(p + q);
        for (std::size_t j = 0; j < top.size(); ++j) {
            const Simplex front(top[j].begin(), top[j].begin() + p + 1);
            const Simplex back(top[j].begin() + p, top[j].end());
            if (a.coeffs.get(*K_->index_of(front)) && b.coeffs.get(*K_->index_of(back))) out.coeffs.set(j);
        }
        return out;
    }

private:
    std::vector<BitVector> cocycle_basis(int p) const {
        // Null space of the coboundary matrix (rows: (p+1)-simplices).
        const std::size_t n = K_->count(p);
        std::vector<BitVector> columns;  // image of each basis cochain
        for (std::size_t i = 0; i < n; ++i) {
            BitVector e(n);
            e.set(i);
            columns.push_back(coboundary({p, e}).coeffs);
        }
        // Gaussian elimination tracking combinations.
        std::vector<std::pair<BitVector, BitVector>> pivots;  // (reduced image, combination)
        std::vector<BitVector> kernel;
        for (std::size_t i = 0; i < n; ++i) {
            BitVector img = columns[i];
            BitVector comb(n);
            comb.set(i);
            for (const auto& [pimg, pcomb] : pivots)
                if (img.get(pimg.lowest())) {
                    img ^= pimg;
                    comb ^= pcomb;
                }
            if (img.any()) {
                const auto low = img.lowest();
                for (auto& [pimg, pcomb] : pivots)
                    if (pimg.get(low)) {
                        pimg ^= img;
                        pcomb ^= comb;
                    }
                pivots.emplace_back(img, comb);
            } else {
                kernel.push_back(comb);
            }
        }
        return kernel;
    }

    const SimplicialComplex* K_;
    std::vector<EchelonBasis> boundaries_;
    std::vector<std::vector<Cochain>> classes_;
};

/// Largest m such that some m positive-degree Z/2 classes have a nonzero
/// cup product. Requires a connected complex.
inline std::size_t cuplength(const SimplicialComplex& K, std::size_t max_products = 200000) {
    if (!K.is_connected()) throw Error(Error::Kind::NotConnected, "cup-length requires a connected complex");
    const Cohomology H(K);
    std::vector<Cochain> generators;
    for (int p = 1; p <= K.dimension(); ++p)
        for (const auto& c : H.basis(p)) generators.push_back(c);
    std::size_t length = 0;
    std::vector<Cochain> level = generators;
    std::size_t work = 0;
    while (!level.empty()) {
        ++length;
        std::vector<Cochain> next;
        std::set<std::pair<int, BitVector>> seen;
        for (const auto& c : level)
            for (const auto& g : generators) {
                if (c.degree + g.degree > K.dimension()) continue;
                if (++work > max_products) throw Error(Error::Kind::SizeCapExceeded, "cup-length search budget exhausted");
                Cochain prod = H.cup(c, g);
                auto canon = H.canonical(prod);
                if (!canon.any()) continue;
                if (seen.emplace(prod.degree, canon).second) next.push_back(Cochain{prod.degree, std::move(canon)});
            }
        level = std::move(next);
    }
    return length;
}

// ---------------------------------------------------------------------------
// Collapsibility and the star-cover upper bound

/// Whether K collapses to a point by elementary collapses. Depth-first with
/// backtracking over the choice of free pair, bounded by `budget` visited
/// states; exhausting the budget reports false.
inline bool is_collapsible(const SimplicialComplex& K, std::size_t budget = 20000) {
    if (!K.is_connected()) return false;
    std::vector<Simplex> all;
    for (int d = 0; d <= K.dimension(); ++d)
        for (const auto& s : K.simplices(d)) all.push_back(s);
    const std::size_t n = all.size();
    if (n == 1) return true;
    std::map<Simplex, std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) idx[all[i]] = i;
    std::vector<std::vector<std::size_t>> cofacets(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (all[j].size() < 2) continue;
        for (std::size_t drop = 0; drop < all[j].size(); ++drop) {
            Simplex f;
            for (std::size_t k = 0; k < all[j].size(); ++k)
                if (k != drop) f.push_back(all[j][k]);
            cofacets[idx.at(f)].push_back(j);
        }
    }
    std::vector<char> alive(n, 1);
    std::set<std::vector<char>> dead_states;
    std::size_t visited = 0;
    auto rec = [&](auto&& self, std::size_t remaining) -> bool {
        if (remaining == 1) return true;
        if (++visited > budget) return false;
        if (dead_states.count(alive)) return false;
        for (std::size_t s = 0; s < n; ++s) {
            if (!alive[s]) continue;
            std::size_t live = 0, tau = 0;
            for (auto c : cofacets[s])
                if (alive[c]) {
                    ++live;
                    tau = c;
                }
            if (live != 1) continue;
            bool tau_maximal = true;
            for (auto c : cofacets[tau])
                if (alive[c]) tau_maximal = false;
            if (!tau_maximal) continue;
            alive[s] = alive[tau] = 0;
            const bool ok = self(self, remaining - 2);
            alive[s] = alive[tau] = 1;
            if (ok) return true;
            if (visited > budget) return false;
        }
        dead_states.insert(alive);
        return false;
    };
    return rec(rec, n);
}

struct StarCover {
    std::size_t size = 0;
    std::vector<std::vector<std::uint32_t>> vertex_sets;  // each spans a collapsible full subcomplex
};

/// Fewest vertex sets S_i covering all vertices with every full subcomplex
/// K[S_i] collapsible. The open star of S_i retracts onto K[S_i], so each
/// star union is contractible and together they cover |K|.
inline StarCover star_cover_upper_bound(const SimplicialComplex& K, const Limits& limits = {}) {
    const std::size_t n = K.vertex_count();
    if (n > limits.subset_points)
        throw Error(Error::Kind::SizeCapExceeded, "star cover search is limited to " +
                                                      std::to_string(limits.subset_points) + " vertices");
    std::vector<PointSet> good;
    for (PointSet s = 1; s <= full_set(n); ++s) {
        std::vector<std::uint32_t> vs;
        for_each_point(s, [&](std::size_t v) { vs.push_back(static_cast<std::uint32_t>(v)); });
        if (is_collapsible(K.full_subcomplex(vs))) good.push_back(s);
    }
    std::stable_sort(good.begin(), good.end(), [](PointSet a, PointSet b) { return popcount(a) > popcount(b); });
    std::vector<PointSet> maximal;
    for (auto s : good)
        if (std::none_of(maximal.begin(), maximal.end(), [&](PointSet t) { return is_subset(s, t); }))
            maximal.push_back(s);
    // Any collapsible set can be traded for a maximal collapsible superset
    // without uncovering a vertex, so maximal members suffice.
    std::unordered_map<PointSet, std::pair<PointSet, PointSet>> parent{{0, {0, 0}}};
    std::vector<PointSet> frontier{0};
    const PointSet target = full_set(n);
    std::size_t level = 0;
    while (!parent.count(target)) {
        std::vector<PointSet> next;
        for (auto u : frontier)
            for (auto m : maximal) {
                const auto v = u | m;
                if (parent.emplace(v, std::make_pair(u, m)).second) next.push_back(v);
            }
        if (next.empty()) throw Error(Error::Kind::InvalidArgument, "complex has no vertices");
        frontier = std::move(next);
        ++level;
    }
    StarCover out;
    out.size = level;
    for (PointSet u = target; u != 0; u = parent.at(u).first) {
        std::vector<std::uint32_t> vs;
        for_each_point(parent.at(u).second, [&](std::size_t v) { vs.push_back(static_cast<std::uint32_t>(v)); });
        out.vertex_sets.push_back(std::move(vs));
    }
    return out;
}

}  // namespace lslab
