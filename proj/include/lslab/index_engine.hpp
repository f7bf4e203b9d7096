#pragma once

// Index functions, their axioms, and the min-max critical value engine.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "lslab/category.hpp"
#include "lslab/core.hpp"
#include "lslab/dynamical_pair.hpp"
#include "lslab/fence.hpp"
#include "lslab/space.hpp"

namespace lslab {

/// A set-pair function nu(A, Y) on the subsets of a finite space, memoized.
class IndexFunction {
public:
    using Eval = std::function<long long(PointSet, PointSet)>;

    IndexFunction(FiniteSpace X, Eval eval, std::string tag)
        : X_(std::make_shared<FiniteSpace>(std::move(X))), eval_(std::move(eval)), tag_(std::move(tag)),
          memo_(std::make_shared<Memo>(X_->size())) {}

    long long operator()(PointSet A, PointSet Y = 0) const {
        if (memo_->dense) {
            auto& slot = memo_->table[(A << X_->size()) | Y];
            auto v = slot.load(std::memory_order_relaxed);
            if (v < 0) {
                v = static_cast<std::int32_t>(eval_(A, Y));
                slot.store(v, std::memory_order_relaxed);
            }
            return v;
        }
        const auto key = std::make_pair(A, Y);
        {
            std::lock_guard lock(memo_->mutex);
            auto it = memo_->sparse.find(key);
            if (it != memo_->sparse.end()) return it->second;
        }
        const auto v = eval_(A, Y);
        std::lock_guard lock(memo_->mutex);
        memo_->sparse.emplace(key, v);
        return v;
    }

    const FiniteSpace& space() const { return *X_; }
    const std::string& tag() const { return tag_; }

private:
    struct PairHash {
        std::size_t operator()(const std::pair<PointSet, PointSet>& p) const {
            return std::hash<PointSet>()(p.first * 0x9E3779B97F4A7C15ull ^ p.second);
        }
    };
    struct Memo {
        explicit Memo(std::size_t n) : dense(n <= 10) {
            if (dense) table = std::vector<std::atomic<std::int32_t>>(std::size_t{1} << (2 * n));
            for (auto& s : table) s.store(-1, std::memory_order_relaxed);
        }
        bool dense;
        std::vector<std::atomic<std::int32_t>> table;
        std::mutex mutex;
        std::unordered_map<std::pair<PointSet, PointSet>, long long, PairHash> sparse;
    };

    std::shared_ptr<FiniteSpace> X_;
    Eval eval_;
    std::string tag_;
    std::shared_ptr<Memo> memo_;
};

/// nu^1_N(A,Y) = min{gcat_X GA, N}; nu^2_N(A,Y) = min{gcat_X(GA,GY), N};
/// nu^3_N(A,Y) = min{gcat_X(GA mod GY), N}.
inline IndexFunction make_nu(int variant, long long N, std::shared_ptr<const CategoryEngine> engine) {
    if (N < 1) throw Error(Error::Kind::InvalidArgument, "N must be at least 1");
    if (variant < 1 || variant > 3) throw Error(Error::Kind::InvalidArgument, "index variant must be 1, 2 or 3");
    IndexFunction::Eval eval;
    switch (variant) {
    case 1: eval = [engine, N](PointSet A, PointSet) { return engine->gcat(A).truncated(N).value(); }; break;
    case 2: eval = [engine, N](PointSet A, PointSet Y) { return engine->gcat_pair(A, Y).truncated(N).value(); }; break;
    default: eval = [engine, N](PointSet A, PointSet Y) { return engine->gcat_mod(A, Y).truncated(N).value(); }; break;
    }
    return IndexFunction(engine->space(), std::move(eval), "nu" + std::to_string(variant) + "_" + std::to_string(N));
}

struct AxiomVerdict {
    bool holds = true;
    std::vector<PointSet> witness;  // monotonicity: A, B, Y; continuity: A; subadditivity: A, B, Y
    std::string detail;
};

struct AxiomReport {
    AxiomVerdict monotonicity, continuity, subadditivity;
    bool sampled = false;
    bool holds() const { return monotonicity.holds && continuity.holds && subadditivity.holds; }
};

/// Exhaustive when 3|X| <= 24, otherwise random sampling of the triples.
inline AxiomReport check_axioms(const IndexFunction& nu, std::uint64_t seed = 0, std::size_t samples = 200000) {
    const auto& X = nu.space();
    const std::size_t n = X.size();
    const PointSet all = X.all();
    AxiomReport r;
    r.sampled = 3 * n > 24;
    std::mt19937_64 rng(seed);
    auto random_set = [&] { return static_cast<PointSet>(rng()) & all; };

    auto fail = [&](AxiomVerdict& v, std::vector<PointSet> w, std::string d) {
        if (!v.holds) return;
        v.holds = false;
        v.witness = std::move(w);
        v.detail = std::move(d);
    };

    // Monotonicity: one-point extensions suffice by transitivity.
    auto mono = [&](PointSet A, PointSet Y) {
        for_each_point(all & ~A, [&](std::size_t x) {
            const PointSet B = A | bit(x);
            if (nu(A, Y) > nu(B, Y))
                fail(r.monotonicity, {A, B, Y},
                     "nu(" + X.format(A) + ", " + X.format(Y) + ") > nu(" + X.format(B) + ", " + X.format(Y) + ")");
        });
    };
    auto subadd = [&](PointSet A, PointSet B, PointSet Y) {
        if (nu(A | B, Y) > nu(A, Y) + nu(B, 0))
            fail(r.subadditivity, {A, B, Y},
                 "nu(A∪B, Y) > nu(A, Y) + nu(B) for A=" + X.format(A) + ", B=" + X.format(B) + ", Y=" + X.format(Y));
    };
    if (!r.sampled) {
        for (PointSet Y = 0; Y <= all && r.monotonicity.holds; ++Y)
            for (PointSet A = 0; A <= all && r.monotonicity.holds; ++A) mono(A, Y);
        for (PointSet Y = 0; Y <= all && r.subadditivity.holds; ++Y)
            for (PointSet A = 0; A <= all && r.subadditivity.holds; ++A)
                for (PointSet B = 0; B <= all && r.subadditivity.holds; ++B) subadd(A, B, Y);
    } else {
        for (std::size_t i = 0; i < samples && r.monotonicity.holds; ++i) mono(random_set(), random_set());
        for (std::size_t i = 0; i < samples && r.subadditivity.holds; ++i) subadd(random_set(), random_set(), random_set());
    }

    // Continuity: every closed A has an open U ⊇ A agreeing with A for all Y.
    std::vector<PointSet> opens, closeds;
    if (n <= 16) {
        opens = X.open_sets(Limits{.subset_points = 16});
        closeds = X.closed_sets(Limits{.subset_points = 16});
    }
    std::vector<PointSet> ys;
    if (!r.sampled) {
        for (PointSet Y = 0; Y <= all; ++Y) ys.push_back(Y);
    } else {
        for (std::size_t i = 0; i < 64; ++i) ys.push_back(random_set());
    }
    for (auto A : closeds) {
        bool found = false;
        for (auto U : opens) {
            if (!is_subset(A, U)) continue;
            bool agree = true;
            for (auto Y : ys)
                if (nu(A, Y) != nu(U, Y)) {
                    agree = false;
                    break;
                }
            if (agree) {
                found = true;
                break;
            }
        }
        if (!found) {
            fail(r.continuity, {A}, "no open neighborhood of " + X.format(A) + " has the same index for every Y");
            break;
        }
    }
    return r;
}

struct SupervarianceVerdict {
    bool holds = true;
    std::optional<PointSet> witness;  // A with nu(phi(A), Z) < nu(A, Z)
    long long index_of_set = 0;       // nu(A, Z)
    long long index_of_image = 0;     // nu(phi(A), Z)
};

/// nu(phi(A), Z) >= nu(A, Z) for all A; the reported witness is the
/// smallest failing A (by size, then mask).
inline SupervarianceVerdict check_supervariance(const IndexFunction& nu, const SpaceMap& phi, PointSet Z,
                                                std::uint64_t seed = 0, std::size_t samples = 100000) {
    const auto& X = nu.space();
    SupervarianceVerdict v;
    auto test = [&](PointSet A) {
        const auto before = nu(A, Z);
        const auto after = nu(phi.apply(A), Z);
        if (after < before) {
            v.holds = false;
            v.witness = A;
            v.index_of_set = before;
            v.index_of_image = after;
            return false;
        }
        return true;
    };
    if (X.size() <= 16) {
        std::vector<PointSet> order;
        for (PointSet A = 0; A <= X.all(); ++A) order.push_back(A);
        std::stable_sort(order.begin(), order.end(), [](PointSet a, PointSet b) { return popcount(a) < popcount(b); });
        for (auto A : order)
            if (!test(A)) break;
    } else {
        std::mt19937_64 rng(seed);
        for (std::size_t i = 0; i < samples; ++i)
            if (!test(static_cast<PointSet>(rng()) & X.all())) break;
    }
    return v;
}

// ---------------------------------------------------------------------------
// Iterating into a sublevel

struct IterationResult {
    int n = 0;          // least n with phi^n(f^b \ U) ⊆ f^a
    int bound = 0;      // certified upper bound on n
    double decrease = 0;  // least decrease f - f∘phi on the band off F
};

/// (i): with F ∩ f^{-1}[a,b[ empty and U ⊇ F ∩ f^{-1}(b), the least n with
/// phi^n(f^b \ U) ⊆ f^a.
inline IterationResult iterate_into_sublevel(const DynamicalPair& p, PointSet U, double a, double b) {
    const auto& X = p.space();
    if (!(a < b)) {
        const PointSet S = p.sublevel(b) & ~U;
        if (is_subset(S, p.sublevel(a))) return {};
    }
    const PointSet F = p.fixed();
    const PointSet bad = F & p.closed_band(a, b) & ~p.level(b);
    if (bad)
        throw Error(Error::Kind::HypothesisUnmet,
                    "fixed point " + X.label(static_cast<std::size_t>(std::countr_zero(bad))) + " lies in f^{-1}[a,b[");
    if (!is_subset(F & p.level(b), U))
        throw Error(Error::Kind::HypothesisUnmet, "U is not a neighborhood of F ∩ f^{-1}(b)");
    double delta = std::numeric_limits<double>::infinity();
    for_each_point(p.closed_band(a, b) & ~F, [&](std::size_t x) { delta = std::min(delta, p.f(x) - p.f(p.map()(x))); });
    if (std::isfinite(delta) && !(delta > 0))
        throw Error(Error::Kind::HypothesisUnmet, "f does not decrease along the map on f^{-1}[a,b]");
    IterationResult r;
    r.decrease = std::isfinite(delta) ? delta : 0;
    r.bound = std::isfinite(delta) ? static_cast<int>(std::ceil((b - a) / delta)) + 1 : 0;
    PointSet S = p.sublevel(b) & ~U;
    const PointSet target = p.sublevel(a);
    while (!is_subset(S, target)) {
        if (r.n > r.bound) throw Error(Error::Kind::HypothesisUnmet, "iteration exceeded its certified bound");
        S = p.map().apply(S);
        ++r.n;
    }
    return r;
}

/// (ii): with F ∩ f^{-1}]a, a+eps[ empty and U an open set containing f^a,
/// a delta > 0 with phi(f^{a+delta}) ⊆ U. Larger admissible deltas are
/// preferred.
inline double sublevel_margin(const DynamicalPair& p, PointSet U, double a, double eps) {
    const auto& X = p.space();
    if (!(eps > 0)) throw Error(Error::Kind::InvalidArgument, "epsilon must be positive");
    if (!X.is_open(U) || !is_subset(p.sublevel(a), U))
        throw Error(Error::Kind::InvalidArgument, "U must be an open set containing f^a");
    for_each_point(p.fixed(), [&](std::size_t x) {
        if (p.f(x) > a && p.f(x) < a + eps)
            throw Error(Error::Kind::HypothesisUnmet, "fixed point " + X.label(x) + " lies in f^{-1}]a,a+eps[");
    });
    std::vector<double> candidates;
    double first_above = a + eps;
    for (double v : p.values_on(X.all()))
        if (v > a && v <= a + eps) {
            candidates.push_back(v - a);
            first_above = std::min(first_above, v);
        }
    std::sort(candidates.rbegin(), candidates.rend());
    candidates.push_back((first_above - a) / 2);
    for (double d : candidates)
        if (is_subset(p.map().apply(p.sublevel(a + d)), U)) return d;
    PointSet out = p.sublevel(a) & ~p.map().preimage(U);
    throw Error(Error::Kind::HypothesisUnmet,
                "the map sends " + X.label(static_cast<std::size_t>(std::countr_zero(out))) + " in f^a outside U");
}

// ---------------------------------------------------------------------------
// Critical values and the main inequality

enum class Verdict { InequalityHolds, HypothesisFailed, Violation };

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::InequalityHolds: return "INEQUALITY_HOLDS";
    case Verdict::HypothesisFailed: return "HYPOTHESIS_FAILED";
    case Verdict::Violation: return "VIOLATION";
    }
    return "?";
}

inline std::optional<Verdict> parse_verdict(const std::string& s) {
    for (auto v : {Verdict::InequalityHolds, Verdict::HypothesisFailed, Verdict::Violation})
        if (s == to_string(v)) return v;
    return std::nullopt;
}

struct Hypothesis {
    enum class Status { holds, violated, assumed };
    std::string name;
    Status status = Status::holds;
    std::string detail;
};

inline const char* to_string(Hypothesis::Status s) {
    switch (s) {
    case Hypothesis::Status::holds: return "holds";
    case Hypothesis::Status::violated: return "violated";
    case Hypothesis::Status::assumed: return "assumed";
    }
    return "?";
}

inline std::vector<std::string> violated(const std::vector<Hypothesis>& hs) {
    std::vector<std::string> out;
    for (const auto& h : hs)
        if (h.status == Hypothesis::Status::violated) out.push_back(h.name);
    return out;
}

struct CriticalValue {
    long long k = 0;
    double c = 0;
    bool below_is_smaller = false;  // mu(f^{c-eps}) < k
    bool reaches_k = false;         // mu(f^c) >= k
    bool above_a = false;
    bool in_fixed_values = false;   // c ∈ f(F)
    PointSet slice = 0;             // F ∩ f^{-1}(c)
};

struct CriticalRun {
    double c = 0;
    long long first_k = 0;
    long long r = 0;               // run is c_k = ... = c_{k+r}
    PointSet slice = 0;
    long long slice_index = 0;     // nu(F ∩ f^{-1}(c))
    bool multiplicity_holds = false;  // slice_index >= r + 1
};

struct CriticalValueTable {
    double a = 0, b = 0;
    long long mu_a = 0, mu_b = 0;
    std::vector<CriticalValue> values;
    std::vector<CriticalRun> runs;

    bool nondecreasing() const {
        for (std::size_t i = 1; i < values.size(); ++i)
            if (values[i].c < values[i - 1].c) return false;
        return true;
    }
    bool within_band() const {
        return std::all_of(values.begin(), values.end(), [&](const CriticalValue& v) { return v.c > a && v.c <= b; });
    }
    bool claims_hold() const {
        return std::all_of(values.begin(), values.end(),
                           [](const CriticalValue& v) { return v.below_is_smaller && v.reaches_k; });
    }
    bool all_in_fixed_values() const {
        return std::all_of(values.begin(), values.end(), [](const CriticalValue& v) { return v.in_fixed_values; });
    }
    bool multiplicities_hold() const {
        return std::all_of(runs.begin(), runs.end(), [](const CriticalRun& r) { return r.multiplicity_holds; });
    }
};

/// c_k = min{c : mu(f^c) >= k} for k = mu(f^a)+1 .. mu(f^b), where
/// mu(A) = nu(A, f^a); the minimum ranges over a and the f-values in ]a,b].
inline CriticalValueTable critical_values(const IndexFunction& nu, const DynamicalPair& p, double a, double b) {
    if (!(a < b)) throw Error(Error::Kind::InvalidArgument, "band needs a < b");
    const PointSet fa = p.sublevel(a);
    auto mu = [&](PointSet A) { return nu(A, fa); };
    CriticalValueTable t;
    t.a = a;
    t.b = b;
    t.mu_a = mu(fa);
    t.mu_b = mu(p.sublevel(b));
    std::vector<double> levels{a};
    for (double v : p.values_on(p.band(a, Bound{b})))
        if (v > a) levels.push_back(v);
    const auto fixed_values = p.values_on(p.fixed());
    for (long long k = t.mu_a + 1; k <= t.mu_b; ++k) {
        CriticalValue cv;
        cv.k = k;
        cv.c = b;
        for (double c : levels)
            if (mu(p.sublevel(c)) >= k) {
                cv.c = c;
                break;
            }
        cv.below_is_smaller = mu(p.strict_sublevel(cv.c)) < k;
        cv.reaches_k = mu(p.sublevel(cv.c)) >= k;
        cv.above_a = cv.c > a;
        cv.in_fixed_values = std::find(fixed_values.begin(), fixed_values.end(), cv.c) != fixed_values.end();
        cv.slice = p.slice(cv.c);
        t.values.push_back(cv);
    }
    for (std::size_t i = 0; i < t.values.size();) {
        std::size_t j = i;
        while (j + 1 < t.values.size() && t.values[j + 1].c == t.values[i].c) ++j;
        CriticalRun run;
        run.c = t.values[i].c;
        run.first_k = t.values[i].k;
        run.r = static_cast<long long>(j - i);
        run.slice = t.values[i].slice;
        run.slice_index = nu(run.slice, 0);
        run.multiplicity_holds = run.slice_index >= run.r + 1;
        t.runs.push_back(run);
        i = j + 1;
    }
    return t;
}

struct IndexInequalityOptions {
    bool check_axioms = true;
    std::uint64_t seed = 0;
};

struct IndexInequalityReport {
    std::vector<Hypothesis> hypotheses;
    long long base_term = 0;                            // nu(f^a, f^a)
    std::vector<std::pair<double, long long>> slice_terms;  // (d_i, nu(F ∩ f^{-1}(d_i)))
    long long lhs = 0, rhs = 0;
    bool inequality_holds = false;
    CriticalValueTable table;
    std::optional<AxiomReport> axioms;
    SupervarianceVerdict supervariance;
    Verdict verdict = Verdict::InequalityHolds;
    std::vector<std::string> failed;  // violated hypotheses
};

/// nu(f^a, f^a) + Σ nu(F ∩ f^{-1}(d_i)) >= nu(f^b, f^a), with every
/// hypothesis checked and every intermediate value recorded.
inline IndexInequalityReport verify_index_inequality(const IndexFunction& nu, const DynamicalPair& p, double a, double b,
                                      const IndexInequalityOptions& opt = {}) {
    if (!(a < b)) throw Error(Error::Kind::InvalidArgument, "band needs a < b");
    const auto& X = p.space();
    IndexInequalityReport r;
    const auto lyap = is_lyapunov(p);
    r.hypotheses.push_back({"lyapunov", lyap.holds ? Hypothesis::Status::holds : Hypothesis::Status::violated,
                            lyap.holds ? "" : "witness " + X.label(*lyap.witness)});
    const auto d = check_condition_D(p, p.closed_band(a, b));
    r.hypotheses.push_back({"condition_D", d.holds ? Hypothesis::Status::holds : Hypothesis::Status::violated, d.analysis});
    r.hypotheses.push_back({"finite_fixed_values", Hypothesis::Status::holds, "finite space"});
    if (opt.check_axioms) {
        r.axioms = check_axioms(nu, opt.seed);
        std::string detail;
        for (const auto* v : {&r.axioms->monotonicity, &r.axioms->continuity, &r.axioms->subadditivity})
            if (!v->holds) detail += (detail.empty() ? "" : "; ") + v->detail;
        r.hypotheses.push_back({"axioms", r.axioms->holds() ? Hypothesis::Status::holds : Hypothesis::Status::violated, detail});
    } else {
        r.hypotheses.push_back({"axioms", Hypothesis::Status::assumed, "not checked"});
    }
    const PointSet fa = p.sublevel(a);
    r.supervariance = check_supervariance(nu, p.map(), fa, opt.seed);
    r.hypotheses.push_back({"supervariance", r.supervariance.holds ? Hypothesis::Status::holds : Hypothesis::Status::violated,
                            r.supervariance.holds ? "" : "witness " + X.format(*r.supervariance.witness)});

    r.base_term = nu(fa, fa);
    r.lhs = r.base_term;
    for (double dv : p.critical_levels(a, Bound{b})) {
        const auto v = nu(p.slice(dv), 0);
        r.slice_terms.emplace_back(dv, v);
        r.lhs += v;
    }
    r.rhs = nu(p.sublevel(b), fa);
    r.inequality_holds = r.lhs >= r.rhs;
    r.table = critical_values(nu, p, a, b);
    r.failed = violated(r.hypotheses);
    if (!r.failed.empty()) r.verdict = Verdict::HypothesisFailed;
    else r.verdict = r.inequality_holds ? Verdict::InequalityHolds : Verdict::Violation;
    return r;
}

// ---------------------------------------------------------------------------
// Random instances: phi fence-connected to the identity, f Lyapunov

inline FiniteSpace random_poset(std::mt19937_64& rng, std::size_t n, double density = 0.35) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::bernoulli_distribution edge(density);
    std::vector<std::pair<std::string, std::string>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (edge(rng)) pairs.emplace_back(labels[order[i]], labels[order[j]]);
    return FiniteSpace::from_relation(std::move(labels), pairs);
}

/// Starts at the identity and applies up to `moves` random one-point changes,
/// each to a value comparable with the old one, keeping continuity. The
/// result is joined to the identity by the fence of intermediate maps.
inline SpaceMap random_map_near_identity(std::mt19937_64& rng, const FiniteSpace& X, int moves,
                                         FenceCertificate* fence = nullptr) {
    SpaceMap phi = SpaceMap::identity(X.size());
    if (fence) fence->maps = {phi};
    std::uniform_int_distribution<std::size_t> pick(0, X.size() - 1);
    for (int done = 0, tries = 0; done < moves && tries < 50 * (moves + 1); ++tries) {
        const auto x = pick(rng);
        const auto cur = phi(x);
        const auto choices = points_of((X.up(cur) | X.down(cur)) & ~bit(cur));
        if (choices.empty()) continue;
        auto img = phi.image();
        img[x] = static_cast<Point>(choices[std::uniform_int_distribution<std::size_t>(0, choices.size() - 1)(rng)]);
        SpaceMap next(img);
        if (!next.is_order_preserving(X, X)) continue;
        phi = next;
        if (fence) fence->maps.push_back(phi);
        ++done;
    }
    return phi;
}

/// Every forward orbit ends in a fixed point (no cycles of length > 1).
inline bool has_only_trivial_cycles(const SpaceMap& phi) {
    const auto n = phi.source_size();
    for (std::size_t x = 0; x < n; ++x) {
        std::size_t y = x;
        for (std::size_t k = 0; k < n; ++k) y = phi(y);
        if (phi(y) != y) return false;
    }
    return true;
}

/// Integer values with f(phi(x)) < f(x) off the fixed points; fixed points
/// get random levels in [0, 3] (ties allowed).
inline std::vector<double> random_lyapunov_function(std::mt19937_64& rng, const SpaceMap& phi) {
    const auto n = phi.source_size();
    std::vector<double> f(n, std::numeric_limits<double>::quiet_NaN());
    std::uniform_int_distribution<int> base(0, 3), step(1, 2);
    for (std::size_t x = 0; x < n; ++x)
        if (phi(x) == x) f[x] = base(rng);
    bool progress = true;
    while (progress) {
        progress = false;
        for (std::size_t x = 0; x < n; ++x)
            if (std::isnan(f[x]) && !std::isnan(f[phi(x)])) {
                f[x] = f[phi(x)] + step(rng);
                progress = true;
            }
    }
    return f;
}

struct RandomInstance {
    DynamicalPair pair;
    FenceCertificate fence;  // identity to phi
    double a = 0, b = 0;
};

inline RandomInstance random_instance(std::mt19937_64& rng, std::size_t max_points = 7) {
    std::uniform_int_distribution<std::size_t> size(1, max_points);
    std::uniform_int_distribution<int> moves(0, 4);
    while (true) {
        const auto X = random_poset(rng, size(rng));
        FenceCertificate fence;
        const auto phi = random_map_near_identity(rng, X, moves(rng), &fence);
        if (!has_only_trivial_cycles(phi)) continue;
        auto f = random_lyapunov_function(rng, phi);
        const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
        std::uniform_int_distribution<int> half(static_cast<int>(*lo) - 1, static_cast<int>(*hi));
        int i = half(rng), j = half(rng);
        if (i == j) continue;
        if (i > j) std::swap(i, j);
        return RandomInstance{DynamicalPair(X, phi, std::move(f)), std::move(fence), i + 0.5, j + 0.5};
    }
}

}  // namespace lslab
