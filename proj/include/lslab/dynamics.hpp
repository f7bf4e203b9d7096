#pragma once

// Theorem-level verifiers: lower bounds for fixed points of homotopy
// equivalences, of maps homotopic to the identity, of semiflows and of
// homeomorphisms, each with a hypothesis ledger.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lslab/category.hpp"
#include "lslab/core.hpp"
#include "lslab/dynamical_pair.hpp"
#include "lslab/fence.hpp"
#include "lslab/group_action.hpp"
#include "lslab/index_engine.hpp"

namespace lslab {

struct PartReport {
    std::string part;
    std::vector<Hypothesis> hypotheses;  // part-specific, in addition to the shared ledger
    ExtNat lhs;
    Difference rhs;
    bool inequality_holds = false;
    Verdict verdict = Verdict::InequalityHolds;
    std::vector<std::pair<std::string, ExtNat>> values;
};

struct TheoremReport {
    std::string theorem;
    std::vector<Hypothesis> hypotheses;
    std::vector<PartReport> parts;
    std::vector<std::pair<std::string, std::string>> notes;
    std::vector<std::pair<double, long long>> deformation_exponents;  // (k, n_k)

    const PartReport* part(const std::string& name) const {
        for (const auto& p : parts)
            if (p.part == name) return &p;
        return nullptr;
    }

    /// Violation dominates HypothesisFailed, which dominates InequalityHolds.
    Verdict verdict() const {
        Verdict v = Verdict::InequalityHolds;
        for (const auto& p : parts) {
            if (p.verdict == Verdict::Violation) return Verdict::Violation;
            if (p.verdict == Verdict::HypothesisFailed) v = Verdict::HypothesisFailed;
        }
        return v;
    }
};

namespace detail {

inline void finish_part(PartReport& p, const std::vector<Hypothesis>& shared) {
    p.inequality_holds = dominates(p.lhs, p.rhs);
    const bool failed = !violated(shared).empty() || !violated(p.hypotheses).empty();
    p.verdict = failed ? Verdict::HypothesisFailed
                       : (p.inequality_holds ? Verdict::InequalityHolds : Verdict::Violation);
}

inline Hypothesis check(std::string name, bool ok, std::string detail = {}) {
    return {std::move(name), ok ? Hypothesis::Status::holds : Hypothesis::Status::violated, std::move(detail)};
}

inline Hypothesis equivariance(const GroupAction& G, const DynamicalPair& p) {
    if (!G.is_G_map(p.map())) return check("equivariant_map", false, "the map does not commute with the action");
    if (!G.is_invariant_function(p.values()))
        return check("invariant_function", false, "f is not constant on orbits");
    return check("equivariance", true);
}

inline Hypothesis condition_D(const DynamicalPair& p, PointSet Y) {
    const auto d = check_condition_D(p, Y);
    return check("condition_D", d.holds, d.analysis);
}

/// Σ over d in f(F) ∩ ]a,b] of cost(F ∩ f^{-1}(d)).
template <typename Cost>
ExtNat slice_sum(const DynamicalPair& p, PointSet F, double a, const Bound& b, Cost&& cost) {
    ExtNat s = 0;
    for (double d : p.values_on(F & p.band(a, b))) s = s + cost(F & p.level(d));
    return s;
}

inline PointSet band_fixed(const DynamicalPair& p, double a, const Bound& b) { return p.fixed() & p.band(a, b); }

inline PointSet upper_closed_band(const DynamicalPair& p, double a, const Bound& b) {
    return p.sublevel(b) & ~p.strict_sublevel(a);
}

inline std::string point_list(const FiniteSpace& X, PointSet s) { return X.format(s); }

}  // namespace detail

/// Equivalence classes of G-orbits in S (f equal, same type, mutually
/// G-deformable), as unions of orbits.
inline std::vector<PointSet> orbit_classes(const GroupAction& G, const std::vector<double>& f, PointSet S,
                                           const Limits& limits = {}) {
    const auto orbs = G.orbits(S);
    std::vector<std::size_t> parent(orbs.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < orbs.size(); ++i)
        for (std::size_t j = i + 1; j < orbs.size(); ++j) {
            if (find(i) == find(j)) continue;
            const auto x = static_cast<std::size_t>(std::countr_zero(orbs[i]));
            const auto y = static_cast<std::size_t>(std::countr_zero(orbs[j]));
            if (orbit_equivalent(G, x, y, f, limits)) parent[find(j)] = find(i);
        }
    std::vector<PointSet> out;
    for (std::size_t i = 0; i < orbs.size(); ++i) {
        const auto r = find(i);
        if (r == i) out.push_back(0);
    }
    std::vector<std::size_t> slot(orbs.size());
    for (std::size_t i = 0, k = 0; i < orbs.size(); ++i)
        if (find(i) == i) slot[i] = k++;
    for (std::size_t i = 0; i < orbs.size(); ++i) out[slot[find(i)]] |= orbs[i];
    return out;
}

/// Fixed-point lower bounds for a G-homotopy equivalence: parts (a), (b), (c).
/// b must be finite.
inline TheoremReport verify_homotopy_equivalence_bounds(const DynamicalPair& p, const CategoryEngine& engine, double a,
                                                        const Bound& b) {
    using namespace detail;
    if (b.infinite)
        throw Error(Error::Kind::InvalidArgument, "b = inf is not allowed for homotopy equivalences");
    if (!(a < b.value)) throw Error(Error::Kind::InvalidArgument, "band needs a < b");
    const auto& X = p.space();
    const auto& G = engine.action();
    TheoremReport r;
    r.theorem = "homotopy_equivalence";
    r.hypotheses.push_back(equivariance(G, p));
    const bool he = homotopy_inverse(G, p.map(), engine.limits()).has_value();
    r.hypotheses.push_back(check("homotopy_equivalence", he, he ? "" : "no equivariant homotopy inverse exists"));
    r.hypotheses.push_back(condition_D(p, p.closed_band(a, b.value)));
    const ExtNat cat_a = engine.gcat(p.sublevel(a));
    r.hypotheses.push_back(check("finite_sublevel_category", cat_a.is_finite(), "gcat f^a = " + cat_a.str()));

    const PointSet F = p.fixed();
    const ExtNat cat_b = engine.gcat(p.sublevel(b));
    const Difference rhs{cat_b, cat_a};

    PartReport pa;
    pa.part = "a";
    pa.lhs = slice_sum(p, F, a, b, [&](PointSet s) { return engine.gcat(s); });
    pa.rhs = rhs;
    pa.values = {{"gcat_fb", cat_b}, {"gcat_fa", cat_a}};
    finish_part(pa, r.hypotheses);
    r.parts.push_back(pa);

    const PointSet S = band_fixed(p, a, b);
    const bool anr = X.is_discrete();
    const Hypothesis anr_h =
        check("binormal_ANR", anr, anr ? "" : "a non-discrete finite space is not an ANR");

    PartReport pb;
    pb.part = "b";
    pb.hypotheses.push_back(anr_h);
    bool covered = true;
    for (auto o : G.orbits(S))
        covered = covered && engine.orbit_class().contains_type(G, G.stabilizer(std::countr_zero(o)));
    pb.hypotheses.push_back(check("orbit_types_covered", covered));
    const auto classes = orbit_classes(G, p.values(), S, engine.limits());
    pb.lhs = static_cast<long long>(classes.size());
    pb.rhs = rhs;
    pb.values = {{"orbits", static_cast<long long>(G.orbits(S).size())}};
    finish_part(pb, r.hypotheses);
    r.parts.push_back(pb);

    PartReport pc;
    pc.part = "c";
    pc.hypotheses.push_back(anr_h);
    pc.hypotheses.push_back(check("discrete_fixed_values", true, "finitely many values"));
    pc.lhs = S ? subspace_engine(engine, S)->gcat(full_set(static_cast<std::size_t>(popcount(S)))) : ExtNat(0);
    pc.rhs = rhs;
    finish_part(pc, r.hypotheses);
    r.parts.push_back(pc);
    return r;
}

/// Checks that `fence` runs from the identity to phi through G-maps; when
/// `keep` is given, every stage must also map keep into keep.
inline bool is_fence_to_identity(const GroupAction& G, const FenceCertificate& fence, const SpaceMap& phi,
                                 std::optional<PointSet> keep = std::nullopt) {
    const auto& X = G.space();
    if (fence.maps.empty() || !(fence.front() == SpaceMap::identity(X.size())) || !(fence.back() == phi)) return false;
    if (!fence.validate(X, G.is_trivial() ? nullptr : &G)) return false;
    if (keep)
        for (const auto& m : fence.maps)
            if (!is_subset(m.apply(*keep), *keep)) return false;
    return true;
}

/// Least n with phi^n(S) ⊆ T, or nullopt when the iterates stabilize first.
inline std::optional<long long> iterations_into(const SpaceMap& phi, PointSet S, PointSet T) {
    std::vector<PointSet> seen;
    for (long long n = 0;; ++n) {
        if (is_subset(S, T)) return n;
        if (std::find(seen.begin(), seen.end(), S) != seen.end()) return std::nullopt;
        seen.push_back(S);
        S = phi.apply(S);
    }
}

struct HomotopicToIdentityOptions {
    std::optional<FenceCertificate> homotopy;  // identity to phi; searched when absent
};

/// Bounds for a G-map G-homotopic to the identity: parts I, II, semi, III.
/// b may be infinite (f^inf = X). Throws FenceNotFound when phi is not
/// G-fence-homotopic to the identity.
inline TheoremReport verify_homotopic_to_identity_bounds(const DynamicalPair& p, const CategoryEngine& engine, double a,
                                                         const Bound& b,
                                                         const HomotopicToIdentityOptions& opt = {}) {
    using namespace detail;
    if (!b.infinite && !(a < b.value)) throw Error(Error::Kind::InvalidArgument, "band needs a < b");
    const auto& X = p.space();
    const auto& G = engine.action();
    const auto id = SpaceMap::identity(X.size());
    TheoremReport r;
    r.theorem = "homotopic_to_identity";
    r.hypotheses.push_back(equivariance(G, p));

    FenceCertificate homotopy;
    if (opt.homotopy && is_fence_to_identity(G, *opt.homotopy, p.map())) {
        homotopy = *opt.homotopy;
    } else {
        auto found = G.is_G_map(p.map()) ? G_homotopic(G, id, p.map(), engine.limits()) : std::nullopt;
        if (!found) throw Error(Error::Kind::FenceNotFound, "the map is not G-fence-homotopic to the identity");
        homotopy = std::move(*found);
    }
    r.hypotheses.push_back(check("homotopic_to_identity", true, std::to_string(homotopy.steps()) + " fence steps"));
    r.hypotheses.push_back(condition_D(p, upper_closed_band(p, a, b)));

    const PointSet fa = p.sublevel(a);
    const PointSet fb = p.sublevel(b);
    const PointSet F = p.fixed();
    const ExtNat cat_a = engine.gcat(fa);
    const ExtNat lhs = slice_sum(p, F, a, b, [&](PointSet s) { return engine.gcat(s); });

    // Neighborhood assumptions of parts II and III, on the smallest open
    // neighborhood of f^a. Finite models allow a discontinuous f, so these
    // are checked for every a, fixed value or not.
    const PointSet nb = X.up_closure(fa);
    const bool nb_ok = engine.is_deformable(nb, fa, false);
    const Hypothesis nbhd = check("neighborhood_deformable", nb_ok,
                                  "open neighborhood " + X.format(nb) + (nb_ok ? " deforms" : " does not deform") +
                                      " into f^a");
    const bool nb_mod_ok = engine.is_deformable(nb, fa, true);
    const Hypothesis nbhd_mod = check("neighborhood_deformable_mod", nb_mod_ok,
                                      "open neighborhood " + X.format(nb) +
                                          (nb_mod_ok ? " deforms" : " does not deform") + " into f^a mod f^a");

    // Part III: a homotopy keeping f^a in f^a.
    Hypothesis keeps = check("homotopy_keeps_sublevel", true, "supplied homotopy keeps f^a");
    if (!is_fence_to_identity(G, homotopy, p.map(), fa)) {
        MapSearch search({&X, G.is_trivial() ? nullptr : &G, X.all(), fa, fa}, engine.limits());
        const auto target = search.encode(p.map());
        std::optional<FenceCertificate> kept;
        try {
            kept = search.find(id, [&](MapSearch::Key k) { return k == target; });
        } catch (const Error& e) {
            if (e.kind() != Error::Kind::SizeCapExceeded) throw;
        }
        keeps = check("homotopy_keeps_sublevel", kept.has_value(),
                      kept ? "found a fence keeping f^a" : "no fence from the identity keeps f^a inside f^a");
    }

    PartReport p1;
    p1.part = "I";
    p1.hypotheses.push_back(check("finite_sublevel_category", cat_a.is_finite(), "gcat f^a = " + cat_a.str()));
    p1.lhs = lhs;
    p1.rhs = Difference{engine.gcat(fb), cat_a};
    p1.values = {{"gcat_fb", p1.rhs.minuend}, {"gcat_fa", cat_a}};
    finish_part(p1, r.hypotheses);
    r.parts.push_back(p1);

    PartReport p2;
    p2.part = "II";
    p2.hypotheses.push_back(nbhd);
    p2.lhs = lhs;
    p2.rhs = Difference{engine.gcat_pair(fb, fa)};
    finish_part(p2, r.hypotheses);
    r.parts.push_back(p2);

    if (!b.infinite) {
        PartReport ps;
        ps.part = "semi";
        ps.hypotheses.push_back(nbhd);
        ps.lhs = lhs;
        ps.rhs = Difference{engine.gcat_semi(fb, fa)};
        finish_part(ps, r.hypotheses);
        r.parts.push_back(ps);
    }

    PartReport p3;
    p3.part = "III";
    p3.hypotheses.push_back(nbhd);
    p3.hypotheses.push_back(nbhd_mod);
    p3.hypotheses.push_back(keeps);
    p3.lhs = lhs;
    p3.rhs = Difference{engine.gcat_mod(fb, fa)};
    {
        // The truncated mod index at the level the bound needs.
        const long long N = p3.rhs.minuend.is_finite() ? std::max<long long>(1, p3.rhs.minuend.value())
                                                       : (lhs.is_finite() ? lhs.value() + 1 : 1);
        const std::shared_ptr<const CategoryEngine> view(std::shared_ptr<void>{}, &engine);
        const auto ax = check_axioms(make_nu(3, N, view));
        std::string detail = "mod index truncated at " + std::to_string(N);
        for (const auto* v : {&ax.monotonicity, &ax.continuity, &ax.subadditivity})
            if (!v->holds) detail += "; " + v->detail;
        p3.hypotheses.push_back(check("mod_index_axioms", ax.holds(), detail));
    }
    finish_part(p3, r.hypotheses);
    r.parts.push_back(p3);

    // Deformation exponents n_k = min{n : phi^n(f^k) ⊆ f^c} for c above the
    // largest fixed value in the band.
    const auto band_values = p.values_on(F & p.band(a, b));
    const double top = band_values.empty() ? a : band_values.back();
    const double c = top + p.half_gap();
    const PointSet fc = p.sublevel(c);
    const auto all_values = p.values_on(X.all());
    const double lo = std::floor(all_values.front());
    const double hi = std::ceil(b.infinite ? all_values.back() : std::min(b.value, all_values.back()));
    for (double k = lo; k <= hi; k += 1) {
        const auto n = iterations_into(p.map(), p.sublevel(k), fc);
        r.deformation_exponents.emplace_back(k, n ? *n : -1);
    }
    r.notes.emplace_back("deformation_level", Bound{c}.str());
    r.notes.emplace_back("deformable_to_fc", engine.is_deformable(fb, fc, false) ? "true" : "false");
    return r;
}

struct NonDeformableSlices {
    std::size_t fixed_value_count = 0;
    Difference bound;
    bool applies = false;            // count < bound
    bool degenerate = false;         // no fixed points in the band
    std::vector<PointSet> slices;    // F_d not G-deformable to one orbit inside the band
};

/// When f(F) ∩ ]a,b] has fewer elements than gcat f^b - gcat f^a, some F_d
/// is not G-deformable to a G-orbit in f^{-1}]a,b].
inline NonDeformableSlices detect_non_deformable_slices(const DynamicalPair& p, const CategoryEngine& engine, double a,
                                                        double b) {
    if (!(a < b)) throw Error(Error::Kind::InvalidArgument, "band needs a < b");
    const auto& G = engine.action();
    if (!G.is_G_map(p.map()) || !G.is_invariant_function(p.values()))
        throw Error(Error::Kind::HypothesisUnmet, "map and function must be equivariant");
    if (!homotopy_inverse(G, p.map(), engine.limits()))
        throw Error(Error::Kind::HypothesisUnmet, "the map is not a G-homotopy equivalence");
    if (!check_condition_D(p, p.closed_band(a, b)).holds)
        throw Error(Error::Kind::HypothesisUnmet, "condition (D) fails on f^{-1}[a,b]");
    const PointSet S = p.fixed() & p.band(a, b);
    for (auto o : G.orbits(S))
        if (!engine.orbit_class().contains_type(G, G.stabilizer(std::countr_zero(o))))
            throw Error(Error::Kind::HypothesisUnmet, "the class misses an orbit type of F");
    NonDeformableSlices r;
    const auto values = p.values_on(S);
    r.fixed_value_count = values.size();
    r.bound = Difference{engine.gcat(p.sublevel(b)), engine.gcat(p.sublevel(a))};
    r.applies = !dominates(static_cast<long long>(r.fixed_value_count), r.bound);
    r.degenerate = values.empty();
    if (!r.applies) return r;
    const PointSet band = p.band(a, Bound{b});
    const auto targets = G.orbits(band);
    for (double d : values) {
        const PointSet Fd = S & p.level(d);
        bool deformable = false;
        for (auto o : targets)
            if (deformation_to(G, Fd, o, false, engine.limits())) {
                deformable = true;
                break;
            }
        if (!deformable) r.slices.push_back(Fd);
    }
    return r;
}

/// Rest points of the discrete semiflow generated by phi: points fixed by
/// every iterate.
inline PointSet rest_points(const SpaceMap& phi) {
    PointSet R = phi.fixed_points();
    SpaceMap power = phi;
    for (std::size_t n = 2; n <= phi.source_size() + 1; ++n) {
        power = power.then(phi);
        R &= power.fixed_points();
    }
    return R;
}

/// The iterates of phi as a gradient-like semiflow: rest points R equal the
/// fixed points F, and the lower bounds by gcat X, the number of rest orbits
/// and gcat R.
inline TheoremReport verify_semiflow(const DynamicalPair& p, const CategoryEngine& engine) {
    using namespace detail;
    const auto& X = p.space();
    const auto& G = engine.action();
    TheoremReport r;
    r.theorem = "semiflow";
    const PointSet F = p.fixed();
    const PointSet R = rest_points(p.map());
    r.notes.emplace_back("rest_points", X.format(R));
    r.notes.emplace_back("fixed_equals_rest", F == R ? "true" : "false");
    r.hypotheses.push_back(equivariance(G, p));
    const auto lyap = is_lyapunov(p);
    r.hypotheses.push_back(check("gradient_like", lyap.holds, lyap.holds ? "" : "f increases at " + X.label(*lyap.witness)));
    r.hypotheses.push_back(condition_D(p, X.all()));
    r.hypotheses.push_back(check("fixed_equals_rest", F == R));

    const auto values = p.values_on(X.all());
    const double a = values.front() - 1;
    const ExtNat cat_X = engine.gcat(X.all());

    PartReport pa;
    pa.part = "a";
    pa.lhs = slice_sum(p, R, a, Bound::inf(), [&](PointSet s) { return engine.gcat(s); });
    pa.rhs = Difference{cat_X};
    finish_part(pa, r.hypotheses);
    r.parts.push_back(pa);

    const bool anr = X.is_discrete();
    const Hypothesis anr_h = check("binormal_ANR", anr, anr ? "" : "a non-discrete finite space is not an ANR");

    PartReport pb;
    pb.part = "b";
    pb.hypotheses.push_back(anr_h);
    bool covered = true;
    for (auto o : G.orbits(R))
        covered = covered && engine.orbit_class().contains_type(G, G.stabilizer(std::countr_zero(o)));
    pb.hypotheses.push_back(check("orbit_types_covered", covered));
    pb.lhs = static_cast<long long>(G.orbits(R).size());
    pb.rhs = Difference{cat_X};
    finish_part(pb, r.hypotheses);
    r.parts.push_back(pb);

    PartReport pc;
    pc.part = "c";
    pc.hypotheses.push_back(anr_h);
    pc.lhs = R ? subspace_engine(engine, R)->gcat(full_set(static_cast<std::size_t>(popcount(R)))) : ExtNat(0);
    pc.rhs = Difference{cat_X};
    finish_part(pc, r.hypotheses);
    r.parts.push_back(pc);
    return r;
}

/// Lower bound in terms of the reference-class count for a G-homeomorphism
/// (part "map") and for the flow of its iterates (part "flow", over rest
/// points). The engine's references form the class.
inline TheoremReport verify_homeomorphism_bounds(const DynamicalPair& p, const CategoryEngine& engine, double a,
                                                 double b) {
    using namespace detail;
    if (!(a < b)) throw Error(Error::Kind::InvalidArgument, "band needs a < b");
    const auto& X = p.space();
    const auto& G = engine.action();
    TheoremReport r;
    r.theorem = "homeomorphism";
    r.hypotheses.push_back(equivariance(G, p));
    const bool homeo = p.map().is_automorphism(X);
    r.hypotheses.push_back(check("homeomorphism", homeo, homeo ? "" : "the map is not an order automorphism"));
    r.hypotheses.push_back(condition_D(p, p.closed_band(a, b)));
    const ExtNat ref_a = engine.gcat_classB(p.sublevel(a));
    r.hypotheses.push_back(check("finite_sublevel_count", ref_a.is_finite(), "B_X f^a = " + ref_a.str()));
    const ExtNat ref_b = engine.gcat_classB(p.sublevel(b));

    PartReport pm;
    pm.part = "map";
    pm.lhs = slice_sum(p, p.fixed(), a, Bound{b}, [&](PointSet s) { return engine.gcat_classB(s); });
    pm.rhs = Difference{ref_b, ref_a};
    finish_part(pm, r.hypotheses);
    r.parts.push_back(pm);

    PartReport pf;
    pf.part = "flow";
    const PointSet R = rest_points(p.map());
    pf.hypotheses.push_back(check("fixed_equals_rest", R == p.fixed()));
    pf.lhs = slice_sum(p, R, a, Bound{b}, [&](PointSet s) { return engine.gcat_classB(s); });
    pf.rhs = pm.rhs;
    finish_part(pf, r.hypotheses);
    r.parts.push_back(pf);
    return r;
}

}  // namespace lslab
