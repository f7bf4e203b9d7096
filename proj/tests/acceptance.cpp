// One line per acceptance criterion. Exit status is 0 when every criterion
// passes or fails only in the documented way listed in kKnownFailures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "lslab/scenario.hpp"
#include "oracles.hpp"

using namespace lslab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
    bool documented = false;  // the failure is exactly the one recorded in kKnownFailures
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

/// Criteria whose failure is expected, with the reason printed next to it.
const std::map<int, std::string> kKnownFailures{
    {9, "the mod index is not subadditive on C4: nu(B,Y) = N for B = Y = {p,q} while nu(0,Y) + nu(B,0) = 0 + 2; monotonicity and continuity hold, and nu1, nu2 satisfy every axiom"},
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

PointSet sublevel(const DynamicalPair& p, double c) {
    PointSet s = 0;
    for (std::size_t x = 0; x < p.space().size(); ++x)
        if (p.f(x) <= c) s |= bit(x);
    return s;
}

/// 1 + cup-length for a space whose order complex is at most 1-dimensional:
/// cup products land in degree 2 and vanish, so the length is 1 exactly when
/// H^1 is nonzero. H^1 has rank E - V + components.
long long graph_cuplength_bound(const FiniteSpace& X) {
    long long edges = 0;
    for (std::size_t x = 0; x < X.size(); ++x)
        for (std::size_t y = 0; y < X.size(); ++y) {
            if (!X.less(x, y)) continue;
            for (std::size_t z = 0; z < X.size(); ++z)
                if (X.less(y, z)) return -1;
            ++edges;
        }
    const long long rank = edges - static_cast<long long>(X.size()) + static_cast<long long>(X.components(X.all()).size());
    return rank > 0 ? 2 : 1;
}

Outcome criterion1() {
    std::ostringstream os;
    bool ok = true;
    double worst = 0;
    auto timed = [&](const char* what, long long got, long long want, long long oracle) {
        os << what << " " << got << (got == want && got == oracle ? "" : " (want " + std::to_string(want) + ", oracle " + std::to_string(oracle) + ")") << "; ";
        ok = ok && got == want && got == oracle;
    };
    const auto C = fixtures::C4();
    const auto V = fixtures::V();
    auto t0 = Clock::now();
    timed("gcat(C4)", oracle::value(CategoryEngine::classical(C).gcat(C.all())), 2, oracle::gcat(C, C.all()));
    worst = std::max(worst, seconds_since(t0));
    t0 = Clock::now();
    timed("gcat(V)", oracle::value(CategoryEngine::classical(V).gcat(V.all())), 1, oracle::gcat(V, V.all()));
    worst = std::max(worst, seconds_since(t0));
    t0 = Clock::now();
    timed("cuplength bound(C4)", static_cast<long long>(cuplength_lower_bound(C)), 2, graph_cuplength_bound(C));
    worst = std::max(worst, seconds_since(t0));
    ok = ok && worst < 5;
    os << fmt("slowest %.3fs", worst);
    return {ok, os.str()};
}

Outcome criterion2() {
    const auto A = fixtures::ARC3();
    const auto eA = CategoryEngine::classical(A);
    const PointSet Y = A.parse_set({"l", "r"});
    const auto mod = eA.gcat_mod(A.all(), Y), pair = eA.gcat_pair(A.all(), Y);
    const auto X = fixtures::TWO_CIRCLES();
    const auto eX = CategoryEngine::classical(X);
    const PointSet S = fixtures::TWO_CIRCLES_S(X);
    const auto p2 = eX.gcat_pair(X.all(), S);
    const Difference diff{eX.gcat(X.all()), eX.gcat(S)};
    const bool ok = mod == ExtNat(1) && pair == ExtNat(0) && p2 == ExtNat(1) && diff.minuend == ExtNat(2) &&
                    diff.subtrahend == ExtNat(2) && !dominates(ExtNat(0), Difference{p2, 0}) &&
                    oracle::value(mod) == oracle::gcat_rel(A, A.all(), Y, oracle::Rel::mod) &&
                    oracle::value(pair) == oracle::gcat_rel(A, A.all(), Y, oracle::Rel::pair);
    return {ok, "ARC3 mod " + mod.str() + " > pair " + pair.str() + "; TWO_CIRCLES pair " + p2.str() + " > " + diff.str()};
}

Outcome criterion3() {
    const auto G = fixtures::C4_conjugation();
    const CategoryEngine e(G, HomogeneousClass::point(G));
    const auto g = e.gcat(G.space().all());
    const auto q = quotient(G);
    const auto qc = CategoryEngine::classical(q.space).gcat(q.space.all());
    return {g >= ExtNat(2) && qc == ExtNat(1) && oracle::value(qc) == oracle::gcat(q.space, q.space.all()),
            "equivariant gcat " + g.str() + " > quotient cat " + qc.str()};
}

Outcome criterion4() {
    const auto t0 = Clock::now();
    SweepOptions opt;
    opt.instances = 1000;
    opt.max_points = 7;
    opt.seed = 2024;
    opt.persist_dir = (std::filesystem::temp_directory_path() / "lslab_acceptance_violations").string();
    std::filesystem::remove_all(opt.persist_dir);
    const auto s = run_engine_sweep(opt);
    const double t = seconds_since(t0);
    const bool ok = s.instances >= 1000 && s.passing_ledger > 0 && s.holds == s.passing_ledger && s.violations == 0 &&
                    s.persisted.empty() && t < 300;
    return {ok, fmt("%zu instances, %zu with a passing ledger, %zu hold, %zu violations, %zu persisted, %.1fs", s.instances,
                    s.passing_ledger, s.holds, s.violations, s.persisted.size(), t)};
}

Outcome criterion5() {
    const auto fx = fixtures::C4_constant();
    const auto r = verify_index_inequality(make_nu(1, 5, shared_classical(fx.pair.space())), fx.pair, fx.a, fx.b.value);
    const bool ok = r.lhs == 1 && r.rhs == 2 && r.verdict == Verdict::HypothesisFailed &&
                    r.failed == std::vector<std::string>{"supervariance"};
    std::string failed;
    for (const auto& f : r.failed) failed += (failed.empty() ? "" : ",") + f;
    return {ok, fmt("lhs %lld < rhs %lld, ", r.lhs, r.rhs) + to_string(r.verdict) + "(" + failed + ")"};
}

Outcome criterion6() {
    std::mt19937_64 rng(6);
    int checked = 0, minimal = 0;
    for (int trial = 0; checked < 200 && trial < 20000; ++trial) {
        const auto inst = random_instance(rng, 7);
        const auto& p = inst.pair;
        const auto& X = p.space();
        const double a = inst.a, b = inst.b;
        PointSet top = 0;
        for (std::size_t x = 0; x < X.size(); ++x)
            if (p.map()(x) == x && p.f(x) == b) top |= bit(x);
        const PointSet U = X.up_closure(top);
        IterationResult r;
        try {
            r = iterate_into_sublevel(p, U, a, b);
        } catch (const Error&) {
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
        int least = 0;
        while (image_after(least) & ~T) ++least;
        minimal += least == r.n && r.n <= r.bound;
        ++checked;
    }
    return {checked == 200 && minimal == 200, fmt("%d of %d iteration counts minimal", minimal, checked)};
}

Outcome criterion7() {
    std::mt19937_64 rng(7);
    int ordered = 0;
    const int total = 300;
    for (int trial = 0; trial < total; ++trial) {
        const auto inst = random_instance(rng, 5);
        const auto e = CategoryEngine::classical(inst.pair.space());
        HomotopicToIdentityOptions opt;
        opt.homotopy = inst.fence;
        const auto r = verify_homotopic_to_identity_bounds(inst.pair, e, inst.a, Bound{inst.b}, opt);
        const auto &I = *r.part("I"), &II = *r.part("II"), &semi = *r.part("semi"), &III = *r.part("III");
        ordered += III.rhs.minuend >= semi.rhs.minuend && semi.rhs.minuend >= II.rhs.minuend &&
                   dominates(II.rhs.minuend, I.rhs);
    }
    const auto w = fixtures::WEDGE();
    const auto rw = verify_homotopic_to_identity_bounds(w.pair, CategoryEngine::classical(w.pair.space()), w.a, w.b);
    const auto h = fixtures::HALFCIRC_SQ();
    const auto rh = verify_homotopic_to_identity_bounds(h.pair, CategoryEngine::classical(h.pair.space()), h.a, h.b);
    const auto& wI = rw.part("I")->rhs;
    const auto& wII = rw.part("II")->rhs.minuend;
    const auto& hII = rh.part("II")->rhs.minuend;
    const auto& hIII = rh.part("III")->rhs.minuend;
    const bool low_strict = !dominates(ExtNat(0), Difference{wII, 0}) && dominates(ExtNat(0), wI);
    const bool high_strict = hIII > hII;
    return {ordered == total && low_strict && high_strict,
            fmt("chain ordered on %d/%d; ", ordered, total) + "WEDGE pair " + wII.str() + " > " + wI.str() +
                "; HALFCIRC_SQ mod " + hIII.str() + " > pair " + hII.str()};
}

Outcome criterion8() {
    using namespace numeric;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(8);
    std::normal_distribution<double> N(0, 1);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        const int dim = 2 + i % 3;
        const auto F = random_quadratic(rng, dim);
        Vec m(dim);
        for (int k = 0; k < dim; ++k) m(k) = N(rng);
        worst = std::max(worst, check_energy_identity(F, m, FlowConfig{1.0, 1e-3}).residual);
    }
    FlowChainConfig cfg;
    cfg.flow = FlowConfig{1.0, 1e-3};
    cfg.probe = [](double s) {
        Vec v = Vec::Zero(2);
        v(0) = s;
        return v;
    };
    const auto chain = verify_flow_chain(quadratic(), cfg);
    double ratio = 0;
    for (const auto& st : chain.steps) ratio = std::max(ratio, st.length / st.bound);
    std::vector<Vec> samples;
    for (int k = 1; k <= 40; ++k) {
        Vec v(1);
        v(0) = std::ldexp(0.9, -k);
        samples.push_back(v);
    }
    const auto d = check_condition_D_sampled(halving_pair(), samples);
    const double t = seconds_since(t0);
    const bool ok = worst <= 1e-5 && chain.chain_holds && chain.steps.back().n == 10000 && ratio <= 1.1 && !d.holds && t < 120;
    return {ok, fmt("energy residual %.2e; chain %s to n=%d, length/(tau/sqrt n) <= %.3f; halving condition D %s; %.1fs", worst,
                    chain.chain_holds ? "holds" : "fails", chain.steps.back().n, ratio,
                    d.holds ? "not flagged" : "violation reported", t)};
}

Outcome criterion9() {
    struct Named {
        std::string name;
        std::shared_ptr<const CategoryEngine> engine;
    };
    std::vector<Named> spaces;
    for (auto [name, X] : {std::pair{"V", fixtures::V()}, std::pair{"C4", fixtures::C4()}, std::pair{"ARC3", fixtures::ARC3()}})
        spaces.push_back({name, shared_classical(X)});
    const auto G = fixtures::C4_conjugation();
    spaces.push_back({"C4/conjugation", std::make_shared<CategoryEngine>(G, HomogeneousClass::point(G))});
    std::string failures;
    int checks = 0;
    bool only_mod_subadditivity = true;
    for (const auto& s : spaces) {
        if (s.engine->space().size() > 6) continue;
        for (int variant = 1; variant <= 3; ++variant) {
            const auto ax = check_axioms(make_nu(variant, 8, s.engine));
            ++checks;
            if (ax.sampled) failures += " " + s.name + " sampled;";
            only_mod_subadditivity = only_mod_subadditivity && !ax.sampled && ax.monotonicity.holds && ax.continuity.holds &&
                                     (variant == 3 || ax.subadditivity.holds);
            if (!ax.holds()) {
                failures += " nu" + std::to_string(variant) + " on " + s.name + ":";
                for (const auto* v : {&ax.monotonicity, &ax.continuity, &ax.subadditivity})
                    if (!v->holds) failures += " " + v->detail;
                failures += ";";
            }
        }
    }
    if (failures.empty()) return {true, fmt("%d exhaustive checks hold", checks)};
    return {false, fmt("%d exhaustive checks;", checks) + failures, only_mod_subadditivity};
}

Outcome criterion10() {
    std::ostringstream os;
    bool ok = true;
    const std::vector<std::pair<std::string, SimplicialComplex>> cases{
        {"torus", torus7()}, {"circle", triangle_boundary()}, {"C4 order complex", order_complex(fixtures::C4())}};
    for (const auto& [name, K] : cases) {
        const auto cl = cuplength(K);
        const auto sc = star_cover_upper_bound(K);
        ok = ok && cl + 1 <= sc.size;
        if (name == "torus") ok = ok && cl == 2 && sc.size >= 3;
        os << name << " " << cl + 1 << " <= " << sc.size << "; ";
    }
    std::string s = os.str();
    return {ok, s.substr(0, s.size() - 2)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"category values", criterion1},       {"relative variants", criterion2},   {"equivariant vs quotient", criterion3},
        {"index engine sweep", criterion4},    {"constant map on C4", criterion5},   {"iteration count", criterion6},
        {"bound chain", criterion7},           {"numeric backend", criterion8},      {"index axioms", criterion9},
        {"cup-length vs star covers", criterion10},
    };
    int unexpected = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const auto known = kKnownFailures.find(id);
        std::string status = o.pass ? "PASS" : "FAIL";
        if (!o.pass && known != kKnownFailures.end() && o.documented) status = "FAIL (known)";
        else if (!o.pass) ++unexpected;
        else if (known != kKnownFailures.end()) status = "PASS (listed as known failure)";
        std::printf("[%2d] %-26s %-13s %s (%.2fs)\n", id, criteria[i].first.c_str(), status.c_str(), o.detail.c_str(),
                    seconds_since(t0));
        if (!o.pass && known != kKnownFailures.end() && o.documented) std::printf("     known: %s\n", known->second.c_str());
    }
    std::printf("%d unexpected failure(s)\n", unexpected);
    return unexpected ? 1 : 0;
}
