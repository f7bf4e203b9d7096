#pragma once

// Scenario files: parsing, validation, execution and the corpus runner.
// docs/format.md is the schema reference.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lslab/category.hpp"
#include "lslab/dynamics.hpp"
#include "lslab/fixtures.hpp"
#include "lslab/index_engine.hpp"
#include "lslab/numeric.hpp"
#include "lslab/report.hpp"
#include "lslab/simplicial.hpp"

namespace lslab {

inline const std::vector<std::string>& scenario_tasks() {
    static const std::vector<std::string> t{"space", "category", "quotient", "cuplength", "theorem", "index_engine", "numeric"};
    return t;
}

inline const std::vector<std::string>& theorem_ids() {
    static const std::vector<std::string> t{"homotopy_equivalence", "homotopic_to_identity", "semiflow", "homeomorphism",
                                            "non_deformable_slices"};
    return t;
}

inline const std::vector<std::string>& numeric_checks() {
    static const std::vector<std::string> t{"energy", "flow_chain", "condition_C", "condition_D", "half_fixed_circle"};
    return t;
}

struct NumericSpec {
    std::string check;
    std::string field = "quadratic";
    double tau = 1;
    double step = 0;
    int samples = 100;
    std::vector<int> n_values{1, 10, 100, 1000, 10000};
};

struct Scenario {
    std::string name;
    std::string path;
    std::string task;
    std::string theorem;
    FiniteSpace space;
    std::optional<SimplicialComplex> complex;
    std::vector<SpaceMap> generators;
    std::string orbit_class = "point";
    std::vector<FiniteSpace> references;
    SpaceMap map;
    std::vector<double> function;
    bool has_function = false;
    double a = 0;
    Bound b = Bound::inf();
    bool has_band = false;
    int variant = 1;
    long long N = 8;
    PointSet A = 0, Y = 0;
    NumericSpec numeric;
    Json expect;  // null unless the scenario pins expected results
    std::vector<std::string> tags;
    std::string notes;
};

namespace detail {

inline Error validation(const std::string& where, const std::string& field, const std::string& msg) {
    return Error(Error::Kind::ValidationError, where + ": field '" + field + "': " + msg);
}

inline std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

inline FiniteSpace space_from_json(const Json& j, std::optional<SimplicialComplex>* complex_out, const std::string& where) {
    if (!j.is_object()) throw validation(where, "space", "expected an object");
    if (j.contains("fixture")) {
        const auto f = j.at("fixture").get<std::string>();
        if (f == "V") return fixtures::V();
        if (f == "C4") return fixtures::C4();
        if (f == "ARC3") return fixtures::ARC3();
        if (f == "TWO_CIRCLES") return fixtures::TWO_CIRCLES();
        throw validation(where, "space.fixture", "unknown fixture '" + f + "'");
    }
    if (j.contains("complex")) {
        const auto& c = j.at("complex");
        SimplicialComplex K;
        if (c.is_string()) {
            const auto s = c.get<std::string>();
            if (s == "torus7")
                K = torus7();
            else if (s == "triangle")
                K = triangle_boundary();
            else if (s.rfind("cycle:", 0) == 0)
                K = cycle_complex(std::stoul(s.substr(6)));
            else
                throw validation(where, "space.complex", "unknown complex '" + s + "'");
        } else {
            K = SimplicialComplex::from_labeled_faces(c.at("vertices").get<std::vector<std::string>>(),
                                                      c.at("faces").get<std::vector<std::vector<std::string>>>());
        }
        if (complex_out) *complex_out = K;
        return face_poset(K);
    }
    if (!j.contains("points")) throw validation(where, "space", "needs 'fixture', 'complex' or 'points'");
    auto labels = j.at("points").get<std::vector<std::string>>();
    if (labels.empty()) throw Error(Error::Kind::EmptySpace, where + ": space has no points");
    std::vector<std::pair<std::string, std::string>> pairs;
    if (j.contains("order"))
        for (const auto& p : j.at("order")) {
            if (!p.is_array() || p.size() != 2) throw validation(where, "space.order", "each entry is [lower, upper]");
            pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
        }
    return FiniteSpace::from_relation(std::move(labels), pairs);
}

inline PointSet set_from_json(const FiniteSpace& X, const Json& j, const std::string& where, const std::string& field) {
    if (j.is_string() && j.get<std::string>() == "all") return X.all();
    if (!j.is_array()) throw validation(where, field, "expected a list of point labels or \"all\"");
    PointSet s = 0;
    for (const auto& l : j) {
        const auto i = X.index_of(l.get<std::string>());
        if (!i) throw validation(where, field, "unknown point '" + l.get<std::string>() + "'");
        s |= bit(*i);
    }
    return s;
}

inline SpaceMap map_from_json(const FiniteSpace& X, const Json& j, const std::string& where, const std::string& field) {
    if (j.contains("constant")) {
        const auto i = X.index_of(j.at("constant").get<std::string>());
        if (!i) throw validation(where, field + ".constant", "unknown point");
        return SpaceMap::constant(X.size(), X.all(), *i);
    }
    std::map<std::string, std::string> images;
    if (j.contains("images")) images = j.at("images").get<std::map<std::string, std::string>>();
    for (const auto& [from, to] : images)
        if (!X.index_of(from) || !X.index_of(to))
            throw validation(where, field + ".images", "unknown point in '" + from + "' -> '" + to + "'");
    return SpaceMap::from_labels(X, images);
}

inline bool one_of(const std::vector<std::string>& options, const std::string& s) {
    return std::find(options.begin(), options.end(), s) != options.end();
}

}  // namespace detail

/// Validates a parsed document. `where` prefixes error messages.
inline Scenario scenario_from_json(const Json& j, const std::string& where = "<scenario>") {
    using detail::validation;
    if (!j.is_object()) throw validation(where, "", "a scenario is an object");
    Scenario s;
    try {
        s.path = where;
        s.name = j.value("name", std::filesystem::path(where).stem().string());
        s.task = j.value("task", std::string("theorem"));
        if (!detail::one_of(scenario_tasks(), s.task)) throw validation(where, "task", "unknown task '" + s.task + "'");
        if (j.contains("tags")) s.tags = j.at("tags").get<std::vector<std::string>>();
        s.notes = j.value("notes", std::string());
        if (j.contains("expect")) s.expect = j.at("expect");

        if (s.task == "numeric") {
            const auto& n = j.at("numeric");
            s.numeric.check = n.at("check").get<std::string>();
            if (!detail::one_of(numeric_checks(), s.numeric.check))
                throw validation(where, "numeric.check", "unknown check '" + s.numeric.check + "'");
            s.numeric.field = n.value("field", s.numeric.field);
            s.numeric.tau = n.value("tau", s.numeric.tau);
            s.numeric.step = n.value("step", s.numeric.step);
            s.numeric.samples = n.value("samples", s.numeric.samples);
            if (n.contains("n_values")) s.numeric.n_values = n.at("n_values").get<std::vector<int>>();
            if (!(s.numeric.tau > 0)) throw validation(where, "numeric.tau", "must be positive");
            if (s.numeric.check != "condition_D" && s.numeric.check != "half_fixed_circle") {
                try {
                    numeric::field_by_name(s.numeric.field);
                } catch (const Error& e) {
                    throw validation(where, "numeric.field", e.what());
                }
            }
            return s;
        }

        if (!j.contains("space")) throw validation(where, "space", "missing");
        s.space = detail::space_from_json(j.at("space"), &s.complex, where);
        const auto& X = s.space;

        if (j.contains("action")) {
            for (const auto& g : j.at("action").at("generators")) {
                std::map<std::string, std::string> images = g.get<std::map<std::string, std::string>>();
                for (const auto& [from, to] : images)
                    if (!X.index_of(from) || !X.index_of(to))
                        throw validation(where, "action.generators", "unknown point in '" + from + "' -> '" + to + "'");
                s.generators.push_back(SpaceMap::from_labels(X, images));
            }
            s.orbit_class = j.at("action").value("class", s.orbit_class);
            if (!detail::one_of({"point", "free", "all"}, s.orbit_class))
                throw validation(where, "action.class", "expected point, free or all");
        }
        if (j.contains("references"))
            for (const auto& r : j.at("references")) s.references.push_back(detail::space_from_json(r, nullptr, where));

        s.map = j.contains("map") ? detail::map_from_json(X, j.at("map"), where, "map") : SpaceMap::identity(X.size());
        if (!s.map.is_order_preserving(X, X)) throw validation(where, "map", "map is not order-preserving");

        if (j.contains("function")) {
            s.has_function = true;
            s.function.assign(X.size(), 0);
            std::vector<bool> seen(X.size(), false);
            for (const auto& [label, v] : j.at("function").items()) {
                const auto i = X.index_of(label);
                if (!i) throw validation(where, "function", "unknown point '" + label + "'");
                if (!v.is_number()) throw validation(where, "function." + label, "expected a number");
                s.function[*i] = v.get<double>();
                seen[*i] = true;
            }
            for (std::size_t i = 0; i < X.size(); ++i)
                if (!seen[i]) throw validation(where, "function", "no value for point '" + X.label(i) + "'");
        }
        if (j.contains("band")) {
            s.has_band = true;
            const auto& b = j.at("band");
            if (!b.at("a").is_number()) throw validation(where, "band.a", "expected a number");
            s.a = b.at("a").get<double>();
            if (b.at("b").is_string()) {
                if (b.at("b").get<std::string>() != "inf") throw validation(where, "band.b", "expected a number or \"inf\"");
                s.b = Bound::inf();
            } else {
                s.b = Bound{b.at("b").get<double>()};
                if (!(s.a < s.b.value)) throw validation(where, "band", "needs a < b");
            }
        }
        if (j.contains("A")) s.A = detail::set_from_json(X, j.at("A"), where, "A");
        else s.A = X.all();
        if (j.contains("Y")) s.Y = detail::set_from_json(X, j.at("Y"), where, "Y");

        if (s.task == "theorem") {
            s.theorem = j.value("theorem", std::string());
            if (!detail::one_of(theorem_ids(), s.theorem))
                throw validation(where, "theorem", "unknown theorem id '" + s.theorem + "'");
        }
        if (s.task == "index_engine") {
            s.variant = j.value("variant", 1);
            s.N = j.value("N", 8LL);
            if (s.variant < 1 || s.variant > 3) throw validation(where, "variant", "expected 1, 2 or 3");
            if (s.N < 0) throw validation(where, "N", "must be nonnegative");
        }
        if (s.task == "theorem" || s.task == "index_engine") {
            if (!s.has_function) throw validation(where, "function", "required by task '" + s.task + "'");
            if (!s.has_band && s.theorem != "semiflow") throw validation(where, "band", "required by task '" + s.task + "'");
            if (s.task == "index_engine" && s.b.infinite) throw validation(where, "band.b", "must be finite here");
        }
        if (s.task == "cuplength" && !s.complex) throw validation(where, "space", "cuplength needs a complex");
    } catch (const Json::exception& e) {
        throw validation(where, "", e.what());
    }
    return s;
}

inline Scenario parse_scenario_text(const std::string& text, const std::string& where = "<scenario>") {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        const auto [line, col] = detail::line_col(text, e.byte == 0 ? 0 : e.byte - 1);
        throw Error(Error::Kind::ParseError,
                    where + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
    }
    return scenario_from_json(j, where);
}

inline Scenario parse_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Error::Kind::ParseError, path + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario_text(ss.str(), path);
}

struct RunOptions {
    std::uint64_t seed = 0;
    Limits limits{};
};

namespace detail {

inline std::shared_ptr<CategoryEngine> build_engine(const Scenario& s, const Limits& limits) {
    GroupAction G = s.generators.empty() ? GroupAction::trivial(s.space) : GroupAction::generate(s.space, s.generators, limits);
    HomogeneousClass cls = s.orbit_class == "free" ? HomogeneousClass::free(G)
                           : s.orbit_class == "all" ? HomogeneousClass::all(G)
                                                    : HomogeneousClass::point(G);
    return std::make_shared<CategoryEngine>(std::move(G), std::move(cls), limits, s.references);
}

inline ExtNat difference_value(const ExtNat& x, const ExtNat& y) {
    if (x.is_infinite() || y.is_infinite()) return ExtNat::infinite();
    return ExtNat(x.value() - y.value());
}

inline Report run_numeric(const Scenario& s) {
    using namespace numeric;
    Report r;
    r.task = "numeric:" + s.numeric.check;
    const auto& n = s.numeric;
    FlowConfig flow{n.tau, n.step};
    if (n.check == "energy") {
        std::mt19937_64 rng(0);
        std::normal_distribution<double> Nd(0, 1);
        double worst = 0;
        for (int i = 0; i < n.samples; ++i) {
            const int dim = 2 + i % 3;
            const auto F = random_quadratic(rng, dim);
            Vec m(dim);
            for (int k = 0; k < dim; ++k) m(k) = Nd(rng);
            worst = std::max(worst, check_energy_identity(F, m, flow).residual);
        }
        r.values["max_residual"] = worst;
        r.values["within_tolerance"] = worst <= 1e-5;
    } else if (n.check == "flow_chain") {
        const auto F = field_by_name(n.field);
        FlowChainConfig cfg;
        cfg.flow = flow;
        cfg.n_values = n.n_values;
        cfg.probe = [&F](double t) {
            Vec v = Vec::Zero(F.dim);
            v(0) = F.name == "half" ? 0.9 * t : t;
            if (F.name == "annulus") v(0) = 1 + 0.9 * t;
            return v;
        };
        const auto rep = verify_flow_chain(F, cfg);
        double ratio = 0;
        for (const auto& st : rep.steps) ratio = std::max(ratio, st.length / st.bound);
        r.values["chain_holds"] = rep.chain_holds;
        r.values["conclusion_holds"] = rep.conclusion_holds;
        r.values["max_length_ratio"] = ratio;
        r.notes["analysis"] = rep.analysis;
        r.notes["heuristic"] = "sampled";
    } else if (n.check == "condition_C") {
        const auto F = field_by_name(n.field);
        std::vector<Vec> samples;
        for (int k = 2; k < 2 + n.samples; ++k) {
            Vec v = Vec::Zero(F.dim);
            v(0) = 1.0 / k;
            if (F.name == "annulus") v(0) = 1 + 0.5 / k;
            samples.push_back(v);
        }
        const auto rep = check_condition_C(F, samples);
        r.values["consistent"] = rep.consistent;
        r.values["cluster_size"] = ExtNat(static_cast<long long>(rep.cluster.size()));
        r.notes["analysis"] = rep.analysis;
        r.notes["heuristic"] = "sampled";
    } else if (n.check == "condition_D") {
        const auto p = halving_pair();
        std::vector<Vec> samples;
        for (int k = 1; k <= n.samples; ++k) {
            Vec v(1);
            v(0) = std::ldexp(0.9, -std::min(k, 60));
            samples.push_back(v);
        }
        const auto rep = check_condition_D_sampled(p, samples);
        r.values["condition_D"] = rep.holds;
        r.values["min_decrement"] = rep.min_decrement;
        r.notes["analysis"] = rep.analysis;
        r.notes["heuristic"] = "sampled";
    } else if (n.check == "half_fixed_circle") {
        const auto rep = half_fixed_circle(n.samples);
        r.values["lyapunov"] = rep.lyapunov;
        r.values["largest_value_gap"] = rep.largest_value_gap;
        r.values["fixed_values_discrete"] = rep.largest_value_gap > 0.1;
        // Category values through the face poset of a square: the fixed
        // right half is an arc.
        const auto K = cycle_complex(4);
        const auto X = face_poset(K);
        const auto engine = CategoryEngine::classical(X);
        PointSet F = 0;
        for (std::size_t i = 0; i < X.size(); ++i) {
            const auto& l = X.label(i);
            if (l.find('2') == std::string::npos) F |= bit(i);
        }
        r.values["cat_X"] = engine.gcat(X.all());
        r.values["cat_F"] = subspace_engine(engine, F)->gcat(full_set(popcount(F)));
        r.notes["finite_model"] = "fixed values form an interval; finite spaces only carry finitely many values";
    }
    return r;
}

inline Report run(const Scenario& s, const RunOptions& opt) {
    if (s.task == "numeric") return run_numeric(s);
    const auto& X = s.space;
    Report r;
    r.task = s.task;
    if (s.task == "space") {
        const auto c = core(X);
        r.values["points"] = ExtNat(static_cast<long long>(X.size()));
        r.values["connected"] = X.is_connected();
        r.values["core_points"] = ExtNat(static_cast<long long>(c.kept.size()));
        return r;
    }
    if (s.task == "cuplength") {
        const auto cl = cuplength(*s.complex);
        const auto sc = star_cover_upper_bound(*s.complex, opt.limits);
        r.values["cuplength"] = ExtNat(static_cast<long long>(cl));
        r.values["star_cover"] = ExtNat(static_cast<long long>(sc.size));
        r.values["sandwich"] = cl + 1 <= sc.size;
        return r;
    }
    const auto engine = build_engine(s, opt.limits);
    if (s.task == "category") {
        r.values["gcat_A"] = engine->gcat(s.A);
        r.values["gcat_closed_A"] = engine->gcat_closed(s.A);
        if (!s.references.empty()) r.values["gcat_classB_A"] = engine->gcat_classB(s.A);
        if (s.Y) {
            const auto gy = engine->gcat(s.Y);
            r.values["gcat_Y"] = gy;
            r.values["pair"] = engine->gcat_pair(s.A, s.Y);
            r.values["semi"] = engine->gcat_semi(s.A, s.Y);
            r.values["mod"] = engine->gcat_mod(s.A, s.Y);
            r.values["difference"] = difference_value(engine->gcat(s.A), gy);
        }
        return r;
    }
    if (s.task == "quotient") {
        const auto q = quotient(engine->action());
        r.values["gcat"] = engine->gcat(X.all());
        r.values["quotient_cat"] = CategoryEngine::classical(q.space, opt.limits).gcat(q.space.all());
        r.values["orbits"] = ExtNat(static_cast<long long>(engine->action().orbits().size()));
        return r;
    }
    const DynamicalPair p(X, s.map, s.function);
    if (s.task == "index_engine") {
        const auto nu = make_nu(s.variant, s.N, engine);
        Report out = to_report(verify_index_inequality(nu, p, s.a, s.b.value, IndexInequalityOptions{true, opt.seed}), X);
        return out;
    }
    if (s.theorem == "homotopy_equivalence") return to_report(verify_homotopy_equivalence_bounds(p, *engine, s.a, s.b));
    if (s.theorem == "homotopic_to_identity") return to_report(verify_homotopic_to_identity_bounds(p, *engine, s.a, s.b));
    if (s.theorem == "semiflow") return to_report(verify_semiflow(p, *engine));
    if (s.theorem == "homeomorphism") {
        if (s.b.infinite) throw Error(Error::Kind::ValidationError, s.path + ": field 'band.b': must be finite here");
        return to_report(verify_homeomorphism_bounds(p, *engine, s.a, s.b.value));
    }
    // non_deformable_slices
    if (s.b.infinite) throw Error(Error::Kind::ValidationError, s.path + ": field 'band.b': must be finite here");
    const auto nd = detect_non_deformable_slices(p, *engine, s.a, s.b.value);
    r.task = "non_deformable_slices";
    r.values["fixed_value_count"] = ExtNat(static_cast<long long>(nd.fixed_value_count));
    r.values["applies"] = nd.applies;
    r.values["degenerate"] = nd.degenerate;
    r.values["slice_count"] = ExtNat(static_cast<long long>(nd.slices.size()));
    r.notes["bound"] = nd.bound.str();
    for (std::size_t i = 0; i < nd.slices.size(); ++i) r.notes["slice_" + std::to_string(i)] = X.format(nd.slices[i]);
    return r;
}

inline bool value_matches(const ReportValue& actual, const Json& expected) {
    const ReportValue e = value_from_json(expected);
    if (std::holds_alternative<double>(e) || std::holds_alternative<double>(actual)) {
        auto as_double = [](const ReportValue& v) -> std::optional<double> {
            if (auto d = std::get_if<double>(&v)) return *d;
            if (auto n = std::get_if<ExtNat>(&v); n && n->is_finite()) return static_cast<double>(n->value());
            return std::nullopt;
        };
        const auto x = as_double(actual), y = as_double(e);
        return x && y && std::abs(*x - *y) <= 1e-9 * std::max(1.0, std::abs(*y));
    }
    return actual == e;
}

}  // namespace detail

/// Compares a report against the scenario's pinned expectations.
inline void check_expectations(const Scenario& s, Report& r) {
    if (s.expect.is_null()) return;
    std::vector<std::string> mm;
    const auto& e = s.expect;
    if (e.contains("verdict")) {
        const auto want = e.at("verdict").get<std::string>();
        const std::string got = r.verdict ? to_string(*r.verdict) : "none";
        if (want != got) mm.push_back("verdict: expected " + want + ", got " + got);
    }
    if (e.contains("parts"))
        for (const auto& [name, pe] : e.at("parts").items()) {
            const auto it = std::find_if(r.parts.begin(), r.parts.end(), [&](const ReportPart& p) { return p.name == name; });
            if (it == r.parts.end()) {
                mm.push_back("part " + name + ": missing");
                continue;
            }
            if (pe.contains("verdict") && pe.at("verdict").get<std::string>() != to_string(it->verdict))
                mm.push_back("part " + name + ": expected " + pe.at("verdict").get<std::string>() + ", got " +
                             to_string(it->verdict));
            if (pe.contains("lhs") && !(extnat_from_json(pe.at("lhs")) == it->lhs))
                mm.push_back("part " + name + ": lhs " + it->lhs.str() + " != " + pe.at("lhs").dump());
            if (pe.contains("rhs")) {
                const auto& rj = pe.at("rhs");
                const Difference d{extnat_from_json(rj.at(0)), extnat_from_json(rj.at(1))};
                if (!(d == it->rhs)) mm.push_back("part " + name + ": rhs " + it->rhs.str() + " != " + d.str());
            }
        }
    if (e.contains("values"))
        for (const auto& [k, v] : e.at("values").items()) {
            const auto it = r.values.find(k);
            if (it == r.values.end())
                mm.push_back("value " + k + ": missing");
            else if (!detail::value_matches(it->second, v))
                mm.push_back("value " + k + ": expected " + v.dump() + ", got " + value_text(it->second));
        }
    r.expectations_met = mm.empty();
    r.mismatches = std::move(mm);
}

inline Report run_scenario(const Scenario& s, const RunOptions& opt = {}) {
    Report r = detail::run(s, opt);
    r.scenario = s.name;
    check_expectations(s, r);
    return r;
}

/// Whether a report contains a violation that the scenario did not expect.
inline bool unexpected_violation(const Scenario& s, const Report& r) {
    if (!r.verdict || *r.verdict != Verdict::Violation) return false;
    return !(s.expect.contains("verdict") && s.expect.at("verdict") == "VIOLATION");
}

struct CorpusEntry {
    std::string path;
    std::optional<Scenario> scenario;
    std::optional<Report> report;
    std::string error;
};

struct CorpusSummary {
    std::size_t total = 0, matched = 0, mismatched = 0, input_errors = 0, violations = 0;
    std::vector<CorpusEntry> entries;

    /// 2 on input errors, 1 on mismatches or unexpected violations, else 0.
    int exit_code() const {
        if (input_errors) return 2;
        if (mismatched || violations) return 1;
        return 0;
    }
};

inline std::vector<std::string> scenario_files(const std::string& dir) {
    std::vector<std::string> files;
    if (!std::filesystem::is_directory(dir)) throw Error(Error::Kind::ParseError, dir + ": not a directory");
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".scenario") files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    return files;
}

inline std::size_t default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Runs every *.scenario file in dir; entries come back in file-name order
/// regardless of the worker count.
inline CorpusSummary run_corpus(const std::string& dir, const RunOptions& opt = {}, std::size_t workers = 0) {
    CorpusSummary sum;
    const auto files = scenario_files(dir);
    sum.entries.resize(files.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < files.size();) {
            auto& e = sum.entries[i];
            e.path = files[i];
            try {
                e.scenario = parse_scenario(files[i]);
                e.report = run_scenario(*e.scenario, opt);
            } catch (const Error& err) {
                e.error = err.what();
                e.scenario.reset();
                e.report.reset();
            }
        }
    };
    const std::size_t n = std::min(workers ? workers : default_workers(), std::max<std::size_t>(files.size(), 1));
    std::vector<std::thread> pool;
    for (std::size_t k = 1; k < n; ++k) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (const auto& e : sum.entries) {
        ++sum.total;
        if (!e.report) {
            ++sum.input_errors;
            continue;
        }
        if (unexpected_violation(*e.scenario, *e.report)) ++sum.violations;
        if (e.report->expectations_met.value_or(true))
            ++sum.matched;
        else
            ++sum.mismatched;
    }
    return sum;
}

/// A self-contained index_engine scenario reproducing one instance.
inline Json instance_scenario(const DynamicalPair& p, double a, double b, int variant, long long N, const std::string& name) {
    const auto& X = p.space();
    Json j;
    j["name"] = name;
    j["task"] = "index_engine";
    std::vector<std::string> labels;
    Json order = Json::array();
    for (std::size_t x = 0; x < X.size(); ++x) {
        labels.push_back(X.label(x));
        for (std::size_t y = 0; y < X.size(); ++y)
            if (X.less(x, y)) order.push_back({X.label(x), X.label(y)});
    }
    j["space"] = {{"points", labels}, {"order", order}};
    Json images = Json::object(), f = Json::object();
    for (std::size_t x = 0; x < X.size(); ++x) {
        if (p.map()(x) != x) images[X.label(x)] = X.label(p.map()(x));
        f[X.label(x)] = p.f(x);
    }
    j["map"] = {{"images", images}};
    j["function"] = f;
    j["band"] = {{"a", a}, {"b", b}};
    j["variant"] = variant;
    j["N"] = N;
    return j;
}

struct SweepOptions {
    std::size_t instances = 1000;
    std::uint64_t seed = 0;
    std::size_t max_points = 7;
    long long N = 8;
    bool check_axioms = true;
    std::size_t workers = 0;
    std::string persist_dir;  // violations are written here when nonempty
};

struct SweepSummary {
    std::size_t instances = 0, passing_ledger = 0, holds = 0, hypothesis_failed = 0, violations = 0;
    std::vector<std::string> persisted;
    std::vector<Json> counterexamples;
};

/// Random phi ~ id instances cycling through nu^1, nu^2, nu^3 with the
/// classical engine. Instance i draws from seed + i, so results do not
/// depend on the worker count.
inline SweepSummary run_engine_sweep(const SweepOptions& opt) {
    SweepSummary sum;
    sum.instances = opt.instances;
    std::vector<Verdict> verdicts(opt.instances);
    std::vector<std::optional<Json>> bad(opt.instances);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < opt.instances;) {
            std::mt19937_64 rng(opt.seed * 1000003 + i);
            const auto inst = random_instance(rng, opt.max_points);
            const int variant = static_cast<int>(i % 3) + 1;
            const auto engine = shared_classical(inst.pair.space());
            const auto nu = make_nu(variant, opt.N, engine);
            const auto rep = verify_index_inequality(nu, inst.pair, inst.a, inst.b, IndexInequalityOptions{opt.check_axioms, opt.seed + i});
            verdicts[i] = rep.verdict;
            if (rep.verdict == Verdict::Violation)
                bad[i] = instance_scenario(inst.pair, inst.a, inst.b, variant, opt.N,
                                           "violation_" + std::to_string(opt.seed) + "_" + std::to_string(i));
        }
    };
    const std::size_t n = std::min(opt.workers ? opt.workers : default_workers(), std::max<std::size_t>(opt.instances, 1));
    std::vector<std::thread> pool;
    for (std::size_t k = 1; k < n; ++k) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (std::size_t i = 0; i < opt.instances; ++i) {
        switch (verdicts[i]) {
        case Verdict::InequalityHolds: ++sum.holds; ++sum.passing_ledger; break;
        case Verdict::HypothesisFailed: ++sum.hypothesis_failed; break;
        case Verdict::Violation: ++sum.violations; ++sum.passing_ledger; break;
        }
        if (bad[i]) {
            if (!opt.persist_dir.empty()) {
                std::filesystem::create_directories(opt.persist_dir);
                const auto path = (std::filesystem::path(opt.persist_dir) / ((*bad[i])["name"].get<std::string>() + ".scenario")).string();
                std::ofstream(path) << bad[i]->dump(2) << "\n";
                sum.persisted.push_back(path);
            }
            sum.counterexamples.push_back(*bad[i]);
        }
    }
    return sum;
}

}  // namespace lslab
