// lslab: command-line front end for spaces, category values, the index
// engine, the dynamics verifiers, the numeric backend and the corpus.
//
// Exit codes: 0 success, 1 unexpected theorem violation or corpus mismatch,
// 2 input error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "lslab/scenario.hpp"

namespace {

using namespace lslab;

struct Global {
    std::size_t cap = 12;
    std::uint64_t seed = 0;
    std::size_t workers = 0;
    std::string format = "text";
};

RunOptions run_options(const Global& g) {
    RunOptions o;
    o.seed = g.seed;
    o.limits.map_points = g.cap;
    o.limits.subset_points = std::max<std::size_t>(g.cap, o.limits.subset_points);
    return o;
}

ReportFormat format_of(const Global& g) {
    const auto f = parse_report_format(g.format);
    if (!f) throw Error(Error::Kind::ValidationError, "unknown format '" + g.format + "' (structured or text)");
    return *f;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Error::Kind::ParseError, path + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int emit(const Report& r, const Global& g) {
    std::cout << emit_report(r, format_of(g));
    return 0;
}

int cmd_space_validate(const std::string& path, const Global& g) {
    auto j = Json::parse(read_file(path), nullptr, false);
    if (j.is_discarded()) {
        parse_scenario(path);  // rethrows with a location
        return 2;
    }
    if (!j.contains("space")) j = Json{{"space", j}};
    j["task"] = "space";
    j.erase("expect");
    const auto s = scenario_from_json(j, path);
    return emit(run_scenario(s, run_options(g)), g);
}

int cmd_cat(const std::string& path, const std::string& fixture, const std::vector<std::string>& A,
            const std::vector<std::string>& Y, const Global& g) {
    Json j;
    if (!path.empty()) {
        j = Json::parse(read_file(path), nullptr, false);
        if (j.is_discarded()) {
            parse_scenario(path);
            return 2;
        }
    } else if (!fixture.empty()) {
        j = Json{{"space", {{"fixture", fixture}}}};
    } else {
        throw Error(Error::Kind::ValidationError, "cat needs a scenario file or --fixture");
    }
    j["task"] = "category";
    j.erase("expect");
    if (!A.empty()) j["A"] = A;
    if (!Y.empty()) j["Y"] = Y;
    const auto s = scenario_from_json(j, path.empty() ? fixture : path);
    return emit(run_scenario(s, run_options(g)), g);
}

int cmd_verify(const std::vector<std::string>& paths, const Global& g) {
    int code = 0;
    for (const auto& p : paths) {
        const auto s = parse_scenario(p);
        const auto r = run_scenario(s, run_options(g));
        emit(r, g);
        if (unexpected_violation(s, r) || !r.expectations_met.value_or(true)) code = 1;
    }
    return code;
}

int cmd_engine_verify(const std::string& path, SweepOptions opt, const Global& g) {
    if (!path.empty()) return cmd_verify({path}, g);
    opt.seed = g.seed;
    opt.workers = g.workers;
    const auto sum = run_engine_sweep(opt);
    if (format_of(g) == ReportFormat::structured) {
        Json j{{"instances", sum.instances},
               {"passing_ledger", sum.passing_ledger},
               {"inequality_holds", sum.holds},
               {"hypothesis_failed", sum.hypothesis_failed},
               {"violations", sum.violations},
               {"persisted", sum.persisted}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "instances " << sum.instances << "\n"
                  << "  passing ledger   " << sum.passing_ledger << "\n"
                  << "  INEQUALITY_HOLDS " << sum.holds << "\n"
                  << "  HYPOTHESIS_FAILED " << sum.hypothesis_failed << "\n"
                  << "  VIOLATION        " << sum.violations << "\n";
        for (const auto& p : sum.persisted) std::cout << "  persisted " << p << "\n";
    }
    return sum.violations ? 1 : 0;
}

int cmd_ps_check(const std::string& fixture, double tau, const Global& g) {
    const auto field = numeric::field_by_name(fixture);
    Report out;
    out.scenario = "ps-check:" + fixture;
    out.task = "numeric";
    for (const std::string check : {"flow_chain", "condition_C"}) {
        Json j{{"name", out.scenario},
               {"task", "numeric"},
               {"numeric", {{"check", check}, {"field", fixture}, {"tau", tau}, {"step", tau / 1000}}}};
        const auto r = run_scenario(scenario_from_json(j, out.scenario), run_options(g));
        for (const auto& [k, v] : r.values) out.values[check + "." + k] = v;
        for (const auto& [k, v] : r.notes) out.notes[check + "." + k] = v;
    }
    out.values["seed"] = ExtNat(static_cast<long long>(g.seed));
    return emit(out, g);
}

int cmd_corpus_run(const std::string& dir, const Global& g) {
    const auto sum = run_corpus(dir, run_options(g), g.workers);
    const bool structured = format_of(g) == ReportFormat::structured;
    Json entries = Json::array();
    for (const auto& e : sum.entries) {
        if (structured) {
            Json je{{"path", e.path}};
            if (e.report) je["report"] = to_json(*e.report);
            else je["error"] = e.error;
            entries.push_back(je);
            continue;
        }
        if (!e.report) {
            std::cout << "ERROR    " << e.path << ": " << e.error << "\n";
            continue;
        }
        const bool ok = e.report->expectations_met.value_or(true) && !unexpected_violation(*e.scenario, *e.report);
        std::cout << (ok ? "ok       " : "MISMATCH ") << e.report->scenario;
        if (e.report->verdict) std::cout << "  " << to_string(*e.report->verdict);
        std::cout << "\n";
        for (const auto& m : e.report->mismatches) std::cout << "    " << m << "\n";
    }
    if (structured) {
        Json j{{"total", sum.total},
               {"matched", sum.matched},
               {"mismatched", sum.mismatched},
               {"input_errors", sum.input_errors},
               {"violations", sum.violations},
               {"entries", entries}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << sum.total << " fixtures: " << sum.matched << " matched, " << sum.mismatched << " mismatched, "
                  << sum.input_errors << " input errors, " << sum.violations << " unexpected violations\n";
    }
    return sum.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lusternik-Schnirelmann laboratory on finite spaces"};
    app.require_subcommand(1);
    Global g;
    app.add_option("--cap", g.cap, "point cap for exhaustive map searches")->check(CLI::Range(1, 24));
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--workers", g.workers, "parallel workers (0 = available parallelism)");
    app.add_option("--format", g.format, "structured or text")->check(CLI::IsMember({"structured", "json", "text"}));

    auto* space = app.add_subcommand("space", "finite space utilities");
    space->require_subcommand(1);
    std::string space_file;
    auto* validate = space->add_subcommand("validate", "validate a space or scenario file");
    validate->add_option("file", space_file)->required();

    auto* cat = app.add_subcommand("cat", "category values of a space");
    std::string cat_file, cat_fixture;
    std::vector<std::string> cat_A, cat_Y;
    cat->add_option("file", cat_file, "scenario or space file");
    cat->add_option("--fixture", cat_fixture, "V, C4, ARC3 or TWO_CIRCLES");
    cat->add_option("--A", cat_A, "subset A (default: all points)");
    cat->add_option("--Y", cat_Y, "subset Y for the relative variants");

    auto* engine = app.add_subcommand("engine", "index engine");
    engine->require_subcommand(1);
    auto* engine_verify = engine->add_subcommand("verify", "run a scenario, or a random sweep without one");
    std::string engine_file;
    SweepOptions sweep;
    bool no_axioms = false;
    engine_verify->add_option("file", engine_file);
    engine_verify->add_option("--instances", sweep.instances);
    engine_verify->add_option("--max-points", sweep.max_points)->check(CLI::Range(1, 10));
    engine_verify->add_option("--N", sweep.N)->check(CLI::PositiveNumber);
    engine_verify->add_option("--persist", sweep.persist_dir, "directory for violation artifacts");
    engine_verify->add_flag("--no-axioms", no_axioms, "skip the exhaustive axiom check per instance");

    auto* verify = app.add_subcommand("verify", "run theorem scenarios");
    std::vector<std::string> verify_files;
    verify->add_option("files", verify_files)->required();

    auto* num = app.add_subcommand("numeric", "numeric backend");
    num->require_subcommand(1);
    auto* ps = num->add_subcommand("ps-check", "flow chain and condition (C) on a field fixture");
    std::string ps_fixture = "quadratic";
    double ps_tau = 1;
    ps->add_option("--fixture", ps_fixture)->check(CLI::IsMember({"quadratic", "half", "annulus"}));
    ps->add_option("--tau", ps_tau)->check(CLI::PositiveNumber);

    auto* corpus = app.add_subcommand("corpus", "fixture corpus");
    corpus->require_subcommand(1);
    auto* corpus_run = corpus->add_subcommand("run", "run every *.scenario file in a directory");
    std::string corpus_dir;
    corpus_run->add_option("dir", corpus_dir)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*validate) return cmd_space_validate(space_file, g);
        if (*cat) return cmd_cat(cat_file, cat_fixture, cat_A, cat_Y, g);
        if (*engine_verify) {
            sweep.check_axioms = !no_axioms;
            return cmd_engine_verify(engine_file, sweep, g);
        }
        if (*verify) return cmd_verify(verify_files, g);
        if (*ps) return cmd_ps_check(ps_fixture, ps_tau, g);
        if (*corpus_run) return cmd_corpus_run(corpus_dir, g);
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
