#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>

#include <sys/wait.h>

#include "lslab/lslab.hpp"
#include "lslab/report.hpp"
#include "lslab/scenario.hpp"

using namespace lslab;
namespace fs = std::filesystem;

namespace {

Error::Kind kind_of(const std::string& text) {
    try {
        parse_scenario_text(text);
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected an error for " << text;
    return Error::Kind::InvalidArgument;
}

const char* kTheorem = R"({
  "name": "v",
  "task": "theorem",
  "theorem": "homotopic_to_identity",
  "space": {"fixture": "V"},
  "map": {"images": {"b": "a"}},
  "function": {"c": 0, "a": 1, "b": 2},
  "band": {"a": -1, "b": "inf"}
})";

/// A fresh directory under the system temp dir.
fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("lslab_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

#ifdef LSLAB_CLI_PATH
int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + LSLAB_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}
#endif

}  // namespace

TEST(Cli, ParsesTheoremScenario) {
    const auto s = parse_scenario_text(kTheorem);
    EXPECT_EQ(s.theorem, "homotopic_to_identity");
    EXPECT_TRUE(s.b.infinite);
    EXPECT_EQ(s.space.size(), 3u);
}

TEST(Cli, RejectsMalformedScenarios) {
    EXPECT_EQ(kind_of("{\"task\": "), Error::Kind::ParseError);
    EXPECT_EQ(kind_of(R"({"task": "theorem", "theorem": "unknown_theorem", "space": {"fixture": "V"},
        "function": {"a": 0, "b": 0, "c": 0}, "band": {"a": 0, "b": 1}})"),
              Error::Kind::ValidationError);
    EXPECT_EQ(kind_of(R"({"task": "theorem", "theorem": "semiflow", "space": {"fixture": "V"},
        "function": {"a": 0, "b": 0, "c": 0}, "band": {"a": 2, "b": 1}})"),
              Error::Kind::ValidationError);
    EXPECT_EQ(kind_of(R"({"task": "theorem", "theorem": "semiflow", "space": {"fixture": "V"},
        "function": {"a": 0, "b": 0}})"),
              Error::Kind::ValidationError);
    EXPECT_EQ(kind_of(R"({"task": "category", "space": {"points": ["a", "b"], "order": [["a", "b"], ["b", "a"]]}})"),
              Error::Kind::NotAPartialOrder);
    EXPECT_EQ(kind_of(R"({"task": "juggle"})"), Error::Kind::ValidationError);
}

TEST(Cli, ParseErrorsCarryALocation) {
    try {
        parse_scenario_text("{\n  \"task\": ,\n}", "bad.scenario");
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("bad.scenario:2:"), std::string::npos) << e.what();
    }
}

TEST(Cli, ReportRoundTripAndDeterminism) {
    const auto s = parse_scenario_text(kTheorem);
    const auto r1 = run_scenario(s);
    const auto r2 = run_scenario(s);
    const auto text = emit_report(r1);
    EXPECT_EQ(text, emit_report(r2));
    EXPECT_EQ(parse_report(text), r1);
    ASSERT_TRUE(r1.verdict.has_value());
    EXPECT_EQ(*r1.verdict, Verdict::InequalityHolds);
}

TEST(Cli, InfiniteValuesRenderAsInf) {
    const auto r = run_scenario(parse_scenario(std::string(LSLAB_CORPUS_DIR) + "/split_sublevel_mod.scenario"));
    const auto text = emit_report(r);
    EXPECT_NE(text.find("\"inf\""), std::string::npos);
    EXPECT_EQ(parse_report(text), r);
    EXPECT_NE(emit_report(r, ReportFormat::text).find(">= inf"), std::string::npos);
}

TEST(Cli, TextReportHasLedgerTable) {
    const auto r = run_scenario(parse_scenario_text(kTheorem));
    const auto text = emit_report(r, ReportFormat::text);
    EXPECT_NE(text.find("| hypothesis"), std::string::npos);
    EXPECT_NE(text.find("part I:"), std::string::npos);
    EXPECT_NE(text.find("INEQUALITY_HOLDS"), std::string::npos);
}

TEST(Cli, ExtNatJson) {
    EXPECT_EQ(to_json(ExtNat::infinite()), Json("inf"));
    EXPECT_EQ(extnat_from_json(Json("inf")), ExtNat::infinite());
    EXPECT_EQ(extnat_from_json(Json(3)), ExtNat(3));
}

TEST(Cli, ExpectationMismatchIsReported) {
    auto j = Json::parse(kTheorem);
    j["expect"] = {{"verdict", "VIOLATION"}};
    const auto r = run_scenario(scenario_from_json(j));
    ASSERT_TRUE(r.expectations_met.has_value());
    EXPECT_FALSE(*r.expectations_met);
    EXPECT_FALSE(r.mismatches.empty());
}

TEST(Cli, CorpusIsComplete) {
    const std::vector<std::string> required{
        "counterexample:mod_exceeds_pair",  "counterexample:pair_exceeds_difference",
        "counterexample:non_supervariant",  "counterexample:halving_map",
        "counterexample:nondiscrete_fixed_values", "counterexample:pair_bound_strict",
        "counterexample:mod_bound_strict"};
    std::map<std::string, int> seen;
    for (const auto& f : scenario_files(LSLAB_CORPUS_DIR))
        for (const auto& t : parse_scenario(f).tags)
            if (t.rfind("counterexample:", 0) == 0) ++seen[t];
    for (const auto& t : required) EXPECT_EQ(seen[t], 1) << t;
    for (const auto& [t, n] : seen) EXPECT_EQ(n, 1) << t;
}

TEST(Cli, CorpusRunMatches) {
    const auto sum = run_corpus(LSLAB_CORPUS_DIR, {}, 2);
    for (const auto& e : sum.entries) {
        EXPECT_TRUE(e.error.empty()) << e.path << ": " << e.error;
        if (e.report) { EXPECT_TRUE(e.report->expectations_met.value_or(true)) << e.path; }
    }
    EXPECT_EQ(sum.matched, sum.total);
    EXPECT_EQ(sum.exit_code(), 0);
}

TEST(Cli, CorpusOrderIsIndependentOfWorkers) {
    const auto one = run_corpus(LSLAB_CORPUS_DIR, {}, 1);
    const auto four = run_corpus(LSLAB_CORPUS_DIR, {}, 4);
    ASSERT_EQ(one.entries.size(), four.entries.size());
    for (std::size_t i = 0; i < one.entries.size(); ++i) {
        EXPECT_EQ(one.entries[i].path, four.entries[i].path);
        ASSERT_TRUE(one.entries[i].report && four.entries[i].report);
        EXPECT_EQ(emit_report(*one.entries[i].report), emit_report(*four.entries[i].report));
    }
}

TEST(Cli, ExitCodes) {
#ifndef LSLAB_CLI_PATH
    GTEST_SKIP() << "built without the command-line tool";
#else
    const auto empty = scratch("empty");
    EXPECT_EQ(run_cli("corpus run \"" + empty.string() + "\""), 0);

    const auto broken = scratch("broken");
    std::ofstream(broken / "bad.scenario") << "{ \"task\": \"theorem\", ";
    EXPECT_EQ(run_cli("corpus run \"" + broken.string() + "\""), 2);

    const auto wrong = scratch("wrong");
    auto j = Json::parse(kTheorem);
    j["expect"] = {{"verdict", "HYPOTHESIS_FAILED"}};
    std::ofstream(wrong / "w.scenario") << j.dump();
    EXPECT_EQ(run_cli("corpus run \"" + wrong.string() + "\""), 1);

    EXPECT_EQ(run_cli("corpus run \"" + std::string(LSLAB_CORPUS_DIR) + "\""), 0);
    EXPECT_EQ(run_cli("cat --fixture C4"), 0);
    EXPECT_EQ(run_cli("cat --fixture NOPE"), 2);
    EXPECT_EQ(run_cli("verify \"" + (wrong / "w.scenario").string() + "\""), 1);
    EXPECT_EQ(run_cli("--format text numeric ps-check --fixture quadratic --tau 1"), 0);
    EXPECT_EQ(run_cli("no-such-command"), 2);
    for (const auto& d : {empty, broken, wrong}) fs::remove_all(d);
#endif
}
