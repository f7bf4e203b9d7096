#pragma once

// Scenario reports and their two renderings. The structured form is JSON
// with sorted keys and shortest round-trip numbers; infinite values are the
// string "inf".

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "lslab/dynamics.hpp"
#include "lslab/index_engine.hpp"

namespace lslab {

using Json = nlohmann::json;

using ReportValue = std::variant<bool, ExtNat, double, std::string>;

struct ReportPart {
    std::string name;
    ExtNat lhs;
    Difference rhs;
    Verdict verdict = Verdict::InequalityHolds;
    std::vector<Hypothesis> hypotheses;
    std::map<std::string, ExtNat> values;

    friend bool operator==(const ReportPart&, const ReportPart&) = default;
};

struct Report {
    std::string scenario;
    std::string task;
    std::optional<Verdict> verdict;
    std::vector<Hypothesis> hypotheses;
    std::vector<ReportPart> parts;
    std::map<std::string, ReportValue> values;
    std::map<std::string, std::string> notes;
    std::optional<bool> expectations_met;
    std::vector<std::string> mismatches;

    friend bool operator==(const Report&, const Report&) = default;
};

inline bool operator==(const Hypothesis& a, const Hypothesis& b) {
    return a.name == b.name && a.status == b.status && a.detail == b.detail;
}

inline bool operator==(const Difference& a, const Difference& b) {
    return a.minuend == b.minuend && a.subtrahend == b.subtrahend;
}

inline std::optional<Hypothesis::Status> parse_status(const std::string& s) {
    for (auto st : {Hypothesis::Status::holds, Hypothesis::Status::violated, Hypothesis::Status::assumed})
        if (s == to_string(st)) return st;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// JSON conversion

inline Json to_json(const ExtNat& e) { return e.is_infinite() ? Json("inf") : Json(e.value()); }

inline ExtNat extnat_from_json(const Json& j) {
    if (j.is_string() && j.get<std::string>() == "inf") return ExtNat::infinite();
    if (j.is_number_integer()) return ExtNat(j.get<long long>());
    throw Error(Error::Kind::ParseError, "expected an integer or \"inf\", got " + j.dump());
}

inline Json to_json(const ReportValue& v) {
    return std::visit(
        [](const auto& x) -> Json {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, ExtNat>)
                return to_json(x);
            else
                return Json(x);
        },
        v);
}

inline ReportValue value_from_json(const Json& j) {
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_number_integer()) return ExtNat(j.get<long long>());
    if (j.is_number_float()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return ExtNat::infinite();
        return s;
    }
    throw Error(Error::Kind::ParseError, "unsupported report value " + j.dump());
}

inline Json to_json(const std::vector<Hypothesis>& hs) {
    Json arr = Json::array();
    for (const auto& h : hs) arr.push_back({{"name", h.name}, {"status", to_string(h.status)}, {"detail", h.detail}});
    return arr;
}

inline std::vector<Hypothesis> hypotheses_from_json(const Json& j) {
    std::vector<Hypothesis> out;
    for (const auto& h : j) {
        const auto st = parse_status(h.at("status").get<std::string>());
        if (!st) throw Error(Error::Kind::ParseError, "unknown hypothesis status " + h.at("status").dump());
        out.push_back({h.at("name").get<std::string>(), *st, h.at("detail").get<std::string>()});
    }
    return out;
}

inline Json to_json(const Report& r) {
    Json j;
    j["scenario"] = r.scenario;
    j["task"] = r.task;
    j["verdict"] = r.verdict ? Json(to_string(*r.verdict)) : Json(nullptr);
    j["hypotheses"] = to_json(r.hypotheses);
    Json parts = Json::array();
    for (const auto& p : r.parts) {
        Json vals = Json::object();
        for (const auto& [k, v] : p.values) vals[k] = to_json(v);
        parts.push_back({{"part", p.name},
                         {"lhs", to_json(p.lhs)},
                         {"rhs", {{"minuend", to_json(p.rhs.minuend)}, {"subtrahend", to_json(p.rhs.subtrahend)}}},
                         {"verdict", to_string(p.verdict)},
                         {"hypotheses", to_json(p.hypotheses)},
                         {"values", vals}});
    }
    j["parts"] = parts;
    Json vals = Json::object();
    for (const auto& [k, v] : r.values) vals[k] = to_json(v);
    j["values"] = vals;
    j["notes"] = r.notes;
    j["expectations_met"] = r.expectations_met ? Json(*r.expectations_met) : Json(nullptr);
    j["mismatches"] = r.mismatches;
    return j;
}

inline Verdict verdict_from_json(const Json& j) {
    const auto v = parse_verdict(j.get<std::string>());
    if (!v) throw Error(Error::Kind::ParseError, "unknown verdict " + j.dump());
    return *v;
}

inline Report report_from_json(const Json& j) {
    try {
        Report r;
        r.scenario = j.at("scenario").get<std::string>();
        r.task = j.at("task").get<std::string>();
        if (!j.at("verdict").is_null()) r.verdict = verdict_from_json(j.at("verdict"));
        r.hypotheses = hypotheses_from_json(j.at("hypotheses"));
        for (const auto& pj : j.at("parts")) {
            ReportPart p;
            p.name = pj.at("part").get<std::string>();
            p.lhs = extnat_from_json(pj.at("lhs"));
            p.rhs = {extnat_from_json(pj.at("rhs").at("minuend")), extnat_from_json(pj.at("rhs").at("subtrahend"))};
            p.verdict = verdict_from_json(pj.at("verdict"));
            p.hypotheses = hypotheses_from_json(pj.at("hypotheses"));
            for (const auto& [k, v] : pj.at("values").items()) p.values[k] = extnat_from_json(v);
            r.parts.push_back(std::move(p));
        }
        for (const auto& [k, v] : j.at("values").items()) r.values[k] = value_from_json(v);
        r.notes = j.at("notes").get<std::map<std::string, std::string>>();
        if (!j.at("expectations_met").is_null()) r.expectations_met = j.at("expectations_met").get<bool>();
        r.mismatches = j.at("mismatches").get<std::vector<std::string>>();
        return r;
    } catch (const Json::exception& e) {
        throw Error(Error::Kind::ParseError, std::string("malformed report: ") + e.what());
    }
}

inline Report parse_report(const std::string& text) {
    try {
        return report_from_json(Json::parse(text));
    } catch (const Json::parse_error& e) {
        throw Error(Error::Kind::ParseError, e.what());
    }
}

// ---------------------------------------------------------------------------
// Rendering

enum class ReportFormat { structured, text };

inline std::optional<ReportFormat> parse_report_format(const std::string& s) {
    if (s == "structured" || s == "json") return ReportFormat::structured;
    if (s == "text") return ReportFormat::text;
    return std::nullopt;
}

inline std::string value_text(const ReportValue& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, bool>)
                return x ? "true" : "false";
            else if constexpr (std::is_same_v<T, ExtNat>)
                return x.str();
            else if constexpr (std::is_same_v<T, double>)
                return Json(x).dump();
            else
                return x;
        },
        v);
}

inline std::string render_text(const Report& r) {
    std::ostringstream os;
    os << "scenario " << r.scenario << " (" << r.task << ")";
    if (r.verdict) os << ": " << to_string(*r.verdict);
    os << "\n";
    auto ledger = [&](const std::vector<Hypothesis>& hs, const std::string& indent) {
        std::size_t w = 10;
        for (const auto& h : hs) w = std::max(w, h.name.size());
        os << indent << "| " << std::string("hypothesis").append(w - 10, ' ') << " | status   | detail\n";
        os << indent << "|-" << std::string(w, '-') << "-|----------|-------\n";
        for (const auto& h : hs) {
            std::string st = to_string(h.status);
            os << indent << "| " << h.name << std::string(w - h.name.size(), ' ') << " | " << st
               << std::string(8 - st.size(), ' ') << " | " << h.detail << "\n";
        }
    };
    if (!r.hypotheses.empty()) ledger(r.hypotheses, "  ");
    for (const auto& p : r.parts) {
        os << "  part " << p.name << ": " << p.lhs.str() << " >= " << p.rhs.str() << "  " << to_string(p.verdict) << "\n";
        if (!p.hypotheses.empty()) ledger(p.hypotheses, "    ");
        for (const auto& [k, v] : p.values) os << "    " << k << " = " << v.str() << "\n";
    }
    for (const auto& [k, v] : r.values) os << "  " << k << " = " << value_text(v) << "\n";
    for (const auto& [k, v] : r.notes) os << "  note " << k << ": " << v << "\n";
    if (r.expectations_met) {
        os << "  expectations " << (*r.expectations_met ? "met" : "NOT met") << "\n";
        for (const auto& m : r.mismatches) os << "    mismatch: " << m << "\n";
    }
    return os.str();
}

/// Deterministic bytes for the structured format.
inline std::string emit_report(const Report& r, ReportFormat format = ReportFormat::structured) {
    if (format == ReportFormat::text) return render_text(r);
    return to_json(r).dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Conversions from engine results

inline ReportPart to_part(const PartReport& p) {
    ReportPart out{p.part, p.lhs, p.rhs, p.verdict, p.hypotheses, {}};
    for (const auto& [k, v] : p.values) out.values[k] = v;
    return out;
}

inline Report to_report(const TheoremReport& t) {
    Report r;
    r.task = t.theorem;
    r.verdict = t.verdict();
    r.hypotheses = t.hypotheses;
    for (const auto& p : t.parts) r.parts.push_back(to_part(p));
    for (const auto& [k, v] : t.notes) r.notes[k] = v;
    for (const auto& [k, n] : t.deformation_exponents) r.values["n_" + Json(k).dump()] = ExtNat(n);
    return r;
}

inline Report to_report(const IndexInequalityReport& t, const FiniteSpace& X) {
    Report r;
    r.task = "index_engine";
    r.verdict = t.verdict;
    r.hypotheses = t.hypotheses;
    ReportPart part;
    part.name = "sum";
    part.lhs = t.lhs;
    part.rhs = {t.rhs, 0};
    part.verdict = t.verdict;
    part.values["base_term"] = t.base_term;
    for (const auto& [d, v] : t.slice_terms) part.values["slice_" + Json(d).dump()] = v;
    r.parts.push_back(std::move(part));
    r.values["lhs"] = ExtNat(t.lhs);
    r.values["rhs"] = ExtNat(t.rhs);
    r.values["critical_values_nondecreasing"] = t.table.nondecreasing();
    r.values["critical_values_in_band"] = t.table.within_band();
    r.values["critical_values_fixed"] = t.table.all_in_fixed_values();
    for (const auto& cv : t.table.values) r.values["c_" + std::to_string(cv.k)] = cv.c;
    if (!t.supervariance.holds && t.supervariance.witness) r.notes["supervariance_witness"] = X.format(*t.supervariance.witness);
    return r;
}

}  // namespace lslab
