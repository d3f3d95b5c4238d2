#include "fqm/report.hpp"

#include <sstream>

#include "fqm/classify.hpp"
#include "fqm/errors.hpp"
#include "json.hpp"

namespace fqm {

namespace {

using nlohmann::json;

const char* family_name(BinaryFamily f) {
    switch (f) {
        case BinaryFamily::Lr: return "Lr";
        case BinaryFamily::Jr: return "Jr";
        case BinaryFamily::MrRestriction: return "Mr-restriction";
        case BinaryFamily::NrRestriction: return "Nr-restriction";
    }
    return "?";
}

json element_row(const ElementStatus& st) {
    json row;
    row["label"] = st.element;
    row["is_coloop"] = st.is_coloop;
    row["girth_through"] = st.girth_through ? json(*st.girth_through) : json(nullptr);
    row["is_loose"] = st.is_loose;
    row["is_free"] = st.is_free;
    return row;
}

json classification_of(const LinearMatroid& m, const std::string& e) {
    json c;
    if (m.q() == 2) {
        c["kind"] = "binary-loose";
        try {
            BinaryLooseVerdict v = classify_binary_loose(m, e);
            c["case"] = v.kind == BinaryCase::Spanning ? "spanning" : "nonspanning";
            c["family"] = family_name(v.family);
            c["witness"] = v.witness;
        } catch (const ContradictionError& ex) {
            c["error"] = ex.what();
        } catch (const PreconditionError& ex) {
            c["error"] = ex.what();
        }
        return c;
    }
    if (m.q() == 3) {
        c["kind"] = "ternary-census";
        try {
            ColumnCensus cs = ternary_census(m, e);
            CensusCaps caps = census_caps(cs.rank);
            c["frame_circuit"] = cs.circuit;
            c["top_zero"] = cs.top_zero;
            c["type_counts"] = {cs.type[1], cs.type[2], cs.type[3], cs.type[4]};
            c["overflow"] = cs.overflow;
            c["size"] = m.size();
            c["size_bound"] = cs.size_bound;
            c["caps"] = {{"top_zero", caps.top_zero}, {"type1", caps.type1},
                         {"type2", caps.type2},       {"type3", caps.type3},
                         {"type4", caps.type4}};
        } catch (const PreconditionError& ex) {
            c["error"] = std::string("not applicable: ") + ex.what();
        } catch (const FalsificationError& ex) {
            c["error"] = std::string(ex.what()) + " [" + ex.details() + "]";
        }
        return c;
    }
    c["kind"] = "element-status";
    c["note"] = "detailed classification implemented for q=2 and q=3 only";
    return c;
}

json build_analysis(const LinearMatroid& m, const std::optional<std::string>& designated,
                    const AnalyzeOptions& opts) {
    json j;
    j["schema_version"] = 1;
    j["command"] = "analyze";
    j["q"] = m.q();
    j["rows"] = m.rep().rows();
    j["cols"] = m.size();
    j["rank"] = m.rank();
    j["size"] = m.size();
    j["simple"] = m.is_simple();
    j["coloops"] = m.coloops();
    auto g = m.girth();
    j["girth"] = g ? json(*g) : json(nullptr);
    j["paving"] = m.is_paving();
    j["sparse_paving"] = m.is_sparse_paving();
    j["designated"] = designated ? json(*designated) : json(nullptr);
    j["elements"] = json::array();
    for (const auto& l : m.ground_set()) j["elements"].push_back(element_row(m.element_status(l)));
    if (opts.with_circuits) j["circuits"] = m.circuits();
    if (opts.element) {
        const std::string& e = *opts.element;
        ElementStatus st = m.element_status(e);
        json er = element_row(st);
        er.erase("label");
        er["element"] = e;
        auto mc = m.min_circuit_through(e);
        er["min_circuit"] = mc ? json(*mc) : json(nullptr);
        er["classification"] = classification_of(m, e);
        j["element_report"] = er;
    }
    return j;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string joined(const json& arr, const char* sep = ", ") {
    std::string out;
    for (const auto& x : arr) {
        if (!out.empty()) out += sep;
        out += x.get<std::string>();
    }
    return out;
}

std::string set_text(const json& arr) { return "{" + joined(arr) + "}"; }

void render_element_report(std::ostringstream& out, const json& er) {
    out << "element " << er["element"].get<std::string>() << ":";
    if (er["is_coloop"].get<bool>()) {
        out << " coloop (in no circuit)\n";
    } else {
        out << " girth-through " << er["girth_through"].get<int>();
        out << (er["is_free"].get<bool>()   ? ", free"
                : er["is_loose"].get<bool>() ? ", loose"
                                             : ", not loose")
            << "\n";
    }
    if (!er["min_circuit"].is_null()) out << "  min circuit: " << set_text(er["min_circuit"]) << "\n";
    const json& c = er["classification"];
    const std::string kind = c["kind"].get<std::string>();
    if (c.contains("error")) {
        out << "  " << kind << ": " << c["error"].get<std::string>() << "\n";
        return;
    }
    if (kind == "binary-loose") {
        out << "  classification: " << c["case"].get<std::string>() << " case, family "
            << c["family"].get<std::string>() << "\n";
        out << "  witness:";
        for (const auto& [from, to] : c["witness"].items()) out << " " << from << "->" << to.get<std::string>();
        out << "\n";
    } else if (kind == "ternary-census") {
        out << "  census frame: " << set_text(c["frame_circuit"]) << "\n";
        const json& t = c["type_counts"];
        out << "  top-zero " << c["top_zero"].get<int>() << ", types [" << t[0].get<int>() << ", "
            << t[1].get<int>() << ", " << t[2].get<int>() << ", " << t[3].get<int>() << "], overflow "
            << c["overflow"].get<int>() << "\n";
        const json& caps = c["caps"];
        out << "  size " << c["size"].get<int>() << " <= bound " << c["size_bound"].get<long>()
            << "; caps: top-zero <= " << caps["top_zero"].get<int>() << ", types <= ["
            << caps["type1"].get<int>() << ", " << caps["type2"].get<int>() << ", "
            << caps["type3"].get<int>() << ", " << caps["type4"].get<int>() << "]\n";
    } else {
        out << "  " << c["note"].get<std::string>() << "\n";
    }
}

}  // namespace

std::string analyze_json(const LinearMatroid& m, const std::optional<std::string>& designated,
                         const AnalyzeOptions& opts) {
    return build_analysis(m, designated, opts).dump(2);
}

std::string analyze_text(const LinearMatroid& m, const std::optional<std::string>& designated,
                         const AnalyzeOptions& opts) {
    json j = build_analysis(m, designated, opts);
    std::ostringstream out;
    out << "q " << j["q"].get<int>() << "  rank " << j["rank"].get<int>() << "  elements "
        << j["size"].get<int>() << "  (" << j["rows"].get<int>() << "x" << j["cols"].get<int>()
        << " matrix)\n";
    out << "simple " << yes_no(j["simple"].get<bool>()) << "   coloops "
        << (j["coloops"].empty() ? "(none)" : joined(j["coloops"])) << "\n";
    out << "girth " << (j["girth"].is_null() ? "-" : std::to_string(j["girth"].get<int>()))
        << "   paving " << yes_no(j["paving"].get<bool>()) << "   sparse paving "
        << yes_no(j["sparse_paving"].get<bool>()) << "\n";
    if (!j["designated"].is_null()) out << "designated " << j["designated"].get<std::string>() << "\n";

    size_t w = 7;
    for (const auto& row : j["elements"]) w = std::max(w, row["label"].get<std::string>().size());
    out << "\n" << std::string(w - 7, ' ') << "element  coloop  girth@  loose  free\n";
    for (const auto& row : j["elements"]) {
        std::string label = row["label"].get<std::string>();
        out << std::string(w - label.size(), ' ') << label << "  ";
        out << (row["is_coloop"].get<bool>() ? "yes   " : "-     ") << "  ";
        std::string gt = row["girth_through"].is_null()
                             ? "-"
                             : std::to_string(row["girth_through"].get<int>());
        out << gt << std::string(gt.size() < 6 ? 6 - gt.size() : 0, ' ') << "  ";
        out << (row["is_loose"].get<bool>() ? "yes  " : "-    ") << "  ";
        out << (row["is_free"].get<bool>() ? "yes" : "-") << "\n";
    }

    if (j.contains("circuits")) {
        out << "\ncircuits (" << j["circuits"].size() << "):\n";
        for (const auto& c : j["circuits"]) out << "  " << set_text(c) << "\n";
    }
    if (j.contains("element_report")) {
        out << "\n";
        render_element_report(out, j["element_report"]);
    }
    return out.str();
}

std::string verify_json(const SuiteOutcome& outcome, bool include_elapsed) {
    json j = json::parse(outcome.to_json(include_elapsed));
    j["command"] = "verify";
    return j.dump(2);
}

}  // namespace fqm
