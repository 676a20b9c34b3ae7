#include "ssp/report.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace ssp {

namespace {

using ojson = nlohmann::ordered_json;

ojson audit_json(const Audit& a) {
    ojson traces = ojson::object();
    for (const auto& [t, n] : a.traces) traces[std::to_string(t)] = n;
    return ojson{{"checked", a.checked},
                 {"matrix_failures", a.matrix_failures},
                 {"congruence_failures", a.congruence_failures},
                 {"divisibility_failures", a.divisibility_failures},
                 {"traces", traces},
                 {"examples", a.examples}};
}

ojson runtime(const ReportMeta& m) { return m.runtime_ms ? ojson(*m.runtime_ms) : ojson(nullptr); }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string to_json(const CensusResult& r, const ReportMeta& meta) {
    ojson j;
    j["family"] = r.family;
    j["p"] = r.p;
    j["field_degree"] = r.field_degree;
    j["count"] = r.classes.size();
    ojson classes = ojson::array();
    for (const auto& c : r.classes) {
        ojson inv = ojson::object();
        for (const auto& [k, v] : c.invariants) inv[k] = v;
        classes.push_back(ojson{{"class_id", c.class_id}, {"model", c.model}, {"invariants", inv}, {"raw_hits", c.raw_hits}});
    }
    j["classes"] = classes;
    j["referee"] = ojson{{"formula", r.referee ? ojson(*r.referee) : ojson(nullptr)}};
    j["runtime_ms"] = runtime(meta);
    j["seed"] = meta.seed;
    j["level"] = r.level;
    if (r.geometric_classes) j["geometric_classes"] = *r.geometric_classes;
    ojson reasons = ojson::object();
    for (const auto& [k, v] : r.book.invalid_by_reason) reasons[k] = v;
    j["bookkeeping"] = ojson{{"box", r.book.box},
                             {"frobenius_rejected", r.book.frobenius_rejected},
                             {"prefiltered", r.book.prefiltered},
                             {"survivors", r.book.survivors},
                             {"invalid", r.book.invalid},
                             {"invalid_by_reason", reasons},
                             {"balanced", r.book.balanced()}};
    j["audit"] = audit_json(r.audit);
    ojson notes = ojson::object();
    for (const auto& [k, v] : r.notes) notes[k] = v;
    j["notes"] = notes;
    return j.dump(2) + "\n";
}

std::string to_csv(const CensusResult& r, const ReportMeta& meta) {
    std::string out = "family,p,field_degree,count,class_id,model,invariants,raw_hits,referee,runtime_ms,seed\n";
    const std::string referee = r.referee ? std::to_string(*r.referee) : "";
    const std::string rt = meta.runtime_ms ? std::to_string(*meta.runtime_ms) : "";
    for (const auto& c : r.classes) {
        std::string model, inv;
        for (size_t i = 0; i < c.model.size(); ++i) model += (i ? " " : "") + c.model[i];
        for (const auto& [k, v] : c.invariants) inv += (inv.empty() ? "" : ";") + k + "=" + v;
        out += csv_field(r.family) + "," + std::to_string(r.p) + "," + std::to_string(r.field_degree) + "," +
               std::to_string(r.classes.size()) + "," + std::to_string(c.class_id) + "," + csv_field(model) + "," +
               csv_field(inv) + "," + std::to_string(c.raw_hits) + "," + referee + "," + rt + "," +
               std::to_string(meta.seed) + "\n";
    }
    return out;
}

namespace {

ojson family_json(const FamilyCheck& f) {
    return ojson{{"name", f.name},         {"members", f.members},   {"passed", f.passed},
                 {"failures", f.failures}, {"audit", audit_json(f.audit)}, {"ok", f.ok()}};
}

}  // namespace

std::string to_json(const FamilyCheck& f, u32 p, const ReportMeta& meta) {
    ojson j;
    j["family"] = "verify";
    j["p"] = p;
    j["field_degree"] = 2;
    j["check"] = family_json(f);
    j["runtime_ms"] = runtime(meta);
    j["seed"] = meta.seed;
    return j.dump(2) + "\n";
}

std::string to_json(const TrigonalReport& t, const ReportMeta& meta) {
    ojson j;
    j["family"] = "trigonal5";
    j["p"] = 11;
    j["field_degree"] = 1;
    j["families"] = ojson::array({family_json(t.split), family_json(t.nonsplit)});
    j["representatives_distinct_over_f11"] = t.reps_distinct_over_f11;
    j["representatives_geometrically_one"] = t.reps_geometrically_one;
    j["ok"] = t.ok();
    j["runtime_ms"] = runtime(meta);
    j["seed"] = meta.seed;
    return j.dump(2) + "\n";
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write to " + tmp + " failed");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

}  // namespace ssp
