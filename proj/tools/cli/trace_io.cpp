#include "trace_io.hpp"

#include <fstream>

namespace gather3d::cli {
namespace {

using nlohmann::json;

json flatten(const std::vector<Vec3>& pts) {
    json a = json::array();
    for (const auto& p : pts) {
        a.push_back(p.x);
        a.push_back(p.y);
        a.push_back(p.z);
    }
    return a;
}

std::vector<Vec3> unflatten(const json& a, std::size_t line, const char* field) {
    if (!a.is_array() || a.size() % 3 != 0)
        throw TraceFormatError(line, std::string("'") + field + "' must be a flat array of triples");
    std::vector<Vec3> out;
    out.reserve(a.size() / 3);
    for (std::size_t k = 0; k < a.size(); k += 3) {
        if (!a[k].is_number() || !a[k + 1].is_number() || !a[k + 2].is_number())
            throw TraceFormatError(line, std::string("'") + field + "' holds a non-number");
        out.push_back({a[k].get<double>(), a[k + 1].get<double>(), a[k + 2].get<double>()});
    }
    return out;
}

const json& need(const json& rec, const char* key, std::size_t line) {
    const auto it = rec.find(key);
    if (it == rec.end()) throw TraceFormatError(line, std::string("missing field '") + key + "'");
    return *it;
}

}  // namespace

std::string to_string(VectorKind kind) {
    switch (kind) {
        case VectorKind::target: return "target";
        case VectorKind::velocity: return "velocity";
        case VectorKind::none: break;
    }
    return "none";
}

VectorKind parse_vector_kind(const std::string& s) {
    if (s == "target") return VectorKind::target;
    if (s == "velocity") return VectorKind::velocity;
    if (s == "none") return VectorKind::none;
    throw std::invalid_argument("unknown vector kind '" + s + "'");
}

void TraceWriter::header(const Trace& trace, const json& config) {
    json h{{"type", "header"},
           {"format", kTraceFormat},
           {"version", kTraceVersion},
           {"strategy", trace.strategy},
           {"vector_kind", to_string(trace.kind)},
           {"step", trace.step},
           {"initial_diameter", trace.initial_diameter},
           {"config", config}};
    out_ << h.dump() << '\n';
}

void TraceWriter::entry(const TraceEntry& e, const json& extras) {
    json rec{{"type", "step"},
             {"t", e.config.time},
             {"positions", flatten(e.config.positions)},
             {"multiplicities", e.config.multiplicities},
             {"merges", e.merges},
             {"next", e.next_index}};
    if (!e.vectors.empty()) rec["vectors"] = flatten(e.vectors);
    for (const auto& [k, v] : extras.items()) rec[k] = v;
    out_ << rec.dump() << '\n';
}

void TraceWriter::summary(const json& s) {
    json rec = s;
    rec["type"] = "summary";
    out_ << rec.dump() << '\n';
}

StoredTrace read_trace(std::istream& in) {
    StoredTrace st;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::parse_error& e) {
            throw TraceFormatError(lineno, std::string("invalid JSON: ") + e.what());
        }
        if (!rec.is_object()) throw TraceFormatError(lineno, "record is not an object");
        const auto& type = need(rec, "type", lineno);
        if (!type.is_string()) throw TraceFormatError(lineno, "'type' must be a string");
        try {
            if (type == "header") {
                if (have_header) throw TraceFormatError(lineno, "duplicate header");
                if (need(rec, "format", lineno) != kTraceFormat) throw TraceFormatError(lineno, "not a gather3d trace");
                if (need(rec, "version", lineno) != kTraceVersion)
                    throw TraceFormatError(lineno, "unsupported trace version");
                st.trace.strategy = need(rec, "strategy", lineno).get<std::string>();
                st.trace.kind = parse_vector_kind(need(rec, "vector_kind", lineno).get<std::string>());
                st.trace.step = need(rec, "step", lineno).get<double>();
                st.trace.initial_diameter = need(rec, "initial_diameter", lineno).get<double>();
                st.header = rec;
                have_header = true;
            } else if (type == "step") {
                if (!have_header) throw TraceFormatError(lineno, "step record before header");
                TraceEntry e;
                e.config.positions = unflatten(need(rec, "positions", lineno), lineno, "positions");
                e.config.multiplicities = need(rec, "multiplicities", lineno).get<std::vector<int>>();
                e.config.time = need(rec, "t", lineno).get<double>();
                if (e.config.multiplicities.size() != e.config.positions.size())
                    throw TraceFormatError(lineno, "multiplicities do not match positions");
                e.merges = need(rec, "merges", lineno).get<std::size_t>();
                e.next_index = need(rec, "next", lineno).get<std::vector<std::size_t>>();
                if (const auto it = rec.find("vectors"); it != rec.end()) {
                    e.vectors = unflatten(*it, lineno, "vectors");
                    if (e.vectors.size() != e.config.live())
                        throw TraceFormatError(lineno, "vectors do not match positions");
                }
                if (!st.trace.entries.empty()) {
                    const auto& prev = st.trace.entries.back();
                    if (!(e.config.time > prev.config.time)) throw TraceFormatError(lineno, "times must increase");
                    for (auto j : prev.next_index)
                        if (j >= e.config.live()) throw TraceFormatError(lineno, "index map out of range");
                }
                st.trace.entries.push_back(std::move(e));
            } else if (type == "summary") {
                st.summary = rec;
            } else {
                throw TraceFormatError(lineno, "unknown record type");
            }
        } catch (const json::exception& e) {
            throw TraceFormatError(lineno, std::string("bad field: ") + e.what());
        } catch (const std::invalid_argument& e) {
            throw TraceFormatError(lineno, e.what());
        }
    }
    if (!have_header) throw TraceFormatError(lineno, "missing header");
    return st;
}

StoredTrace read_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TraceFormatError(0, "cannot open '" + path + "'");
    return read_trace(in);
}

}  // namespace gather3d::cli
