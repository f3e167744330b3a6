#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "gather3d/trace.hpp"

namespace gather3d::cli {

inline constexpr const char* kTraceFormat = "gather3d-trace";
inline constexpr const char* kTraceVersion = "v1";

class TraceFormatError : public std::runtime_error {
public:
    TraceFormatError(std::size_t line, const std::string& msg)
        : std::runtime_error("trace line " + std::to_string(line) + ": " + msg) {}
};

// Line-delimited JSON trace, one record per line:
//   {"type":"header","format":"gather3d-trace","version":"v1","strategy":..,
//    "vector_kind":..,"step":..,"initial_diameter":..,"config":{..}}
//   {"type":"step","t":..,"positions":[x0,y0,z0,..],"multiplicities":[..],
//    "vectors":[..],"merges":k,"next":[..],"R":..,"ell":[..],"L":..}
//   {"type":"summary",..}
// Doubles are written as shortest round-trip decimals.
class TraceWriter {
public:
    explicit TraceWriter(std::ostream& out) : out_(out) {}

    void header(const Trace& trace, const nlohmann::json& config);
    // `extras` is merged into the step record (R, ell, L).
    void entry(const TraceEntry& entry, const nlohmann::json& extras = nlohmann::json::object());
    void summary(const nlohmann::json& summary);

private:
    std::ostream& out_;
};

struct StoredTrace {
    Trace trace;
    nlohmann::json header;
    std::optional<nlohmann::json> summary;
};

// Throws TraceFormatError on malformed input.
StoredTrace read_trace(std::istream& in);
StoredTrace read_trace_file(const std::string& path);

std::string to_string(VectorKind kind);
VectorKind parse_vector_kind(const std::string& s);

}  // namespace gather3d::cli
