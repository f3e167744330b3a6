#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gather3d/generators.hpp"

namespace gather3d::cli {

// Malformed configuration; `line` is 1-based, 0 when not tied to a line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::size_t line, const std::string& msg)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

enum class Engine { fsync, continuous };

struct CheckerToggles {
    bool connectivity = false;
    bool contracting = false;
    bool tangential_normal = false;
    bool ell_monotonicity = false;
    bool ell_derivative = false;
    bool radius_monotonicity = false;
    double contracting_tol = 1e-6;
    std::size_t ell_directions = 32;
};

struct ExperimentConfig {
    generators::GeneratorSpec generator;
    std::string strategy = "gtc3d";
    Engine engine = Engine::fsync;
    double dt = 1e-3;
    std::size_t max_rounds = 100000;
    double max_time = 1000.0;
    // Unset means the engine default, see gather_tolerance().
    std::optional<double> gather_tol;
    CheckerToggles checks;
    std::size_t quadrature = 256;
    bool log_big_L = false;
    std::vector<Vec3> log_directions;
    bool record_vectors = true;
    std::size_t stride = 1;
    std::string trace_file = "trace.jsonl";
    std::string summary_file = "summary.json";
    std::string sweep_file = "sweep.csv";
    std::vector<int> sweep_sizes;
};

// Parses the sectioned key = value format:
//
//   [generator]  kind, n, seed, spacing, radius, normal, offset
//   [strategy]   name (gtc3d | gtc3d-cont | moam)
//   [engine]     mode (fsync | continuous), dt, max_rounds, max_time, gather_tol
//   [checkers]   connectivity, contracting, tangential_normal, ell_monotonicity,
//                ell_derivative, radius_monotonicity, contracting_tol, ell_directions
//   [analysis]   quadrature, log_big_L, log_directions (x,y,z; x,y,z ...)
//   [output]     trace, summary, sweep, vectors, stride
//   [sweep]      sizes (comma separated)
//
// '#' starts a comment anywhere, ';' only at the start of a line.
// Throws ConfigError carrying the offending line.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Strategy/engine compatibility: gtc3d runs under FSYNC only, the others continuous.
void validate(const ExperimentConfig& cfg);

// 1e-9 under FSYNC. Continuous runs default to max(1e-3, dt): an Euler step of
// length dt cannot resolve a swarm narrower than dt unless the strategy snaps.
double gather_tolerance(const ExperimentConfig& cfg);

nlohmann::json to_json(const ExperimentConfig& cfg);

std::string to_string(Engine e);

}  // namespace gather3d::cli
