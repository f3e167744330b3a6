#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace gather3d::cli {
namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    return out;
}

struct Value {
    std::string text;
    std::size_t line;

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError(line, what + " (got '" + text + "')");
    }

    double real() const {
        double v = 0.0;
        const auto* end = text.data() + text.size();
        auto [ptr, ec] = std::from_chars(text.data(), end, v);
        if (ec != std::errc() || ptr != end || !std::isfinite(v)) fail("expected a real number");
        return v;
    }

    long long integer() const {
        long long v = 0;
        const auto* end = text.data() + text.size();
        auto [ptr, ec] = std::from_chars(text.data(), end, v);
        if (ec != std::errc() || ptr != end) fail("expected an integer");
        return v;
    }

    std::size_t count(long long min = 0) const {
        const auto v = integer();
        if (v < min) fail("expected an integer >= " + std::to_string(min));
        return static_cast<std::size_t>(v);
    }

    bool boolean() const {
        std::string t = text;
        std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
        if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
        if (t == "false" || t == "no" || t == "off" || t == "0") return false;
        fail("expected a boolean");
    }

    static Vec3 vec_from(const std::string& s, const Value& owner) {
        const auto parts = split(s, ',');
        if (parts.size() != 3) owner.fail("expected three comma-separated components");
        double c[3];
        for (int k = 0; k < 3; ++k) c[k] = Value{parts[static_cast<std::size_t>(k)], owner.line}.real();
        return {c[0], c[1], c[2]};
    }

    Vec3 vec() const { return vec_from(text, *this); }

    std::vector<Vec3> vec_list() const {
        std::vector<Vec3> out;
        for (const auto& item : split(text, ';'))
            if (!item.empty()) out.push_back(vec_from(item, *this));
        return out;
    }

    std::vector<int> int_list() const {
        std::vector<int> out;
        for (const auto& item : split(text, ',')) {
            if (item.empty()) continue;
            const auto v = Value{item, line}.integer();
            if (v < 1) fail("sizes must be positive");
            out.push_back(static_cast<int>(v));
        }
        return out;
    }
};

}  // namespace

std::string to_string(Engine e) { return e == Engine::fsync ? "fsync" : "continuous"; }

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::optional<Engine> engine;
    std::optional<double> gather_tol;
    std::size_t engine_line = 0;

    std::istringstream in(text);
    std::string raw;
    std::string section;
    std::size_t lineno = 0;
    std::map<std::string, std::size_t> seen;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        // '#' comments anywhere; ';' only at line start since it separates vector lists.
        if (const auto c = line.find('#'); c != std::string::npos) line = line.substr(0, c);
        line = trim(line);
        if (line.empty() || line.front() == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(lineno, "unterminated section header");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            static const char* known[] = {"generator", "strategy", "engine", "checkers", "analysis", "output", "sweep"};
            if (std::find(std::begin(known), std::end(known), section) == std::end(known))
                throw ConfigError(lineno, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(lineno, "expected 'key = value'");
        if (section.empty()) throw ConfigError(lineno, "key outside of any section");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const Value val{trim(std::string_view(line).substr(eq + 1)), lineno};
        if (key.empty()) throw ConfigError(lineno, "empty key");
        if (val.text.empty()) throw ConfigError(lineno, "empty value for '" + key + "'");
        const std::string full = section + "." + key;
        if (seen.count(full)) throw ConfigError(lineno, "duplicate key '" + key + "' in [" + section + "]");
        seen[full] = lineno;

        auto unknown = [&]() { throw ConfigError(lineno, "unknown key '" + key + "' in [" + section + "]"); };
        auto& g = cfg.generator;
        if (section == "generator") {
            if (key == "kind") {
                try {
                    g.kind = generators::parse_kind(val.text);
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(lineno, e.what());
                }
            } else if (key == "n") {
                g.n = static_cast<int>(val.count(1));
            } else if (key == "seed") {
                g.seed = static_cast<std::uint64_t>(val.count(0));
            } else if (key == "spacing") {
                g.spacing = val.real();
            } else if (key == "radius") {
                g.ball_radius = val.real();
            } else if (key == "normal") {
                g.normal = val.vec();
            } else if (key == "offset") {
                g.offset = val.vec();
            } else {
                unknown();
            }
        } else if (section == "strategy") {
            if (key != "name") unknown();
            if (val.text != "gtc3d" && val.text != "gtc3d-cont" && val.text != "moam")
                val.fail("strategy must be one of gtc3d, gtc3d-cont, moam");
            cfg.strategy = val.text;
        } else if (section == "engine") {
            if (key == "mode") {
                if (val.text == "fsync") engine = Engine::fsync;
                else if (val.text == "continuous") engine = Engine::continuous;
                else val.fail("engine mode must be fsync or continuous");
                engine_line = lineno;
            } else if (key == "dt") {
                cfg.dt = val.real();
                if (!(cfg.dt > 0.0)) val.fail("dt must be positive");
            } else if (key == "max_rounds") {
                cfg.max_rounds = val.count(0);
            } else if (key == "max_time") {
                cfg.max_time = val.real();
                if (!(cfg.max_time >= 0.0)) val.fail("max_time must be non-negative");
            } else if (key == "gather_tol") {
                gather_tol = val.real();
                if (!(*gather_tol >= 0.0)) val.fail("gather_tol must be non-negative");
            } else {
                unknown();
            }
        } else if (section == "checkers") {
            auto& c = cfg.checks;
            if (key == "connectivity") c.connectivity = val.boolean();
            else if (key == "contracting") c.contracting = val.boolean();
            else if (key == "tangential_normal") c.tangential_normal = val.boolean();
            else if (key == "ell_monotonicity") c.ell_monotonicity = val.boolean();
            else if (key == "ell_derivative") c.ell_derivative = val.boolean();
            else if (key == "radius_monotonicity") c.radius_monotonicity = val.boolean();
            else if (key == "contracting_tol") c.contracting_tol = val.real();
            else if (key == "ell_directions") c.ell_directions = val.count(1);
            else unknown();
        } else if (section == "analysis") {
            if (key == "quadrature") cfg.quadrature = val.count(1);
            else if (key == "log_big_L") cfg.log_big_L = val.boolean();
            else if (key == "log_directions") {
                cfg.log_directions = val.vec_list();
                for (const auto& d : cfg.log_directions)
                    if (norm(d) == 0.0) val.fail("log directions must be nonzero");
            } else unknown();
        } else if (section == "output") {
            if (key == "trace") cfg.trace_file = val.text;
            else if (key == "summary") cfg.summary_file = val.text;
            else if (key == "sweep") cfg.sweep_file = val.text;
            else if (key == "vectors") cfg.record_vectors = val.boolean();
            else if (key == "stride") cfg.stride = val.count(1);
            else unknown();
        } else if (section == "sweep") {
            if (key != "sizes") unknown();
            cfg.sweep_sizes = val.int_list();
            if (cfg.sweep_sizes.empty()) val.fail("sizes must list at least one size");
        }
    }

    const Engine natural = cfg.strategy == "gtc3d" ? Engine::fsync : Engine::continuous;
    cfg.engine = engine.value_or(natural);
    if (cfg.engine != natural)
        throw ConfigError(engine_line, "strategy '" + cfg.strategy + "' cannot run under the " +
                                           to_string(cfg.engine) + " engine");
    cfg.gather_tol = gather_tol;
    validate(cfg);
    return cfg;
}

void validate(const ExperimentConfig& cfg) {
    const bool fsync_strategy = cfg.strategy == "gtc3d";
    if (fsync_strategy != (cfg.engine == Engine::fsync))
        throw ConfigError(0, "strategy '" + cfg.strategy + "' is incompatible with the " + to_string(cfg.engine) +
                                 " engine");
    if (fsync_strategy && (cfg.checks.contracting || cfg.checks.tangential_normal || cfg.checks.ell_derivative))
        throw ConfigError(0, "velocity checkers need a continuous strategy");
    if (cfg.generator.n < 1) throw ConfigError(0, "generator n must be >= 1");
    if (cfg.strategy == "moam" && cfg.gather_tol && *cfg.gather_tol < cfg.dt)
        throw ConfigError(0, "moam needs gather_tol >= dt, the Euler step cannot resolve a tighter swarm");
}

double gather_tolerance(const ExperimentConfig& cfg) {
    if (cfg.gather_tol) return *cfg.gather_tol;
    return cfg.engine == Engine::fsync ? 1e-9 : std::max(1e-3, cfg.dt);
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
    using nlohmann::json;
    auto vec = [](const Vec3& v) { return json::array({v.x, v.y, v.z}); };
    json dirs = json::array();
    for (const auto& d : cfg.log_directions) dirs.push_back(vec(d));
    const auto& g = cfg.generator;
    const auto& c = cfg.checks;
    return json{
        {"generator",
         {{"kind", generators::to_string(g.kind)},
          {"n", g.n},
          {"seed", g.seed},
          {"spacing", g.spacing},
          {"radius", g.ball_radius},
          {"normal", vec(g.normal)},
          {"offset", vec(g.offset)}}},
        {"strategy", cfg.strategy},
        {"engine",
         {{"mode", to_string(cfg.engine)},
          {"dt", cfg.dt},
          {"max_rounds", cfg.max_rounds},
          {"max_time", cfg.max_time},
          {"gather_tol", gather_tolerance(cfg)}}},
        {"checkers",
         {{"connectivity", c.connectivity},
          {"contracting", c.contracting},
          {"tangential_normal", c.tangential_normal},
          {"ell_monotonicity", c.ell_monotonicity},
          {"ell_derivative", c.ell_derivative},
          {"radius_monotonicity", c.radius_monotonicity},
          {"contracting_tol", c.contracting_tol},
          {"ell_directions", c.ell_directions}}},
        {"analysis", {{"quadrature", cfg.quadrature}, {"log_big_L", cfg.log_big_L}, {"log_directions", dirs}}},
        {"output",
         {{"trace", cfg.trace_file},
          {"summary", cfg.summary_file},
          {"sweep", cfg.sweep_file},
          {"vectors", cfg.record_vectors},
          {"stride", cfg.stride}}},
        {"sweep", {{"sizes", cfg.sweep_sizes}}},
    };
}

}  // namespace gather3d::cli
