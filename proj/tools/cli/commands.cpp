#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "trace_io.hpp"

namespace gather3d::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class InsufficientData : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Writes through a temporary file and renames it into place.
void write_atomically(const fs::path& path, const std::string& contents) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        f << contents;
        if (!f) throw std::runtime_error("failed writing '" + tmp.string() + "'");
    }
    fs::rename(tmp, path);
}

fs::path output_path(const Overrides& ov, const std::string& file) {
    const fs::path p(file);
    if (p.is_absolute() || !ov.out_dir) return p;
    return fs::path(*ov.out_dir) / p;
}

double connectivity_tolerance(const Trace& trace) {
    return trace.kind == VectorKind::velocity ? 2.0 * trace.step : 1e-9;
}

// Shortest decimal that parses back to the same double.
std::string shortest(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

int robot_count(const Trace& trace) { return trace.entries.empty() ? 0 : trace.entries.front().config.robot_count(); }

std::size_t worker_count(std::size_t jobs) {
    std::size_t cap = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("GATHER3D_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) cap = static_cast<std::size_t>(v);
    }
    return std::max<std::size_t>(1, std::min(cap, jobs));
}

}  // namespace

void apply(const Overrides& ov, ExperimentConfig& cfg) {
    if (ov.seed) cfg.generator.seed = *ov.seed;
    if (ov.dt) {
        if (!(*ov.dt > 0.0)) throw ConfigError(0, "--dt must be positive");
        cfg.dt = *ov.dt;
    }
    validate(cfg);
}

const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names{"connectivity",     "contracting",   "tangential-normal",
                                                "ell-monotonicity", "ell-derivative", "radius-monotonicity"};
    return names;
}

analysis::CheckReport replay_check(const std::string& name, const Trace& trace, const CheckerToggles& opts) {
    const bool velocities = trace.kind == VectorKind::velocity && trace.has_vectors();
    auto need_velocities = [&] {
        if (!velocities) throw InsufficientData("property '" + name + "' needs recorded velocities");
    };
    if (name == "connectivity") {
        for (std::size_t k = 0; k + 1 < trace.entries.size(); ++k)
            if (trace.entries[k].next_index.size() != trace.entries[k].config.live())
                throw InsufficientData("trace lacks index maps");
        return analysis::connectivity_check(trace, connectivity_tolerance(trace));
    }
    if (name == "contracting") {
        need_velocities();
        return analysis::contracting_check(trace, opts.contracting_tol);
    }
    if (name == "tangential-normal") {
        need_velocities();
        return analysis::tangential_normal_check(trace);
    }
    if (name == "ell-monotonicity") {
        const auto dirs = hemisphere_directions(opts.ell_directions);
        return analysis::ell_monotonicity_check(trace, dirs);
    }
    if (name == "ell-derivative") {
        need_velocities();
        analysis::CheckReport total;
        total.property = "ell-derivative";
        for (const auto& d : hemisphere_directions(opts.ell_directions))
            total.merge(analysis::ell_derivative_check(trace, d, robot_count(trace)));
        // Forward differences are noisy at kinks of the hull; at most 1% of
        // (step, direction) pairs may exceed the bound.
        total.passed = total.violations <= total.checked / 100;
        return total;
    }
    if (name == "radius-monotonicity") {
        return analysis::radius_monotonicity_check(trace, connectivity_tolerance(trace));
    }
    throw std::invalid_argument("unknown property '" + name + "'");
}

json report_json(const analysis::CheckReport& rep) {
    json j{{"property", rep.property},
           {"passed", rep.passed},
           {"checked", rep.checked},
           {"violations", rep.violations},
           {"skipped", rep.skipped},
           {"worst_margin", std::isfinite(rep.worst_margin) ? json(rep.worst_margin) : json(nullptr)},
           {"first_violation_time", rep.first_violation_time ? json(*rep.first_violation_time) : json(nullptr)}};
    if (!rep.details.empty()) j["details"] = rep.details;
    return j;
}

Outcome execute(const ExperimentConfig& cfg, bool record) {
    const Configuration start = generators::generate(cfg.generator);
    const strategies::RecordOptions rec{record, cfg.stride};
    Outcome o;
    if (cfg.engine == Engine::fsync) {
        o.run = strategies::run_fsync(start, strategies::gtc3d(), cfg.max_rounds, gather_tolerance(cfg), rec);
    } else {
        const auto strat = cfg.strategy == "moam" ? strategies::moam() : strategies::gtc3d_cont();
        o.run = strategies::integrate(start, strat, cfg.dt, cfg.max_time, gather_tolerance(cfg), rec);
    }
    if (record) {
        std::vector<std::string> wanted;
        const auto& c = cfg.checks;
        if (c.connectivity) wanted.push_back("connectivity");
        if (c.contracting) wanted.push_back("contracting");
        if (c.tangential_normal) wanted.push_back("tangential-normal");
        if (c.ell_monotonicity) wanted.push_back("ell-monotonicity");
        if (c.ell_derivative) wanted.push_back("ell-derivative");
        if (c.radius_monotonicity) wanted.push_back("radius-monotonicity");
        for (const auto& name : wanted) {
            auto rep = replay_check(name, o.run.trace, cfg.checks);
            o.checks_passed = o.checks_passed && rep.passed;
            o.checks.emplace(name, std::move(rep));
        }
        if (!cfg.record_vectors) {
            o.run.trace.kind = VectorKind::none;
            for (auto& e : o.run.trace.entries) e.vectors.clear();
        }
    }

    json checks = json::object();
    for (const auto& [name, rep] : o.checks) checks[name] = report_json(rep);
    o.summary = json{{"strategy", cfg.strategy},
                     {"engine", to_string(cfg.engine)},
                     {"n", start.robot_count()},
                     {"initial_diameter", diameter(start)},
                     {"gathered", o.run.gathered},
                     {"rounds", o.run.steps},
                     {"time", o.run.time},
                     {"live", o.run.final_config.live()},
                     {"final_diameter", diameter(o.run.final_config)},
                     {"final_radius", analysis::global_ses_radius(o.run.final_config)},
                     {"checks", checks}};
    if (cfg.engine == Engine::continuous) o.summary["dt"] = cfg.dt;
    return o;
}

int cmd_run(const std::string& config_path, const Overrides& ov, std::ostream& out, std::ostream& err) {
    ExperimentConfig cfg;
    Outcome o;
    try {
        cfg = load_config(config_path);
        apply(ov, cfg);
        o = execute(cfg);
    } catch (const ConfigError& e) {
        err << config_path << ": " << e.what() << '\n';
        return exit_code::usage;
    } catch (const std::exception& e) {
        err << config_path << ": " << e.what() << '\n';
        return exit_code::usage;
    }

    std::optional<analysis::Quadrature> quad;
    if (cfg.log_big_L) quad = analysis::Quadrature::hemisphere(cfg.quadrature);
    std::ostringstream trace_text;
    TraceWriter writer(trace_text);
    writer.header(o.run.trace, to_json(cfg));
    for (const auto& e : o.run.trace.entries) {
        json extras{{"R", analysis::global_ses_radius(e.config)}};
        if (!cfg.log_directions.empty()) {
            json ell = json::array();
            for (const auto& d : cfg.log_directions) ell.push_back(analysis::projected_length(e.config, d));
            extras["ell"] = ell;
        }
        if (quad) extras["L"] = analysis::big_L(e.config, *quad);
        writer.entry(e, extras);
    }
    writer.summary(o.summary);
    try {
        write_atomically(output_path(ov, cfg.trace_file), trace_text.str());
        write_atomically(output_path(ov, cfg.summary_file), o.summary.dump(2) + "\n");
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return exit_code::usage;
    }
    if (!ov.quiet) out << o.summary.dump() << '\n';
    if (!o.run.gathered) return exit_code::horizon;
    return o.checks_passed ? exit_code::ok : exit_code::violation;
}

int cmd_sweep(const std::string& config_path, const Overrides& ov, std::ostream& out, std::ostream& err) {
    ExperimentConfig cfg;
    try {
        cfg = load_config(config_path);
        apply(ov, cfg);
        if (cfg.sweep_sizes.empty()) throw ConfigError(0, "[sweep] sizes is required for a sweep");
    } catch (const std::exception& e) {
        err << config_path << ": " << e.what() << '\n';
        return exit_code::usage;
    }

    struct Row {
        int n = 0;
        double delta = 0.0;
        double measure = 0.0;
        bool gathered = false;
        std::string error;
    };
    std::vector<Row> rows(cfg.sweep_sizes.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < rows.size(); k = next++) {
            ExperimentConfig one = cfg;
            one.generator.n = cfg.sweep_sizes[k];
            rows[k].n = one.generator.n;
            try {
                const Outcome o = execute(one, false);
                rows[k].delta = o.summary["initial_diameter"].get<double>();
                rows[k].measure = o.run.time;
                rows[k].gathered = o.run.gathered;
            } catch (const std::exception& e) {
                rows[k].error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < worker_count(rows.size()); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    for (const auto& r : rows)
        if (!r.error.empty()) {
            err << config_path << ": n=" << r.n << ": " << r.error << '\n';
            return exit_code::usage;
        }

    std::ostringstream csv;
    csv << "n,delta,strategy,dt,gathering_time_or_rounds\n";
    bool all = true;
    for (const auto& r : rows) {
        csv << r.n << ',' << shortest(r.delta) << ',' << cfg.strategy << ',';
        if (cfg.engine == Engine::continuous) csv << shortest(cfg.dt);
        csv << ',' << shortest(r.measure) << '\n';
        all = all && r.gathered;
    }
    for (const auto& r : rows)
        if (!r.gathered) csv << "# n=" << r.n << " hit the horizon without gathering\n";
    if (rows.size() >= 3 && all) {
        std::vector<double> ns, ms;
        for (const auto& r : rows) {
            ns.push_back(r.n);
            ms.push_back(r.measure);
        }
        try {
            const auto fit = analysis::scaling_fit(ns, ms);
            csv << "# exponent=" << shortest(fit.exponent) << " r2=" << shortest(fit.r_squared) << '\n';
        } catch (const std::invalid_argument& e) {
            csv << "# no fit: " << e.what() << '\n';
        }
        if (cfg.engine == Engine::continuous) {
            double worst = 0.0;
            for (const auto& r : rows) worst = std::max(worst, r.measure / (r.delta * std::pow(r.n, 1.5)));
            csv << "# max time/(delta*n^1.5)=" << shortest(worst) << '\n';
        }
    }
    try {
        write_atomically(output_path(ov, cfg.sweep_file), csv.str());
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return exit_code::usage;
    }
    if (!ov.quiet) out << csv.str();
    return all ? exit_code::ok : exit_code::horizon;
}

int cmd_check(const std::string& trace_path, const std::vector<std::string>& properties, const Overrides& ov,
              std::ostream& out, std::ostream& err) {
    StoredTrace st;
    try {
        st = read_trace_file(trace_path);
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return exit_code::usage;
    }
    CheckerToggles opts;
    if (const auto it = st.header.find("config"); it != st.header.end() && it->contains("checkers")) {
        const auto& c = (*it)["checkers"];
        opts.contracting_tol = c.value("contracting_tol", opts.contracting_tol);
        opts.ell_directions = c.value("ell_directions", opts.ell_directions);
    }
    std::vector<std::string> names = properties;
    if (names.empty()) {
        names.push_back("connectivity");
        names.push_back("ell-monotonicity");
        if (st.trace.kind == VectorKind::velocity && st.trace.has_vectors()) names.push_back("contracting");
    }
    json reports = json::array();
    bool all = true;
    for (const auto& name : names) {
        try {
            const auto rep = replay_check(name, st.trace, opts);
            all = all && rep.passed;
            reports.push_back(report_json(rep));
        } catch (const std::exception& e) {
            err << trace_path << ": " << e.what() << '\n';
            return exit_code::usage;
        }
    }
    if (ov.out_dir) {
        try {
            write_atomically(fs::path(*ov.out_dir) / "check.json", reports.dump(2) + "\n");
        } catch (const std::exception& e) {
            err << e.what() << '\n';
            return exit_code::usage;
        }
    }
    if (!ov.quiet)
        for (const auto& r : reports) out << r.dump() << '\n';
    return all ? exit_code::ok : exit_code::violation;
}

}  // namespace gather3d::cli
