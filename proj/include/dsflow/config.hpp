#pragma once

// Flat key-value run configuration (dotted sections, UTF-8, '#' comments).
// Every key is documented in the README; parsing is strict and the
// serialize/parse pair round-trips losslessly.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dsflow/errors.hpp"
#include "dsflow/flow.hpp"
#include "dsflow/verifier.hpp"

namespace dsflow {

enum class InitKind { slice, cosine, sampler };

inline const char* to_string(InitKind k) {
    switch (k) {
        case InitKind::slice: return "slice";
        case InitKind::cosine: return "cosine";
        case InitKind::sampler: return "sampler";
    }
    return "unknown";
}

struct RunConfig {
    int n = 2;
    int k = 2;
    int segments = 256;

    InitKind init_kind = InitKind::slice;
    double rho0 = 1.0;
    std::vector<double> amplitudes; // cosine kind: a_m for m = 1..size()
    double amp_max = 0.03;          // sampler kind
    int modes = 3;
    TargetClass target_class = TargetClass::pinched_admissible;
    std::uint64_t seed = 0;

    StopCriteria stop;
    double safety = 0.2;
    MonitorConfig monitor;
    Tolerances tol;
    int probe_count = 100;

    bool emit_csv = true;
    bool emit_json = true;
    bool emit_svg = false;
    std::string output_dir = "out";

    bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

inline double parse_double(const std::string& s, const std::string& key) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw config_error("bad numeric value for " + key + ": '" + s + "'");
    return v;
}

template <typename Int>
inline Int parse_int(const std::string& s, const std::string& key) {
    Int v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw config_error("bad integer value for " + key + ": '" + s + "'");
    return v;
}

inline bool parse_bool(const std::string& s, const std::string& key) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw config_error("bad boolean value for " + key + ": '" + s + "'");
}

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

} // namespace detail

inline std::string serialize_config(const RunConfig& c) {
    std::ostringstream out;
    auto kv = [&](const char* key, const std::string& value) { out << key << " = " << value << "\n"; };
    auto kvd = [&](const char* key, double v) { kv(key, detail::format_double(v)); };
    auto kvb = [&](const char* key, bool v) { kv(key, v ? "true" : "false"); };

    kv("run.n", std::to_string(c.n));
    kv("run.k", std::to_string(c.k));
    kv("grid.segments", std::to_string(c.segments));
    kv("init.kind", to_string(c.init_kind));
    kvd("init.rho0", c.rho0);
    std::string amps;
    for (std::size_t i = 0; i < c.amplitudes.size(); ++i)
        amps += (i ? "," : "") + detail::format_double(c.amplitudes[i]);
    kv("init.amplitudes", amps);
    kvd("init.amp_max", c.amp_max);
    kv("init.modes", std::to_string(c.modes));
    kv("init.target_class", to_string(c.target_class));
    kv("init.seed", std::to_string(c.seed));
    kvd("stop.tol_speed", c.stop.tol_speed);
    kvd("stop.tol_osc", c.stop.tol_osc);
    kvd("stop.t_max", c.stop.t_max);
    kv("stop.max_steps", std::to_string(c.stop.max_steps));
    kvd("flow.safety", c.safety);
    kv("monitor.record_every", std::to_string(c.monitor.record_every));
    kvd("monitor.record_dt", c.monitor.record_dt);
    kvd("monitor.tol", c.monitor.violation_tol);
    kvb("monitor.abort_on_violation", c.monitor.abort_on_violation);
    kvb("monitor.check_pinching", c.monitor.check_pinching);
    kvb("monitor.check_cone", c.monitor.check_cone);
    kvd("tol.eps_space", c.tol.eps_space);
    kvd("tol.eps_cone", c.tol.eps_cone);
    kv("probe.count", std::to_string(c.probe_count));
    kvb("emit.csv", c.emit_csv);
    kvb("emit.json", c.emit_json);
    kvb("emit.svg", c.emit_svg);
    kv("output.dir", c.output_dir);
    return out.str();
}

inline RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));

        if (key == "run.n") c.n = detail::parse_int<int>(val, key);
        else if (key == "run.k") c.k = detail::parse_int<int>(val, key);
        else if (key == "grid.segments") c.segments = detail::parse_int<int>(val, key);
        else if (key == "init.kind") {
            if (val == "slice") c.init_kind = InitKind::slice;
            else if (val == "cosine") c.init_kind = InitKind::cosine;
            else if (val == "sampler") c.init_kind = InitKind::sampler;
            else throw config_error("unknown init.kind: '" + val + "'");
        } else if (key == "init.rho0") c.rho0 = detail::parse_double(val, key);
        else if (key == "init.amplitudes") {
            c.amplitudes.clear();
            if (!val.empty()) {
                std::istringstream as(val);
                std::string tok;
                while (std::getline(as, tok, ','))
                    c.amplitudes.push_back(detail::parse_double(detail::trim(tok), key));
            }
        } else if (key == "init.amp_max") c.amp_max = detail::parse_double(val, key);
        else if (key == "init.modes") c.modes = detail::parse_int<int>(val, key);
        else if (key == "init.target_class") c.target_class = target_class_from_string(val);
        else if (key == "init.seed") c.seed = detail::parse_int<std::uint64_t>(val, key);
        else if (key == "stop.tol_speed") c.stop.tol_speed = detail::parse_double(val, key);
        else if (key == "stop.tol_osc") c.stop.tol_osc = detail::parse_double(val, key);
        else if (key == "stop.t_max") c.stop.t_max = detail::parse_double(val, key);
        else if (key == "stop.max_steps") c.stop.max_steps = detail::parse_int<long>(val, key);
        else if (key == "flow.safety") c.safety = detail::parse_double(val, key);
        else if (key == "monitor.record_every") c.monitor.record_every = detail::parse_int<long>(val, key);
        else if (key == "monitor.record_dt") c.monitor.record_dt = detail::parse_double(val, key);
        else if (key == "monitor.tol") c.monitor.violation_tol = detail::parse_double(val, key);
        else if (key == "monitor.abort_on_violation") c.monitor.abort_on_violation = detail::parse_bool(val, key);
        else if (key == "monitor.check_pinching") c.monitor.check_pinching = detail::parse_bool(val, key);
        else if (key == "monitor.check_cone") c.monitor.check_cone = detail::parse_bool(val, key);
        else if (key == "tol.eps_space") c.tol.eps_space = detail::parse_double(val, key);
        else if (key == "tol.eps_cone") c.tol.eps_cone = detail::parse_double(val, key);
        else if (key == "probe.count") c.probe_count = detail::parse_int<int>(val, key);
        else if (key == "emit.csv") c.emit_csv = detail::parse_bool(val, key);
        else if (key == "emit.json") c.emit_json = detail::parse_bool(val, key);
        else if (key == "emit.svg") c.emit_svg = detail::parse_bool(val, key);
        else if (key == "output.dir") c.output_dir = val;
        else throw config_error("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    return c;
}

inline RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

/// Enforce the run invariants; throws config_error on violation.
inline void validate(const RunConfig& c) {
    if (c.n < 2 || c.n > kMaxCurvatures)
        throw config_error("run.n must lie in [2, 16]");
    if (c.k < 2 || c.k > c.n)
        throw config_error("run.k must lie in {2,...,n}; got k = " + std::to_string(c.k));
    if (c.segments < 8 || c.segments % 2 != 0)
        throw config_error("grid.segments must be even and at least 8");
    if (!(c.rho0 > 0.0)) throw config_error("init.rho0 must be positive");
    if (c.amp_max < 0.0) throw config_error("init.amp_max must be nonnegative");
    if (c.modes < 1) throw config_error("init.modes must be at least 1");
    if (!(c.stop.tol_speed > 0.0) || !(c.stop.tol_osc > 0.0) || !(c.stop.t_max > 0.0) ||
        c.stop.max_steps <= 0)
        throw config_error("stop criteria must all be positive");
    if (!(c.safety > 0.0) || c.safety > 1.0)
        throw config_error("flow.safety must lie in (0, 1]");
    if (c.monitor.record_every < 0 || c.monitor.record_dt < 0.0 ||
        !(c.monitor.violation_tol > 0.0))
        throw config_error("monitor settings must be nonnegative (tol positive)");
    if (!(c.tol.eps_space > 0.0) || !(c.tol.eps_cone > 0.0))
        throw config_error("tolerance floors must be positive");
    if (c.probe_count < 0) throw config_error("probe.count must be nonnegative");
    if (c.init_kind == InitKind::cosine && c.amplitudes.empty())
        throw config_error("init.kind = cosine needs init.amplitudes");
}

/// Materialize the initial profile described by the config.
inline ProfileGrid build_initial_grid(const RunConfig& c) {
    switch (c.init_kind) {
        case InitKind::slice:
            return ProfileGrid::slice(c.segments, c.rho0);
        case InitKind::cosine:
            return ProfileGrid::cosine(c.segments, c.rho0, c.amplitudes);
        case InitKind::sampler: {
            SamplerParams p;
            p.rho0 = c.rho0;
            p.modes = c.modes;
            p.amp_max = c.amp_max;
            p.n = c.n;
            p.k = c.k;
            p.target_class = c.target_class;
            p.seed = c.seed;
            p.grid_segments = c.segments;
            return random_admissible_sampler(p).grid;
        }
    }
    throw config_error("unreachable init kind");
}

} // namespace dsflow
