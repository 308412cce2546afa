#pragma once

// Versioned JSON run report. Everything in it can be recomputed from the
// emitted trajectory files.

#include <string>

#include <json.hpp>

#include "dsflow/flow.hpp"
#include "dsflow/verifier.hpp"

namespace dsflow {

inline constexpr int kReportSchemaVersion = 1;

struct RunReport {
    std::string termination;
    bool monitor_violation = false;
    long steps = 0;
    double t_final = 0.0;
    double r_inf = 0.0;
    int n = 2, k = 2, segments = 0;
    FunctionalRecord initial;
    FunctionalRecord final_rec;
    double af_gap_initial = 0.0;
    double af_gap_final = 0.0;
    AuditReport audit;
    double wall_ms = 0.0;
    double cfl_safety = 0.2;
};

namespace detail {

inline nlohmann::ordered_json functional_json(const FunctionalRecord& rec, int n) {
    nlohmann::ordered_json j;
    j["t"] = rec.t;
    for (int l = -1; l <= n; ++l) j["A"][std::to_string(l)] = rec.a(l);
    for (int l = -1; l <= n; ++l) j["B"][std::to_string(l)] = rec.b(l);
    for (int l = 1; l <= n; ++l) j["minkowski"][std::to_string(l)] = rec.mink(l);
    j["margins"] = {{"spacelike", rec.margin_space},
                    {"cone", rec.margin_cone},
                    {"pinching", rec.margin_pinch}};
    return j;
}

} // namespace detail

inline nlohmann::ordered_json report_json(const RunReport& rep) {
    nlohmann::ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["termination"] = rep.termination;
    j["monitor_violation"] = rep.monitor_violation;
    j["steps"] = rep.steps;
    j["t_final"] = rep.t_final;
    j["r_inf"] = rep.r_inf;
    j["n"] = rep.n;
    j["k"] = rep.k;
    j["segments"] = rep.segments;
    j["initial"] = detail::functional_json(rep.initial, rep.n);
    j["final"] = detail::functional_json(rep.final_rec, rep.n);
    j["af_gap_initial"] = rep.af_gap_initial;
    j["af_gap_final"] = rep.af_gap_final;
    nlohmann::ordered_json audits = nlohmann::ordered_json::array();
    for (const auto& c : rep.audit.checks)
        audits.push_back({{"name", c.name},
                          {"pass", c.pass},
                          {"worst_violation", c.worst_violation},
                          {"worst_index", c.worst_index},
                          {"tolerance", c.tolerance}});
    j["audit"] = audits;
    j["audit_pass"] = rep.audit.all_pass;
    j["scheme"] = {{"integrator", "rk2-midpoint"},
                   {"quadrature", "simpson-endpoint-corrected"},
                   {"cfl_safety", rep.cfl_safety}};
    j["wall_ms"] = rep.wall_ms;
    return j;
}

} // namespace dsflow
