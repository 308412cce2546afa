#pragma once

// Experiment orchestration behind the CLI subcommands: run, hk-probe,
// plot, check. Partial outputs are flushed even when a run fails, and exit
// codes encode the outcome.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "dsflow/config.hpp"
#include "dsflow/csv.hpp"
#include "dsflow/report.hpp"
#include "dsflow/svg.hpp"

namespace dsflow {

enum ExitCode : int {
    exit_success = 0,
    exit_invalid_config = 2,
    exit_inadmissible = 3,
    exit_breakdown = 4,
    exit_budget_exhausted = 5,
};

inline int make_plots(const std::filesystem::path& run_dir, const std::filesystem::path& out_dir,
                      bool quiet);

namespace detail {

inline void say(bool quiet, const std::string& msg) {
    if (!quiet) std::fputs((msg + "\n").c_str(), stdout);
}

inline int exit_code_for(TerminationReason r) {
    switch (r) {
        case TerminationReason::converged: return exit_success;
        case TerminationReason::breakdown: return exit_breakdown;
        case TerminationReason::t_max_reached:
        case TerminationReason::max_steps_reached: return exit_budget_exhausted;
    }
    return exit_breakdown;
}

} // namespace detail

/// Run one experiment end to end; emits series.csv, snapshots.csv,
/// report.json, config.cfg and optional SVG charts into out_dir.
inline int run_experiment(const RunConfig& config, const std::filesystem::path& out_dir,
                          bool quiet = false, RunReport* report_out = nullptr,
                          Trajectory* traj_out = nullptr) {
    validate(config);
    std::filesystem::create_directories(out_dir);
    write_file((out_dir / "config.cfg").string(), serialize_config(config));

    ProfileGrid grid = build_initial_grid(config);
    const AmbientParams ambient{config.n};

    const AdmissibilityReport adm = admissibility_check(grid, ambient, config.k);
    if (!adm.admissible) {
        detail::say(quiet, "inadmissible initial data: spacelike margin " +
                               std::to_string(adm.margin_spacelike) + ", cone margin " +
                               std::to_string(adm.margin_cone) + ", pinching margin " +
                               std::to_string(adm.margin_pinch));
        nlohmann::ordered_json j;
        j["schema_version"] = kReportSchemaVersion;
        j["termination"] = "inadmissible-input";
        j["margins"] = {{"spacelike", adm.margin_spacelike},
                        {"cone", adm.margin_cone},
                        {"pinching", adm.margin_pinch}};
        write_file((out_dir / "report.json").string(), j.dump(2) + "\n");
        return exit_inadmissible;
    }

    const auto wall_start = std::chrono::steady_clock::now();
    FlowState state = make_flow_state(std::move(grid), ambient, config.k, config.tol);
    Trajectory traj = evolve(std::move(state), config.stop, config.monitor, config.safety);
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - wall_start)
            .count();

    RunReport rep;
    rep.termination = to_string(traj.reason);
    if (traj.reason == TerminationReason::breakdown && !traj.breakdown_message.empty())
        rep.termination += " (" + traj.breakdown_message + ")";
    rep.monitor_violation = traj.monitor_violation;
    rep.steps = traj.records.back().step;
    rep.t_final = traj.records.back().t;
    rep.r_inf = 0.5 * (traj.records.back().max_r + traj.records.back().min_r);
    rep.n = config.n;
    rep.k = config.k;
    rep.segments = config.segments;
    rep.initial = traj.records.front().functionals;
    rep.final_rec = traj.records.back().functionals;
    rep.af_gap_initial = af_check(rep.initial.b(config.k), rep.initial.b(-1), config.n, config.k);
    rep.af_gap_final = af_check(rep.final_rec.b(config.k), rep.final_rec.b(-1), config.n, config.k);
    if (traj.records.size() >= 2) rep.audit = monotonicity_audit(traj, config.monitor.violation_tol);
    rep.wall_ms = wall_ms;
    rep.cfl_safety = config.safety;

    if (config.emit_csv) {
        write_file((out_dir / "series.csv").string(), series_csv(traj));
        write_file((out_dir / "snapshots.csv").string(), snapshots_csv(traj));
    }
    if (config.emit_json)
        write_file((out_dir / "report.json").string(), report_json(rep).dump(2) + "\n");
    if (config.emit_svg && config.emit_csv && config.emit_json)
        make_plots(out_dir, out_dir, true);

    detail::say(quiet, "run " + std::string(to_string(traj.reason)) + " after " +
                           std::to_string(rep.steps) + " steps (t = " +
                           std::to_string(rep.t_final) + ", r_inf ~ " + std::to_string(rep.r_inf) +
                           ")");
    if (report_out) *report_out = rep;
    if (traj_out) *traj_out = std::move(traj);
    return detail::exit_code_for(traj.reason);
}

/// Admissibility check only.
inline int check_input(const RunConfig& config, bool quiet = false,
                       AdmissibilityReport* out = nullptr) {
    validate(config);
    ProfileGrid grid = build_initial_grid(config);
    const AdmissibilityReport adm = admissibility_check(grid, AmbientParams{config.n}, config.k);
    detail::say(quiet, std::string("spacelike: ") + (adm.spacelike ? "yes" : "no") +
                           " (margin " + std::to_string(adm.margin_spacelike) + ")");
    detail::say(quiet, std::string("k-convex:  ") + (adm.k_convex ? "yes" : "no") + " (margin " +
                           std::to_string(adm.margin_cone) + ")");
    detail::say(quiet, std::string("pinched:   ") + (adm.pinched ? "yes" : "no") + " (margin " +
                           std::to_string(adm.margin_pinch) + ")");
    if (out) *out = adm;
    return adm.admissible ? exit_success : exit_inadmissible;
}

struct HkProbeSummary {
    int count = 0;
    int skipped = 0;
    double min_gap = 0.0;
    std::vector<int> histogram;      // bucket counts over [min_gap, max_gap]
    std::vector<std::uint64_t> counterexample_seeds;
};

/// Batch Heintze-Karcher probe over seeded samples; per-sample seeds are
/// master_seed + index. Gaps below -1e-8 dump the profile as a
/// counterexample artifact instead of failing.
inline int hk_probe(const RunConfig& config, const std::filesystem::path& out_dir,
                    bool quiet = false, HkProbeSummary* summary_out = nullptr) {
    validate(config);
    std::filesystem::create_directories(out_dir);
    const AmbientParams ambient{config.n};

    std::ostringstream csv;
    csv << "seed,attempts,margin_space,margin_mean_convex,margin_pinch,gap\n";
    HkProbeSummary sum;
    sum.count = config.probe_count;
    std::vector<double> gaps;
    for (int i = 0; i < config.probe_count; ++i) {
        SamplerParams p;
        p.rho0 = config.rho0;
        p.modes = config.modes;
        p.amp_max = config.amp_max;
        p.n = config.n;
        p.k = config.k;
        p.target_class = TargetClass::mean_convex;
        p.seed = config.seed + static_cast<std::uint64_t>(i);
        p.grid_segments = config.segments;
        SampleResult sample;
        GeometrySnapshot snap;
        double gap = 0.0;
        try {
            sample = random_admissible_sampler(p);
            snap = compute_snapshot(sample.grid, ambient, 1, config.tol);
            gap = heintze_karcher_gap(snap, config.tol.eps_cone);
        } catch (const sampler_error& e) {
            detail::say(quiet, "sample " + std::to_string(i) + " skipped: " + e.what());
            ++sum.skipped;
            continue;
        } catch (const degeneracy_error& e) {
            detail::say(quiet, "sample " + std::to_string(i) + " skipped: " + e.what());
            ++sum.skipped;
            continue;
        }
        double min_e1 = snap.E(1, 0);
        for (std::size_t j = 1; j < snap.nodes(); ++j) min_e1 = std::min(min_e1, snap.E(1, j));
        csv << p.seed << ',' << sample.attempts << ',' << detail::csv_num(snap.min_upsilon_sq)
            << ',' << detail::csv_num(min_e1) << ',' << detail::csv_num(snap.pinch_margin) << ','
            << detail::csv_num(gap) << '\n';
        gaps.push_back(gap);

        if (gap < -1e-8) {
            sum.counterexample_seeds.push_back(p.seed);
            std::ostringstream dump;
            dump << "theta,r\n";
            for (std::size_t j = 0; j < sample.grid.r.size(); ++j)
                dump << detail::csv_num(sample.grid.theta[j]) << ','
                     << detail::csv_num(sample.grid.r[j]) << '\n';
            write_file((out_dir / ("counterexample_seed" + std::to_string(p.seed) + ".csv"))
                           .string(),
                       dump.str());
        }
    }
    write_file((out_dir / "hk_probe.csv").string(), csv.str());

    nlohmann::ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["count"] = sum.count;
    j["skipped"] = sum.skipped;
    if (!gaps.empty()) {
        const auto [mn, mx] = std::minmax_element(gaps.begin(), gaps.end());
        sum.min_gap = *mn;
        const int buckets = 10;
        sum.histogram.assign(buckets, 0);
        const double width = std::max(*mx - *mn, 1e-300);
        for (double g : gaps) {
            int b = static_cast<int>((g - *mn) / width * buckets);
            sum.histogram[std::min(b, buckets - 1)]++;
        }
        j["min_gap"] = *mn;
        j["max_gap"] = *mx;
        j["histogram"] = sum.histogram;
    }
    j["counterexample_seeds"] = sum.counterexample_seeds;
    write_file((out_dir / "hk_summary.json").string(), j.dump(2) + "\n");
    detail::say(quiet, "hk-probe: " + std::to_string(gaps.size()) + " samples, min gap " +
                           (gaps.empty() ? std::string("n/a") : std::to_string(sum.min_gap)) +
                           ", " + std::to_string(sum.counterexample_seeds.size()) +
                           " counterexample(s)");
    if (summary_out) *summary_out = sum;
    return exit_success;
}

/// Render the standard charts for a finished run directory.
inline int make_plots(const std::filesystem::path& run_dir, const std::filesystem::path& out_dir,
                      bool quiet = false) {
    std::filesystem::create_directories(out_dir);
    const CsvTable series = read_csv((run_dir / "series.csv").string());
    const CsvTable snaps = read_csv((run_dir / "snapshots.csv").string());

    int n = 2, k = 2;
    {
        std::ifstream in(run_dir / "report.json");
        if (!in) throw parse_error((run_dir / "report.json").string() + ": cannot open file");
        nlohmann::json j = nlohmann::json::parse(in, nullptr, true, true);
        n = j.value("n", 2);
        k = j.value("k", 2);
    }

    auto col = [&](const std::string& name) {
        const int c = series.column(name);
        if (c < 0) throw parse_error("series.csv: missing column " + name);
        std::vector<double> v(series.rows.size());
        for (std::size_t i = 0; i < series.rows.size(); ++i) v[i] = series.rows[i][c];
        return v;
    };
    const std::vector<double> t = series.rows.empty() ? std::vector<double>{} : col("t");

    // r(theta) profiles over time (at most 12 curves, evenly thinned)
    {
        std::vector<Series> profs;
        const std::size_t rows = snaps.rows.size();
        const std::size_t keep = std::min<std::size_t>(rows, 12);
        const std::size_t nodes = snaps.header.size() - 1;
        for (std::size_t c = 0; c < keep; ++c) {
            const std::size_t i = keep <= 1 ? 0 : c * (rows - 1) / (keep - 1);
            Series s;
            s.name = "t = " + detail::svg_tick(snaps.rows[i][0]);
            s.x.resize(nodes);
            s.y.resize(nodes);
            for (std::size_t jn = 0; jn < nodes; ++jn) {
                s.x[jn] = nodes > 1 ? jn * std::numbers::pi / (nodes - 1) : 0.0;
                s.y[jn] = snaps.rows[i][jn + 1];
            }
            profs.push_back(std::move(s));
        }
        write_file((out_dir / "profiles.svg").string(),
                   line_chart_svg("radial profile over time", "theta", "r", profs));
    }
    // functional time series
    {
        std::vector<Series> qs, ws;
        for (int l = -1; l <= n; ++l) {
            qs.push_back({"A_" + std::to_string(l), t, series.rows.empty() ? std::vector<double>{} : col("A_" + std::to_string(l))});
            ws.push_back({"B_" + std::to_string(l), t, series.rows.empty() ? std::vector<double>{} : col("B_" + std::to_string(l))});
        }
        write_file((out_dir / "quermassintegrals.svg").string(),
                   line_chart_svg("quermassintegrals", "t", "A_l", qs));
        write_file((out_dir / "weighted_integrals.svg").string(),
                   line_chart_svg("weighted curvature integrals", "t", "B_l", ws));
    }
    // margins
    {
        std::vector<Series> ms;
        for (const char* name : {"margin_space", "margin_cone", "margin_pinch"})
            ms.push_back({name, t, series.rows.empty() ? std::vector<double>{} : col(name)});
        write_file((out_dir / "margins.svg").string(),
                   line_chart_svg("admissibility margins", "t", "margin", ms));
    }
    // AF gap along the run, recomputed from the emitted functionals
    {
        Series g{"af gap", t, {}};
        if (!series.rows.empty()) {
            const auto bk = col("B_" + std::to_string(k));
            const auto bm1 = col("B_-1");
            g.y.resize(t.size());
            for (std::size_t i = 0; i < t.size(); ++i) g.y[i] = af_check(bk[i], bm1[i], n, k);
        }
        write_file((out_dir / "af_gap.svg").string(),
                   line_chart_svg("endpoint inequality gap", "t", "gap", {g}));
    }
    detail::say(quiet, "plots written to " + out_dir.string());
    return exit_success;
}

} // namespace dsflow
