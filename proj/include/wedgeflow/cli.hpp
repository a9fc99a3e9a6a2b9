#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wedgeflow/glimm.hpp"
#include "wedgeflow/polar.hpp"
#include "wedgeflow/selfsim.hpp"
#include "wedgeflow/thermo.hpp"
#include "wedgeflow/unsteady.hpp"
#include "wedgeflow/waves.hpp"

// Command-line driver. Every subcommand prints a one-line JSON summary to
// stdout and returns 0 on success, 2 on validation errors, and 3 on numerical
// failures (detachment, vacuum, non-convergence), with the error name in the
// summary. File outputs are byte-reproducible for identical configurations.

namespace wedgeflow::cli {

using nlohmann::json;

namespace detail_cli {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << body;
}

inline double deg(double r) { return r * 180.0 / M_PI; }
inline double rad(double d) { return d * M_PI / 180.0; }

/// Strict key check: every present key must be declared.
inline void require_keys(const json& obj, const std::vector<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw std::runtime_error("unknown key '" + key + "' in " + where);
    }
}

inline json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    return json::parse(in);
}

inline GasModel gas_from(const json& cfg) {
    if (!cfg.contains("gas")) return GasModel::ideal(1.4);
    require_keys(cfg.at("gas"), {"gamma"}, "gas");
    return GasModel::ideal(cfg.at("gas").value("gamma", 1.4));
}

inline json state_json(const EulerPrimitive& s, const GasModel& g) {
    return json{{"u1", s.u1},   {"u2", s.u2},
                {"p", s.p},     {"rho", s.rho},
                {"mach", mach_number(s, g)}};
}

inline json state_json(const PotentialState& s, const GasModel& g) {
    return json{{"u1", s.u1},
                {"u2", s.u2},
                {"rho", s.rho},
                {"p", potential_pressure(s.rho, g)},
                {"mach", potential_mach(s, g)}};
}

} // namespace detail_cli

// --- polar -------------------------------------------------------------------

struct PolarOptions {
    double mach = 2.0;
    double gamma = 1.4;
    double p0 = 1.0;
    double rho0 = 1.0;
    int samples = 200;
    std::string model = "euler";
    std::string out = "polar.csv";
};

inline json run_polar(const PolarOptions& opt) {
    const auto g = GasModel::ideal(opt.gamma);
    std::string body = "beta_rad,u1,u2,p,rho,mach_downstream,deflection_rad\n";
    json summary;
    using detail_cli::fmt;

    if (opt.model == "euler") {
        const double c0 = std::sqrt(g.gamma * opt.p0 / opt.rho0);
        const EulerPrimitive up{opt.mach * c0, 0.0, opt.p0, opt.rho0};
        const auto curve = polar_curve(up, opt.samples, g);
        for (const auto& s : curve.samples)
            body += fmt(s.beta) + "," + fmt(s.u1) + "," + fmt(s.u2) + "," + fmt(s.p) + "," +
                    fmt(s.rho) + "," + fmt(s.mach_downstream) + "," + fmt(s.deflection) + "\n";
        const auto crit = critical_angles(up, g);
        summary["theta_d_deg"] = detail_cli::deg(crit.theta_d);
        summary["theta_s_deg"] = detail_cli::deg(crit.theta_s);
        summary["markers"] = {{"Q_beta_rad", curve.q.beta},
                              {"H_beta_rad", curve.h.beta},
                              {"S_beta_rad", curve.s.beta},
                              {"T_beta_rad", curve.t.beta}};
    } else if (opt.model == "potential") {
        const PotentialState up{opt.mach * std::sqrt(potential_c2(opt.rho0, g)), 0.0, opt.rho0};
        const double b_lo = std::asin(1.0 / potential_mach(up, g));
        for (int i = 0; i < opt.samples; ++i) {
            const double beta = b_lo + (0.5 * M_PI - b_lo) * i / (opt.samples - 1);
            const auto s = potential_downstream_from_beta(up, beta, g);
            body += fmt(beta) + "," + fmt(s.downstream.u1) + "," + fmt(s.downstream.u2) + "," +
                    fmt(potential_pressure(s.downstream.rho, g)) + "," + fmt(s.downstream.rho) +
                    "," + fmt(potential_mach(s.downstream, g)) + "," + fmt(s.deflection) + "\n";
        }
        const auto crit = potential_critical_angles(up, g);
        summary["theta_d_deg"] = detail_cli::deg(crit.theta_d);
        summary["theta_s_deg"] = detail_cli::deg(crit.theta_s);
    } else {
        throw std::runtime_error("model must be 'euler' or 'potential'");
    }
    detail_cli::write_file(opt.out, body);
    summary["model"] = opt.model;
    summary["mach"] = opt.mach;
    summary["gamma"] = opt.gamma;
    summary["samples"] = opt.samples;
    summary["out"] = opt.out;
    return summary;
}

// --- wedge -------------------------------------------------------------------

struct WedgeOptions {
    double mach = 2.0;
    double gamma = 1.4;
    double theta_deg = 10.0;
    double p0 = 1.0;
    double rho0 = 1.0;
    std::string model = "euler";
};

inline json run_wedge(const WedgeOptions& opt) {
    const auto g = GasModel::ideal(opt.gamma);
    const double theta = detail_cli::rad(opt.theta_deg);
    json summary{{"model", opt.model}, {"mach", opt.mach},
                 {"gamma", opt.gamma}, {"theta_w_deg", opt.theta_deg}};

    if (opt.model == "euler") {
        const double c0 = std::sqrt(g.gamma * opt.p0 / opt.rho0);
        const EulerPrimitive up{opt.mach * c0, 0.0, opt.p0, opt.rho0};
        const auto pair = wedge_solutions(up, theta, g);
        if (!pair) throw DetachedError("wedge angle exceeds the detachment angle");
        summary["weak"] = detail_cli::state_json(pair->weak.downstream, g);
        summary["weak"]["beta_deg"] = detail_cli::deg(pair->weak.beta);
        summary["strong"] = detail_cli::state_json(pair->strong.downstream, g);
        summary["strong"]["beta_deg"] = detail_cli::deg(pair->strong.beta);
        summary["degenerate_at_detachment"] = pair->degenerate_at_detachment;
    } else if (opt.model == "potential") {
        const PotentialState up{opt.mach * std::sqrt(potential_c2(opt.rho0, g)), 0.0, opt.rho0};
        const auto pair = potential_wedge_solutions(up, theta, g);
        if (!pair) throw DetachedError("wedge angle exceeds the detachment angle");
        summary["weak"] = detail_cli::state_json(pair->weak.downstream, g);
        summary["weak"]["beta_deg"] = detail_cli::deg(pair->weak.beta);
        summary["strong"] = detail_cli::state_json(pair->strong.downstream, g);
        summary["strong"]["beta_deg"] = detail_cli::deg(pair->strong.beta);
        summary["degenerate_at_detachment"] = pair->degenerate_at_detachment;
    } else {
        throw std::runtime_error("model must be 'euler' or 'potential'");
    }
    return summary;
}

// --- angles ------------------------------------------------------------------

struct AnglesOptions {
    double mach = 2.0;
    double gamma = 1.4;
    std::string model = "euler";
};

inline json run_angles(const AnglesOptions& opt) {
    const auto g = GasModel::ideal(opt.gamma);
    CriticalAngles crit;
    if (opt.model == "euler") {
        const EulerPrimitive up{opt.mach * std::sqrt(g.gamma), 0.0, 1.0, 1.0};
        crit = critical_angles(up, g);
    } else if (opt.model == "potential") {
        const PotentialState up{opt.mach, 0.0, 1.0};
        crit = potential_critical_angles(up, g);
    } else {
        throw std::runtime_error("model must be 'euler' or 'potential'");
    }
    return json{{"model", opt.model},
                {"mach", opt.mach},
                {"gamma", opt.gamma},
                {"theta_d_deg", detail_cli::deg(crit.theta_d)},
                {"theta_s_deg", detail_cli::deg(crit.theta_s)},
                {"beta_d_deg", detail_cli::deg(crit.beta_d)},
                {"beta_s_deg", detail_cli::deg(crit.beta_s)},
                {"u_detach", crit.u_detach}};
}

// --- glimm -------------------------------------------------------------------

inline json run_glimm(const std::string& config_path, const std::string& out_dir) {
    using detail_cli::fmt;
    const json cfg = detail_cli::load_config(config_path);
    detail_cli::require_keys(cfg,
                             {"gas", "mach", "theta_w_deg", "wedge_table", "cauchy", "dx1", "dx2",
                              "cfl", "x1_max", "seed", "tail_fraction", "track_front"},
                             "glimm config");
    const auto g = detail_cli::gas_from(cfg);

    const double mach = cfg.value("mach", 2.0);
    const double theta_w = detail_cli::rad(cfg.value("theta_w_deg", 10.0));
    MarchConfig mc;
    mc.dx1 = cfg.value("dx1", 0.0625);
    mc.dx2 = cfg.value("dx2", 0.125);
    mc.cfl = cfg.value("cfl", 0.8);
    mc.x1_max = cfg.value("x1_max", 50.0);
    mc.seed = cfg.value("seed", 0ull);
    mc.track_front = cfg.value("track_front", true);
    mc.tail_fraction = cfg.value("tail_fraction", 0.25);
    if (const char* env_seed = std::getenv("WEDGEFLOW_SEED"))
        mc.seed = std::strtoull(env_seed, nullptr, 10);

    const EulerPrimitive background{mach * std::sqrt(g.gamma), 0.0, 1.0, 1.0};

    CauchyKind kind = CauchyKind::Constant;
    double amplitude = 0.0;
    double height = 4.0;
    int cells = 64;
    if (cfg.contains("cauchy")) {
        const auto& c = cfg.at("cauchy");
        detail_cli::require_keys(c, {"kind", "amplitude", "height", "cells"}, "cauchy");
        const std::string k = c.value("kind", "constant");
        if (k == "constant")
            kind = CauchyKind::Constant;
        else if (k == "step")
            kind = CauchyKind::Step;
        else if (k == "bump")
            kind = CauchyKind::Bump;
        else if (k == "sawtooth")
            kind = CauchyKind::Sawtooth;
        else
            throw std::runtime_error("cauchy.kind must be constant|step|bump|sawtooth");
        amplitude = c.value("amplitude", 0.0);
        height = c.value("height", 4.0);
        cells = c.value("cells", 64);
    }
    const auto data = make_cauchy_data(kind, amplitude, background, g, height, cells);

    WedgeGeometry geom = WedgeGeometry::straight(theta_w, mc.x1_max);
    if (cfg.contains("wedge_table")) {
        std::vector<std::pair<double, double>> delta;
        for (const auto& row : cfg.at("wedge_table"))
            delta.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
        geom = WedgeGeometry::perturbed(theta_w, delta);
    }

    const auto result = march(geom, data, mc, g);
    const auto asym = asymptotics_estimate(result.diag, mc.tail_fraction);

    std::string front_csv = "x1,sigma,sigma_slope\n";
    for (std::size_t i = 0; i < result.front.sigma_slope.size(); ++i)
        front_csv += fmt(result.front.x1[i + 1]) + "," + fmt(result.front.sigma[i + 1]) + "," +
                     fmt(result.front.sigma_slope[i]) + "\n";
    detail_cli::write_file(out_dir + "/front.csv", front_csv);

    std::string diag_csv = "x1,tv,p_mean,angle_mean\n";
    for (std::size_t i = 0; i < result.diag.x1.size(); ++i)
        diag_csv += fmt(result.diag.x1[i]) + "," + fmt(result.diag.tv[i]) + "," +
                    fmt(result.diag.p_mean[i]) + "," + fmt(result.diag.angle_mean[i]) + "\n";
    detail_cli::write_file(out_dir + "/diagnostics.csv", diag_csv);

    json summary{{"s_inf", asym.s_inf},
                 {"p_inf", asym.p_inf},
                 {"angle_inf", asym.angle_inf},
                 {"max_tv", result.diag.max_tv()},
                 {"slip_defect", result.diag.max_slip_defect()},
                 {"seed", mc.seed}};
    detail_cli::write_file(out_dir + "/summary.json", summary.dump() + "\n");
    summary["front_csv"] = out_dir + "/front.csv";
    summary["diagnostics_csv"] = out_dir + "/diagnostics.csv";
    return summary;
}

// --- selfsim -----------------------------------------------------------------

struct SelfsimOptions {
    double gamma = 1.4;
    double u10 = 2.0;
    double rho0 = 1.0;
    double theta_deg = 10.0;
    std::string out = "skeleton.json";
    std::string geometry = "geometry.csv";
};

inline json skeleton_json(const SelfSimilarSkeleton& sk) {
    const auto vec = [](Vec2 v) { return json::array({v.x, v.y}); };
    return json{
        {"gamma", sk.gas.gamma},
        {"u10", sk.u10},
        {"rho0", sk.rho0},
        {"theta_w_deg", detail_cli::deg(sk.theta_w)},
        {"branch", sk.branch == VertexBranch::SupersonicVertex ? "supersonic_vertex"
                                                               : "subsonic_vertex"},
        {"B", sk.B},
        {"B0", sk.B0},
        {"beta_deg", detail_cli::deg(sk.beta)},
        {"theta_s_deg", detail_cli::deg(sk.theta_s)},
        {"theta_d_deg", detail_cli::deg(sk.theta_d)},
        {"u1", vec(sk.u1)},
        {"rho1", sk.rho1},
        {"u2", sk.u2},
        {"k2", sk.k2},
        {"s1", sk.s1},
        {"rho2", sk.rho2},
        {"s0_line", {{"point", vec(sk.s0_line.point)}, {"dir", vec(sk.s0_line.dir)}}},
        {"s1_line", {{"point", vec(sk.s1_line.point)}, {"dir", vec(sk.s1_line.dir)}}},
        {"circle0", {{"center", vec(sk.circle0.center)}, {"radius", sk.circle0.radius}}},
        {"circle1", {{"center", vec(sk.circle1.center)}, {"radius", sk.circle1.radius}}},
        {"circle2", {{"center", vec(sk.circle2.center)}, {"radius", sk.circle2.radius}}},
        {"p1", vec(sk.p1)},
        {"p2", vec(sk.p2)},
        {"f1", vec(sk.f1)},
        {"f2", vec(sk.f2)}};
}

inline json run_selfsim(const SelfsimOptions& opt) {
    using detail_cli::fmt;
    const auto g = GasModel::ideal(opt.gamma);
    const auto sk = build_skeleton(g, opt.u10, opt.rho0, detail_cli::rad(opt.theta_deg));
    const auto rep = verify_skeleton(sk);

    json summary = skeleton_json(sk);
    summary["verify"] = {{"rh_s0", rep.rh_s0},
                         {"phi_jump_s0", rep.phi_jump_s0},
                         {"rh_s1", rep.rh_s1},
                         {"phi_jump_s1", rep.phi_jump_s1},
                         {"eq_residual", rep.eq_residual},
                         {"head_spread", rep.head_spread},
                         {"rho1_identity", rep.rho1_identity},
                         {"entropy_ok", rep.entropy_ok},
                         {"ellipticity_ok", rep.ellipticity_ok},
                         {"pseudo_subsonic_behind_s1", rep.pseudo_subsonic_behind_s1},
                         {"branch_ok", rep.branch_ok},
                         {"monotone_s0", rep.monotone_s0},
                         {"monotone_s1", rep.monotone_s1},
                         {"all_pass", rep.all_pass()}};
    detail_cli::write_file(opt.out, summary.dump(2) + "\n");

    // plottable geometry: shocks, sonic arcs, wall
    std::string csv = "piece,x,y\n";
    const auto emit = [&](const std::string& piece, Vec2 p) {
        csv += piece + "," + fmt(p.x) + "," + fmt(p.y) + "\n";
    };
    const double t_s0 = (sk.branch == VertexBranch::SupersonicVertex)
                            ? sk.p1.dot(sk.s0_line.dir)
                            : sk.circle1.radius;
    for (int i = 0; i <= 64; ++i) emit("S0", (t_s0 * i / 64.0) * sk.s0_line.dir);
    const double s_p2 = sk.p2.dot(sk.face_dir);
    for (int i = 0; i <= 64; ++i)
        emit("S1", sk.s1 * sk.face_normal +
                       (s_p2 + (sk.u2 + 6.0 * sk.circle2.radius - s_p2) * i / 64.0) * sk.face_dir);
    const auto arc = [&](const std::string& piece, const SonicCircle& c, Vec2 from, Vec2 to) {
        double a0 = std::atan2(from.y - c.center.y, from.x - c.center.x);
        double a1 = std::atan2(to.y - c.center.y, to.x - c.center.x);
        if (a1 < a0) a1 += 2.0 * M_PI;
        for (int i = 0; i <= 64; ++i) {
            const double a = a0 + (a1 - a0) * i / 64.0;
            emit(piece, {c.center.x + c.radius * std::cos(a), c.center.y + c.radius * std::sin(a)});
        }
    };
    if (sk.branch == VertexBranch::SupersonicVertex) arc("sonic1", sk.circle1, sk.p1, sk.f1);
    arc("sonic2", sk.circle2, sk.p2, sk.f2);
    for (int i = 0; i <= 16; ++i)
        emit("wall", ((sk.u2 + 6.0 * sk.circle2.radius) * i / 16.0) * sk.face_dir);
    detail_cli::write_file(opt.geometry, csv);

    json out = summary;
    out["skeleton_json"] = opt.out;
    out["geometry_csv"] = opt.geometry;
    return out;
}

// --- unsteady ----------------------------------------------------------------

inline json run_unsteady(const std::string& config_path, const std::string& out_dir) {
    using detail_cli::fmt;
    const json cfg = detail_cli::load_config(config_path);
    detail_cli::require_keys(cfg,
                             {"gas", "u10", "rho0", "theta_w_deg", "nx", "ny", "cfl", "t_max",
                              "check_every", "snapshot_every", "init", "x_max", "y_max",
                              "residual_tol"},
                             "unsteady config");
    const auto g = detail_cli::gas_from(cfg);

    UnsteadyConfig uc;
    uc.u10 = cfg.value("u10", 2.0);
    uc.rho0 = cfg.value("rho0", 1.0);
    uc.theta_w = detail_cli::rad(cfg.value("theta_w_deg", 10.0));
    uc.cfl = cfg.value("cfl", 0.4);
    uc.t_max = cfg.value("t_max", 12.0);
    uc.check_every = cfg.value("check_every", 0.25);
    uc.snapshot_every = cfg.value("snapshot_every", 0.5);
    uc.residual_tol = cfg.value("residual_tol", 1e-8);
    uc.strong_init = cfg.value("init", std::string("uniform")) == "strong";
    const auto grid = Grid2D::over(cfg.value("x_max", 2.0), cfg.value("y_max", 1.0),
                                   cfg.value("nx", 400), cfg.value("ny", 200));

    const auto field_csv = [&](const FieldState& st) {
        std::string snap = "x,y,rho,phi\n";
        for (int j = 0; j < grid.ny; ++j)
            for (int i = 0; i < grid.nx; ++i)
                snap += fmt((i + 0.5) * grid.hx) + "," + fmt((j + 0.5) * grid.hy) + "," +
                        fmt(st.rho[st.idx(i, j)]) + "," + fmt(st.phi[st.idx(i, j)]) + "\n";
        return snap;
    };
    int snapshot_index = 0;
    uc.on_snapshot = [&](const FieldState& st) {
        char name[32];
        std::snprintf(name, sizeof(name), "/field_%04d.csv", snapshot_index++);
        detail_cli::write_file(out_dir + name, field_csv(st));
    };

    const auto out = run_to_steady(grid, g, uc);
    detail_cli::write_file(out_dir + "/field.csv", field_csv(out.state));

    std::string conv = "t,residual,l1_defect,selfsim_defect\n";
    for (std::size_t k = 0; k < out.report.times.size(); ++k) {
        std::string ss = "nan";
        for (std::size_t m = 0; m < out.report.ss_times.size(); ++m)
            if (std::abs(out.report.ss_times[m] - out.report.times[k]) <
                0.5 * uc.check_every) {
                ss = fmt(out.report.selfsim_defect[m]);
                break;
            }
        conv += fmt(out.report.times[k]) + "," + fmt(out.report.residual[k]) + "," +
                fmt(out.report.l1_defect[k]) + "," + ss + "\n";
    }
    detail_cli::write_file(out_dir + "/convergence.csv", conv);

    json fitj{{"angle_deg", detail_cli::deg(out.fit.angle)},
              {"beta_deg", detail_cli::deg(out.fit.beta)},
              {"rms", out.fit.rms},
              {"ridge_cells", out.fit.ridge_cells},
              {"downstream", {{"rho", out.fit.rho_down}, {"speed", out.fit.speed_down}}}};
    detail_cli::write_file(out_dir + "/shockfit.json", fitj.dump(2) + "\n");

    json summary = fitj;
    summary["converged"] = out.report.converged;
    summary["final_residual"] = out.report.final_residual;
    summary["mass_error"] = out.report.mass_error;
    summary["t_end"] = out.state.t;
    summary["field_csv"] = out_dir + "/field.csv";
    summary["convergence_csv"] = out_dir + "/convergence.csv";
    summary["shockfit_json"] = out_dir + "/shockfit.json";
    if (!out.report.converged) summary["error"] = "NonConvergence";
    return summary;
}

// --- dispatch ------------------------------------------------------------------

inline int dispatch(std::vector<std::string> args) {
    CLI::App app{"wedgeflow: oblique shocks, shock polars, and wedge-flow solvers"};
    app.require_subcommand(1);

    PolarOptions polar_opt;
    auto* polar_cmd = app.add_subcommand("polar", "Sample a shock polar to CSV");
    polar_cmd->add_option("--mach", polar_opt.mach, "upstream Mach number (dimensionless)");
    polar_cmd->add_option("--gamma", polar_opt.gamma, "adiabatic exponent (dimensionless)");
    polar_cmd->add_option("--p0", polar_opt.p0, "upstream pressure (Euler model only)");
    polar_cmd->add_option("--rho0", polar_opt.rho0, "upstream density");
    polar_cmd->add_option("--samples", polar_opt.samples, "number of beta samples (count)");
    polar_cmd->add_option("--model", polar_opt.model, "euler | potential");
    polar_cmd->add_option("--out", polar_opt.out, "output CSV path");

    WedgeOptions wedge_opt;
    auto* wedge_cmd = app.add_subcommand("wedge", "Weak/strong attached solutions for a wedge");
    wedge_cmd->add_option("--mach", wedge_opt.mach, "upstream Mach number (dimensionless)");
    wedge_cmd->add_option("--gamma", wedge_opt.gamma, "adiabatic exponent (dimensionless)");
    wedge_cmd->add_option("--theta-deg", wedge_opt.theta_deg, "wedge angle (degrees)");
    wedge_cmd->add_option("--p0", wedge_opt.p0, "upstream pressure (Euler model only)");
    wedge_cmd->add_option("--rho0", wedge_opt.rho0, "upstream density");
    wedge_cmd->add_option("--model", wedge_opt.model, "euler | potential");

    AnglesOptions angles_opt;
    auto* angles_cmd = app.add_subcommand("angles", "Detachment and sonic angles");
    angles_cmd->add_option("--mach", angles_opt.mach, "upstream Mach number (dimensionless)");
    angles_cmd->add_option("--gamma", angles_opt.gamma, "adiabatic exponent (dimensionless)");
    angles_cmd->add_option("--model", angles_opt.model, "euler | potential");

    std::string glimm_config, glimm_out = ".";
    auto* glimm_cmd = app.add_subcommand("glimm", "Random-choice march over a wedge");
    glimm_cmd->add_option("--config", glimm_config,
                          "JSON config: gas{gamma}, mach, theta_w_deg, wedge_table "
                          "[[x1,delta]...], cauchy{kind,amplitude,height,cells}, dx1, dx2 "
                          "(lengths), cfl, x1_max (length), seed, tail_fraction, track_front; "
                          "WEDGEFLOW_SEED overrides seed")
        ->required();
    glimm_cmd->add_option("--out-dir", glimm_out, "directory for front/diagnostics/summary");

    SelfsimOptions selfsim_opt;
    auto* selfsim_cmd =
        app.add_subcommand("selfsim", "Self-similar constant-state skeleton and verification");
    selfsim_cmd->add_option("--gamma", selfsim_opt.gamma, "adiabatic exponent (dimensionless)");
    selfsim_cmd->add_option("--u10", selfsim_opt.u10, "incoming speed (length/time)");
    selfsim_cmd->add_option("--rho0", selfsim_opt.rho0, "incoming density");
    selfsim_cmd->add_option("--theta-deg", selfsim_opt.theta_deg, "wedge angle (degrees)");
    selfsim_cmd->add_option("--out", selfsim_opt.out, "skeleton JSON path");
    selfsim_cmd->add_option("--geometry", selfsim_opt.geometry, "geometry CSV path");

    std::string unsteady_config, unsteady_out = ".";
    auto* unsteady_cmd = app.add_subcommand("unsteady", "Time march to the steady weak shock");
    unsteady_cmd->add_option("--config", unsteady_config,
                             "JSON config: gas{gamma}, u10, rho0, theta_w_deg (degrees), nx, ny "
                             "(cells), cfl, t_max, check_every, snapshot_every (times), init "
                             "(uniform|strong), x_max, y_max (lengths), residual_tol")
        ->required();
    unsteady_cmd->add_option("--out-dir", unsteady_out, "directory for field/convergence/fit");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cout << json{{"error", "Validation"}, {"detail", e.what()}}.dump() << "\n";
        return 2;
    }

    try {
        json summary;
        if (*polar_cmd) summary = run_polar(polar_opt);
        if (*wedge_cmd) summary = run_wedge(wedge_opt);
        if (*angles_cmd) summary = run_angles(angles_opt);
        if (*glimm_cmd) summary = run_glimm(glimm_config, glimm_out);
        if (*selfsim_cmd) summary = run_selfsim(selfsim_opt);
        if (*unsteady_cmd) summary = run_unsteady(unsteady_config, unsteady_out);
        std::cout << summary.dump() << "\n";
        return summary.contains("error") ? 3 : 0;
    } catch (const FlowError& e) {
        std::cout << json{{"error", e.name()}, {"detail", e.what()}}.dump() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cout << json{{"error", "Validation"}, {"detail", e.what()}}.dump() << "\n";
        return 2;
    }
}

} // namespace wedgeflow::cli
