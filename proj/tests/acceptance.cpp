// Acceptance suite: one timed pass/fail line per criterion, exit code equal
// to the number of failures. Quantitative targets are oracle-derived (the
// oracles live in oracles.hpp) with tolerances pinned below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wedgeflow/glimm.hpp"
#include "wedgeflow/polar.hpp"
#include "wedgeflow/selfsim.hpp"
#include "wedgeflow/thermo.hpp"
#include "wedgeflow/unsteady.hpp"
#include "wedgeflow/waves.hpp"

using namespace wedgeflow;

namespace {

int failures = 0;

struct Criterion {
    int id = 0;
    std::string name;
    double budget_s = 0.0;
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

void run(Criterion& c, const std::function<void(Criterion&)>& body) {
    const auto start = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.ok = false;
        c.note(std::string("exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > c.budget_s) {
        c.ok = false;
        c.note("runtime " + std::to_string(elapsed) + " s over budget " +
               std::to_string(c.budget_s) + " s");
    }
    std::printf("%s criterion %d: %s (%.2f s)%s%s\n", c.ok ? "PASS" : "FAIL", c.id,
                c.name.c_str(), elapsed, c.detail.empty() ? "" : " -- ", c.detail.c_str());
    if (!c.ok) ++failures;
}

double rad(double deg) { return deg * M_PI / 180.0; }
double deg(double r) { return r * 180.0 / M_PI; }

const std::vector<double> kMachs{1.2, 2.0, 5.0};
const std::vector<double> kGammas{1.2, 1.4, 5.0 / 3.0};

// nonincreasing over the trailing half, up to jitter of 1% of the series
// range, with a net decrease against the midpoint
bool decreasing_final_half(const std::vector<double>& s) {
    if (s.size() < 4) return false;
    double lo = s[0], hi = s[0];
    for (double v : s) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double jitter = 0.01 * (hi - lo);
    const std::size_t h = s.size() / 2;
    for (std::size_t i = h; i + 1 < s.size(); ++i)
        if (s[i + 1] > s[i] + jitter) return false;
    return s.back() <= s[h] + jitter;
}

void criterion1(Criterion& c) {
    double worst_state = 0.0, worst_rh = 0.0;
    for (double m0 : kMachs) {
        for (double gamma : kGammas) {
            const auto g = GasModel::ideal(gamma);
            const EulerPrimitive up{m0 * std::sqrt(g.gamma), 0.0, 1.0, 1.0};
            const double b_lo = std::asin(1.0 / m0);
            for (int i = 0; i < 50; ++i) {
                const double beta = b_lo + (0.5 * M_PI - b_lo) * i / 49.0;
                const auto s = downstream_from_beta(up, beta, g);

                // closed-form normal decomposition
                const double mn = std::max(1.0, m0 * std::sin(beta));
                const double rr = oracle::normal_shock_density_ratio(gamma, mn);
                const double pr = oracle::normal_shock_pressure_ratio(gamma, mn);
                const double ut = up.u1 * std::cos(beta);
                const double un1 = up.u1 * std::sin(beta) / rr;
                const double ex_u1 = ut * std::cos(beta) + un1 * std::sin(beta);
                const double ex_u2 = std::cos(beta) * (up.u1 * std::sin(beta) - un1);

                const auto rel = [](double a, double b, double scale) {
                    return std::abs(a - b) / scale;
                };
                worst_state = std::max({worst_state, rel(s.downstream.rho, rr, rr),
                                        rel(s.downstream.p, pr, pr),
                                        rel(s.downstream.u1, ex_u1, up.u1),
                                        rel(s.downstream.u2, ex_u2, up.u1)});
                const auto r = rh_residual_beta(up, s.downstream, beta, g);
                for (double v : r) worst_rh = std::max(worst_rh, std::abs(v));
            }
        }
    }
    c.require(worst_state < 1e-10, "state mismatch " + std::to_string(worst_state));
    c.require(worst_rh < 1e-10, "RH residual " + std::to_string(worst_rh));
    c.note("max state err " + std::to_string(worst_state) + ", max RH " +
           std::to_string(worst_rh));
}

void criterion2(Criterion& c) {
    const auto g = GasModel::ideal(1.4);
    const EulerPrimitive up{2.0 * std::sqrt(1.4), 0.0, 1.0, 1.0};
    const auto crit = critical_angles(up, g);

    const double bd = oracle::beta_detach(1.4, 2.0);
    const double bs = oracle::beta_sonic(1.4, 2.0);
    const double theta_d_oracle = deg(oracle::theta_from_beta(1.4, 2.0, bd));
    const double theta_s_oracle = deg(oracle::theta_from_beta(1.4, 2.0, bs));
    c.require(std::abs(theta_d_oracle - 22.97) < 0.02, "oracle theta_d far from 22.97");
    c.require(std::abs(theta_s_oracle - 22.71) < 0.05, "oracle theta_s far from 22.7");
    c.require(std::abs(deg(crit.theta_d) - theta_d_oracle) < 0.02,
              "theta_d off oracle by " + std::to_string(deg(crit.theta_d) - theta_d_oracle));
    c.require(std::abs(deg(crit.theta_s) - theta_s_oracle) < 0.05,
              "theta_s off oracle by " + std::to_string(deg(crit.theta_s) - theta_s_oracle));

    for (double m0 : kMachs)
        for (double gamma : kGammas) {
            const auto gm = GasModel::ideal(gamma);
            const EulerPrimitive u{m0 * std::sqrt(gm.gamma), 0.0, 1.0, 1.0};
            const auto cr = critical_angles(u, gm);
            c.require(cr.theta_s < cr.theta_d,
                      "sonic angle not below detachment at M=" + std::to_string(m0));
        }
    c.note("theta_d " + std::to_string(deg(crit.theta_d)) + " deg, theta_s " +
           std::to_string(deg(crit.theta_s)) + " deg");
}

void criterion3(Criterion& c) {
    const auto g = GasModel::ideal(1.4);
    const EulerPrimitive bg{2.0 * std::sqrt(1.4), 0.0, 1.0, 1.0};
    const auto geom = WedgeGeometry::straight(rad(10.0), 50.0);
    const auto data = make_cauchy_data(CauchyKind::Constant, 0.0, bg, g);
    MarchConfig cfg;
    cfg.dx1 = 50.0 / 400.0;
    cfg.dx2 = 50.0 / 400.0;
    cfg.x1_max = 50.0;

    const auto result = march(geom, data, cfg, g);
    const auto pair = wedge_solutions(bg, rad(10.0), g);
    const double slope_weak = pair->weak.slope;
    const double p_weak = pair->weak.downstream.p;

    double slope_err = 0.0;
    for (double s : result.front.sigma_slope)
        slope_err = std::max(slope_err, std::abs(s - slope_weak));
    const auto asym = asymptotics_estimate(result.diag, cfg.tail_fraction);

    c.require(slope_err <= 5.0 * cfg.dx2, "front slope error " + std::to_string(slope_err));
    c.require(std::abs(asym.p_inf - p_weak) / p_weak <= 1e-3,
              "p_inf relative error " + std::to_string(std::abs(asym.p_inf - p_weak) / p_weak));
    c.require(result.diag.max_tv() == 0.0,
              "variation below the front " + std::to_string(result.diag.max_tv()));
    c.note("slope err " + std::to_string(slope_err) + ", p_inf rel " +
           std::to_string(std::abs(asym.p_inf - p_weak) / p_weak));
}

void criterion4(Criterion& c) {
    const auto g = GasModel::ideal(1.4);
    const EulerPrimitive bg{2.0 * std::sqrt(1.4), 0.0, 1.0, 1.0};
    MarchConfig cfg;
    cfg.dx1 = 0.0625;
    cfg.dx2 = 0.125;
    cfg.x1_max = 50.0;

    // frozen regression constant for the variation monitor, of order
    // TV(data) + TV(b'): observed amplification is below 6 across the suite
    const double kTvFactor = 8.0;

    struct Case {
        std::string name;
        WedgeGeometry geom;
        CauchyData data;
        double tv_total;
    };
    std::vector<Case> cases;
    const auto straight = WedgeGeometry::straight(rad(10.0), cfg.x1_max);
    cases.push_back({"step", straight, make_cauchy_data(CauchyKind::Step, 0.01, bg, g), 0.01});
    cases.push_back({"bump", straight, make_cauchy_data(CauchyKind::Bump, 0.005, bg, g), 0.01});
    cases.push_back(
        {"sawtooth", straight, make_cauchy_data(CauchyKind::Sawtooth, 0.00125, bg, g), 0.01});
    const auto bent = WedgeGeometry::perturbed(
        rad(10.0), {{0.0, 0.0}, {4.0, 0.0}, {8.0, 0.01}, {50.0, 0.01}});
    cases.push_back(
        {"wedge-slope", bent, make_cauchy_data(CauchyKind::Constant, 0.0, bg, g), 0.005});

    // frozen regression for the tail slope: the deviation from the polar
    // value of the asymptotic wall angle stays below 0.1 eps (observed
    // ratios are under 7e-4 for all four runs)
    const double kSlopeFactor = 0.1;

    for (const auto& cs : cases) {
        const auto result = march(cs.geom, cs.data, cfg, g);
        c.require(result.diag.max_tv() <= kTvFactor * cs.tv_total,
                  cs.name + ": TV " + std::to_string(result.diag.max_tv()) + " over bound " +
                      std::to_string(kTvFactor * cs.tv_total));
        bool above = true;
        for (std::size_t i = 0; i < result.front.x1.size(); ++i)
            above = above && result.front.sigma[i] >= cs.geom.b(result.front.x1[i]) - 1e-12;
        c.require(above, cs.name + ": front touched the wall");
        const auto asym = asymptotics_estimate(result.diag, cfg.tail_fraction);
        c.require(std::abs(asym.angle_inf - cs.geom.slope_at_infinity()) < 2.0 * cfg.dx2,
                  cs.name + ": angle_inf off by " +
                      std::to_string(std::abs(asym.angle_inf - cs.geom.slope_at_infinity())));
        const auto tail_pair =
            wedge_solutions(bg, std::atan(cs.geom.slope_at_infinity()), g);
        c.require(std::abs(asym.s_inf - tail_pair->weak.slope) <= kSlopeFactor * cs.tv_total,
                  cs.name + ": s_inf deviation " +
                      std::to_string(std::abs(asym.s_inf - tail_pair->weak.slope)));
    }

    // determinism: bitwise identical rerun of the step case
    const auto r1 = march(cases[0].geom, cases[0].data, cfg, g);
    const auto r2 = march(cases[0].geom, cases[0].data, cfg, g);
    bool identical = r1.front.sigma.size() == r2.front.sigma.size();
    for (std::size_t i = 0; identical && i < r1.front.sigma.size(); ++i)
        identical = r1.front.sigma[i] == r2.front.sigma[i];
    for (std::size_t i = 0; identical && i < r1.diag.tv.size(); ++i)
        identical = r1.diag.tv[i] == r2.diag.tv[i] && r1.diag.p_mean[i] == r2.diag.p_mean[i];
    c.require(identical, "rerun not bitwise identical");
}

void criterion5(Criterion& c) {
    double worst_rh = 0.0, worst_jump = 0.0, worst_eq = 0.0, worst_rho1 = 0.0;
    int skeletons = 0;
    for (double gamma : kGammas) {
        const auto g = GasModel::ideal(gamma);
        for (double u10 : {1.5, 2.0, 3.0}) {
            const PotentialState up{u10, 0.0, 1.0};
            const auto crit = potential_critical_angles(up, g);
            const int top = static_cast<int>(std::floor(deg(crit.theta_d))) - 1;
            for (int d = 1; d <= top; ++d) {
                const auto sk = build_skeleton(g, u10, 1.0, rad(d));
                const auto rep = verify_skeleton(sk);
                worst_rh = std::max({worst_rh, rep.rh_s0, rep.rh_s1});
                worst_jump = std::max({worst_jump, rep.phi_jump_s0, rep.phi_jump_s1});
                worst_eq = std::max(worst_eq, rep.eq_residual);
                worst_rho1 = std::max(worst_rho1, rep.rho1_identity);
                c.require(rep.entropy_ok, "entropy inequality failed");
                c.require(rep.branch_ok && rep.ellipticity_ok && rep.pseudo_subsonic_behind_s1,
                          "type classification failed");
                ++skeletons;
            }
            // branch flip within 1e-8 of the sonic angle
            const auto below = build_skeleton(g, u10, 1.0, crit.theta_s - 1e-8);
            const auto above = build_skeleton(g, u10, 1.0, crit.theta_s + 1e-8);
            c.require(below.branch == VertexBranch::SupersonicVertex &&
                          above.branch == VertexBranch::SubsonicVertex,
                      "branch flip not at the sonic angle");
        }
    }
    c.require(worst_rh < 1e-10, "RH residual " + std::to_string(worst_rh));
    c.require(worst_jump < 1e-10, "[phi] residual " + std::to_string(worst_jump));
    c.require(worst_eq < 1e-12, "interior residual " + std::to_string(worst_eq));
    c.require(worst_rho1 < 1e-12, "rho1 identity " + std::to_string(worst_rho1));
    c.note(std::to_string(skeletons) + " skeletons, max RH " + std::to_string(worst_rh));
}

void criterion6(Criterion& c) {
    const auto g = GasModel::ideal(1.4);
    const auto grid = Grid2D::over(2.0, 1.0, 400, 200);
    UnsteadyConfig cfg;
    cfg.u10 = 2.0;
    cfg.rho0 = 1.0;
    cfg.theta_w = rad(10.0);
    cfg.cfl = 0.4;
    cfg.t_max = 12.0;
    cfg.check_every = 0.25;
    cfg.snapshot_every = 0.5;

    const auto out = run_to_steady(grid, g, cfg);
    const auto pair = potential_wedge_solutions({2.0, 0.0, 1.0}, cfg.theta_w, g);
    const double beta_weak = pair->weak.beta;
    const double beta_strong = pair->strong.beta;

    const double angle_err = std::abs(out.fit.beta - beta_weak);
    c.require(angle_err < rad(1.5), "fitted angle off weak branch by " +
                                        std::to_string(deg(angle_err)) + " deg");
    const double rho_err =
        std::abs(out.fit.rho_down - pair->weak.downstream.rho) / pair->weak.downstream.rho;
    c.require(rho_err < 0.03, "downstream density off by " + std::to_string(rho_err));
    c.require(std::abs(out.fit.beta - beta_strong) > 10.0 * angle_err,
              "strong branch not rejected by margin");
    c.require(decreasing_final_half(out.report.l1_defect), "L1 defect not decreasing");
    c.require(out.report.selfsim_defect.size() >= 2 &&
                  out.report.selfsim_defect.back() <=
                      out.report.selfsim_defect.front() *
                          (1.0 + 1e-6),
              "self-similarity defect not decreasing");
    c.require(out.report.mass_error < 1e-10,
              "mass error " + std::to_string(out.report.mass_error));
    c.note("beta err " + std::to_string(deg(angle_err)) + " deg, rho err " +
           std::to_string(rho_err) + ", mass err " + std::to_string(out.report.mass_error));
}

void criterion7(Criterion& c) {
    const auto g = GasModel::ideal(1.4);

    // thermodynamic round trips at 1e-12
    double worst_rt = 0.0;
    for (double e = -3; e <= 3; e += 0.125) {
        const double rho = std::pow(10.0, e);
        worst_rt = std::max(worst_rt,
                            std::abs(rho_from_head(potential_h(rho, g), g) - rho) / rho);
        const EulerPrimitive s{0, 0, 0.8, rho};
        const double S = specific_entropy(s, g);
        worst_rt =
            std::max(worst_rt, std::abs(pressure_from_entropy(rho, S, g) - s.p) / s.p);
    }
    c.require(worst_rt < 1e-12, "round trip " + std::to_string(worst_rt));

    // finite-difference sound-speed check at 1e-6
    double worst_fd = 0.0;
    for (double rho : {0.2, 1.0, 3.0, 50.0}) {
        const double h = 1e-6 * rho;
        const double dpdr = oracle::central_derivative(
            [&](double r) { return potential_pressure(r, g); }, rho, h);
        worst_fd = std::max(worst_fd,
                            std::abs(dpdr - potential_c2(rho, g)) / potential_c2(rho, g));
    }
    c.require(worst_fd < 1e-6, "c^2 finite difference " + std::to_string(worst_fd));

    // Riemann recovery of split fans at 1e-9 (shock inverses through the
    // closed-form relations, expansions through the shared invariants)
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> angle(-rad(6.0), rad(6.0));
    std::uniform_real_distribution<double> pfac(0.75, 1.4);
    int tested = 0;
    double worst_rec = 0.0;
    const auto inverse_outer = [&](Side side, const EulerPrimitive& mid,
                                   double p_outer) -> EulerPrimitive {
        const double sign = (side == Side::Above) ? 1.0 : -1.0;
        const double theta_mid = mid.angle();
        const double m_mid = mach_number(mid, g);
        if (p_outer < mid.p) {
            const double pr = mid.p / p_outer;
            const double mn = std::sqrt(1.0 + (g.gamma + 1.0) / (2.0 * g.gamma) * (pr - 1.0));
            const double mu = oracle::bisect(
                [&](double m) {
                    return oracle::downstream_mach_from_beta(g.gamma, m, std::asin(mn / m)) -
                           m_mid;
                },
                mn + 1e-9, 60.0);
            const double beta = std::asin(mn / mu);
            const double delta = oracle::theta_from_beta(g.gamma, mu, beta);
            const double theta_o = theta_mid - sign * delta;
            const double rho_o = mid.rho / oracle::normal_shock_density_ratio(g.gamma, mn);
            const double speed = mu * std::sqrt(g.gamma * p_outer / rho_o);
            return {speed * std::cos(theta_o), speed * std::sin(theta_o), p_outer, rho_o};
        }
        const double rho_o = mid.rho * std::pow(p_outer / mid.p, 1.0 / g.gamma);
        const double c2_o = g.gamma * p_outer / rho_o;
        const double H = total_enthalpy(mid, g);
        const double speed = std::sqrt(2.0 * (H - c2_o / (g.gamma - 1.0)));
        const double m_o = speed / std::sqrt(c2_o);
        const auto nu = [&](double m) {
            const double gp = g.gamma + 1.0, gm = g.gamma - 1.0;
            return std::sqrt(gp / gm) * std::atan(std::sqrt(gm / gp * (m * m - 1.0))) -
                   std::atan(std::sqrt(m * m - 1.0));
        };
        const double theta_o = theta_mid + sign * (nu(m_mid) - nu(m_o));
        return {speed * std::cos(theta_o), speed * std::sin(theta_o), p_outer, rho_o};
    };
    for (int i = 0; i < 1000; ++i) {
        const double theta_star = angle(rng);
        const double p_star = pfac(rng);
        const EulerPrimitive mid = rotated_state(
            {2.2 * std::sqrt(1.4), 0.0, p_star, std::pow(p_star, 1.0 / 1.4)}, theta_star);
        try {
            const auto above = inverse_outer(Side::Above, mid, p_star * pfac(rng));
            const auto below = inverse_outer(Side::Below, mid, p_star * pfac(rng));
            const auto fan = steady_riemann(above, below, g);
            worst_rec = std::max({worst_rec, std::abs(fan.p_star - p_star) / p_star,
                                  std::abs(fan.theta_star - theta_star)});
            ++tested;
        } catch (const FlowError&) {
            continue;
        }
    }
    c.require(tested > 700, "too few valid split-fan draws");
    c.require(worst_rec < 1e-9, "middle-state recovery " + std::to_string(worst_rec));

    // bitwise mirror symmetry of the unsteady march
    const auto grid = Grid2D::over(1.0, 0.5, 32, 16);
    auto a = init_uniform(grid, g, 2.0, 1.0, rad(10.0), false);
    auto b = init_uniform(grid, g, 2.0, 1.0, rad(10.0), true);
    for (int k = 0; k < 30; ++k) {
        step(a, grid, g, 0.4);
        step(b, grid, g, 0.4);
    }
    bool mirrored = true;
    for (int j = 0; j < grid.ny && mirrored; ++j)
        for (int i = 0; i < grid.nx && mirrored; ++i)
            mirrored = b.rho[b.idx(i, grid.ny - 1 - j)] == a.rho[a.idx(i, j)] &&
                       b.phi[b.idx(i, grid.ny - 1 - j)] == a.phi[a.idx(i, j)];
    c.require(mirrored, "mirrored run not bitwise symmetric");
    c.note("recovery err " + std::to_string(worst_rec) + " over " + std::to_string(tested) +
           " draws");
}

} // namespace

int main() {
    std::printf("wedgeflow acceptance suite\n");

    Criterion c1;
    c1.id = 1;
    c1.name = "polar matches closed-form normal decomposition";
    c1.budget_s = 5.0;
    run(c1, criterion1);
    Criterion c2;
    c2.id = 2;
    c2.name = "critical angles against independent search oracles";
    c2.budget_s = 5.0;
    run(c2, criterion2);
    Criterion c3;
    c3.id = 3;
    c3.name = "unperturbed march reproduces the weak shock exactly";
    c3.budget_s = 60.0;
    run(c3, criterion3);
    Criterion c4;
    c4.id = 4;
    c4.name = "perturbed marches stay bounded, deterministic, convergent";
    c4.budget_s = 300.0;
    run(c4, criterion4);
    Criterion c5;
    c5.id = 5;
    c5.name = "self-similar skeleton sweep satisfies all jump/interior relations";
    c5.budget_s = 30.0;
    run(c5, criterion5);
    Criterion c6;
    c6.id = 6;
    c6.name = "time marching selects the weak branch";
    c6.budget_s = 600.0;
    run(c6, criterion6);
    Criterion c7;
    c7.id = 7;
    c7.name = "standalone property suites";
    c7.budget_s = 30.0;
    run(c7, criterion7);

    std::printf("%d of 7 criteria passed\n", 7 - failures);
    return failures;
}
