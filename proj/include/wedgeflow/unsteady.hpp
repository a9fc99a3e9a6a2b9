#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wedgeflow/errors.hpp"
#include "wedgeflow/polar.hpp"
#include "wedgeflow/thermo.hpp"

// Time-dependent potential flow (continuity + Bernoulli) over a wedge in the
// wedge-aligned frame: the wall is the bottom edge, the free stream comes in
// deflected onto it by theta_w, so no cut cells are needed. Continuity is
// advanced by a conservative Rusanov flux of rho grad(Phi); the Bernoulli law
// advances Phi pointwise. First order in space and time.

namespace wedgeflow {

struct Grid2D {
    int nx = 400;
    int ny = 200;
    double hx = 0.005;
    double hy = 0.005;

    static Grid2D over(double x_max, double y_max, int nx, int ny) {
        if (nx < 16 || ny < 16) throw std::invalid_argument("Grid2D: need at least 16x16 cells");
        return {nx, ny, x_max / nx, y_max / ny};
    }
    double x_max() const { return nx * hx; }
    double y_max() const { return ny * hy; }
};

/// Cell-centered fields with one ghost ring. The free-stream data used by
/// the boundary fill is carried with the state.
struct FieldState {
    std::vector<double> rho;
    std::vector<double> phi;
    std::vector<double> c2; ///< cached rho^(gamma-1), kept in sync with rho
    double t = 0.0;
    double B = 0.0;
    int nx = 0;
    int ny = 0;
    double ut = 0.0;   ///< free-stream velocity along the wall
    double un = 0.0;   ///< free-stream speed into the wall (positive)
    double rho0 = 1.0;
    bool wall_on_top = false; ///< mirrored layout, used by symmetry checks

    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i + 1) +
               static_cast<std::size_t>(j + 1) * static_cast<std::size_t>(nx + 2);
    }
};

namespace detail_unsteady {

inline double wall_distance_y(const FieldState& st, const Grid2D& grid, int j) {
    // cell-center height above the wall, independent of which edge holds it
    return st.wall_on_top ? (static_cast<double>(st.ny - 1 - j) + 0.5) * grid.hy
                          : (static_cast<double>(j) + 0.5) * grid.hy;
}

inline double freestream_phi(const FieldState& st, const Grid2D& grid, int i, int j) {
    const double x = (static_cast<double>(i) + 0.5) * grid.hx;
    const double y = wall_distance_y(st, grid, j);
    return st.ut * x - st.un * y;
}

} // namespace detail_unsteady

/// Fill the ghost ring: mirrored wall at the bottom (slip through an even
/// reflection of Phi and rho), free-stream Dirichlet on the inflow edges,
/// gradient-preserving extrapolation at the outflow.
inline void apply_bcs(FieldState& st, const Grid2D& grid, const GasModel& g) {
    const int nx = st.nx, ny = st.ny;
    const double c2_free = potential_c2(st.rho0, g);

    const int jwall = st.wall_on_top ? ny : -1;     // ghost row index of the wall
    const int jwall_in = st.wall_on_top ? ny - 1 : 0;
    const int jfree = st.wall_on_top ? -1 : ny;     // ghost row of the free-stream edge

    for (int i = 0; i < nx; ++i) {
        // wall: even reflection => zero normal derivative => slip
        st.phi[st.idx(i, jwall)] = st.phi[st.idx(i, jwall_in)];
        st.rho[st.idx(i, jwall)] = st.rho[st.idx(i, jwall_in)];
        st.c2[st.idx(i, jwall)] = st.c2[st.idx(i, jwall_in)];
        // opposite edge: supersonic inflow
        st.phi[st.idx(i, jfree)] = detail_unsteady::freestream_phi(st, grid, i, jfree);
        st.rho[st.idx(i, jfree)] = st.rho0;
        st.c2[st.idx(i, jfree)] = c2_free;
    }
    for (int j = -1; j <= ny; ++j) {
        // left: inflow
        st.phi[st.idx(-1, j)] = detail_unsteady::freestream_phi(st, grid, -1, j);
        st.rho[st.idx(-1, j)] = st.rho0;
        st.c2[st.idx(-1, j)] = c2_free;
        // right: keep the last velocity (linear extrapolation of Phi)
        st.phi[st.idx(nx, j)] =
            2.0 * st.phi[st.idx(nx - 1, j)] - st.phi[st.idx(nx - 2, j)];
        st.rho[st.idx(nx, j)] = st.rho[st.idx(nx - 1, j)];
        st.c2[st.idx(nx, j)] = st.c2[st.idx(nx - 1, j)];
    }
}

/// Uniform free stream deflected onto the wall by theta_w; the slip condition
/// is violated at t = 0 by the wall-normal speed u10 sin(theta_w), which is
/// what generates the starting layer.
inline FieldState init_uniform(const Grid2D& grid, const GasModel& g, double u10, double rho0,
                               double theta_w, bool wall_on_top = false) {
    const double c0 = std::sqrt(potential_c2(rho0, g));
    if (!(u10 > c0)) throw NotSupersonicError("init_uniform: free stream must be supersonic");

    FieldState st;
    st.nx = grid.nx;
    st.ny = grid.ny;
    st.ut = u10 * std::cos(theta_w);
    st.un = u10 * std::sin(theta_w);
    st.rho0 = rho0;
    st.wall_on_top = wall_on_top;
    st.B = 0.5 * u10 * u10 + potential_h(rho0, g);

    const auto cells = static_cast<std::size_t>((grid.nx + 2) * (grid.ny + 2));
    st.rho.assign(cells, rho0);
    st.phi.assign(cells, 0.0);
    st.c2.assign(cells, potential_c2(rho0, g));
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            st.phi[st.idx(i, j)] = detail_unsteady::freestream_phi(st, grid, i, j);
    apply_bcs(st, grid, g);
    return st;
}

/// Exact two-state steady oblique-shock field in the wedge-aligned frame,
/// used for initialization and as the comparison field of the L1 defect.
struct SteadyObliqueField {
    double slope = 0.0;  ///< shock slope above the wall, tan(beta - theta_w)
    double q_down = 0.0; ///< downstream speed (wall-parallel)
    double rho_down = 0.0;
    double ut = 0.0, un = 0.0, rho0 = 0.0;

    double rho_at(double x, double y) const { return (y < slope * x) ? rho_down : rho0; }
    double ux_at(double x, double y) const { return (y < slope * x) ? q_down : ut; }
    double uy_at(double x, double y) const { return (y < slope * x) ? 0.0 : -un; }
};

inline SteadyObliqueField steady_oblique_field(const GasModel& g, double u10, double rho0,
                                               double theta_w, bool strong_branch = false) {
    const auto pair = potential_wedge_solutions({u10, 0.0, rho0}, theta_w, g);
    if (!pair) throw DetachedError("steady_oblique_field: wedge angle beyond detachment");
    const auto& branch = strong_branch ? pair->strong : pair->weak;
    SteadyObliqueField f;
    f.slope = std::tan(branch.beta - theta_w);
    f.q_down = branch.downstream.speed();
    f.rho_down = branch.downstream.rho;
    f.ut = u10 * std::cos(theta_w);
    f.un = u10 * std::sin(theta_w);
    f.rho0 = rho0;
    return f;
}

/// Initialize from a steady two-state oblique-shock field (weak or strong
/// branch). Phi is continuous across the front because the tangential
/// velocity is preserved by the potential jump conditions.
inline FieldState init_oblique(const Grid2D& grid, const GasModel& g, double u10, double rho0,
                               double theta_w, bool strong_branch) {
    FieldState st = init_uniform(grid, g, u10, rho0, theta_w);
    const auto f = steady_oblique_field(g, u10, rho0, theta_w, strong_branch);
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const double x = (i + 0.5) * grid.hx;
            const double y = detail_unsteady::wall_distance_y(st, grid, j);
            if (y < f.slope * x) {
                st.rho[st.idx(i, j)] = f.rho_down;
                st.c2[st.idx(i, j)] = potential_c2(f.rho_down, g);
                st.phi[st.idx(i, j)] = f.q_down * x;
            }
        }
    }
    apply_bcs(st, grid, g);
    return st;
}

struct StepInfo {
    double dt = 0.0;
    double mass_change = 0.0;   ///< integral of rho difference over the step
    double boundary_flux = 0.0; ///< net outward boundary mass flux times dt
    double residual = 0.0;      ///< ||rho_new - rho_old||_1 / dt (integral norm)
};

/// One explicit step: conservative continuity update with local
/// Lax-Friedrichs interface fluxes, then the pointwise Bernoulli update of
/// Phi with the fresh density. Mutates the state and returns step metrics.
inline StepInfo step(FieldState& st, const Grid2D& grid, const GasModel& g, double cfl) {
    if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("step: cfl must lie in (0, 1]");
    const int nx = st.nx, ny = st.ny;
    const double hx = grid.hx, hy = grid.hy;

    apply_bcs(st, grid, g);

    // CFL speed from cell-centered gradients
    double max_speed = 1e-300;
    std::vector<double> grad2(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double ux = (st.phi[st.idx(i + 1, j)] - st.phi[st.idx(i - 1, j)]) / (2.0 * hx);
            const double uy = (st.phi[st.idx(i, j + 1)] - st.phi[st.idx(i, j - 1)]) / (2.0 * hy);
            const double g2 = ux * ux + uy * uy;
            grad2[static_cast<std::size_t>(j) * nx + i] = g2;
            const double speed = std::sqrt(g2) + std::sqrt(st.c2[st.idx(i, j)]);
            max_speed = std::max(max_speed, speed);
        }
    }
    const double dt = cfl * std::min(hx, hy) / max_speed;

    // interface fluxes of rho grad(Phi) with Rusanov dissipation
    std::vector<double> fx(static_cast<std::size_t>(nx + 1) * ny);
    std::vector<double> fy(static_cast<std::size_t>(nx) * (ny + 1));
    const auto flux = [](double rl, double rr, double u, double alpha) {
        return 0.5 * (rl + rr) * u - 0.5 * alpha * (rr - rl);
    };
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            const double u = (st.phi[st.idx(i, j)] - st.phi[st.idx(i - 1, j)]) / hx;
            const double c = std::sqrt(0.5 * (st.c2[st.idx(i - 1, j)] + st.c2[st.idx(i, j)]));
            fx[static_cast<std::size_t>(j) * (nx + 1) + i] =
                flux(st.rho[st.idx(i - 1, j)], st.rho[st.idx(i, j)], u, std::abs(u) + c);
        }
    }
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double u = (st.phi[st.idx(i, j)] - st.phi[st.idx(i, j - 1)]) / hy;
            const double c = std::sqrt(0.5 * (st.c2[st.idx(i, j - 1)] + st.c2[st.idx(i, j)]));
            fy[static_cast<std::size_t>(j) * nx + i] =
                flux(st.rho[st.idx(i, j - 1)], st.rho[st.idx(i, j)], u, std::abs(u) + c);
        }
    }

    StepInfo info;
    info.dt = dt;
    const double inv_gm1 = 1.0 / (g.gamma - 1.0);
    double l1 = 0.0;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double div =
                (fx[static_cast<std::size_t>(j) * (nx + 1) + i + 1] -
                 fx[static_cast<std::size_t>(j) * (nx + 1) + i]) /
                    hx +
                (fy[static_cast<std::size_t>(j + 1) * nx + i] -
                 fy[static_cast<std::size_t>(j) * nx + i]) /
                    hy;
            const double rho_new = st.rho[st.idx(i, j)] - dt * div;
            if (!(rho_new > 0.0))
                throw VacuumError("step: density lost positivity at cell (" + std::to_string(i) +
                                  "," + std::to_string(j) + "), t = " + std::to_string(st.t));
            l1 += std::abs(rho_new - st.rho[st.idx(i, j)]);
            const double c2n = std::pow(rho_new, g.gamma - 1.0);
            const double h = (c2n - 1.0) * inv_gm1;
            st.phi[st.idx(i, j)] +=
                dt * (st.B - 0.5 * grad2[static_cast<std::size_t>(j) * nx + i] - h);
            st.rho[st.idx(i, j)] = rho_new;
            st.c2[st.idx(i, j)] = c2n;
        }
    }
    info.mass_change = -dt * 0.0; // filled from the boundary sum below
    info.residual = l1 * hx * hy / dt;

    // net outward boundary flux; by conservation it accounts exactly for the
    // interior mass change
    double out_flux = 0.0;
    for (int j = 0; j < ny; ++j) {
        out_flux += fx[static_cast<std::size_t>(j) * (nx + 1) + nx] * hy;
        out_flux -= fx[static_cast<std::size_t>(j) * (nx + 1) + 0] * hy;
    }
    for (int i = 0; i < nx; ++i) {
        out_flux += fy[static_cast<std::size_t>(ny) * nx + i] * hx;
        out_flux -= fy[static_cast<std::size_t>(0) * nx + i] * hx;
    }
    info.boundary_flux = dt * out_flux;
    info.mass_change = -info.boundary_flux;
    st.t += dt;
    return info;
}

/// Integral of rho over the interior.
inline double total_mass(const FieldState& st, const Grid2D& grid) {
    double m = 0.0;
    for (int j = 0; j < st.ny; ++j)
        for (int i = 0; i < st.nx; ++i) m += st.rho[st.idx(i, j)];
    return m * grid.hx * grid.hy;
}

struct ShockFit {
    double angle = 0.0;  ///< fitted front angle above the wall [rad]
    double beta = 0.0;   ///< same angle measured from the incoming flow
    double rms = 0.0;    ///< rms transverse scatter of the ridge cells
    double rho_down = 0.0;   ///< mean density sampled behind the front
    double speed_down = 0.0; ///< mean flow speed sampled behind the front
    int ridge_cells = 0;
};

/// Fit the front as a line through the vertex using density-gradient ridge
/// cells, excluding a vertex neighborhood (corner derivatives may blow up)
/// and everything outside `fit_radius`.
inline ShockFit fit_shock(const FieldState& st, const Grid2D& grid, double theta_w,
                          double fit_radius) {
    const int nx = st.nx, ny = st.ny;
    const double hx = grid.hx, hy = grid.hy;
    const double r_min = 5.0 * std::max(hx, hy);

    std::vector<double> mag(static_cast<std::size_t>(nx) * ny, 0.0);
    double peak = 0.0;
    for (int j = 1; j < ny - 1; ++j) {
        for (int i = 1; i < nx - 1; ++i) {
            const double gx = (st.rho[st.idx(i + 1, j)] - st.rho[st.idx(i - 1, j)]) / (2 * hx);
            const double gy = (st.rho[st.idx(i, j + 1)] - st.rho[st.idx(i, j - 1)]) / (2 * hy);
            const double x = (i + 0.5) * hx;
            const double y = detail_unsteady::wall_distance_y(st, grid, j);
            const double r = std::hypot(x, y);
            if (r < r_min || r > fit_radius) continue;
            const double m = std::hypot(gx, gy);
            mag[static_cast<std::size_t>(j) * nx + i] = m;
            peak = std::max(peak, m);
        }
    }

    ShockFit fit;
    if (peak <= 0.0) return fit; // no front in the window
    const double threshold = 0.5 * peak;
    double sxy = 0.0, sxx = 0.0, wsum = 0.0;
    for (int j = 1; j < ny - 1; ++j) {
        for (int i = 1; i < nx - 1; ++i) {
            const double w = mag[static_cast<std::size_t>(j) * nx + i];
            if (w < threshold) continue;
            const double x = (i + 0.5) * hx;
            const double y = detail_unsteady::wall_distance_y(st, grid, j);
            sxy += w * x * y;
            sxx += w * x * x;
            wsum += w;
            ++fit.ridge_cells;
        }
    }
    if (fit.ridge_cells == 0) return fit;
    const double m = sxy / sxx;
    fit.angle = std::atan(m);
    fit.beta = fit.angle + theta_w;
    double ss = 0.0;
    for (int j = 1; j < ny - 1; ++j) {
        for (int i = 1; i < nx - 1; ++i) {
            const double w = mag[static_cast<std::size_t>(j) * nx + i];
            if (w < threshold) continue;
            const double x = (i + 0.5) * hx;
            const double y = detail_unsteady::wall_distance_y(st, grid, j);
            const double d = (y - m * x) / std::sqrt(1.0 + m * m);
            ss += w * d * d;
        }
    }
    fit.rms = std::sqrt(ss / wsum);

    // sample the state well behind the front
    const double margin = 4.0 * std::max(hx, hy) * std::sqrt(1.0 + m * m);
    double rsum = 0.0, qsum = 0.0;
    int count = 0;
    for (int j = 1; j < ny - 1; ++j) {
        for (int i = 1; i < nx - 1; ++i) {
            const double x = (i + 0.5) * hx;
            const double y = detail_unsteady::wall_distance_y(st, grid, j);
            const double r = std::hypot(x, y);
            if (r < 4.0 * r_min || r > fit_radius) continue;
            if (y > m * x - margin) continue;
            const double ux = (st.phi[st.idx(i + 1, j)] - st.phi[st.idx(i - 1, j)]) / (2 * hx);
            const double uy = (st.phi[st.idx(i, j + 1)] - st.phi[st.idx(i, j - 1)]) / (2 * hy);
            rsum += st.rho[st.idx(i, j)];
            qsum += std::hypot(ux, uy);
            ++count;
        }
    }
    if (count > 0) {
        fit.rho_down = rsum / count;
        fit.speed_down = qsum / count;
    }
    return fit;
}

struct ConvergenceReport {
    std::vector<double> times;     ///< checkpoint times
    std::vector<double> residual;  ///< density residual at checkpoints
    std::vector<double> l1_defect; ///< L1 distance to the steady weak field
    std::vector<double> ss_times;      ///< times with a half-time partner
    std::vector<double> selfsim_defect; ///< L1 mismatch of (t, 2t) rescaled pair
    double mass_error = 0.0; ///< telescoped conservation defect, relative
    double final_residual = 0.0;
    bool converged = false;
};

struct UnsteadyConfig {
    double u10 = 2.0;
    double rho0 = 1.0;
    double theta_w = 0.0;
    double cfl = 0.4;
    double t_max = 12.0;
    double check_every = 0.25;
    double snapshot_every = 0.5;
    double residual_tol = 1e-8;
    double fit_radius_frac = 0.95; ///< of min(x_max, y_max)
    bool strong_init = false;      ///< start from the strong-branch field
    /// invoked at every snapshot time (and at t = 0) with the current state
    std::function<void(const FieldState&)> on_snapshot;
};

struct UnsteadyResult {
    FieldState state;
    ShockFit fit;
    ConvergenceReport report;
};

/// March to steady state or t_max. The report carries the full series; a run
/// that never meets the residual tolerance is returned with converged =
/// false rather than hidden behind an exception.
inline UnsteadyResult run_to_steady(const Grid2D& grid, const GasModel& g,
                                    const UnsteadyConfig& cfg) {
    const auto pair = potential_wedge_solutions({cfg.u10, 0.0, cfg.rho0}, cfg.theta_w, g);
    if (cfg.theta_w > 0.0 && !pair)
        throw DetachedError("run_to_steady: wedge angle beyond potential detachment");

    UnsteadyResult out;
    out.state = cfg.strong_init
                    ? init_oblique(grid, g, cfg.u10, cfg.rho0, cfg.theta_w, true)
                    : init_uniform(grid, g, cfg.u10, cfg.rho0, cfg.theta_w);
    FieldState& st = out.state;

    const double fit_radius = cfg.fit_radius_frac * std::min(grid.x_max(), grid.y_max());
    const auto steady = (cfg.theta_w > 0.0)
                            ? steady_oblique_field(g, cfg.u10, cfg.rho0, cfg.theta_w, false)
                            : SteadyObliqueField{0.0, cfg.u10, cfg.rho0,
                                                 cfg.u10, 0.0, cfg.rho0};

    const auto l1_defect = [&]() {
        apply_bcs(st, grid, g);
        double sum = 0.0;
        for (int j = 0; j < st.ny; ++j) {
            for (int i = 0; i < st.nx; ++i) {
                const double x = (i + 0.5) * grid.hx;
                const double y = detail_unsteady::wall_distance_y(st, grid, j);
                if (std::hypot(x, y) > fit_radius) continue;
                const double ux =
                    (st.phi[st.idx(i + 1, j)] - st.phi[st.idx(i - 1, j)]) / (2 * grid.hx);
                const double uy_raw =
                    (st.phi[st.idx(i, j + 1)] - st.phi[st.idx(i, j - 1)]) / (2 * grid.hy);
                const double uy = st.wall_on_top ? -uy_raw : uy_raw;
                sum += std::abs(st.rho[st.idx(i, j)] - steady.rho_at(x, y)) +
                       std::hypot(ux - steady.ux_at(x, y), uy - steady.uy_at(x, y));
            }
        }
        return sum * grid.hx * grid.hy;
    };

    // snapshots of (rho, ux, uy) for the self-similarity defect
    struct Snapshot {
        double t;
        std::vector<double> rho, ux, uy;
    };
    std::vector<Snapshot> snaps;
    const auto take_snapshot = [&]() {
        apply_bcs(st, grid, g);
        if (cfg.on_snapshot) cfg.on_snapshot(st);
        Snapshot s;
        s.t = st.t;
        s.rho.resize(static_cast<std::size_t>(st.nx) * st.ny);
        s.ux.resize(s.rho.size());
        s.uy.resize(s.rho.size());
        for (int j = 0; j < st.ny; ++j) {
            for (int i = 0; i < st.nx; ++i) {
                const auto c = static_cast<std::size_t>(j) * st.nx + i;
                s.rho[c] = st.rho[st.idx(i, j)];
                s.ux[c] = (st.phi[st.idx(i + 1, j)] - st.phi[st.idx(i - 1, j)]) / (2 * grid.hx);
                s.uy[c] = (st.phi[st.idx(i, j + 1)] - st.phi[st.idx(i, j - 1)]) / (2 * grid.hy);
            }
        }
        snaps.push_back(std::move(s));
    };
    const auto sample = [&](const std::vector<double>& f, double x, double y) {
        // bilinear in cell-center coordinates
        const double fi = x / grid.hx - 0.5;
        const double fj = y / grid.hy - 0.5;
        const int i0 = std::clamp(static_cast<int>(std::floor(fi)), 0, st.nx - 2);
        const int j0 = std::clamp(static_cast<int>(std::floor(fj)), 0, st.ny - 2);
        const double a = std::clamp(fi - i0, 0.0, 1.0);
        const double b = std::clamp(fj - j0, 0.0, 1.0);
        const auto at = [&](int i, int j) { return f[static_cast<std::size_t>(j) * st.nx + i]; };
        return (1 - a) * (1 - b) * at(i0, j0) + a * (1 - b) * at(i0 + 1, j0) +
               (1 - a) * b * at(i0, j0 + 1) + a * b * at(i0 + 1, j0 + 1);
    };
    const double r_ss = 0.45 * std::min(grid.x_max(), grid.y_max());
    const auto selfsim_defect = [&](const Snapshot& half, const Snapshot& full) {
        double sum = 0.0;
        for (int j = 0; j < st.ny; ++j) {
            for (int i = 0; i < st.nx; ++i) {
                const double x = (i + 0.5) * grid.hx;
                const double y = (j + 0.5) * grid.hy;
                if (std::hypot(x, y) > r_ss) continue;
                const auto c = static_cast<std::size_t>(j) * st.nx + i;
                sum += std::abs(sample(full.rho, 2 * x, 2 * y) - half.rho[c]) +
                       std::abs(sample(full.ux, 2 * x, 2 * y) - half.ux[c]) +
                       std::abs(sample(full.uy, 2 * x, 2 * y) - half.uy[c]);
            }
        }
        return sum * grid.hx * grid.hy;
    };

    const double mass0 = total_mass(st, grid);
    double flux_sum = 0.0;
    double next_check = cfg.check_every;
    double next_snap = cfg.snapshot_every;
    take_snapshot(); // t = 0
    double residual = 1e300;

    while (st.t < cfg.t_max && residual > cfg.residual_tol) {
        const auto info = step(st, grid, g, cfg.cfl);
        flux_sum += info.boundary_flux;
        residual = info.residual;
        if (st.t >= next_check) {
            out.report.times.push_back(st.t);
            out.report.residual.push_back(residual);
            out.report.l1_defect.push_back(l1_defect());
            next_check += cfg.check_every;
        }
        if (st.t >= next_snap) {
            take_snapshot();
            next_snap += cfg.snapshot_every;
        }
    }

    out.report.final_residual = residual;
    out.report.converged = residual <= cfg.residual_tol;
    out.report.mass_error =
        std::abs(total_mass(st, grid) - mass0 + flux_sum) / std::max(mass0, 1e-300);

    // pair snapshots (t, 2t) for the self-similarity series
    for (const auto& half : snaps) {
        if (half.t <= 0.0) continue;
        const double target = 2.0 * half.t;
        const Snapshot* full = nullptr;
        for (const auto& s : snaps)
            if (std::abs(s.t - target) < 0.51 * cfg.snapshot_every) {
                full = &s;
                break;
            }
        if (!full) continue;
        out.report.ss_times.push_back(half.t);
        out.report.selfsim_defect.push_back(selfsim_defect(half, *full));
    }

    apply_bcs(st, grid, g);
    out.fit = fit_shock(st, grid, cfg.theta_w, fit_radius);
    return out;
}

} // namespace wedgeflow
