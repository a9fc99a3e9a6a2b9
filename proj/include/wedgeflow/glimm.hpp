#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wedgeflow/errors.hpp"
#include "wedgeflow/numerics.hpp"
#include "wedgeflow/polar.hpp"
#include "wedgeflow/thermo.hpp"
#include "wedgeflow/waves.hpp"

// Random-choice marching in x1 over a wedge, with the leading shock kept as
// an explicitly tracked interface. Cells live on a wall-sheared grid
// y = x2 - b(x1); interface Riemann problems are solved in the physical
// frame and sampled at one equidistributed point per cell and step. The
// interface straddled by the tracked front is replaced by the front Riemann
// problem, whose strong 3-family wave advances the front slope; weaker waves
// hitting the front are absorbed by the re-solve at the next step.

namespace wedgeflow {

/// Wedge wall x2 = b(x1): the nominal ramp of angle theta_w plus a
/// piecewise-linear perturbation that vanishes with its slope at the vertex,
/// so the attached shock starts with the unperturbed angle.
struct WedgeGeometry {
    double theta_w = 0.0;
    LinearTable wall; ///< full boundary b(x1), vertex at the origin

    static WedgeGeometry straight(double theta_w, double x1_max) {
        const double t = std::tan(theta_w);
        return {theta_w, LinearTable({0.0, x1_max}, {0.0, t * x1_max})};
    }

    /// Build from perturbation samples (x1, delta) added to the nominal ramp.
    /// Requires delta(0) = 0 and delta'(0+) = 0.
    static WedgeGeometry perturbed(double theta_w,
                                   const std::vector<std::pair<double, double>>& delta) {
        if (delta.size() < 2)
            throw std::invalid_argument("WedgeGeometry: need at least two samples");
        if (delta.front().first != 0.0 || delta.front().second != 0.0)
            throw std::invalid_argument("WedgeGeometry: perturbation must vanish at the vertex");
        const double s0 = (delta[1].second - delta[0].second) / (delta[1].first - delta[0].first);
        if (std::abs(s0) > 1e-12)
            throw std::invalid_argument("WedgeGeometry: perturbation slope must vanish at the vertex");
        const double t = std::tan(theta_w);
        std::vector<double> xs, ys;
        xs.reserve(delta.size());
        ys.reserve(delta.size());
        for (const auto& [x, d] : delta) {
            xs.push_back(x);
            ys.push_back(t * x + d);
        }
        return {theta_w, LinearTable(std::move(xs), std::move(ys))};
    }

    double b(double x1) const { return wall(x1); }
    double b_slope(double x1) const { return wall.slope(x1); }
    double slope_total_variation() const { return wall.slope_total_variation(); }
    double slope_at_infinity() const { return wall.last_slope(); }
};

enum class CauchyKind { Constant, Step, Bump, Sawtooth };

/// Incoming flow profile on the initial line x1 = 0, piecewise constant per
/// cell, equal to `background` above `top`.
struct CauchyData {
    double cell_height = 0.0;
    double top = 0.0;
    std::vector<EulerPrimitive> samples;
    EulerPrimitive background;
    std::array<double, 4> tv{}; ///< total variation per component (u1, u2, p, rho)

    const EulerPrimitive& at(double x2) const {
        if (samples.empty() || x2 >= top) return background;
        const auto j = static_cast<std::size_t>(std::max(0.0, x2 / cell_height));
        return j < samples.size() ? samples[j] : background;
    }
};

/// Perturbation profiles acting on the pressure of `background`. Plateaus are
/// used throughout so the sampled total variation equals the counting value
/// exactly: step = a, bump = 2a, sawtooth with 4 teeth = 8a.
inline CauchyData make_cauchy_data(CauchyKind kind, double amplitude,
                                   const EulerPrimitive& background, const GasModel& g,
                                   double height = 4.0, int cells = 64) {
    if (amplitude < 0.0)
        throw std::invalid_argument("make_cauchy_data: amplitude must be nonnegative");
    CauchyData data;
    data.background = background;
    if (kind == CauchyKind::Constant || amplitude == 0.0) {
        data.cell_height = height;
        data.top = 0.0;
        return data;
    }

    cells = std::max(cells, 16);
    cells += (8 - cells % 8) % 8; // teeth plateaus need a multiple of 8
    data.cell_height = height / cells;
    data.top = height;
    data.samples.assign(static_cast<std::size_t>(cells), background);

    for (int j = 0; j < cells; ++j) {
        const double frac = (j + 0.5) / cells;
        double dp = 0.0;
        switch (kind) {
        case CauchyKind::Step:
            dp = (frac < 0.5) ? amplitude : 0.0;
            break;
        case CauchyKind::Bump:
            dp = (frac >= 0.25 && frac < 0.75) ? amplitude : 0.0;
            break;
        case CauchyKind::Sawtooth: {
            const double tooth = frac * 4.0; // four teeth
            dp = (tooth - std::floor(tooth) >= 0.5) ? amplitude : 0.0;
            break;
        }
        case CauchyKind::Constant:
            break;
        }
        data.samples[static_cast<std::size_t>(j)].p = background.p + dp;
    }

    for (const auto& s : data.samples)
        if (!(s.u1 > 0.0) || mach_number(s, g) <= 1.0)
            throw NotSupersonicError("make_cauchy_data: profile leaves the supersonic regime");

    const auto component = [&](auto get) {
        double sum = 0.0;
        for (std::size_t j = 1; j < data.samples.size(); ++j)
            sum += std::abs(get(data.samples[j]) - get(data.samples[j - 1]));
        sum += std::abs(get(background) - get(data.samples.back()));
        return sum;
    };
    data.tv = {component([](const EulerPrimitive& s) { return s.u1; }),
               component([](const EulerPrimitive& s) { return s.u2; }),
               component([](const EulerPrimitive& s) { return s.p; }),
               component([](const EulerPrimitive& s) { return s.rho; })};
    return data;
}

struct MarchConfig {
    double dx1 = 0.0625;
    double dx2 = 0.125;
    double x1_max = 50.0;
    double cfl = 0.8;             ///< verified bound on sup |slope - b'| dx1/dx2
    std::uint64_t seed = 0;       ///< offsets the van der Corput sequence
    bool track_front = true;      ///< false: capture the front like any other wave
    double tail_fraction = 0.25;  ///< trailing fraction used for asymptotics
};

struct TrackedFront {
    std::vector<double> x1;
    std::vector<double> sigma;
    std::vector<double> sigma_slope;
};

struct Diagnostics {
    std::vector<double> x1;
    std::vector<double> tv;          ///< per slice, on (p/p0, u2/u1, S/cv), front jump excluded
    std::vector<double> p_mean;      ///< mean pressure between wall and front
    std::vector<double> angle_mean;  ///< mean u2/u1 between wall and front
    std::vector<double> slip_defect; ///< |atan(u2/u1) - atan(b')| at the wall cell
    std::vector<double> front_sigma;
    std::vector<double> front_slope;

    double max_tv() const {
        double m = 0.0;
        for (double v : tv) m = std::max(m, v);
        return m;
    }
    double max_slip_defect() const {
        double m = 0.0;
        for (double v : slip_defect) m = std::max(m, v);
        return m;
    }
};

struct MarchResult {
    std::vector<EulerPrimitive> field; ///< final slice, wall cell first
    std::vector<double> field_x2;      ///< physical cell centers of the final slice
    TrackedFront front;
    Diagnostics diag;
};

struct Asymptotics {
    double s_inf = 0.0;
    double p_inf = 0.0;
    double angle_inf = 0.0;
    double s_dev = 0.0;
    double p_dev = 0.0;
    double angle_dev = 0.0;
};

/// Tail averages over the trailing `tail_fraction` of slices, with sample
/// standard deviations.
inline Asymptotics asymptotics_estimate(const Diagnostics& d, double tail_fraction) {
    if (!(tail_fraction > 0.0 && tail_fraction < 1.0))
        throw InsufficientDataError("asymptotics_estimate: tail_fraction outside (0,1)");
    const std::size_t n = d.x1.size();
    const auto start = static_cast<std::size_t>(std::floor(n * (1.0 - tail_fraction)));
    if (n < 10 || n - start < 10)
        throw InsufficientDataError("asymptotics_estimate: fewer than 10 tail slices");

    const auto stats = [&](const std::vector<double>& v, double& mean, double& dev) {
        double sum = 0.0;
        for (std::size_t i = start; i < n; ++i) sum += v[i];
        mean = sum / static_cast<double>(n - start);
        double ss = 0.0;
        for (std::size_t i = start; i < n; ++i) ss += (v[i] - mean) * (v[i] - mean);
        dev = std::sqrt(ss / static_cast<double>(n - start - 1));
    };
    Asymptotics out;
    stats(d.front_slope, out.s_inf, out.s_dev);
    stats(d.p_mean, out.p_inf, out.p_dev);
    stats(d.angle_mean, out.angle_inf, out.angle_dev);
    return out;
}

namespace detail {

inline bool same_state(const EulerPrimitive& a, const EulerPrimitive& b) {
    return a.u1 == b.u1 && a.u2 == b.u2 && a.p == b.p && a.rho == b.rho;
}

/// Per-step lazy cache of interface fans; index j is the interface between
/// cells j-1 and j.
class FanCache {
public:
    FanCache(const std::vector<EulerPrimitive>& cells, const GasModel& gas)
        : cells_(cells), gas_(gas), slots_(cells.size() + 1) {}

    /// Null when the neighbor states are bitwise equal (constant region).
    const WaveFan* fan(std::size_t j) {
        Slot& s = slots_[j];
        if (s.state == Slot::State::Unset) {
            if (same_state(cells_[j - 1], cells_[j])) {
                s.state = Slot::State::Null;
            } else {
                s.fan = steady_riemann(cells_[j], cells_[j - 1], gas_);
                s.state = Slot::State::Solved;
            }
        }
        return s.state == Slot::State::Solved ? &s.fan : nullptr;
    }

private:
    struct Slot {
        enum class State { Unset, Null, Solved } state = State::Unset;
        WaveFan fan;
    };
    const std::vector<EulerPrimitive>& cells_;
    const GasModel& gas_;
    std::vector<Slot> slots_;
};

} // namespace detail

/// March the steady supersonic flow from the vertex to x1_max. Bitwise
/// deterministic for a fixed (geometry, data, config, gas).
inline MarchResult march(const WedgeGeometry& geom, const CauchyData& data,
                         const MarchConfig& cfg, const GasModel& g) {
    if (!(cfg.dx1 > 0.0 && cfg.dx2 > 0.0 && cfg.cfl > 0.0 && cfg.cfl < 1.0))
        throw std::invalid_argument("march: invalid mesh configuration");

    // preflight: supersonic data, wall slope below the sonic angle
    for (const auto& s : data.samples)
        if (!(s.u1 > 0.0) || mach_number(s, g) <= 1.0)
            throw NotSupersonicError("march: Cauchy data not supersonic with u1 > 0");
    if (!(data.background.u1 > 0.0) || mach_number(data.background, g) <= 1.0)
        throw NotSupersonicError("march: background state not supersonic");
    {
        const auto crit = critical_angles(data.background, g);
        double max_slope = std::atan(geom.b_slope(0.0));
        for (double x : geom.wall.xs()) max_slope = std::max(max_slope, std::atan(geom.b_slope(x)));
        if (!(max_slope < crit.theta_s))
            throw DetachedError("march: wall slope reaches the sonic angle of the upstream state");
    }

    const double dy = cfg.dx2;
    const double dx1 = cfg.dx1;
    const auto nsteps = static_cast<std::size_t>(std::llround(cfg.x1_max / dx1));

    // grid sized for the data profile plus the upstream variation cone; the
    // column grows as the tracked front rises
    double lam_top = 0.0;
    if (!data.samples.empty()) {
        for (const auto& s : data.samples)
            lam_top = std::max(lam_top, char_speeds(s, g).lambda_plus);
        lam_top = std::max(lam_top, char_speeds(data.background, g).lambda_plus);
    }
    std::size_t ncells =
        static_cast<std::size_t>(std::ceil((data.top + std::max(0.0, lam_top) * cfg.x1_max) / dy)) +
        16;
    std::vector<EulerPrimitive> cells(ncells);
    for (std::size_t j = 0; j < ncells; ++j) cells[j] = data.at((j + 0.5) * dy);

    double y_front = 0.0;       // front height above the wall
    std::ptrdiff_t k_front = -1; // cell containing the front; -1 before step one

    MarchResult out;
    out.front.x1.push_back(0.0);
    out.front.sigma.push_back(0.0);

    std::vector<EulerPrimitive> next(ncells);

    for (std::size_t n = 0; n < nsteps; ++n) {
        const double x1 = static_cast<double>(n) * dx1;
        const double b_lo = geom.b(x1);
        // segment slope from the table, not a difference quotient whose
        // last-bit wobble would masquerade as wall turning
        const double bs = geom.b_slope(x1 + 0.5 * dx1);
        const double b_hi = b_lo + bs * dx1;
        const double a = num::van_der_corput(n + 1 + cfg.seed);
        const double sigma_old = b_lo + y_front; // = 0 at the vertex

        double cfl_seen = 0.0;
        const auto watch = [&](double lo, double hi) {
            cfl_seen = std::max({cfl_seen, std::abs(lo - bs), std::abs(hi - bs)});
        };
        const auto watch_fan = [&](const WaveFan& f) {
            for (const auto& w : f.waves)
                if (w.kind != WaveKind::Null) watch(w.slope_lo, w.slope_hi);
        };

        // wall fan, and the front fan (the attached wall fan bootstraps it)
        std::optional<BoundaryFan> bfan;
        std::optional<WaveFan> ffan;
        bool front_null = false;
        double front_slope = 0.0;
        try {
            bfan = boundary_riemann(cells[0], bs, g);
            if (bfan->wave.kind != WaveKind::Null)
                watch(bfan->wave.slope_lo, bfan->wave.slope_hi);
            if (!cfg.track_front) {
                // captured mode: the leading shock is handled by the ordinary
                // interface fans like any other wave
            } else if (k_front < 0) {
                front_slope = bfan->wave.slope_hi;
            } else {
                const auto k = static_cast<std::size_t>(k_front);
                const EulerPrimitive& above =
                    (k + 1 < cells.size()) ? cells[k + 1] : data.background;
                if (detail::same_state(above, cells[k])) {
                    front_null = true; // zero-strength front rides a characteristic
                    front_slope = char_speeds(above, g).lambda_plus;
                } else {
                    ffan = steady_riemann(above, cells[k], g);
                    front_slope = (ffan->waves[2].kind == WaveKind::Simple)
                                      ? 0.5 * (ffan->waves[2].slope_lo + ffan->waves[2].slope_hi)
                                      : ffan->waves[2].slope_lo;
                    watch_fan(*ffan);
                }
            }
        } catch (const FlowError& e) {
            throw FlowError(e.name(), std::string(e.what()) + " [front/wall solve at slice " +
                                          std::to_string(n) + "]");
        }

        std::ptrdiff_t k_front_new = -1000000; // sentinel: no tracked front cell
        double y_front_new = 0.0;
        if (cfg.track_front) {
            y_front_new = (k_front < 0 ? 0.0 : y_front) + (front_slope - bs) * dx1;
            if (!(y_front_new > 0.0))
                throw DetachedError("march: tracked front fell onto the wall at slice " +
                                    std::to_string(n));
            k_front_new = static_cast<std::ptrdiff_t>(std::floor(y_front_new / dy));
            while (static_cast<std::size_t>(k_front_new) + 4 > ncells) {
                cells.push_back(data.background);
                next.push_back(data.background);
                ++ncells;
            }
        }

        // Sample the composite solution at one point (j + a) dy per cell.
        // Interface front_if is superseded by the front fan, which is
        // centered on the front position rather than on the cell interface.
        // The cache is sized after any capacity growth above.
        detail::FanCache fans(cells, g);
        const std::ptrdiff_t front_if = cfg.track_front ? k_front + 1 : -1000000;
        const double front_min = ffan ? ffan->min_slope()
                                      : (k_front < 0 ? bfan->wave.slope_lo : front_slope);

        const auto front_sample = [&](double s) {
            return ffan ? sample_fan(*ffan, s, g) : sample_boundary_fan(*bfan, s, g);
        };
        // coverage-checked interface sampling: nullopt when the fan is null
        // or its waves do not reach the sample point from that side
        const auto from_above = [&](std::size_t jf, double s) -> std::optional<EulerPrimitive> {
            if (jf > ncells - 1 || static_cast<std::ptrdiff_t>(jf) == front_if)
                return std::nullopt;
            const WaveFan* f = fans.fan(jf);
            if (!f) return std::nullopt;
            watch_fan(*f);
            if (s < f->min_slope()) return std::nullopt;
            return sample_fan(*f, s, g);
        };
        const auto from_below = [&](std::size_t jf, double s) -> std::optional<EulerPrimitive> {
            if (jf < 1 || static_cast<std::ptrdiff_t>(jf) == front_if) return std::nullopt;
            const WaveFan* f = fans.fan(jf);
            if (!f) return std::nullopt;
            watch_fan(*f);
            if (s > f->max_slope()) return std::nullopt;
            return sample_fan(*f, s, g);
        };

        try {
        for (std::size_t j = 0; j < ncells; ++j) {
            const double y_s = (static_cast<double>(j) + a) * dy;
            const double x2_s = b_hi + y_s;
            const double rel_front = (x2_s - sigma_old) / dx1;
            const double slope_up = bs + (a - 1.0) * dy / dx1; // vs interface j+1
            const double slope_dn = bs + a * dy / dx1;         // vs interface j
            const double s_wall = bs + y_s / dx1;              // vs the wall corner

            EulerPrimitive value = cells[j];
            const auto jd = static_cast<std::ptrdiff_t>(j);

            if (jd == k_front_new) {
                // front cell stores the state on the lower side of the shock
                if (k_front < 0) {
                    value = sample_boundary_fan(*bfan, std::min(s_wall, front_slope - 1e-12), g);
                } else if (!front_null && rel_front >= front_min) {
                    value = front_sample(std::min(rel_front, front_slope - 1e-12));
                } else if (auto v = from_below(j, slope_dn)) {
                    value = *v;
                } else if (j == 0 && s_wall <= bfan->wave.slope_hi) {
                    value = sample_boundary_fan(*bfan, s_wall, g);
                }
            } else if (jd < k_front_new) {
                if (!front_null && k_front >= 0 && rel_front >= front_min &&
                    rel_front <= front_slope) {
                    value = front_sample(rel_front);
                } else if (auto v = from_above(j + 1, slope_up)) {
                    value = *v;
                } else if (auto w = from_below(j, slope_dn)) {
                    value = *w;
                } else if (j == 0 && s_wall <= bfan->wave.slope_hi) {
                    value = sample_boundary_fan(*bfan, s_wall, g);
                }
            } else {
                // above the front (or any cell in captured mode)
                if (auto v = from_above(j + 1, slope_up)) {
                    value = *v;
                } else if (jd == front_if && !front_null && rel_front <= front_slope) {
                    value = front_sample(rel_front);
                } else if (auto w = from_below(j, slope_dn)) {
                    value = *w;
                } else if (j == 0 && s_wall <= bfan->wave.slope_hi) {
                    value = sample_boundary_fan(*bfan, s_wall, g);
                }
            }
            next[j] = value;
        }
        } catch (const FlowError& e) {
            throw FlowError(e.name(), std::string(e.what()) + " [interface solve at slice " +
                                          std::to_string(n) + "]");
        }

        if (cfl_seen * dx1 / dy > cfg.cfl * (1.0 + 1e-9))
            throw CflViolationError("march: wave slope " + std::to_string(cfl_seen) +
                                    " exceeds cfl bound at slice " + std::to_string(n));

        cells.swap(next);
        if (cfg.track_front) {
            y_front = y_front_new;
            k_front = k_front_new;
        }

        // diagnostics on the new slice
        const double x1_new = x1 + dx1;
        std::size_t k; // highest cell below the front
        double sigma_new, slope_rec;
        if (cfg.track_front) {
            k = static_cast<std::size_t>(k_front);
            sigma_new = b_hi + y_front;
            slope_rec = front_slope;
        } else {
            // captured mode: the front is the strongest pressure jump; its
            // slope estimate is a windowed difference of the located position
            std::size_t jstar = 1;
            double best = 0.0;
            for (std::size_t j = 1; j < cells.size(); ++j) {
                const double jump = std::abs(cells[j].p - cells[j - 1].p);
                if (jump > best) {
                    best = jump;
                    jstar = j;
                }
            }
            k = jstar - 1;
            while (jstar + 8 > ncells) {
                cells.push_back(data.background);
                next.push_back(data.background);
                ++ncells;
            }
            sigma_new = b_hi + static_cast<double>(jstar) * dy;
            const std::size_t w = 8;
            if (out.front.sigma.size() > w) {
                const std::size_t m = out.front.sigma.size();
                slope_rec = (sigma_new - out.front.sigma[m - w]) / (static_cast<double>(w) * dx1);
            } else {
                slope_rec = (sigma_new - out.front.sigma.front()) /
                            (x1_new - out.front.x1.front());
            }
        }

        const double p0 = data.background.p;
        double tv_sum = 0.0;
        const auto dist = [&](const EulerPrimitive& u, const EulerPrimitive& v) {
            return std::abs(v.p - u.p) / p0 + std::abs(v.slope() - u.slope()) +
                   std::abs(specific_entropy(v, g) - specific_entropy(u, g)) / g.cv;
        };
        for (std::size_t j = 1; j < cells.size(); ++j) {
            if (j == k + 1) continue; // the leading jump itself is excluded
            tv_sum += dist(cells[j - 1], cells[j]);
        }
        double psum = 0.0, wsum = 0.0;
        for (std::size_t j = 0; j <= k; ++j) {
            psum += cells[j].p;
            wsum += cells[j].slope();
        }
        const double below = static_cast<double>(k + 1);
        out.diag.x1.push_back(x1_new);
        out.diag.tv.push_back(tv_sum);
        out.diag.p_mean.push_back(psum / below);
        out.diag.angle_mean.push_back(wsum / below);
        out.diag.slip_defect.push_back(std::abs(std::atan(cells[0].slope()) - std::atan(bs)));
        out.diag.front_sigma.push_back(sigma_new);
        out.diag.front_slope.push_back(slope_rec);

        out.front.x1.push_back(x1_new);
        out.front.sigma.push_back(sigma_new);
        out.front.sigma_slope.push_back(slope_rec);
    }

    out.field = std::move(cells);
    out.field_x2.resize(out.field.size());
    for (std::size_t j = 0; j < out.field.size(); ++j)
        out.field_x2[j] = geom.b(cfg.x1_max) + (static_cast<double>(j) + 0.5) * dy;
    return out;
}

} // namespace wedgeflow
