#pragma once

#include <array>
#include <cmath>
#include <string>

#include "wedgeflow/errors.hpp"
#include "wedgeflow/numerics.hpp"
#include "wedgeflow/polar.hpp"
#include "wedgeflow/thermo.hpp"

// Characteristic structure and elementary waves of the steady 2-D Euler
// system with x1 time-like, plus the two-state and wall Riemann solvers the
// marching scheme is built on.
//
// Family convention, fixed across the repository: the 1-family is the lower
// acoustic branch (lambda-), the 3-family the upper one (lambda+). In a fan
// the 1-wave connects the below state to the lower middle state and the
// 3-wave connects the upper middle state to the above state.

namespace wedgeflow {

/// Characteristic slopes dx2/dx1 at an axially supersonic state.
struct CharSpeeds {
    double lambda_minus = 0.0;
    double lambda_plus = 0.0;
    double lambda_0 = 0.0; ///< streamline slope u2/u1
};

inline CharSpeeds char_speeds(const EulerPrimitive& s, const GasModel& g) {
    const double c = sound_speed(s, g);
    if (!(s.u1 > c))
        throw AxiallySubsonicError("char_speeds: u1 = " + std::to_string(s.u1) +
                                   " <= c = " + std::to_string(c));
    const double q2 = s.u1 * s.u1 + s.u2 * s.u2;
    const double disc = std::sqrt(q2 - c * c);
    const double den = s.u1 * s.u1 - c * c;
    return {(s.u1 * s.u2 - c * disc) / den, (s.u1 * s.u2 + c * disc) / den, s.u2 / s.u1};
}

enum class WaveFamily { One, Contact, Three };
enum class WaveKind { Null, Shock, Simple, Slip };

/// One wave of a fan with its geometric slope span (collapsed for shocks,
/// slip lines and null waves).
struct Wave {
    WaveFamily family = WaveFamily::Contact;
    WaveKind kind = WaveKind::Null;
    double strength = 0.0; ///< signed: p jump for acoustic waves, rho jump for the slip line
    double slope_lo = 0.0;
    double slope_hi = 0.0;
};

namespace detail {

inline double prandtl_meyer(double mach, const GasModel& g) {
    const double gp = g.gamma + 1.0, gm = g.gamma - 1.0;
    const double m2 = mach * mach - 1.0;
    return std::sqrt(gp / gm) * std::atan(std::sqrt(gm / gp * m2)) - std::atan(std::sqrt(m2));
}

inline double prandtl_meyer_max(const GasModel& g) {
    return 0.5 * M_PI * (std::sqrt((g.gamma + 1.0) / (g.gamma - 1.0)) - 1.0);
}

/// Invert nu(M) = value on M >= 1.
inline double mach_from_prandtl_meyer(double nu, const GasModel& g) {
    if (!(nu >= 0.0) || nu >= prandtl_meyer_max(g) * (1.0 - 1e-12))
        throw VacuumError("mach_from_prandtl_meyer: turning reaches vacuum");
    if (nu == 0.0) return 1.0;
    double hi = 2.0;
    while (prandtl_meyer(hi, g) < nu) hi *= 2.0;
    return num::find_root([&](double m) { return prandtl_meyer(m, g) - nu; }, 1.0, hi, 1e-14);
}

inline double mach_angle_of(const EulerPrimitive& s, const GasModel& g) {
    return std::asin(1.0 / mach_number(s, g));
}

} // namespace detail

/// A state on the wave curve of `s`, together with the turning angle and the
/// geometric data of the connecting wave.
struct WaveCurvePoint {
    double theta = 0.0; ///< flow angle of the connected state
    EulerPrimitive state;
    WaveKind kind = WaveKind::Null;
    double slope_lo = 0.0; ///< wave slope span: head/tail characteristics for
    double slope_hi = 0.0; ///< a simple wave, the front slope for a shock
};

enum class Side { Above, Below };

/// State connected to `s` through one acoustic wave of the family owned by
/// `side` (above -> 3-family, below -> 1-family) with downstream pressure
/// `p_target`. p_target > p gives an oblique shock, p_target < p a steady
/// Prandtl-Meyer simple wave at constant entropy and total enthalpy; the two
/// branches match to first order at p_target = p.
inline WaveCurvePoint wave_curve(Side side, const EulerPrimitive& s, double p_target,
                                 const GasModel& g) {
    const double c = sound_speed(s, g);
    if (!(s.u1 > c)) throw AxiallySubsonicError("wave_curve: generating state not axially supersonic");
    if (!(p_target > 0.0)) throw VacuumError("wave_curve: p_target must be positive");

    const double alpha = s.angle();
    const double sign = (side == Side::Above) ? +1.0 : -1.0; // d(theta)/dp sign

    WaveCurvePoint out;
    if (p_target == s.p) {
        out.theta = alpha;
        out.state = s;
        out.kind = WaveKind::Null;
        const double mu = detail::mach_angle_of(s, g);
        out.slope_lo = out.slope_hi = std::tan(alpha + sign * mu);
        return out;
    }

    if (p_target > s.p) {
        // shock branch: the normal Mach number follows from the pressure
        // ratio in closed form, the turning from the rotated polar
        const double gp = g.gamma + 1.0;
        const double mn2 = 1.0 + gp / (2.0 * g.gamma) * (p_target / s.p - 1.0);
        const double m0 = mach_number(s, g);
        const double sb = std::sqrt(mn2) / m0;
        if (sb > 1.0)
            throw NoRootError("wave_curve: pressure beyond the normal-shock value");
        const double beta = std::asin(std::min(1.0, sb));
        const auto horizontal = rotated_state(s, -alpha);
        const auto shock = downstream_from_beta({horizontal.u1, 0.0, s.p, s.rho}, beta, g);
        out.theta = alpha + sign * shock.deflection;
        // the polar turns the flow toward positive u2; for the 1-family the
        // turning is mirrored before rotating back into the frame of s
        if (side == Side::Below) {
            const EulerPrimitive mirrored{shock.downstream.u1, -shock.downstream.u2,
                                          shock.downstream.p, shock.downstream.rho};
            out.state = rotated_state(mirrored, alpha);
        } else {
            out.state = rotated_state(shock.downstream, alpha);
        }
        out.kind = WaveKind::Shock;
        out.slope_lo = out.slope_hi = std::tan(alpha + sign * beta);
        return out;
    }

    // simple-wave branch: isentropic turning at constant total enthalpy
    const double H = total_enthalpy(s, g);
    const double m_s = mach_number(s, g);
    const double nu_s = detail::prandtl_meyer(m_s, g);
    const double rho_t = s.rho * std::pow(p_target / s.p, 1.0 / g.gamma);
    const double c2_t = g.gamma * p_target / rho_t;
    const double q2_t = 2.0 * (H - c2_t / (g.gamma - 1.0));
    if (!(q2_t > 0.0)) throw VacuumError("wave_curve: expansion exhausts total enthalpy");
    const double m_t = std::sqrt(q2_t) / std::sqrt(c2_t);
    const double nu_t = detail::prandtl_meyer(m_t, g);

    out.theta = alpha - sign * (nu_t - nu_s);
    const double q_t = std::sqrt(q2_t);
    out.state = {q_t * std::cos(out.theta), q_t * std::sin(out.theta), p_target, rho_t};
    out.kind = WaveKind::Simple;
    const double mu_s = detail::mach_angle_of(s, g);
    const double mu_t = std::asin(1.0 / m_t);
    const double head = std::tan(alpha + sign * mu_s);
    const double tail = std::tan(out.theta + sign * mu_t);
    out.slope_lo = std::min(head, tail);
    out.slope_hi = std::max(head, tail);
    return out;
}

/// Complete solution of a steady two-state Riemann problem: three waves
/// ordered by slope and the two middle states separated by a slip line.
struct WaveFan {
    std::array<Wave, 3> waves; ///< 1-family, contact, 3-family
    EulerPrimitive below, mid_below, mid_above, above;
    double p_star = 0.0;
    double theta_star = 0.0;

    double min_slope() const { return waves[0].slope_lo; }
    double max_slope() const { return waves[2].slope_hi; }
};

namespace detail {

inline WaveCurvePoint curve_point(Side side, const EulerPrimitive& s, double p,
                                  const GasModel& g) {
    return wave_curve(side, s, p, g);
}

/// Pressure at the detachment point of the polar of s. The turning angle
/// increases with pressure up to this point and falls back to zero at the
/// normal shock, so middle-state solves bracket on [~0, p_detach] where the
/// curve mismatch is monotone.
inline double detachment_pressure(const EulerPrimitive& s, const GasModel& g) {
    const EulerPrimitive h{s.speed(), 0.0, s.p, s.rho};
    const double beta_d =
        num::golden_max([&](double b) { return polar_deflection(h, b, g); }, mach_angle_of(s, g),
                        0.5 * M_PI, 1e-10);
    return downstream_from_beta(h, beta_d, g).downstream.p;
}

} // namespace detail

/// Solve the steady Riemann problem between an upper and a lower state, both
/// axially supersonic. Middle pressure and flow angle intersect the 3-family
/// curve of `above` with the 1-family curve of `below`.
inline WaveFan steady_riemann(const EulerPrimitive& above, const EulerPrimitive& below,
                              const GasModel& g) {
    char_speeds(above, g); // validates axial supersonicity
    char_speeds(below, g);

    WaveFan fan;
    fan.below = below;
    fan.above = above;

    const auto mismatch = [&](double p) {
        return detail::curve_point(Side::Below, below, p, g).theta -
               detail::curve_point(Side::Above, above, p, g).theta;
    };

    const double p_max = std::min(detail::detachment_pressure(above, g),
                                  detail::detachment_pressure(below, g));
    const double p_floor = 1e-10 * std::min(above.p, below.p);

    double p_star;
    if (above.u1 == below.u1 && above.u2 == below.u2 && above.p == below.p &&
        above.rho == below.rho) {
        p_star = above.p; // identical states: all-null fan
    } else {
        // mismatch(p) decreases in p; bracket between near-vacuum and the
        // weaker polar's normal-shock pressure
        const double f_lo = mismatch(p_floor);
        const double f_hi = mismatch(p_max);
        if (f_lo < 0.0)
            throw NoIntersectionError("steady_riemann: states expand toward vacuum");
        if (f_hi > 0.0)
            throw NoIntersectionError("steady_riemann: required pressure beyond both polars");
        p_star = num::find_root(mismatch, p_floor, p_max, 1e-15 * p_max);
    }

    auto lower = detail::curve_point(Side::Below, below, p_star, g);
    auto upper = detail::curve_point(Side::Above, above, p_star, g);
    if (std::abs(lower.theta - upper.theta) > 1e-12)
        throw NoIntersectionError("steady_riemann: middle state failed to converge");

    // Snap solver-tolerance-level null waves to exact identities so constant
    // regions stay bitwise constant under sampling.
    if (std::abs(p_star - below.p) <= 1e-12 * below.p &&
        std::abs(lower.theta - below.angle()) <= 1e-12) {
        lower.state = below;
        lower.theta = below.angle();
        lower.kind = WaveKind::Null;
    }
    if (std::abs(p_star - above.p) <= 1e-12 * above.p &&
        std::abs(upper.theta - above.angle()) <= 1e-12) {
        upper.state = above;
        upper.theta = above.angle();
        upper.kind = WaveKind::Null;
    }
    if (std::abs(lower.state.rho - upper.state.rho) <= 1e-11 * lower.state.rho &&
        std::abs(lower.state.speed() - upper.state.speed()) <= 1e-11 * lower.state.speed()) {
        upper.state = lower.state;
    }

    fan.mid_below = lower.state;
    fan.mid_above = upper.state;
    fan.p_star = p_star;
    fan.theta_star = 0.5 * (lower.theta + upper.theta);

    char_speeds(fan.mid_below, g); // middle states must stay marchable
    char_speeds(fan.mid_above, g);

    fan.waves[0] = {WaveFamily::One, lower.kind, p_star - below.p, lower.slope_lo, lower.slope_hi};
    const double contact_slope = std::tan(fan.theta_star);
    const bool slip_null = fan.mid_below.rho == fan.mid_above.rho &&
                           fan.mid_below.speed() == fan.mid_above.speed();
    fan.waves[1] = {WaveFamily::Contact, slip_null ? WaveKind::Null : WaveKind::Slip,
                    fan.mid_above.rho - fan.mid_below.rho, contact_slope, contact_slope};
    fan.waves[2] = {WaveFamily::Three, upper.kind, p_star - above.p, upper.slope_lo, upper.slope_hi};

    if (!(fan.waves[0].slope_hi <= fan.waves[1].slope_lo + 1e-12 &&
          fan.waves[1].slope_hi <= fan.waves[2].slope_lo + 1e-12))
        throw NoIntersectionError("steady_riemann: wave slopes out of order");
    return fan;
}

/// Evaluate the self-similar fan at a geometric slope. Simple-wave interiors
/// are solved exactly: the state on the generating wave curve whose local
/// characteristic passes through the given ray.
inline EulerPrimitive sample_fan(const WaveFan& fan, double slope, const GasModel& g) {
    const auto interior = [&](Side side, const EulerPrimitive& gen, double p_inner) {
        const double sign = (side == Side::Above) ? +1.0 : -1.0;
        const auto char_slope = [&](double p) {
            const auto pt = wave_curve(side, gen, p, g);
            const double mu = std::asin(1.0 / mach_number(pt.state, g));
            return std::tan(pt.theta + sign * mu) - slope;
        };
        const double p_lo = std::min(p_inner, gen.p);
        const double p_hi = std::max(p_inner, gen.p);
        const double p = num::find_root(char_slope, p_lo, p_hi, 1e-15 * p_hi);
        return wave_curve(side, gen, p, g).state;
    };

    const Wave& w1 = fan.waves[0];
    const Wave& w3 = fan.waves[2];
    if (slope <= w1.slope_lo) return fan.below;
    if (slope < w1.slope_hi && w1.kind == WaveKind::Simple)
        return interior(Side::Below, fan.below, fan.p_star);
    if (slope < fan.waves[1].slope_lo) return fan.mid_below;
    if (slope < w3.slope_lo) return fan.mid_above;
    if (slope < w3.slope_hi && w3.kind == WaveKind::Simple)
        return interior(Side::Above, fan.above, fan.p_star);
    return fan.above;
}

/// Wall Riemann problem: the state adjacent to a slip wall of slope
/// `wall_slope`, with `s` above the wall. The reflected wave is a 3-family
/// shock when the wall turns into the flow, a simple wave when it turns
/// away, null when aligned.
struct BoundaryFan {
    Wave wave;
    EulerPrimitive wall_state;
    EulerPrimitive outer;
};

inline BoundaryFan boundary_riemann(const EulerPrimitive& s, double wall_slope,
                                    const GasModel& g) {
    char_speeds(s, g);
    const double theta_t = std::atan(wall_slope);
    const double turn = theta_t - s.angle();

    BoundaryFan out;
    out.outer = s;
    if (std::abs(turn) < 1e-13) {
        out.wall_state = s;
        const double mu = detail::mach_angle_of(s, g);
        out.wave = {WaveFamily::Three, WaveKind::Null, 0.0, std::tan(s.angle() + mu),
                    std::tan(s.angle() + mu)};
        return out;
    }

    if (turn > 0.0) {
        // compression into the flow; fail past the local detachment angle
        const auto horizontal = rotated_state(s, -s.angle());
        const auto crit = critical_angles(horizontal, g);
        if (turn > crit.theta_d)
            throw DetachedError("boundary_riemann: wall turning " + std::to_string(turn) +
                                " exceeds detachment angle " + std::to_string(crit.theta_d));
        const double beta = num::find_root(
            [&](double b) { return polar_deflection(horizontal, b, g) - turn; },
            detail::mach_angle_of(s, g), crit.beta_d, 1e-14);
        const auto shock = downstream_from_beta(horizontal, beta, g);
        out.wall_state = rotated_state(shock.downstream, s.angle());
        out.wave = {WaveFamily::Three, WaveKind::Shock, shock.downstream.p - s.p,
                    std::tan(s.angle() + beta), std::tan(s.angle() + beta)};
        return out;
    }

    // expansion away from the flow
    const double nu_s = detail::prandtl_meyer(mach_number(s, g), g);
    const double nu_t = nu_s - turn; // turn < 0
    const double m_t = detail::mach_from_prandtl_meyer(nu_t, g);
    const double H = total_enthalpy(s, g);
    const double c2_t = H / (1.0 / (g.gamma - 1.0) + 0.5 * m_t * m_t);
    const double c2_s = g.gamma * s.p / s.rho;
    const double p_t = s.p * std::pow(c2_t / c2_s, g.gamma / (g.gamma - 1.0));
    const auto pt = wave_curve(Side::Above, s, p_t, g);
    out.wall_state = pt.state;
    out.wave = {WaveFamily::Three, WaveKind::Simple, p_t - s.p, pt.slope_lo, pt.slope_hi};
    return out;
}

/// Evaluate a boundary fan at a slope (measured from the wall corner).
inline EulerPrimitive sample_boundary_fan(const BoundaryFan& fan, double slope,
                                          const GasModel& g) {
    if (slope <= fan.wave.slope_lo) return fan.wall_state;
    if (slope < fan.wave.slope_hi && fan.wave.kind == WaveKind::Simple) {
        const auto char_slope = [&](double p) {
            const auto pt = wave_curve(Side::Above, fan.outer, p, g);
            const double mu = std::asin(1.0 / mach_number(pt.state, g));
            return std::tan(pt.theta + mu) - slope;
        };
        const double p_lo = std::min(fan.wall_state.p, fan.outer.p);
        const double p_hi = std::max(fan.wall_state.p, fan.outer.p);
        const double p = num::find_root(char_slope, p_lo, p_hi, 1e-15 * p_hi);
        return wave_curve(Side::Above, fan.outer, p, g).state;
    }
    return fan.outer;
}

} // namespace wedgeflow
