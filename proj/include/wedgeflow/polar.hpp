#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wedgeflow/errors.hpp"
#include "wedgeflow/numerics.hpp"
#include "wedgeflow/thermo.hpp"

namespace wedgeflow {

/// One entropy-admissible oblique shock from a horizontal supersonic
/// upstream state. `beta` is the shock angle measured from the upstream flow
/// direction; `slope` = tan(beta) is the geometric slope of the front.
struct ObliqueShock {
    double beta = 0.0;
    double slope = 0.0;
    EulerPrimitive upstream;
    EulerPrimitive downstream;
    double deflection = 0.0; ///< flow turning angle theta [rad]
};

/// Weak and strong attached solutions for a given wedge angle.
struct WedgeSolutionPair {
    ObliqueShock weak;
    ObliqueShock strong;
    double theta_w = 0.0;
    /// Set when |theta_w - theta_d| is inside the bracketing tolerance and the
    /// two roots collapse onto the detachment shock.
    bool degenerate_at_detachment = false;
};

/// Detachment and sonic angles of a polar, with the shock angles and the
/// u1-coordinate of the detachment point in the velocity plane.
struct CriticalAngles {
    double theta_d = 0.0;
    double theta_s = 0.0;
    double beta_d = 0.0;
    double beta_s = 0.0;
    double u_detach = 0.0;
};

namespace detail {

inline void require_horizontal_supersonic(const EulerPrimitive& up, const GasModel& g,
                                          const char* who) {
    if (!up.valid()) throw NotSupersonicError(std::string(who) + ": invalid upstream state");
    if (std::abs(up.u2) > 1e-14 * std::abs(up.u1))
        throw NotSupersonicError(std::string(who) + ": upstream must be horizontal (u2 = 0)");
    if (!(up.u1 > 0.0) || mach_number(up, g) <= 1.0)
        throw NotSupersonicError(std::string(who) + ": upstream must be supersonic with u1 > 0");
}

inline double mach_angle(double mach) { return std::asin(1.0 / mach); }

} // namespace detail

/// Jump residuals of the steady Rankine-Hugoniot conditions across a front
/// of slope sigma' = tan(beta), in the beta parameterization
///   sin(beta) [F1_k] - cos(beta) [F2_k],  k = 0..3,
/// which stays finite at beta = pi/2. Components are normalized by upstream
/// flux scales built from q0 = |u0| + c0.
inline std::array<double, 4> rh_residual_beta(const EulerPrimitive& up, const EulerPrimitive& down,
                                              double beta, const GasModel& g) {
    const double sb = std::sin(beta), cb = std::cos(beta);
    const double Hu = total_enthalpy(up, g);
    const double Hd = total_enthalpy(down, g);

    const auto jump = [&](double fu, double fd) { return fd - fu; };
    const double r0 = sb * jump(up.rho * up.u1, down.rho * down.u1) -
                      cb * jump(up.rho * up.u2, down.rho * down.u2);
    const double r1 = sb * jump(up.rho * up.u1 * up.u1 + up.p, down.rho * down.u1 * down.u1 + down.p) -
                      cb * jump(up.rho * up.u1 * up.u2, down.rho * down.u1 * down.u2);
    const double r2 = sb * jump(up.rho * up.u1 * up.u2, down.rho * down.u1 * down.u2) -
                      cb * jump(up.rho * up.u2 * up.u2 + up.p, down.rho * down.u2 * down.u2 + down.p);
    const double r3 = sb * jump(up.rho * up.u1 * Hu, down.rho * down.u1 * Hd) -
                      cb * jump(up.rho * up.u2 * Hu, down.rho * down.u2 * Hd);

    const double q0 = up.speed() + sound_speed(up, g);
    const double s_mass = up.rho * q0;
    const double s_mom = up.rho * q0 * q0 + up.p;
    const double s_en = up.rho * q0 * total_enthalpy(up, g);
    return {r0 / s_mass, r1 / s_mom, r2 / s_mom, r3 / s_en};
}

/// Same residuals in the slope form sigma' [F1_k] - [F2_k]. Only meaningful
/// for finite slope; a normal front (beta = pi/2) must use rh_residual_beta.
inline std::array<double, 4> rh_residual(const EulerPrimitive& up, const EulerPrimitive& down,
                                         double slope, const GasModel& g) {
    const double beta = std::atan(slope);
    auto r = rh_residual_beta(up, down, beta, g);
    const double cb = std::cos(beta);
    for (double& v : r) v /= cb;
    return r;
}

/// Downstream state of the oblique shock with shock angle `beta`, by normal
/// decomposition: the normal Mach number Mn = M0 sin(beta) sets the density
/// and pressure ratios, the tangential velocity is preserved.
/// Requires a horizontal supersonic upstream and asin(1/M0) <= beta <= pi/2.
inline ObliqueShock downstream_from_beta(const EulerPrimitive& up, double beta, const GasModel& g) {
    detail::require_horizontal_supersonic(up, g, "downstream_from_beta");
    const double m0 = mach_number(up, g);
    const double sb = std::sin(beta);
    if (beta > 0.5 * M_PI + 1e-12 || sb * m0 < 1.0 - 1e-12)
        throw BetaOutOfRangeError("downstream_from_beta: beta=" + std::to_string(beta) +
                                  " outside [asin(1/M0), pi/2] for M0=" + std::to_string(m0));

    const double mn2 = std::max(1.0, m0 * m0 * sb * sb);
    const double gp = g.gamma + 1.0, gm = g.gamma - 1.0;
    const double rho_ratio = gp * mn2 / (gm * mn2 + 2.0);
    const double p_ratio = 1.0 + 2.0 * g.gamma * (mn2 - 1.0) / gp;

    const double cb = std::cos(beta);
    const double un0 = up.u1 * sb;       // normal component, n = (sin b, -cos b)
    const double ut = up.u1 * cb;        // tangential component, preserved
    const double un1 = un0 / rho_ratio;  // mass conservation

    EulerPrimitive down;
    down.u1 = ut * cb + un1 * sb;
    down.u2 = cb * (un0 - un1);
    down.p = up.p * p_ratio;
    down.rho = up.rho * rho_ratio;

    ObliqueShock s;
    s.beta = beta;
    s.slope = std::tan(beta);
    s.upstream = up;
    s.downstream = (mn2 == 1.0) ? up : down; // zero-strength Mach wave is exact
    s.deflection = (mn2 == 1.0) ? 0.0 : std::atan2(down.u2, down.u1);
    return s;
}

/// theta(beta) along the polar of `up`; vanishes at both range endpoints.
inline double polar_deflection(const EulerPrimitive& up, double beta, const GasModel& g) {
    return downstream_from_beta(up, beta, g).deflection;
}

inline CriticalAngles critical_angles(const EulerPrimitive& up, const GasModel& g) {
    detail::require_horizontal_supersonic(up, g, "critical_angles");
    const double m0 = mach_number(up, g);
    const double b_lo = detail::mach_angle(m0);
    const double b_hi = 0.5 * M_PI;

    CriticalAngles out;
    out.beta_d = num::golden_max([&](double b) { return polar_deflection(up, b, g); }, b_lo, b_hi,
                                 1e-12);
    out.theta_d = polar_deflection(up, out.beta_d, g);
    const auto shock_d = downstream_from_beta(up, out.beta_d, g);
    out.u_detach = shock_d.downstream.u1;

    // Sonic point: downstream |u| = c. Monotone from M0 at the Mach wave to
    // the subsonic normal-shock value, so a scanned bracket always exists.
    const auto sonic_excess = [&](double b) {
        const auto s = downstream_from_beta(up, b, g);
        return s.downstream.speed() - sound_speed(s.downstream, g);
    };
    double lo, hi;
    if (!num::scan_bracket(sonic_excess, b_lo + 1e-12, b_hi, 256, lo, hi))
        throw NoRootError("critical_angles: no sonic point found on polar");
    out.beta_s = num::find_root(sonic_excess, lo, hi, 1e-13);
    out.theta_s = polar_deflection(up, out.beta_s, g);
    if (!(out.theta_s < out.theta_d))
        throw NoRootError("critical_angles: sonic angle not below detachment angle");
    return out;
}

/// Both attached oblique-shock solutions for wedge angle `theta_w`, or
/// nullopt past detachment. theta_w = 0 returns the Mach wave and the normal
/// shock as the degenerate weak/strong roots.
inline std::optional<WedgeSolutionPair> wedge_solutions(const EulerPrimitive& up, double theta_w,
                                                        const GasModel& g) {
    detail::require_horizontal_supersonic(up, g, "wedge_solutions");
    if (theta_w < 0.0) throw BetaOutOfRangeError("wedge_solutions: negative wedge angle");
    const double m0 = mach_number(up, g);
    const double b_lo = detail::mach_angle(m0);
    const double b_hi = 0.5 * M_PI;

    WedgeSolutionPair pair;
    pair.theta_w = theta_w;
    if (theta_w == 0.0) {
        pair.weak = downstream_from_beta(up, b_lo, g);
        pair.strong = downstream_from_beta(up, b_hi, g);
        return pair;
    }

    const double beta_d =
        num::golden_max([&](double b) { return polar_deflection(up, b, g); }, b_lo, b_hi, 1e-12);
    const double theta_d = polar_deflection(up, beta_d, g);

    if (std::abs(theta_w - theta_d) < 1e-9) {
        pair.weak = pair.strong = downstream_from_beta(up, beta_d, g);
        pair.degenerate_at_detachment = true;
        return pair;
    }
    if (theta_w > theta_d) return std::nullopt; // detached

    const auto defl = [&](double b) { return polar_deflection(up, b, g) - theta_w; };
    const double beta_w = num::find_root(defl, b_lo, beta_d, 1e-13);
    const double beta_s = num::find_root(defl, beta_d, b_hi, 1e-13);
    pair.weak = downstream_from_beta(up, beta_w, g);
    pair.strong = downstream_from_beta(up, beta_s, g);
    return pair;
}

/// One sample of the polar curve, as emitted to CSV.
struct PolarSample {
    double beta = 0.0;
    double u1 = 0.0;
    double u2 = 0.0;
    double p = 0.0;
    double rho = 0.0;
    double mach_downstream = 0.0;
    double deflection = 0.0;
    FlowRegime regime;
};

/// Sampled shock polar with the four classical marker points: Q (Mach wave),
/// H (normal shock), S (sonic point), T (detachment point).
struct PolarCurve {
    std::vector<PolarSample> samples;
    PolarSample q, h, s, t;
};

inline PolarCurve polar_curve(const EulerPrimitive& up, int n, const GasModel& g) {
    detail::require_horizontal_supersonic(up, g, "polar_curve");
    if (n < 2) throw std::invalid_argument("polar_curve: need at least two samples");
    const double m0 = mach_number(up, g);
    const double b_lo = detail::mach_angle(m0);
    const double b_hi = 0.5 * M_PI;

    const auto sample_at = [&](double beta) {
        const auto s = downstream_from_beta(up, beta, g);
        PolarSample out;
        out.beta = beta;
        out.u1 = s.downstream.u1;
        out.u2 = s.downstream.u2;
        out.p = s.downstream.p;
        out.rho = s.downstream.rho;
        out.mach_downstream = mach_number(s.downstream, g);
        out.deflection = s.deflection;
        out.regime = classify_regime(s.downstream, g);
        return out;
    };

    PolarCurve curve;
    curve.samples.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double beta = b_lo + (b_hi - b_lo) * static_cast<double>(i) / (n - 1);
        curve.samples.push_back(sample_at(beta));
    }
    const auto crit = critical_angles(up, g);
    curve.q = sample_at(b_lo);
    curve.h = sample_at(b_hi);
    curve.s = sample_at(crit.beta_s);
    curve.t = sample_at(crit.beta_d);
    return curve;
}

/// Helpers for callers holding a non-horizontal state: rotate into the frame
/// where the flow is horizontal, and back.
inline EulerPrimitive rotated_state(const EulerPrimitive& s, double angle) {
    const Vec2 u = Vec2{s.u1, s.u2}.rotated(angle);
    return {u.x, u.y, s.p, s.rho};
}

// --- steady potential flow polar --------------------------------------------

/// Steady potential-flow state: velocity and density; pressure and sound
/// speed follow from the scaled closure.
struct PotentialState {
    double u1 = 0.0;
    double u2 = 0.0;
    double rho = 1.0;

    double speed() const { return std::sqrt(u1 * u1 + u2 * u2); }
    double angle() const { return std::atan2(u2, u1); }
};

inline double potential_sound_speed(const PotentialState& s, const GasModel& g) {
    return std::sqrt(potential_c2(s.rho, g));
}

inline double potential_mach(const PotentialState& s, const GasModel& g) {
    return s.speed() / potential_sound_speed(s, g);
}

struct PotentialShock {
    double beta = 0.0;
    double slope = 0.0;
    PotentialState upstream;
    PotentialState downstream;
    double deflection = 0.0;
    /// Residuals of the two potential jump conditions at the solved state:
    /// normal mass flux and Bernoulli, each normalized.
    double mass_flux_residual = 0.0;
    double bernoulli_residual = 0.0;
};

struct PotentialWedgePair {
    PotentialShock weak;
    PotentialShock strong;
    double theta_w = 0.0;
    bool degenerate_at_detachment = false;
};

namespace detail {

inline void require_horizontal_supersonic_pot(const PotentialState& up, const GasModel& g,
                                              const char* who) {
    if (!(up.rho > 0.0)) throw NotSupersonicError(std::string(who) + ": invalid upstream density");
    if (std::abs(up.u2) > 1e-14 * std::abs(up.u1))
        throw NotSupersonicError(std::string(who) + ": upstream must be horizontal");
    if (!(up.u1 > 0.0) || potential_mach(up, g) <= 1.0)
        throw NotSupersonicError(std::string(who) + ": upstream must be supersonic with u1 > 0");
}

} // namespace detail

/// Downstream of a potential-flow oblique shock at angle `beta`. Tangential
/// velocity is preserved (continuity of the potential); the downstream
/// normal velocity is the compressive root of rho(un) un = rho0 un0 with
/// rho from the Bernoulli head.
inline PotentialShock potential_downstream_from_beta(const PotentialState& up, double beta,
                                                     const GasModel& g) {
    detail::require_horizontal_supersonic_pot(up, g, "potential_downstream_from_beta");
    const double m0 = potential_mach(up, g);
    const double sb = std::sin(beta), cb = std::cos(beta);
    if (beta > 0.5 * M_PI + 1e-12 || sb * m0 < 1.0 - 1e-12)
        throw BetaOutOfRangeError("potential_downstream_from_beta: beta outside polar range");

    const double B = 0.5 * up.speed() * up.speed() + potential_h(up.rho, g);
    const double ut = up.u1 * cb;
    const double un0 = up.u1 * sb;
    const double m = up.rho * un0;

    // Normal velocity at which the normal flow is exactly sonic; the mass
    // flux rho(un) un is maximal there and the compressive root lies below.
    const double un_star2 = (2.0 + (g.gamma - 1.0) * (2.0 * B - ut * ut)) / (g.gamma + 1.0);
    const double un_star = std::sqrt(un_star2);

    PotentialShock s;
    s.beta = beta;
    s.slope = std::tan(beta);
    s.upstream = up;
    // Within a narrow band of the Mach angle the flux maximum exceeds the
    // upstream flux only at roundoff level; treat the front as zero strength.
    if (un0 <= un_star * (1.0 + 1e-9)) {
        s.downstream = up;
        return s;
    }

    const auto head = [&](double un) { return B - 0.5 * (ut * ut + un * un); };
    const auto flux_defect = [&](double un) { return rho_from_head(head(un), g) * un - m; };
    if (flux_defect(un_star) < 0.0)
        throw NoRootError("potential_downstream_from_beta: no compressive root");
    const double un1 = num::find_root(flux_defect, 1e-14 * un0, un_star, 1e-15 * un0);
    const double rho1 = rho_from_head(head(un1), g);

    PotentialState down;
    down.u1 = ut * cb + un1 * sb;
    down.u2 = cb * (un0 - un1);
    down.rho = rho1;

    s.downstream = down;
    s.deflection = std::atan2(down.u2, down.u1);
    s.mass_flux_residual = (rho1 * un1 - m) / m;
    s.bernoulli_residual =
        (0.5 * down.speed() * down.speed() + potential_h(down.rho, g) - B) / B;
    return s;
}

inline double potential_polar_deflection(const PotentialState& up, double beta, const GasModel& g) {
    return potential_downstream_from_beta(up, beta, g).deflection;
}

inline CriticalAngles potential_critical_angles(const PotentialState& up, const GasModel& g) {
    detail::require_horizontal_supersonic_pot(up, g, "potential_critical_angles");
    const double m0 = potential_mach(up, g);
    const double b_lo = detail::mach_angle(m0);
    const double b_hi = 0.5 * M_PI;

    CriticalAngles out;
    out.beta_d = num::golden_max(
        [&](double b) { return potential_polar_deflection(up, b, g); }, b_lo, b_hi, 1e-12);
    out.theta_d = potential_polar_deflection(up, out.beta_d, g);
    out.u_detach = potential_downstream_from_beta(up, out.beta_d, g).downstream.u1;

    const auto sonic_excess = [&](double b) {
        const auto s = potential_downstream_from_beta(up, b, g);
        return s.downstream.speed() - potential_sound_speed(s.downstream, g);
    };
    double lo, hi;
    if (!num::scan_bracket(sonic_excess, b_lo + 1e-12, b_hi, 256, lo, hi))
        throw NoRootError("potential_critical_angles: no sonic point on polar");
    out.beta_s = num::find_root(sonic_excess, lo, hi, 1e-13);
    out.theta_s = potential_polar_deflection(up, out.beta_s, g);
    if (!(out.theta_s < out.theta_d))
        throw NoRootError("potential_critical_angles: sonic angle not below detachment");
    return out;
}

inline std::optional<PotentialWedgePair> potential_wedge_solutions(const PotentialState& up,
                                                                   double theta_w,
                                                                   const GasModel& g) {
    detail::require_horizontal_supersonic_pot(up, g, "potential_wedge_solutions");
    if (theta_w < 0.0) throw BetaOutOfRangeError("potential_wedge_solutions: negative wedge angle");
    const double m0 = potential_mach(up, g);
    const double b_lo = detail::mach_angle(m0);
    const double b_hi = 0.5 * M_PI;

    PotentialWedgePair pair;
    pair.theta_w = theta_w;
    if (theta_w == 0.0) {
        pair.weak = potential_downstream_from_beta(up, b_lo, g);
        pair.strong = potential_downstream_from_beta(up, b_hi, g);
        return pair;
    }

    const double beta_d = num::golden_max(
        [&](double b) { return potential_polar_deflection(up, b, g); }, b_lo, b_hi, 1e-12);
    const double theta_d = potential_polar_deflection(up, beta_d, g);

    if (std::abs(theta_w - theta_d) < 1e-9) {
        pair.weak = pair.strong = potential_downstream_from_beta(up, beta_d, g);
        pair.degenerate_at_detachment = true;
        return pair;
    }
    if (theta_w > theta_d) return std::nullopt;

    const auto defl = [&](double b) { return potential_polar_deflection(up, b, g) - theta_w; };
    pair.weak = potential_downstream_from_beta(up, num::find_root(defl, b_lo, beta_d, 1e-13), g);
    pair.strong = potential_downstream_from_beta(up, num::find_root(defl, beta_d, b_hi, 1e-13), g);
    return pair;
}

} // namespace wedgeflow
