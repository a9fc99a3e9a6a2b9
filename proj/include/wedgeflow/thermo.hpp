#pragma once

#include <cmath>
#include <string>

#include "wedgeflow/errors.hpp"

namespace wedgeflow {

/// Ideal polytropic gas. Carries both the full-Euler constitutive closure
/// (p = R rho T, p = kappa rho^gamma exp(S/cv)) and the scaled potential-flow
/// closure (p = rho^gamma / gamma, c^2 = rho^(gamma-1)).
struct GasModel {
    double gamma = 1.4; ///< adiabatic exponent, > 1
    double R = 1.0;     ///< specific gas constant
    double cv = 2.5;    ///< specific heat at constant volume, gamma = 1 + R/cv
    double kappa = 1.0; ///< entropy scale in p = kappa rho^gamma exp(S/cv)

    /// Nondimensional gas with R = kappa = 1 and cv chosen so gamma = 1 + R/cv.
    static GasModel ideal(double gamma) {
        if (!(gamma > 1.0)) throw NotSupersonicError("GasModel: gamma must exceed 1");
        return GasModel{gamma, 1.0, 1.0 / (gamma - 1.0), 1.0};
    }

    bool consistent(double rel_tol = 1e-12) const {
        return gamma > 1.0 && R > 0.0 && cv > 0.0 && kappa > 0.0 &&
               std::abs(gamma - (1.0 + R / cv)) <= rel_tol * gamma;
    }
};

/// Primitive state of the steady Euler system: velocity, pressure, density.
struct EulerPrimitive {
    double u1 = 0.0;
    double u2 = 0.0;
    double p = 1.0;
    double rho = 1.0;

    double speed() const { return std::sqrt(u1 * u1 + u2 * u2); }
    /// Flow direction w = u2/u1 (slope form used throughout the marching code).
    double slope() const { return u2 / u1; }
    double angle() const { return std::atan2(u2, u1); }
    bool valid() const { return rho > 0.0 && p > 0.0 && std::isfinite(u1) && std::isfinite(u2); }
};

enum class RegimeTag { Subsonic, Sonic, Supersonic };

/// Classification of a state against its sonic speed, with the signed margin
/// (|u| - c)/c retained for diagnostics.
struct FlowRegime {
    RegimeTag tag = RegimeTag::Subsonic;
    double margin = 0.0;
};

/// Width of the band treated as sonic: the sonic manifold is exact in the
/// model, a tolerance is needed in floating point.
inline constexpr double kSonicBand = 1e-10;

inline double sound_speed(const EulerPrimitive& s, const GasModel& g) {
    return std::sqrt(g.gamma * s.p / s.rho);
}

inline double mach_number(const EulerPrimitive& s, const GasModel& g) {
    return s.speed() / sound_speed(s, g);
}

/// S = cv log(p / (kappa rho^gamma)); inverse of p = kappa rho^gamma exp(S/cv).
inline double specific_entropy(const EulerPrimitive& s, const GasModel& g) {
    return g.cv * std::log(s.p / (g.kappa * std::pow(s.rho, g.gamma)));
}

inline double pressure_from_entropy(double rho, double S, const GasModel& g) {
    return g.kappa * std::pow(rho, g.gamma) * std::exp(S / g.cv);
}

inline double internal_energy(const EulerPrimitive& s, const GasModel& g) {
    return s.p / ((g.gamma - 1.0) * s.rho);
}

/// Total energy per unit mass, E = |u|^2/2 + e.
inline double total_energy(const EulerPrimitive& s, const GasModel& g) {
    return 0.5 * (s.u1 * s.u1 + s.u2 * s.u2) + internal_energy(s, g);
}

/// Total enthalpy per unit mass, H = E + p/rho. Invariant across steady shocks.
inline double total_enthalpy(const EulerPrimitive& s, const GasModel& g) {
    return total_energy(s, g) + s.p / s.rho;
}

inline FlowRegime classify_regime(const EulerPrimitive& s, const GasModel& g) {
    const double c = sound_speed(s, g);
    const double margin = (s.speed() - c) / c;
    RegimeTag tag = RegimeTag::Sonic;
    if (margin > kSonicBand)
        tag = RegimeTag::Supersonic;
    else if (margin < -kSonicBand)
        tag = RegimeTag::Subsonic;
    return {tag, margin};
}

// --- scaled potential-flow closure -----------------------------------------
//
// Density is normalized so that h(1) = 0; then p = rho^gamma/gamma and
// c^2 = rho^(gamma-1).

/// Specific enthalpy head h(rho) = (rho^(gamma-1) - 1)/(gamma - 1).
inline double potential_h(double rho, const GasModel& g) {
    return (std::pow(rho, g.gamma - 1.0) - 1.0) / (g.gamma - 1.0);
}

inline double potential_c2(double rho, const GasModel& g) { return std::pow(rho, g.gamma - 1.0); }

inline double potential_pressure(double rho, const GasModel& g) {
    return std::pow(rho, g.gamma) / g.gamma;
}

/// Inverse of potential_h: rho = (1 + (gamma-1) q)^(1/(gamma-1)).
/// Throws VacuumError at or beyond the vacuum bound 1 + (gamma-1) q <= 0.
inline double rho_from_head(double q, const GasModel& g) {
    const double arg = 1.0 + (g.gamma - 1.0) * q;
    if (!(arg > 0.0))
        throw VacuumError("rho_from_head: head " + std::to_string(q) + " at or below vacuum bound");
    return std::pow(arg, 1.0 / (g.gamma - 1.0));
}

} // namespace wedgeflow
