#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "wedgeflow/errors.hpp"
#include "wedgeflow/numerics.hpp"
#include "wedgeflow/polar.hpp"
#include "wedgeflow/thermo.hpp"

// Constant-state skeleton of the Prandtl-Meyer configuration for self-similar
// potential flow: the affine pseudo-potentials, their densities and sonic
// circles, the straight oblique shock through the vertex, and the far-field
// shock parallel to the wedge face. The curved transonic piece joining the
// two straight shocks has no constructive form here and is represented by an
// explicit unknown region that evaluation never extrapolates into.

namespace wedgeflow {

/// Pseudo-potential of a constant state, phi(xi) = -|xi|^2/2 + v.xi + k,
/// so Dphi(xi) = v - xi and |Dphi|^2/2 + phi is constant in xi.
struct PseudoPotentialAffine {
    Vec2 v;
    double k = 0.0;

    double value(Vec2 xi) const { return -0.5 * xi.norm2() + v.dot(xi) + k; }
    Vec2 gradient(Vec2 xi) const { return v - xi; }
    /// The spatial invariant |Dphi|^2/2 + phi.
    double head() const { return 0.5 * v.norm2() + k; }
};

/// rho = (B0 - (gamma-1)(|Dphi|^2/2 + phi))^(1/(gamma-1)) with B0 = (gamma-1)B + 1.
inline double pseudo_density(const PseudoPotentialAffine& phi, const GasModel& g, double B0) {
    const double arg = B0 - (g.gamma - 1.0) * phi.head();
    if (!(arg > 0.0)) throw VacuumError("pseudo_density: state beyond vacuum head");
    return std::pow(arg, 1.0 / (g.gamma - 1.0));
}

/// Pseudo sound speed of a constant state: c^2 = rho^(gamma-1).
inline double pseudo_sound_speed(const PseudoPotentialAffine& phi, const GasModel& g, double B0) {
    return std::sqrt(B0 - (g.gamma - 1.0) * phi.head());
}

/// Type of the self-similar equation at xi: elliptic iff |Dphi| < c, i.e.
/// iff xi lies inside the sonic circle |xi - v| = c.
inline FlowRegime is_elliptic_at(const PseudoPotentialAffine& phi, Vec2 xi, const GasModel& g,
                                 double B0) {
    const double c = pseudo_sound_speed(phi, g, B0);
    const double margin = (phi.gradient(xi).norm() - c) / c;
    RegimeTag tag = RegimeTag::Sonic;
    if (margin > kSonicBand)
        tag = RegimeTag::Supersonic;
    else if (margin < -kSonicBand)
        tag = RegimeTag::Subsonic;
    return {tag, margin};
}

struct SonicCircle {
    Vec2 center;
    double radius = 0.0;
};

/// Far-field shock parallel to the wedge face. In face-normal coordinates it
/// is the line at offset s1 from the wall; the state behind it slides along
/// the face with speed u2 and potential constant k2.
struct NormalShockSolution {
    double u2 = 0.0; ///< flow speed along the face behind the shock
    double k2 = 0.0; ///< additive constant of phi2
    double s1 = 0.0; ///< face-normal offset of the shock line
    double rho2 = 0.0;
};

/// Solve the face-piston far field: mass flux rho0 (vn + s1) = rho2 s1 across
/// the face-parallel line, with rho2 from the pseudo-density of phi2 and
/// [phi] = 0 fixing k2 = -vn s1. vn = u10 sin(theta_w) is the incoming
/// wall-normal speed, u2 = u10 cos(theta_w) the preserved tangential speed.
inline NormalShockSolution solve_normal_shock(const GasModel& g, double u10, double rho0,
                                              double theta_w) {
    const double c0 = std::sqrt(potential_c2(rho0, g));
    if (!(u10 > c0)) throw NotSupersonicError("solve_normal_shock: upstream must be supersonic");
    const double B = 0.5 * u10 * u10 + potential_h(rho0, g);
    const double B0 = (g.gamma - 1.0) * B + 1.0;
    const double ut = u10 * std::cos(theta_w);
    const double vn = u10 * std::sin(theta_w);

    NormalShockSolution out;
    out.u2 = ut;
    if (vn < 1e-14 * u10) {
        // zero-strength limit: the front rides the sonic circle of the
        // incoming state
        out.s1 = c0;
        out.k2 = 0.0;
        out.rho2 = rho0;
        return out;
    }

    const auto rho2_of = [&](double d) {
        const double arg = B0 - (g.gamma - 1.0) * (0.5 * ut * ut - vn * d);
        if (!(arg > 0.0)) throw VacuumError("solve_normal_shock: vacuum head");
        return std::pow(arg, 1.0 / (g.gamma - 1.0));
    };
    const auto flux_defect = [&](double d) { return rho2_of(d) * d - rho0 * (vn + d); };

    double lo = 1e-9 * c0, hi = c0;
    while (flux_defect(hi) < 0.0 && hi < 1e6 * c0) hi *= 2.0;
    if (!(flux_defect(lo) < 0.0 && flux_defect(hi) >= 0.0))
        throw NoRootError("solve_normal_shock: failed to bracket the shock offset");
    out.s1 = num::find_root(flux_defect, lo, hi, 1e-15 * c0);
    out.k2 = -vn * out.s1;
    out.rho2 = rho2_of(out.s1);
    if (!(out.rho2 > rho0))
        throw NoRootError("solve_normal_shock: root is not compressive");
    return out;
}

enum class VertexBranch { SupersonicVertex, SubsonicVertex };

/// Oriented line through `point` with unit direction `dir` (positive xi1).
struct SkeletonLine {
    Vec2 point;
    Vec2 dir;
};

struct SelfSimilarSkeleton {
    GasModel gas;
    double u10 = 0.0;
    double rho0 = 1.0;
    double theta_w = 0.0;
    double B = 0.0;
    double B0 = 0.0;

    PseudoPotentialAffine phi0, phi1, phi2;
    double rho1 = 0.0;
    double rho2 = 0.0;
    Vec2 u1;         ///< state behind the oblique shock
    double u2 = 0.0; ///< face-parallel speed behind the far-field shock
    double k2 = 0.0;
    double s1 = 0.0; ///< face-normal offset of the far-field shock

    double beta = 0.0; ///< oblique shock angle from the incoming flow
    SkeletonLine s0_line; ///< through the origin, unit tangent e_S0
    SkeletonLine s1_line; ///< face-parallel at offset s1, unit tangent e_S1
    SonicCircle circle0, circle1, circle2;
    VertexBranch branch = VertexBranch::SupersonicVertex;
    double theta_s = 0.0;
    double theta_d = 0.0;

    Vec2 face_dir; ///< unit vector along the wedge face
    Vec2 face_normal;
    Vec2 p1; ///< end of the straight oblique shock on the state-1 sonic circle
    Vec2 p2; ///< junction of the far-field shock with the state-2 sonic circle
    Vec2 f1; ///< foot of the state-1 sonic arc on the face
    Vec2 f2; ///< foot of the state-2 sonic arc on the face
};

inline SelfSimilarSkeleton build_skeleton(const GasModel& g, double u10, double rho0,
                                          double theta_w) {
    const PotentialState up{u10, 0.0, rho0};
    const auto crit = potential_critical_angles(up, g);
    if (!(theta_w > 0.0)) throw BetaOutOfRangeError("build_skeleton: need theta_w > 0");
    if (theta_w >= crit.theta_d)
        throw DetachedError("build_skeleton: theta_w at or beyond detachment");

    SelfSimilarSkeleton sk;
    sk.gas = g;
    sk.u10 = u10;
    sk.rho0 = rho0;
    sk.theta_w = theta_w;
    sk.B = 0.5 * u10 * u10 + potential_h(rho0, g);
    sk.B0 = (g.gamma - 1.0) * sk.B + 1.0;
    sk.theta_s = crit.theta_s;
    sk.theta_d = crit.theta_d;
    sk.face_dir = {std::cos(theta_w), std::sin(theta_w)};
    sk.face_normal = {-std::sin(theta_w), std::cos(theta_w)};

    const auto pair = potential_wedge_solutions(up, theta_w, g);
    if (!pair) throw DetachedError("build_skeleton: no attached oblique solution");
    const auto& weak = pair->weak;
    sk.u1 = {weak.downstream.u1, weak.downstream.u2};
    sk.rho1 = weak.downstream.rho;
    sk.beta = weak.beta;

    sk.phi0 = {{u10, 0.0}, 0.0};
    sk.phi1 = {sk.u1, 0.0};

    const auto ns = solve_normal_shock(g, u10, rho0, theta_w);
    sk.u2 = ns.u2;
    sk.k2 = ns.k2;
    sk.s1 = ns.s1;
    sk.rho2 = ns.rho2;
    sk.phi2 = {ns.u2 * sk.face_dir, ns.k2};

    // S0 through the origin, perpendicular to the velocity jump
    const Vec2 jump = sk.phi0.v - sk.phi1.v;
    const double jn = jump.norm();
    Vec2 e0 = (jn > 0.0) ? Vec2{jump.y / jn, -jump.x / jn} : Vec2{std::cos(sk.beta), std::sin(sk.beta)};
    if (e0.x < 0.0) e0 = e0 * -1.0;
    sk.s0_line = {{0.0, 0.0}, e0};
    sk.s1_line = {sk.s1 * sk.face_normal, sk.face_dir};

    const auto radius = [&](const PseudoPotentialAffine& phi) {
        return pseudo_sound_speed(phi, g, sk.B0);
    };
    sk.circle0 = {sk.phi0.v, radius(sk.phi0)};
    sk.circle1 = {sk.phi1.v, radius(sk.phi1)};
    sk.circle2 = {sk.phi2.v, radius(sk.phi2)};

    sk.branch = (theta_w < crit.theta_s) ? VertexBranch::SupersonicVertex
                                         : VertexBranch::SubsonicVertex;

    // arc feet on the face and the straight-shock endpoints
    const double c1 = sk.circle1.radius;
    const double c2 = sk.circle2.radius;
    const double s_c1 = sk.u1.norm(); // circle-1 center sits on the face axis
    const double s_c2 = sk.u2;
    if (sk.branch == VertexBranch::SupersonicVertex) {
        // nearest intersection of S0 with the state-1 sonic circle
        const double b_half = e0.dot(sk.phi1.v);
        const double disc = b_half * b_half - (sk.phi1.v.norm2() - c1 * c1);
        if (!(disc >= 0.0))
            throw NoRootError("build_skeleton: oblique shock misses the state-1 sonic circle");
        const double t1 = b_half - std::sqrt(disc);
        sk.p1 = t1 * e0;
        sk.f1 = (s_c1 - c1) * sk.face_dir;
    } else {
        sk.p1 = {0.0, 0.0};
        sk.f1 = {0.0, 0.0};
    }
    if (!(sk.s1 < c2))
        throw NoRootError("build_skeleton: far-field shock not pseudo-subsonic behind");
    sk.p2 = sk.s1 * sk.face_normal + (s_c2 - std::sqrt(c2 * c2 - sk.s1 * sk.s1)) * sk.face_dir;
    sk.f2 = (s_c2 - c2) * sk.face_dir;
    return sk;
}

enum class SkeletonRegion { Upstream, State1, State2, Unknown };

struct PhiStarValue {
    SkeletonRegion region = SkeletonRegion::Unknown;
    double value = std::numeric_limits<double>::quiet_NaN();
    Vec2 gradient{std::numeric_limits<double>::quiet_NaN(),
                  std::numeric_limits<double>::quiet_NaN()};
};

/// Evaluate the composite pseudo-potential: phi0 outside the disturbed zone,
/// phi1 in the region behind the straight oblique shock, phi2 behind the
/// far-field shock. Points that can only be classified through the unsolved
/// curved shock return Unknown with no value.
inline PhiStarValue phi_star_eval(const SelfSimilarSkeleton& sk, Vec2 xi) {
    const double scale = std::max(1.0, sk.u10);
    const double tol = 1e-12 * scale;
    if (xi.y < -tol) throw OutOfDomainError("phi_star_eval: below the symmetry axis");
    const double s = xi.dot(sk.face_dir);
    const double nn = xi.dot(sk.face_normal);
    if (nn < -tol && xi.x > -tol)
        throw OutOfDomainError("phi_star_eval: inside the wedge");

    // signed height above the oblique-shock line, positive on the upstream side
    const Vec2 jump = sk.phi0.v - sk.phi1.v;
    const double jn = jump.norm();
    const double h0 = (jn > 0.0) ? -xi.dot(jump) / jn : 1.0;

    const double s_p1 = sk.p1.dot(sk.face_dir);
    const double s_p2 = sk.p2.dot(sk.face_dir);

    PhiStarValue out;
    const auto fill = [&](SkeletonRegion r, const PseudoPotentialAffine& phi) {
        out.region = r;
        out.value = phi.value(xi);
        out.gradient = phi.gradient(xi);
    };

    const bool upstream = (s <= s_p1 && h0 >= -tol) || (s >= s_p2 && nn >= sk.s1 - tol) ||
                          (h0 >= -tol && nn >= sk.s1 - tol);
    if (upstream) {
        fill(SkeletonRegion::Upstream, sk.phi0);
        return out;
    }

    if (sk.branch == VertexBranch::SupersonicVertex) {
        const double c1 = sk.circle1.radius;
        if (nn >= -tol && nn <= c1 && h0 <= tol) {
            const double arc = sk.u1.norm() - std::sqrt(std::max(0.0, c1 * c1 - nn * nn));
            if (s <= arc + tol) {
                fill(SkeletonRegion::State1, sk.phi1);
                return out;
            }
        }
    }

    const double c2 = sk.circle2.radius;
    if (nn >= -tol && nn <= sk.s1 + tol) {
        const double arc = sk.u2 - std::sqrt(std::max(0.0, c2 * c2 - nn * nn));
        if (s >= arc - tol) {
            fill(SkeletonRegion::State2, sk.phi2);
            return out;
        }
    }
    return out; // unknown: inside the region owned by the unsolved curved shock
}

/// Residual report of the constant-state verification. Flags are pass/fail;
/// the monotone entries are signed values recorded without assertion.
struct SkeletonReport {
    double rh_s0 = 0.0;       ///< max mass-flux jump residual on S0, normalized
    double phi_jump_s0 = 0.0; ///< max |[phi]| on S0
    double rh_s1 = 0.0;
    double phi_jump_s1 = 0.0;
    double eq_residual = 0.0;   ///< max |div(rho Dphi) + 2 rho| by central differences
    double head_spread = 0.0;   ///< max spatial variation of |Dphi|^2/2 + phi
    double rho1_identity = 0.0; ///< |rho1^(g-1) - rho0^(g-1) - (g-1)/2 (u10^2 - |u1|^2)|
    bool entropy_ok = false;
    bool ellipticity_ok = false;
    bool pseudo_subsonic_behind_s1 = false;
    bool branch_ok = false;
    double monotone_s0 = 0.0; ///< D(phi0 - phi1) . e_S0 (constant in xi)
    double monotone_s1 = 0.0; ///< D(phi0 - phi2) . e_S1

    bool all_pass(double tol_rh = 1e-10, double tol_eq = 1e-12) const {
        return rh_s0 < tol_rh && phi_jump_s0 < tol_eq && rh_s1 < tol_rh && phi_jump_s1 < tol_eq &&
               eq_residual < tol_eq && head_spread < 1e-13 && rho1_identity < 1e-12 &&
               entropy_ok && ellipticity_ok && pseudo_subsonic_behind_s1 && branch_ok;
    }
};

inline SkeletonReport verify_skeleton(const SelfSimilarSkeleton& sk) {
    const GasModel& g = sk.gas;
    SkeletonReport rep;
    const double flux_scale = sk.rho0 * (sk.u10 + std::sqrt(potential_c2(sk.rho0, g)));

    // jump conditions on S0, sampled along the straight segment
    {
        const Vec2 jump = sk.phi0.v - sk.phi1.v;
        const double jn = jump.norm();
        const Vec2 nhat = (jn > 0.0) ? jump * (1.0 / jn) : sk.face_normal;
        const double t_max = (sk.branch == VertexBranch::SupersonicVertex)
                                 ? sk.p1.dot(sk.s0_line.dir)
                                 : sk.circle1.radius;
        for (int i = 0; i <= 16; ++i) {
            const Vec2 xi = (t_max * i / 16.0) * sk.s0_line.dir;
            const double m0 = sk.rho0 * sk.phi0.gradient(xi).dot(nhat);
            const double m1 = sk.rho1 * sk.phi1.gradient(xi).dot(nhat);
            rep.rh_s0 = std::max(rep.rh_s0, std::abs(m0 - m1) / flux_scale);
            rep.phi_jump_s0 =
                std::max(rep.phi_jump_s0, std::abs(sk.phi0.value(xi) - sk.phi1.value(xi)));
        }
    }
    // jump conditions on S1, sampled from the sonic-circle junction outward
    {
        const double s_p2 = sk.p2.dot(sk.face_dir);
        for (int i = 0; i <= 16; ++i) {
            const Vec2 xi = sk.s1 * sk.face_normal +
                            (s_p2 + (3.0 * sk.circle2.radius) * i / 16.0) * sk.face_dir;
            const double m0 = sk.rho0 * sk.phi0.gradient(xi).dot(sk.face_normal);
            const double m2 = sk.rho2 * sk.phi2.gradient(xi).dot(sk.face_normal);
            rep.rh_s1 = std::max(rep.rh_s1, std::abs(m0 - m2) / flux_scale);
            rep.phi_jump_s1 =
                std::max(rep.phi_jump_s1, std::abs(sk.phi0.value(xi) - sk.phi2.value(xi)));
        }
    }

    // each affine pseudo-potential solves the interior equation identically:
    // central differences of rho Dphi are exact for these quadratics
    {
        // the flux rho Dphi is exactly linear in xi, so central differences
        // are exact at any step; a wide step keeps roundoff noise small
        const auto probe = [&](const PseudoPotentialAffine& phi, Vec2 xi) {
            const double h = 0.5 * std::max(1.0, sk.u10);
            const double rho = pseudo_density(phi, g, sk.B0);
            const auto flux = [&](Vec2 p) { return phi.gradient(p) * rho; };
            const double div = (flux({xi.x + h, xi.y}).x - flux({xi.x - h, xi.y}).x) / (2 * h) +
                               (flux({xi.x, xi.y + h}).y - flux({xi.x, xi.y - h}).y) / (2 * h);
            return std::abs(div + 2.0 * rho);
        };
        std::uint64_t state = 88172645463325252ull; // xorshift, fixed seed
        const auto rand01 = [&]() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            return static_cast<double>(state >> 11) * 0x1.0p-53;
        };
        double head_max = 0.0;
        for (int i = 0; i < 64; ++i) {
            const Vec2 xi{(rand01() * 4.0 - 2.0) * std::max(1.0, sk.u10),
                          rand01() * 2.0 * std::max(1.0, sk.u10)};
            for (const auto* phi : {&sk.phi0, &sk.phi1, &sk.phi2}) {
                rep.eq_residual = std::max(rep.eq_residual, probe(*phi, xi));
                const double head = 0.5 * phi->gradient(xi).norm2() + phi->value(xi);
                head_max = std::max(head_max, std::abs(head - phi->head()));
            }
        }
        rep.head_spread = head_max;
    }

    rep.rho1_identity = std::abs(std::pow(sk.rho1, g.gamma - 1.0) -
                                 std::pow(sk.rho0, g.gamma - 1.0) -
                                 0.5 * (g.gamma - 1.0) * (sk.u10 * sk.u10 - sk.u1.norm2()));
    rep.entropy_ok = sk.rho1 > sk.rho0 && sk.rho2 > sk.rho0;
    rep.pseudo_subsonic_behind_s1 = sk.s1 < sk.circle2.radius;

    const auto vertex_regime = is_elliptic_at(sk.phi1, {0.0, 0.0}, g, sk.B0);
    const bool vertex_matches = (sk.branch == VertexBranch::SupersonicVertex)
                                    ? vertex_regime.tag == RegimeTag::Supersonic
                                    : vertex_regime.tag != RegimeTag::Supersonic;
    const auto inside2 = is_elliptic_at(sk.phi2, sk.phi2.v, g, sk.B0);
    const auto outside2 = is_elliptic_at(
        sk.phi2, sk.phi2.v + (3.0 * sk.circle2.radius) * sk.face_dir, g, sk.B0);
    rep.ellipticity_ok =
        vertex_matches && inside2.tag == RegimeTag::Subsonic && outside2.tag == RegimeTag::Supersonic;
    rep.branch_ok = (sk.branch == VertexBranch::SupersonicVertex)
                        ? sk.u1.norm() > sk.circle1.radius
                        : sk.u1.norm() < sk.circle1.radius + kSonicBand * sk.circle1.radius;

    rep.monotone_s0 = (sk.phi0.v - sk.phi1.v).dot(sk.s0_line.dir);
    rep.monotone_s1 = (sk.phi0.v - sk.phi2.v).dot(sk.s1_line.dir);
    return rep;
}

} // namespace wedgeflow
