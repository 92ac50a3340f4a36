// geometry.hpp
// Complex Fubini-Study geometry of the adjoint pair: energy variance, line
// element ds^2 = 4 <d~psi|(1-P)|dpsi>, chart metric on the complex Bloch sphere
// and its PT-symmetric hyperboloid section, path lengths and evolution speed.
//
// The metric is complex-valued; moduli are taken only where a length is
// formed (|dE| in the path integral, |sqrt(dn.dn)| for curves).

#pragma once

#include "nhbrach/brachistochrone.hpp"

#include <optional>
#include <vector>

namespace nhbrach {

struct MetricSample {
    cplx ds2{};     // 4 ds2_fs
    cplx ds2_fs{};  // <d~u|(1-P)|du>
    std::optional<cplx> energy_variance_sq;
};

/// Chart n = (sin z cos v, sin z sin v, cos z) of the complex Bloch sphere.
struct ChartPoint {
    cplx zeta{};
    cplx nu{};

    /// Hyperboloid section zeta = pi/2 + i rho, real nu.
    static ChartPoint hyperbolic(double rho_h, double nu_h) { return {cplx{pi / 2, rho_h}, nu_h}; }

    Vec3 embed() const {
        const cplx sz = std::sin(zeta);
        return {sz * std::cos(nu), sz * std::sin(nu), std::cos(zeta)};
    }
};

/// PT-symmetric family theta = pi/2 + i eta with real Omega, lambda0, phi.
struct PTParams {
    double eta = 0.0;
    double omega_gap = 1.0;       // Omega
    double omega_variance = 1.0;  // omega = Omega cosh(eta)
    double r_mag = 0.0;           // lambda0 = r cos(gamma), delta = r sin(gamma)
    double gamma_pt = 0.0;
    double kappa = 0.0;           // arctan(delta/Omega) = arctan(sinh(eta))

    double delta() const { return omega_gap * std::sinh(eta); }

    static PTParams from_eta(double eta, double omega_gap, double lambda0 = 0.0) {
        PTParams p;
        p.eta = eta;
        p.omega_gap = omega_gap;
        p.omega_variance = omega_gap * std::cosh(eta);
        const double d = omega_gap * std::sinh(eta);
        p.r_mag = std::hypot(lambda0, d);
        p.gamma_pt = std::atan2(d, lambda0);
        p.kappa = std::atan(std::sinh(eta));
        return p;
    }

    double lambda0() const { return r_mag * std::cos(gamma_pt); }

    SphericalParams spherical(double phi = 0.0) const {
        return make_spherical(cplx{pi / 2, eta}, phi, omega_gap, lambda0());
    }
};

/// dE^2 = <~u|H^2|u> - <~u|H|u>^2, evaluated as <~u|(H - <H>)^2|u>.
inline cplx energy_variance(const EffectiveHamiltonian& h, const AdjointStatePair& s) {
    if (std::abs(s.pseudo_norm() - 1.0) > normalization_tolerance)
        throw error(errc::not_normalized, "<~u|u> != 1");
    // equal when <~u|u> = 1; this form does not cancel near eigenstates
    const Mat2 m = h.matrix();
    const Vec2 hu = m * s.u;
    const cplx e1 = pair(s.u_tilde, hu);
    const Vec2 v{hu[0] - e1 * s.u[0], hu[1] - e1 * s.u[1]};
    const Row2 wt{s.u_tilde[0] * m(0, 0) + s.u_tilde[1] * m(1, 0) - e1 * s.u_tilde[0],
                  s.u_tilde[0] * m(0, 1) + s.u_tilde[1] * m(1, 1) - e1 * s.u_tilde[1]};
    return pair(wt, v);
}

/// ds2_fs = <d~u|(1-P)|du> = <d~u|du> - <d~u|u><~u|du>.
inline MetricSample fs_line_element(const AdjointStatePair& s, const AdjointStatePair& ds) {
    if (std::abs(s.pseudo_norm() - 1.0) > normalization_tolerance)
        throw error(errc::not_normalized, "<~u|u> != 1");
    const cplx fs = pair(ds.u_tilde, ds.u) - pair(ds.u_tilde, s.u) * pair(s.u_tilde, ds.u);
    return {4.0 * fs, fs, std::nullopt};
}

/// ds^2 = dzeta^2 + sin^2(zeta) dnu^2.
inline cplx chart_metric(const ChartPoint& p, cplx d_zeta, cplx d_nu) {
    const cplx s = std::sin(p.zeta);
    return d_zeta * d_zeta + s * s * d_nu * d_nu;
}

/// ds^2 = cosh^2(rho) dnu^2 - drho^2 on the one-sheeted hyperboloid.
inline double hyperboloid_metric(double rho, double d_nu, double d_rho) {
    const double c = std::cosh(rho);
    return c * c * d_nu * d_nu - d_rho * d_rho;
}

// ---------------------------------------------------------------------------
// Trajectories

/// Uniformly sampled adjoint-pair trajectory under a fixed Hamiltonian.
struct Trajectory {
    EffectiveHamiltonian h;
    std::vector<double> times;
    std::vector<AdjointStatePair> states;
};

/// n + 1 uniform samples on [0, t_end] by numerical integration.
inline Trajectory sample_trajectory(const EffectiveHamiltonian& h, const AdjointStatePair& s0, double t_end,
                                    std::size_t n, double tol = 1e-12) {
    Trajectory tr;
    tr.h = h;
    tr.times.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) tr.times[i] = t_end * static_cast<double>(i) / static_cast<double>(n);
    tr.states = sample_numeric(h, s0, tr.times, tol);
    return tr;
}

/// Central difference of a smooth function with one Richardson extrapolation:
/// (4 D(h/2) - D(h)) / 3, error O(h^4).
template <class F>
auto richardson_derivative(F&& f, double t, double step) {
    auto central = [&](double hh) {
        auto a = f(t + hh);
        auto b = f(t - hh);
        for (std::size_t k = 0; k < a.size(); ++k) a[k] = (a[k] - b[k]) / (2.0 * hh);
        return a;
    };
    auto d1 = central(step);
    auto d2 = central(0.5 * step);
    for (std::size_t k = 0; k < d1.size(); ++k) d2[k] = (4.0 * d2[k] - d1[k]) / 3.0;
    return d2;
}

/// Step used for finite differences along a trajectory, as a fraction of the
/// intrinsic time scale 1/max(1, |Omega|, |lambda0|).
inline constexpr double fd_relative_step = 1e-3;

inline double time_scale(const EffectiveHamiltonian& h) {
    return 1.0 / std::max({1.0, h.omega_scale(), std::abs(h.lambda0)});
}

/// Metric sample per unit dt^2 at time t along any smooth curve of states
/// t -> state_at(t), differentials by Richardson-extrapolated central differences.
template <class F>
MetricSample metric_along(F&& state_at, double t, double step) {
    auto packed = [&](double tt) { return pack(state_at(tt)); };
    const PairState d = richardson_derivative(packed, t, step);
    return fs_line_element(state_at(t), unpack(d));
}

/// Adjoint pair at (possibly negative) time t along the flow of h from s0;
/// negative times run the flow of -H forward.
inline AdjointStatePair flow_state(const EffectiveHamiltonian& h, const AdjointStatePair& s0, double t,
                                   double tol = 1e-13) {
    if (t >= 0.0) return propagate_numeric(h, s0, t, tol);
    const EffectiveHamiltonian back{-h.lambda0, -h.x, -h.y, -h.z};
    return propagate_numeric(back, s0, -t, tol);
}

/// Metric sample per unit dt^2 at time t along the flow of h from s0, with the
/// energy variance at the same point.
inline MetricSample trajectory_metric(const EffectiveHamiltonian& h, const AdjointStatePair& s0, double t,
                                      double tol = 1e-13) {
    const double step = fd_relative_step * time_scale(h);
    MetricSample m = metric_along([&](double tt) { return flow_state(h, s0, tt, tol); }, t, step);
    m.energy_variance_sq = energy_variance(h, flow_state(h, s0, t, tol));
    return m;
}

/// s = 2 int |dE(t)| dt by composite Simpson over an evenly spaced trajectory
/// (odd number of samples >= 3).
inline double path_length(const Trajectory& tr) {
    const std::size_t n = tr.states.size();
    if (n < 3 || n % 2 == 0 || tr.times.size() != n)
        throw error(errc::domain_error, "Simpson rule needs an odd number (>= 3) of samples");
    const double hstep = (tr.times.back() - tr.times.front()) / static_cast<double>(n - 1);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = 2.0 * std::sqrt(std::abs(energy_variance(tr.h, tr.states[i])));
        const double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc += w * f;
    }
    return acc * hstep / 3.0;
}

/// Path length along the flow of h on [0, t_end], refining the Simpson grid
/// until the relative change drops below rel_change.
inline double path_length(const EffectiveHamiltonian& h, const AdjointStatePair& s0, double t_end,
                          double rel_change = 1e-8, double tol = 1e-12) {
    std::size_t n = 16;
    double prev = path_length(sample_trajectory(h, s0, t_end, n, tol));
    for (int level = 0; level < 14; ++level) {
        n *= 2;
        const double cur = path_length(sample_trajectory(h, s0, t_end, n, tol));
        if (std::abs(cur - prev) <= rel_change * std::max(std::abs(cur), 1e-300)) return cur;
        prev = cur;
    }
    return prev;
}

/// L = |2 sin(theta) arctan(w)| = 2 |dE| tau for the optimal evolution.
inline double brachistochrone_length(cplx alpha, cplx theta) {
    if (std::abs(std::sin(0.5 * alpha)) <= geometry_tolerance)
        throw error(errc::singular_geometry, "sin(alpha/2) vanishes");
    const auto [num, den] = detail::tangent_parts(alpha, theta);
    const auto a = detail::arctan_ratio(num, den);
    if (!a) throw error(errc::singular_geometry, "arctan argument at +-i");
    return std::abs(2.0 * std::sin(theta) * *a);
}

/// L_p = (pi - 2 kappa)/cos(kappa) for kappa in [0, pi/2).
inline double spin_flip_length(double kappa) {
    if (!(kappa >= 0.0) || !(kappa < pi / 2)) throw error(errc::domain_error, "kappa outside [0, pi/2)");
    const double e = pi / 2 - kappa;
    if (e < 1e-4) {
        // 2e / sin(e) = 2 (1 + e^2/6 + 7 e^4/360 + ...)
        const double e2 = e * e;
        return 2.0 * (1.0 + e2 / 6.0 + 7.0 * e2 * e2 / 360.0);
    }
    return (pi - 2.0 * kappa) / std::cos(kappa);
}

struct EvolutionSpeed {
    double v = 0.0;
    double v_geodesic = 0.0;
};

/// v = |Omega sin(theta)|, v_g = |Omega|.
inline EvolutionSpeed evolution_speed(cplx theta, cplx omega) {
    return {std::abs(omega * std::sin(theta)), std::abs(omega)};
}

/// Im(theta0) >= 0 with cos(Re theta) = sinh(Im theta0), folded by |cos|.
inline double speed_threshold(double re_theta) { return std::asinh(std::abs(std::cos(re_theta))); }

/// |u> -> e^{i a}|u>, <~u| -> e^{-i a}<~u|, a complex.
inline AdjointStatePair gauge_transform(const AdjointStatePair& s, cplx alpha_phase) {
    const cplx f = std::exp(I * alpha_phase);
    const cplx g = std::exp(-I * alpha_phase);
    return {{f * s.u[0], f * s.u[1]}, {g * s.u_tilde[0], g * s.u_tilde[1]}};
}

}  // namespace nhbrach
