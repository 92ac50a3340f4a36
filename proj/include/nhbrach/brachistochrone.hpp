// brachistochrone.hpp
// Time-optimal transfer |psi_i> -> |psi_f> for the effective two-level
// Hamiltonian: optimal phase phi - beta, evolution and passage times in every
// regime (generic, Hermitian, PT-symmetric, coherent/incoherent, exceptional
// point), spin-flip times, and a cross-check against numerical integration.

#pragma once

#include "nhbrach/evolution.hpp"

#include <limits>
#include <tuple>

namespace nhbrach {

enum class Regime { Generic, Coherent, Incoherent, ExceptionalPoint, Hermitian };

inline const char* to_string(Regime r) {
    switch (r) {
        case Regime::Generic: return "Generic";
        case Regime::Coherent: return "Coherent";
        case Regime::Incoherent: return "Incoherent";
        case Regime::ExceptionalPoint: return "ExceptionalPoint";
        case Regime::Hermitian: return "Hermitian";
    }
    return "?";
}

struct PassageTimeResult {
    double tau = std::numeric_limits<double>::infinity();
    Regime regime = Regime::Generic;
    double omega_arg = 0.0;  // arg Omega that makes the time real and positive
    bool diverged = true;

    static PassageTimeResult finite(double tau, Regime r, double arg = 0.0) { return {tau, r, arg, false}; }
    static PassageTimeResult divergent(Regime r) {
        return {std::numeric_limits<double>::infinity(), r, 0.0, true};
    }
};

struct SpinFlipTimes {
    double tau_down = 0.0;
    double tau_up = 0.0;
    double kappa = 0.0;
};

enum class PhaseSign { Upper, Lower };

inline constexpr double geometry_tolerance = 1e-12;
inline constexpr double divergence_tolerance = 1e-9;

namespace detail {

/// sqrt(cos^2(theta) - sin^2(alpha/2)) on the principal branch; a -0 imaginary
/// part (cos(pi/2) picks one up) would otherwise flip the root across the cut.
inline cplx branch_root(cplx ct, cplx sa) { return std::sqrt(ct * ct - sa * sa + cplx{0.0, 0.0}); }

}  // namespace detail

/// phi - beta from
///   e^{i(phi-beta)} = (-cos(theta) cos(alpha/2) +- sqrt(cos^2(theta) - sin^2(alpha/2))) / (sin(theta) sin(alpha/2)).
inline cplx solve_phase(cplx alpha, cplx theta, PhaseSign sign = PhaseSign::Upper) {
    const cplx st = std::sin(theta);
    const cplx sa = std::sin(0.5 * alpha);
    if (std::abs(st) <= geometry_tolerance || std::abs(sa) <= geometry_tolerance)
        throw error(errc::singular_geometry, "sin(theta) or sin(alpha/2) vanishes");
    const cplx ct = std::cos(theta);
    const cplx ca = std::cos(0.5 * alpha);
    const cplx root = detail::branch_root(ct, sa);
    const cplx e = (-ct * ca + (sign == PhaseSign::Upper ? root : -root)) / (st * sa);
    return -I * std::log(e);
}

namespace detail {

/// Numerator and denominator of
///   w = i sin^2(alpha/2) / (cos(alpha/2) sqrt(cos^2(theta) - sin^2(alpha/2)) - cos(theta)).
inline std::pair<cplx, cplx> tangent_parts(cplx alpha, cplx theta) {
    const cplx sa = std::sin(0.5 * alpha);
    const cplx ca = std::cos(0.5 * alpha);
    const cplx ct = std::cos(theta);
    return {I * sa * sa, ca * branch_root(ct, sa) - ct};
}

/// arctan(num/den) = (1/2i) log((den + i num)/(den - i num)), principal log.
/// Real part lies in [-pi/2, pi/2], so this is the branch of smallest modulus;
/// den = 0 is regular (arctan(inf) = pi/2). Empty when num/den = +-i.
inline std::optional<cplx> arctan_ratio(cplx num, cplx den, double tol = divergence_tolerance) {
    const cplx p = den + I * num;
    const cplx m = den - I * num;
    const double scale = std::abs(num) + std::abs(den);
    if (std::abs(p) <= tol * scale || std::abs(m) <= tol * scale) return std::nullopt;
    return (-0.5 * I) * std::log(p / m);
}

inline bool is_real(cplx v, double tol = 1e-14) { return std::abs(v.imag()) <= tol * std::max(1.0, std::abs(v)); }

}  // namespace detail

/// tau = |(2/Omega) arctan(w)| with arg Omega fixed so that (2/Omega) arctan(w)
/// is real and positive: arg Omega = arg arctan(w).
inline PassageTimeResult evolution_time(cplx alpha, cplx theta, double omega_mag) {
    if (!(omega_mag > 0.0)) throw error(errc::domain_error, "|Omega| must be positive");
    if (std::abs(std::sin(0.5 * alpha)) <= geometry_tolerance)
        throw error(errc::singular_geometry, "sin(alpha/2) vanishes");
    const Regime reg = detail::is_real(theta) && detail::is_real(alpha) ? Regime::Hermitian : Regime::Generic;

    const auto [num, den] = detail::tangent_parts(alpha, theta);
    const auto a = detail::arctan_ratio(num, den);
    if (!a) return PassageTimeResult::divergent(reg);
    if (std::abs(std::sin(theta)) <= geometry_tolerance)
        throw error(errc::singular_geometry, "sin(theta) vanishes");
    return PassageTimeResult::finite(2.0 * std::abs(*a) / omega_mag, reg, std::arg(*a));
}

/// Value of (2/Omega) arctan(w) with Omega = |Omega| e^{i arg}: real when arg
/// is the value reported in PassageTimeResult::omega_arg.
inline cplx evolution_time_raw(cplx alpha, cplx theta, double omega_mag, double omega_arg) {
    const auto [num, den] = detail::tangent_parts(alpha, theta);
    const auto a = detail::arctan_ratio(num, den);
    if (!a) return {std::numeric_limits<double>::infinity(), 0.0};
    return 2.0 * *a / std::polar(omega_mag, omega_arg);
}

/// tau_p = |(i/Omega) ln((Z - Omega)/(Z + Omega))|; diverges at Z = +-Omega.
inline PassageTimeResult passage_time_general(cplx z, cplx omega) {
    const double scale = std::abs(z) + std::abs(omega);
    const Regime reg = detail::is_real(z) && detail::is_real(omega) && std::abs(z) < std::abs(omega)
                           ? Regime::Hermitian
                           : Regime::Generic;
    if (std::abs(z - omega) <= divergence_tolerance * scale || std::abs(z + omega) <= divergence_tolerance * scale)
        return PassageTimeResult::divergent(reg);
    const cplx bracket = I * std::log((z - omega) / (z + omega));  // = 2 arctan(w) at alpha = pi
    return PassageTimeResult::finite(std::abs(bracket / omega), reg, std::arg(bracket));
}

/// tau_p = (2/Omega0) arctan(Omega0/delta), rho > delta.
inline PassageTimeResult passage_time_coherent(double omega0, double delta) {
    if (!(omega0 > 0.0) || delta < 0.0) throw error(errc::domain_error, "need Omega0 > 0, delta >= 0");
    return PassageTimeResult::finite(2.0 / omega0 * std::atan2(omega0, delta), Regime::Coherent);
}

/// tau_p = (2/Omega0) artanh(Omega0/delta), rho < delta.
inline PassageTimeResult passage_time_incoherent(double omega0, double delta) {
    if (!(omega0 > 0.0) || !(delta > 0.0) || omega0 >= delta)
        throw error(errc::domain_error, "need 0 < Omega0 < delta");
    return PassageTimeResult::finite(2.0 / omega0 * std::atanh(omega0 / delta), Regime::Incoherent);
}

/// tau = (2/delta) |1 - cos(alpha/2)| at the exceptional point.
inline double exceptional_point_time(double delta, cplx alpha) {
    if (!(delta > 0.0)) throw error(errc::domain_error, "delta must be positive");
    return 2.0 / delta * std::abs(1.0 - std::cos(0.5 * alpha));
}

/// kappa = arctan(delta/Omega); tau_down = (pi - 2 kappa)/Omega, tau_up = (pi + 2 kappa)/Omega.
inline SpinFlipTimes spin_flip_times(double omega, double delta) {
    if (!(omega > 0.0) || delta < 0.0) throw error(errc::domain_error, "need Omega > 0, delta >= 0");
    const double kappa = std::atan2(delta, omega);
    return {(pi - 2.0 * kappa) / omega, (pi + 2.0 * kappa) / omega, kappa};
}

/// tau_p = (2/Omega) arctan(Omega / sqrt(omega^2 - Omega^2)) for omega = 2 dE >= Omega.
inline PassageTimeResult passage_time_constrained(double omega_variance, double omega_gap) {
    if (!(omega_variance > 0.0) || !(omega_gap > 0.0)) throw error(errc::domain_error, "need omega, Omega > 0");
    if (omega_variance < omega_gap) throw error(errc::domain_error, "need omega >= Omega");
    const double w = omega_variance;
    const double g = omega_gap;
    const double root = std::sqrt((w - g) * (w + g));
    const Regime reg = root == 0.0 ? Regime::Hermitian : Regime::Generic;
    return PassageTimeResult::finite(2.0 / g * std::atan2(g, root), reg);
}

// ---------------------------------------------------------------------------
// Numerical cross-check

/// Optimal Hamiltonian for the transfer (alpha, beta) at given theta, |Omega|,
/// lambda0: phi = beta + solve_phase(alpha, theta) and arg Omega from
/// evolution_time().
inline SphericalParams optimal_parameters(const BoundaryStates& b, cplx theta, double omega_mag, cplx lambda0 = 0.0,
                                          PhaseSign sign = PhaseSign::Upper) {
    const PassageTimeResult r = evolution_time(b.alpha, theta, omega_mag);
    if (r.diverged) throw error(errc::singular_geometry, "evolution time diverges for these angles");
    return make_spherical(theta, b.beta + solve_phase(b.alpha, theta, sign), std::polar(omega_mag, r.omega_arg),
                          lambda0);
}

struct OracleResult {
    double tau_closed = 0.0;
    double tau_numeric = 0.0;
    double residual = 0.0;
};

struct OracleOptions {
    double tol = 1e-10;              // integrator tolerance
    std::size_t samples = 4096;      // bracketing grid over (0, 8 pi/|Omega|]
    double window_periods = 8.0;     // window = window_periods * pi / |Omega|
    double zero_threshold = 1e-6;    // |g| at an accepted root, relative to the local state size
};

namespace detail {

/// First zero of g(t) = u1(t) - k u2(t) for the pair flow of m from y0, on
/// (0, window]. Minima of |g| are bracketed on a uniform grid by the sign of
/// d|g|^2/dt and refined by bisection; a minimum counts as a zero when
/// |g| <= zero_threshold relative to the local state size.
inline std::optional<double> first_zero(const Mat2& m, const PairState& y0, cplx k, double window,
                                        const OracleOptions& opt) {
    auto g_of = [&](const PairState& y) { return y[0] - k * y[1]; };
    // d|g|^2/dt / 2 = Re(g conj(g')), g' from du/dt = -i H u
    auto slope = [&](const PairState& y) {
        const Vec2 du = m * Vec2{y[0], y[1]};
        const cplx gp = -I * (du[0] - k * du[1]);
        return std::real(g_of(y) * std::conj(gp));
    };

    const auto rhs = pair_rhs(m);
    const IntegratorOptions iopt = options_for(opt.tol);
    auto ode = make_dopri5(rhs, 0.0, y0, iopt);

    double t_prev = 0.0;
    PairState y_prev = ode.state();
    double s_prev = slope(y_prev);

    for (std::size_t i = 1; i <= opt.samples; ++i) {
        const double t = window * static_cast<double>(i) / static_cast<double>(opt.samples);
        const PairState y = ode.advance_to(t);
        const double s = slope(y);
        if (s_prev < 0.0 && s >= 0.0) {
            // bisection on the sign of the slope, restarting from the left end
            double lo = t_prev, hi = t;
            PairState y_lo = y_prev;
            for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                auto sub = make_dopri5(rhs, lo, y_lo, iopt);
                const PairState y_mid = sub.advance_to(mid);
                if (slope(y_mid) < 0.0) {
                    lo = mid;
                    y_lo = y_mid;
                } else {
                    hi = mid;
                }
            }
            const double root = 0.5 * (lo + hi);
            auto sub = make_dopri5(rhs, lo, y_lo, iopt);
            const PairState y_root = sub.advance_to(root);
            const double size = std::max(1.0, std::abs(y_root[0]) + std::abs(k * y_root[1]));
            if (std::abs(g_of(y_root)) <= opt.zero_threshold * size) return root;
        }
        t_prev = t;
        y_prev = y;
        s_prev = s;
    }
    return std::nullopt;
}

}  // namespace detail

/// Integrates the optimal Hamiltonian for (theta, |p.omega|, p.lambda0) and the
/// boundary states b numerically and locates the first zero of the
/// |psi_i>-coefficient g(t) = u1 - e^{-i beta} cot(alpha/2) u2.
/// p.phi and arg(p.omega) are replaced by their optimal values.
inline OracleResult verify_against_oracle(const SphericalParams& p, const BoundaryStates& b,
                                          const OracleOptions& opt = {}) {
    const double wmag = std::abs(p.omega);
    const PassageTimeResult closed = evolution_time(b.alpha, p.theta, wmag);
    if (closed.diverged) throw error(errc::singular_geometry, "evolution time diverges");
    const SphericalParams q = optimal_parameters(b, p.theta, wmag, p.lambda0);
    const Mat2 m = from_spherical(q).matrix();
    const cplx k = std::exp(-I * b.beta) * std::cos(0.5 * b.alpha) / std::sin(0.5 * b.alpha);

    const auto root = detail::first_zero(m, pack(AdjointStatePair::initial()), k, opt.window_periods * pi / wmag, opt);
    if (!root) throw error(errc::no_crossing, "no zero of the initial-state coefficient in the search window");
    return {closed.tau, *root, std::abs(closed.tau - *root)};
}

inline OracleResult verify_against_oracle(const SphericalParams& p, const BoundaryStates& b, double tol) {
    OracleOptions opt;
    opt.tol = tol;
    return verify_against_oracle(p, b, opt);
}

}  // namespace nhbrach
