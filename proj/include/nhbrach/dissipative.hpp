// dissipative.hpp
// Driven two-level system with level decay in the rotating-wave approximation:
//
//   i du/dt = (1/2) [[-i lambda + Delta - i delta, 2 V*], [2 V, -i lambda - Delta + i delta]] u,
//   V(t) = V0 e^{i omega t},
//
// reduced to the time-independent rotating-frame generator
// H_r = (W/2)[[cos th, sin th], [sin th, -cos th]] with W cos th = Delta - omega - i delta,
// W sin th = rho = 2 V0. The global e^{-lambda t} decay is factored out.

#pragma once

#include "nhbrach/brachistochrone.hpp"

namespace nhbrach {

struct RabiSystem {
    double gamma_a = 0.0;          // upper-level decay rate
    double gamma_b = 0.0;          // lower-level decay rate
    double delta_detuning = 0.0;   // Delta = E_a - E_b - nu
    double nu_drive = 0.0;         // carrier frequency
    double omega_mod = 0.0;        // drive modulation frequency
    double v0 = 1.0;               // coupling mu . E0

    double lambda_avg() const { return 0.5 * (gamma_a + gamma_b); }
    double delta_half() const { return 0.5 * (gamma_a - gamma_b); }
    double rho_drive() const { return 2.0 * v0; }

    /// Delta - omega - i delta
    cplx z_rot() const { return {delta_detuning - omega_mod, -delta_half()}; }

    /// W = sqrt(rho^2 + (Delta - omega - i delta)^2), principal root.
    cplx omega_c() const {
        const cplx z = z_rot();
        return std::sqrt(rho_drive() * rho_drive() + z * z);
    }

    /// |rho^2 - delta^2|^{1/2}
    double rabi_frequency() const {
        const double r = rho_drive(), d = delta_half();
        return std::sqrt(std::abs((r - d) * (r + d)));
    }

    /// Decay rates from (lambda, delta).
    static RabiSystem resonant(double rho, double delta, double lambda) {
        RabiSystem s;
        s.gamma_a = lambda + delta;
        s.gamma_b = lambda - delta;
        s.v0 = 0.5 * rho;
        return s;
    }
};

struct TunnelingProbabilities {
    double p_up_up = 1.0;
    double p_down_up = 0.0;
    Regime regime = Regime::Coherent;
};

inline constexpr double ep_relative_tolerance = 1e-9;

/// Traceless rotating-frame generator: X = rho, Y = 0, Z = Delta - omega - i delta.
inline EffectiveHamiltonian rotating_frame_hamiltonian(const RabiSystem& r) {
    return {0.0, r.rho_drive(), 0.0, r.z_rot()};
}

/// Lab-frame matrix of the driven equation at time t (including the decay trace).
inline Mat2 lab_frame_matrix(const RabiSystem& r, double t) {
    const double lam = r.lambda_avg();
    const double d = r.delta_half();
    const cplx v = r.v0 * std::exp(I * (r.omega_mod * t));
    return Mat2{{0.5 * cplx{r.delta_detuning, -lam - d}, std::conj(v), v, 0.5 * cplx{-r.delta_detuning, -lam + d}}};
}

inline bool at_resonance(const RabiSystem& r, double tol = ep_relative_tolerance) {
    const double scale = std::max({1.0, std::abs(r.delta_detuning), std::abs(r.omega_mod)});
    return std::abs(r.delta_detuning - r.omega_mod) <= tol * scale;
}

/// Coherent (rho > delta), incoherent (rho < delta) or exceptional point
/// (|rho - delta| <= tol (rho + delta)). Off resonance the sign of
/// Re(W^2) = (Delta - omega)^2 - delta^2 + rho^2 decides.
inline Regime regime(const RabiSystem& r, double tol = ep_relative_tolerance) {
    const double rho = r.rho_drive();
    const double d = std::abs(r.delta_half());
    if (at_resonance(r, tol)) {
        if (std::abs(rho - d) <= tol * (rho + d)) return Regime::ExceptionalPoint;
        return rho > d ? Regime::Coherent : Regime::Incoherent;
    }
    const double det = r.delta_detuning - r.omega_mod;
    return det * det - d * d + rho * rho >= 0.0 ? Regime::Coherent : Regime::Incoherent;
}

/// P_uu = |C1|^2 e^{-lambda t}, P_du = |C2|^2 e^{-lambda t} for a start in |up>.
inline TunnelingProbabilities occupation_probabilities(const RabiSystem& r, double t) {
    if (t < 0.0) throw error(errc::domain_error, "t must be non-negative");
    TunnelingProbabilities out;
    out.regime = regime(r);
    const double env = std::exp(-r.lambda_avg() * t);
    const double rho = r.rho_drive();
    const double d = r.delta_half();

    if (at_resonance(r)) {
        const double w0 = r.rabi_frequency();
        const double x = 0.5 * w0 * t;
        switch (out.regime) {
            case Regime::Coherent: {
                const double s = std::real(detail::sin_half_over(w0, t));  // sin(x)/w0
                const double c1 = std::cos(x) - d * s;
                out.p_up_up = env * c1 * c1;
                out.p_down_up = env * rho * rho * s * s;
                return out;
            }
            case Regime::Incoherent: {
                const double s = std::real(detail::sin_half_over(cplx{0.0, w0}, t));  // sinh(x)/w0
                const double c1 = std::cosh(x) - d * s;
                out.p_up_up = env * c1 * c1;
                out.p_down_up = env * rho * rho * s * s;
                return out;
            }
            default: {
                const double a = 1.0 - 0.5 * d * t;
                const double b = 0.5 * d * t;
                out.p_up_up = env * a * a;
                out.p_down_up = env * b * b;
                return out;
            }
        }
    }

    const cplx w = r.omega_c();
    const cplx s = detail::sin_half_over(w, t);
    const cplx c1 = std::cos(0.5 * w * t) - I * r.z_rot() * s;
    const cplx c2 = -I * rho * s;
    out.p_up_up = env * std::norm(c1);
    out.p_down_up = env * std::norm(c2);
    return out;
}

/// |up> -> |down> passage time at resonance: (2/W0) arctan(W0/delta),
/// (2/W0) artanh(W0/delta), or 2/delta at the exceptional point.
inline PassageTimeResult rabi_passage_time(const RabiSystem& r) {
    if (!at_resonance(r)) throw error(errc::domain_error, "passage time defined at resonance only");
    const double d = r.delta_half();
    const double w0 = r.rabi_frequency();
    switch (regime(r)) {
        case Regime::Coherent: return passage_time_coherent(w0, d);
        case Regime::Incoherent: return passage_time_incoherent(w0, d);
        default: {
            if (!(d > 0.0)) throw error(errc::domain_error, "exceptional point needs delta > 0");
            return PassageTimeResult::finite(2.0 / d, Regime::ExceptionalPoint);
        }
    }
}

/// Passage time from integrating the rotating-frame equation: first zero of
/// the |up> amplitude on (0, window_periods pi / rho].
inline OracleResult rabi_passage_oracle(const RabiSystem& r, const OracleOptions& opt = {}) {
    if (!(r.rho_drive() > 0.0)) throw error(errc::domain_error, "need a nonzero drive");
    const PassageTimeResult closed = rabi_passage_time(r);
    const Mat2 m = rotating_frame_hamiltonian(r).matrix();
    const auto root = detail::first_zero(m, pack(AdjointStatePair::initial()), 0.0,
                                         opt.window_periods * pi / r.rho_drive(), opt);
    if (!root) throw error(errc::no_crossing, "|up> amplitude does not vanish in the search window");
    return {closed.tau, *root, std::abs(closed.tau - *root)};
}

}  // namespace nhbrach
