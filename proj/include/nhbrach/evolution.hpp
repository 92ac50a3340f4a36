// evolution.hpp
// Dynamics of an adjoint pair {|u>, <~u|} under
//   i d|u>/dt = H |u>,   -i d<~u|/dt = <~u| H,
// in closed form (spherical parameters) and by numerical integration, plus
// the complex Bloch vector n = <~u|sigma|u> and its equation dn/dt = Omega x n.

#pragma once

#include "nhbrach/hamiltonian.hpp"
#include "nhbrach/integrator.hpp"

#include <vector>

namespace nhbrach {

struct AdjointStatePair {
    Vec2 u{1.0, 0.0};
    Row2 u_tilde{1.0, 0.0};

    /// <~u|u>
    cplx pseudo_norm() const { return pair(u_tilde, u); }

    static AdjointStatePair initial() { return {}; }
};

/// Coefficients along (|psi_i>, |psi_0>) with the e^{-+i lambda0 t/2} factors
/// kept separately from C1, C2, ~C1, ~C2.
struct StateCoefficients {
    cplx c1{1.0};
    cplx c2{0.0};
    cplx c1_tilde{1.0};
    cplx c2_tilde{0.0};
    cplx phase_factor{1.0};        // e^{-i lambda0 t/2}
    cplx phase_factor_tilde{1.0};  // e^{+i lambda0 t/2}

    AdjointStatePair to_pair() const {
        return {{c1 * phase_factor, c2 * phase_factor}, {c1_tilde * phase_factor_tilde, c2_tilde * phase_factor_tilde}};
    }
};

struct BlochVector {
    cplx n1{};
    cplx n2{};
    cplx n3{1.0};

    Vec3 vec() const { return {n1, n2, n3}; }
    static BlochVector from(const Vec3& v) { return {v[0], v[1], v[2]}; }

    /// n . n (bilinear)
    cplx unit_defect() const { return n1 * n1 + n2 * n2 + n3 * n3 - 1.0; }
};

namespace detail {

// sin(omega t/2)/omega, continuous through omega -> 0 (6-term series for |omega t| < 1e-4).
inline cplx sin_half_over(cplx omega, double t) {
    const cplx x = 0.5 * omega * t;
    if (std::abs(omega * t) < 1e-4) {
        const cplx x2 = x * x;
        // sin(x)/x = 1 - x^2/3! + x^4/5! - x^6/7! + x^8/9! - x^10/11!
        const cplx series =
            1.0 + x2 * (-1.0 / 6 + x2 * (1.0 / 120 + x2 * (-1.0 / 5040 + x2 * (1.0 / 362880 + x2 * (-1.0 / 39916800)))));
        return 0.5 * t * series;
    }
    return std::sin(x) / omega;
}

}  // namespace detail

/// C1 = cos(Wt/2) - i cos(theta) sin(Wt/2),   C2 = -i e^{i phi} sin(theta) sin(Wt/2),
/// ~C1 = cos(Wt/2) + i cos(theta) sin(Wt/2), ~C2 = i e^{-i phi} sin(theta) sin(Wt/2).
/// Evaluated through W cos(theta) and W sin(theta) e^{+-i phi} so the W -> 0
/// limit stays finite.
inline StateCoefficients propagate_closed(const SphericalParams& p, double t) {
    if (t < 0.0) throw error(errc::domain_error, "t must be non-negative");
    const cplx w = p.omega;
    const cplx st = std::sin(p.theta);
    const cplx zc = w * std::cos(p.theta);
    const cplx wp = w * st * std::exp(I * p.phi);
    const cplx wm = w * st * std::exp(-I * p.phi);
    const cplx s = detail::sin_half_over(w, t);
    const cplx c = std::cos(0.5 * w * t);

    StateCoefficients out;
    out.c1 = c - I * zc * s;
    out.c2 = -I * wp * s;
    out.c1_tilde = c + I * zc * s;
    out.c2_tilde = I * wm * s;
    out.phase_factor = std::exp(-0.5 * I * p.lambda0 * t);
    out.phase_factor_tilde = std::exp(0.5 * I * p.lambda0 * t);
    return out;
}

/// Joint state of the pair packed for the integrator: (u1, u2, ~u1, ~u2).
using PairState = std::array<cplx, 4>;

inline PairState pack(const AdjointStatePair& s) { return {s.u[0], s.u[1], s.u_tilde[0], s.u_tilde[1]}; }
inline AdjointStatePair unpack(const PairState& y) { return {{y[0], y[1]}, {y[2], y[3]}}; }

/// Right-hand side of the pair flow: du/dt = -i H u, d~u/dt = i ~u H.
inline auto pair_rhs(const Mat2& m) {
    return [m](double, const PairState& y) -> PairState {
        const Vec2 hu = m * Vec2{y[0], y[1]};
        const Row2 uh = left_mul(Row2{y[2], y[3]}, m);
        return {-I * hu[0], -I * hu[1], I * uh[0], I * uh[1]};
    };
}

inline IntegratorOptions options_for(double tol) {
    IntegratorOptions opt;
    opt.rel_tol = tol;
    opt.abs_tol = tol;
    return opt;
}

/// Numerical integration of the adjoint pair from t = 0 to t.
inline AdjointStatePair propagate_numeric(const EffectiveHamiltonian& h, const AdjointStatePair& s0, double t,
                                          double tol = 1e-10) {
    if (t < 0.0 || !(tol > 0.0)) throw error(errc::domain_error, "need t >= 0 and tol > 0");
    auto ode = make_dopri5(pair_rhs(h.matrix()), 0.0, pack(s0), options_for(tol));
    return unpack(ode.advance_to(t));
}

/// Pair sampled at the given (increasing) times.
inline std::vector<AdjointStatePair> sample_numeric(const EffectiveHamiltonian& h, const AdjointStatePair& s0,
                                                    const std::vector<double>& times, double tol = 1e-10) {
    auto ode = make_dopri5(pair_rhs(h.matrix()), 0.0, pack(s0), options_for(tol));
    std::vector<AdjointStatePair> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(unpack(ode.advance_to(t)));
    return out;
}

inline constexpr double normalization_tolerance = 1e-8;

/// n1 = u1~u2 + u2~u1, n2 = i(u1~u2 - u2~u1), n3 = u1~u1 - u2~u2.
inline BlochVector bloch_vector(const AdjointStatePair& s) {
    if (std::abs(s.pseudo_norm() - 1.0) > normalization_tolerance)
        throw error(errc::not_normalized, "<~u|u> != 1");
    const auto& u = s.u;
    const auto& ut = s.u_tilde;
    return {u[0] * ut[1] + u[1] * ut[0], I * (u[0] * ut[1] - u[1] * ut[0]), u[0] * ut[0] - u[1] * ut[1]};
}

/// Integrates dn/dt = Omega x n from n0 for time t.
inline BlochVector bloch_trajectory_numeric(const EffectiveHamiltonian& h, const BlochVector& n0, double t,
                                            double tol = 1e-10) {
    if (std::abs(n0.unit_defect()) > normalization_tolerance)
        throw error(errc::not_normalized, "n0 . n0 != 1");
    if (t < 0.0 || !(tol > 0.0)) throw error(errc::domain_error, "need t >= 0 and tol > 0");
    const Vec3 w = h.omega_vec();
    auto rhs = [w](double, const Vec3& n) { return cross(w, n); };
    auto ode = make_dopri5(rhs, 0.0, n0.vec(), options_for(tol));
    return BlochVector::from(ode.advance_to(t));
}

/// Final-state parametrisation |psi_f> = cos(alpha/2)|psi_i> + e^{i beta} sin(alpha/2)|psi_0>.
struct BoundaryStates {
    cplx alpha{pi};
    cplx beta{0.0};
    cplx alpha_tilde{pi};
    cplx beta_tilde{0.0};

    static BoundaryStates of(cplx alpha, cplx beta) { return {alpha, beta, alpha, beta}; }

    /// Coefficients of |psi_f> along (|psi_i>, |psi_0>).
    Vec2 final_state() const { return {std::cos(0.5 * alpha), std::exp(I * beta) * std::sin(0.5 * alpha)}; }
    Row2 final_state_tilde() const {
        return {std::cos(0.5 * alpha_tilde), std::exp(-I * beta_tilde) * std::sin(0.5 * alpha_tilde)};
    }
};

inline constexpr double target_tolerance = 1e-12;

/// Coefficients of |psi(t)> along (|psi_i>, |psi_f>):
///   (C1 - e^{-i beta} cot(alpha/2) C2) e^{-i lambda0 t/2},  e^{-i beta} C2 e^{-i lambda0 t/2} / sin(alpha/2).
inline std::pair<cplx, cplx> state_in_if_basis(const StateCoefficients& c, const BoundaryStates& b) {
    const cplx sa = std::sin(0.5 * b.alpha);
    if (std::abs(sa) <= target_tolerance)
        throw error(errc::degenerate_target, "final state coincides with the initial state");
    const cplx eb = std::exp(-I * b.beta);
    const cplx cot = std::cos(0.5 * b.alpha) / sa;
    return {(c.c1 - eb * cot * c.c2) * c.phase_factor, eb / sa * c.c2 * c.phase_factor};
}

}  // namespace nhbrach
