// Library tour: optimal passage times for a Hermitian and a PT-symmetric
// spin flip, the optimal Hamiltonian, a numerical check of the flip, and the
// driven decaying two-level system at resonance.

#include "nhbrach/nhbrach.hpp"

#include <cstdio>

using namespace nhbrach;

int main() {
    const BoundaryStates flip = BoundaryStates::of(pi, 0.0);  // |up> -> |down>

    std::printf("%-8s %-10s %-12s %-12s %-10s\n", "eta", "tau", "closed L_p", "quadrature", "residual");
    for (double eta : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        const cplx theta{pi / 2, eta};
        const PassageTimeResult r = evolution_time(pi, theta, 1.0);
        const SphericalParams p = optimal_parameters(flip, theta, 1.0);
        const EffectiveHamiltonian h = from_spherical(p);

        const double length = path_length(h, AdjointStatePair::initial(), r.tau);
        const OracleResult o = verify_against_oracle(p, flip, 1e-12);
        std::printf("%-8.2f %-10.6f %-12.8f %-12.8f %-10.2e\n", eta, r.tau, brachistochrone_length(pi, theta), length,
                    o.residual);
    }

    // Bloch vector at the passage time: n3 goes from +1 to -1
    const cplx theta{pi / 2, 1.0};
    const double tau = evolution_time(pi, theta, 1.0).tau;
    const auto s = propagate_closed(optimal_parameters(flip, theta, 1.0), tau).to_pair();
    const BlochVector n = bloch_vector(s);
    std::printf("\nPT flip, eta = 1: tau = %.12f, n3(tau) = %.3e%+.3ei\n", tau, n.n3.real(), n.n3.imag());

    // spin flip in the omega = Omega cosh(eta) parametrization
    const SpinFlipTimes sf = spin_flip_times(1.0, std::sinh(1.0));
    std::printf("tau_down = %.12f, tau_up = %.12f, sum = %.12f (2 pi = %.12f)\n", sf.tau_down, sf.tau_up,
                sf.tau_down + sf.tau_up, 2 * pi);

    // driven two-level system with decay at resonance
    std::printf("\n%-6s %-6s %-17s %-12s %-12s\n", "rho", "delta", "regime", "tau_p", "P_du(tau_p)");
    for (auto [rho, delta] : {std::pair{2.0, 1.0}, std::pair{1.0, 1.0}, std::pair{1.0, 2.0}}) {
        const RabiSystem sys = RabiSystem::resonant(rho, delta, delta);
        const double tp = rabi_passage_time(sys).tau;
        const TunnelingProbabilities pr = occupation_probabilities(sys, tp);
        std::printf("%-6.2f %-6.2f %-17s %-12.8f %-12.8f\n", rho, delta, to_string(regime(sys)), tp, pr.p_down_up);
    }
    return 0;
}
