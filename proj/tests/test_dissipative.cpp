#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace nhbrach;
using testsupport::Rng;

namespace {

// i da/dt = M(t) a in the lab frame, integrated directly.
std::array<cplx, 2> lab_solution(const RabiSystem& r, double t) {
    auto rhs = [&r](double tt, const std::array<cplx, 2>& y) {
        const Mat2 m = lab_frame_matrix(r, tt);
        const Vec2 d = m * Vec2{y[0], y[1]};
        return std::array<cplx, 2>{-I * d[0], -I * d[1]};
    };
    IntegratorOptions opt;
    opt.rel_tol = opt.abs_tol = 1e-12;
    auto ode = make_dopri5(rhs, 0.0, std::array<cplx, 2>{1.0, 0.0}, opt);
    return ode.advance_to(t);
}

RabiSystem random_system(Rng& rng, int kind) {
    const double rho = rng.uniform(0.2, 3.0);
    double d = 0.0;
    switch (kind % 3) {
        case 0: d = rho * rng.uniform(0.0, 0.9); break;  // coherent
        case 1: d = rho * rng.uniform(1.1, 3.0); break;  // incoherent
        default: d = rho; break;                         // exceptional point
    }
    const double lambda = d + rng.uniform(0.0, 0.5);
    RabiSystem r = RabiSystem::resonant(rho, d, lambda);
    r.delta_detuning = rng.uniform(-2.0, 2.0);
    r.omega_mod = r.delta_detuning;
    r.nu_drive = 10.0;
    return r;
}

}  // namespace

TEST(RotatingFrame, LosslessResonance) {
    RabiSystem r = RabiSystem::resonant(1.5, 0.0, 0.0);
    const auto h = rotating_frame_hamiltonian(r);
    EXPECT_NEAR(std::abs(h.omega() - 1.5), 0.0, 1e-15);
    EXPECT_EQ(h.z, cplx(0.0));
    EXPECT_EQ(h.x, cplx(1.5));
}

TEST(RotatingFrame, DampedResonanceExample) {
    const RabiSystem r = RabiSystem::resonant(2.0, 1.0, 1.0);
    EXPECT_NEAR(std::abs(r.omega_c() - std::sqrt(3.0)), 0.0, 1e-15);
    const auto sp = to_spherical(rotating_frame_hamiltonian(r));
    EXPECT_NEAR(std::abs(std::cos(sp.theta) - cplx{0.0, -1.0 / std::sqrt(3.0)}), 0.0, 1e-14);
    EXPECT_NEAR(r.rabi_frequency(), std::sqrt(3.0), 1e-15);
}

TEST(RotatingFrame, MatchesLabFrameMatrix) {
    // M(t) = D(t) (H_r + omega sigma_z/2) D(t)^-1 - i lambda/2, D = diag(e^{-i w t/2}, e^{i w t/2})
    Rng rng(31);
    for (int i = 0; i < 50; ++i) {
        RabiSystem r = random_system(rng, i);
        r.omega_mod = rng.uniform(-3, 3);
        const double t = rng.uniform(0, 5);
        const Mat2 hr = rotating_frame_hamiltonian(r).matrix();
        const Mat2 lab = lab_frame_matrix(r, t);
        const cplx ph = std::exp(I * (r.omega_mod * t));
        const cplx tr = -0.5 * I * r.lambda_avg();
        EXPECT_NEAR(std::abs(lab(0, 0) - (hr(0, 0) + 0.5 * r.omega_mod + tr)), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(lab(1, 1) - (hr(1, 1) - 0.5 * r.omega_mod + tr)), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(lab(0, 1) - hr(0, 1) / ph), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(lab(1, 0) - hr(1, 0) * ph), 0.0, 1e-12);
    }
}

TEST(Probabilities, InitialValues) {
    Rng rng(32);
    for (int i = 0; i < 30; ++i) {
        const auto p = occupation_probabilities(random_system(rng, i), 0.0);
        EXPECT_DOUBLE_EQ(p.p_up_up, 1.0);
        EXPECT_DOUBLE_EQ(p.p_down_up, 0.0);
    }
    EXPECT_THROW(occupation_probabilities(RabiSystem{}, -1.0), error);
}

TEST(Probabilities, ExceptionalPointExample) {
    const auto p = occupation_probabilities(RabiSystem::resonant(1.0, 1.0, 1.0), 2.0);
    EXPECT_EQ(p.regime, Regime::ExceptionalPoint);
    EXPECT_NEAR(p.p_down_up, std::exp(-2.0), 1e-15);
    EXPECT_NEAR(p.p_up_up, 0.0, 1e-15);
}

TEST(Probabilities, CoherentAtPassageTime) {
    const RabiSystem r = RabiSystem::resonant(2.0, 1.0, 0.0);
    const double tau = rabi_passage_time(r).tau;
    const auto p = occupation_probabilities(r, tau);
    const double w0 = std::sqrt(3.0);
    EXPECT_NEAR(p.p_up_up, 0.0, 1e-28);
    const double s = std::sin(0.5 * w0 * tau);
    EXPECT_NEAR(p.p_down_up, 4.0 / 3.0 * s * s, 1e-14);
}

TEST(Probabilities, LabFrameOracle) {
    Rng rng(33);
    for (int i = 0; i < 100; ++i) {
        const RabiSystem r = random_system(rng, i);
        const double t_end = 4.0 * rabi_passage_time(r).tau;
        for (int k = 1; k <= 8; ++k) {
            const double t = t_end * k / 8.0;
            const auto a = lab_solution(r, t);
            const auto p = occupation_probabilities(r, t);
            EXPECT_NEAR(p.p_up_up, std::norm(a[0]), 1e-8) << i << " " << to_string(p.regime) << " t=" << t;
            EXPECT_NEAR(p.p_down_up, std::norm(a[1]), 1e-8) << i << " " << to_string(p.regime) << " t=" << t;
        }
    }
}

TEST(Probabilities, OffResonanceOracle) {
    Rng rng(34);
    for (int i = 0; i < 30; ++i) {
        RabiSystem r = random_system(rng, i);
        r.omega_mod = r.delta_detuning + rng.uniform(-2.0, 2.0);
        const double t_end = 4.0 * pi / r.rho_drive();
        for (int k = 1; k <= 4; ++k) {
            const double t = t_end * k / 4.0;
            const auto a = lab_solution(r, t);
            const auto p = occupation_probabilities(r, t);
            EXPECT_NEAR(p.p_up_up, std::norm(a[0]), 1e-8) << i;
            EXPECT_NEAR(p.p_down_up, std::norm(a[1]), 1e-8) << i;
        }
    }
}

TEST(Probabilities, LosslessEnvelope) {
    Rng rng(35);
    for (int i = 0; i < 100; ++i) {
        const double lambda = rng.uniform(0, 2);
        RabiSystem r = RabiSystem::resonant(rng.uniform(0.1, 3), 0.0, lambda);
        r.delta_detuning = rng.uniform(-1, 1);
        r.omega_mod = rng.uniform(-1, 1);
        const double t = rng.uniform(0, 10);
        const auto p = occupation_probabilities(r, t);
        EXPECT_NEAR(p.p_up_up + p.p_down_up, std::exp(-lambda * t), 1e-13);
    }
}

TEST(Probabilities, BoundedByDecayEnvelopeInCoherentRegime) {
    Rng rng(36);
    for (int i = 0; i < 100; ++i) {
        const RabiSystem r = random_system(rng, 0);
        const double t = rng.uniform(0, 10);
        const auto p = occupation_probabilities(r, t);
        EXPECT_GE(p.p_up_up, 0.0);
        EXPECT_GE(p.p_down_up, 0.0);
    }
}

TEST(Probabilities, SeamContinuity) {
    // Omega0 = 1e-4 on either side of the exceptional point
    for (double d : {0.5, 1.0, 2.0}) {
        const double w0 = 1e-4;
        const RabiSystem coh = RabiSystem::resonant(std::sqrt(d * d + w0 * w0), d, d);
        const RabiSystem inc = RabiSystem::resonant(std::sqrt(d * d - w0 * w0), d, d);
        // at delta = 2 the split falls inside the EP tolerance itself
        ASSERT_NE(regime(coh), Regime::Incoherent);
        ASSERT_NE(regime(inc), Regime::Coherent);
        for (int k = 0; k <= 40; ++k) {
            const double t = 4.0 / d * k / 40.0;
            const double env = std::exp(-d * t);
            const double a = 1.0 - 0.5 * d * t, b = 0.5 * d * t;
            for (const auto& r : {coh, inc}) {
                const auto p = occupation_probabilities(r, t);
                EXPECT_NEAR(p.p_up_up, env * a * a, 1e-6);
                EXPECT_NEAR(p.p_down_up, env * b * b, 1e-6);
            }
        }
    }
}

TEST(Regime, Examples) {
    EXPECT_EQ(regime(RabiSystem::resonant(2.0, 1.0, 1.0)), Regime::Coherent);
    EXPECT_EQ(regime(RabiSystem::resonant(1.0, 2.0, 2.0)), Regime::Incoherent);
    EXPECT_EQ(regime(RabiSystem::resonant(1.0, 1.0, 1.0)), Regime::ExceptionalPoint);
    EXPECT_EQ(regime(RabiSystem::resonant(1.0 + 1e-11, 1.0, 1.0)), Regime::ExceptionalPoint);
    // off resonance the sign of Re(W^2) decides
    RabiSystem r = RabiSystem::resonant(1.0, 2.0, 2.0);
    r.delta_detuning = 3.0;
    EXPECT_EQ(regime(r), Regime::Coherent);
}

TEST(PassageTime, Examples) {
    EXPECT_NEAR(rabi_passage_time(RabiSystem::resonant(2.0, 1.0, 1.0)).tau, 2.0 * pi / (3.0 * std::sqrt(3.0)), 1e-15);
    EXPECT_NEAR(rabi_passage_time(RabiSystem::resonant(1.5, 1.5, 1.5)).tau, 2.0 / 1.5, 1e-15);
    EXPECT_NEAR(rabi_passage_time(RabiSystem::resonant(1.0, 1e-10, 0.0)).tau, pi, 1e-9);
    EXPECT_NEAR(rabi_passage_time(RabiSystem::resonant(1.0, 0.0, 0.0)).tau, pi, 1e-15);
    RabiSystem off = RabiSystem::resonant(1.0, 0.5, 1.0);
    off.delta_detuning = 1.0;
    EXPECT_THROW(rabi_passage_time(off), error);
}

TEST(PassageTime, FirstRootOfDenseExponential) {
    // smallest positive root of Re C1(t), C1 = <up|exp(-i H_r t)|up>, real at resonance
    Rng rng(37);
    for (int i = 0; i < 20; ++i) {
        const double rho = rng.uniform(0.5, 3.0);
        const RabiSystem r = RabiSystem::resonant(rho, rho * rng.uniform(0.0, 0.95), rho);
        const auto h = rotating_frame_hamiltonian(r);
        auto c1 = [&](double t) { return testsupport::propagator(h, t)(0, 0).real(); };
        const double tau = rabi_passage_time(r).tau;
        const auto root = testsupport::first_sign_change(c1, 2.0 * tau, 4000);
        ASSERT_TRUE(root.has_value());
        EXPECT_NEAR(*root, tau, 1e-10 * std::max(1.0, tau)) << rho;
    }
}

TEST(PassageTime, OracleIntegration) {
    OracleOptions opt;
    opt.tol = 1e-12;
    for (const auto& r : {RabiSystem::resonant(2.0, 1.0, 1.0), RabiSystem::resonant(1.0, 2.0, 2.0),
                          RabiSystem::resonant(1.0, 1.0, 1.0), RabiSystem::resonant(1.0, 0.0, 0.0)}) {
        const auto o = rabi_passage_oracle(r, opt);
        EXPECT_LT(o.residual, 1e-6) << to_string(regime(r));
    }
    EXPECT_THROW(rabi_passage_oracle(RabiSystem::resonant(0.0, 1.0, 1.0)), error);
}
