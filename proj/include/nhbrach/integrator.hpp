// integrator.hpp
// Adaptive Dormand-Prince 5(4) integrator for complex linear systems
// dy/dt = f(t, y), y in C^N. Used as the independent numerical oracle for
// every closed-form evolution formula in the library.

#pragma once

#include "nhbrach/types.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace nhbrach {

struct IntegratorOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-10;
    double growth_limit = 1e12;  // abort once any |y_k| exceeds this
    double min_step = 1e-14;     // relative to max(1, |t|)
    std::size_t max_steps = 5'000'000;
};

/// Stateful stepper: keeps the last accepted step size between calls so that
/// a trajectory can be advanced sample by sample.
template <std::size_t N, class Rhs>
class Dopri5 {
public:
    using State = std::array<cplx, N>;

    Dopri5(Rhs rhs, double t0, const State& y0, IntegratorOptions opt = {})
        : rhs_(std::move(rhs)), t_(t0), y_(y0), opt_(opt) {}

    double time() const { return t_; }
    const State& state() const { return y_; }
    std::size_t steps() const { return accepted_; }

    /// Integrate up to t_end (>= time()). Throws StepSizeUnderflow when the
    /// controller cannot meet the tolerance or the solution blows up.
    const State& advance_to(double t_end) {
        if (t_end < t_) throw error(errc::domain_error, "integration backwards in time");
        if (t_end == t_) return y_;
        if (h_ <= 0.0) h_ = initial_step(t_end - t_);

        State k1 = rhs_(t_, y_);
        while (t_ < t_end) {
            if (accepted_ + rejected_ > opt_.max_steps)
                throw error(errc::step_size_underflow, "step budget exhausted");
            double h = std::min(h_, t_end - t_);
            const bool last = (h == t_end - t_);

            State y5, err, k7;
            step(h, k1, y5, err, k7);

            double e = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                const double sc = opt_.abs_tol + opt_.rel_tol * std::max(std::abs(y_[i]), std::abs(y5[i]));
                e = std::max(e, std::abs(err[i]) / sc);
            }
            if (!std::isfinite(e)) e = 1e10;

            if (e <= 1.0) {
                t_ = last ? t_end : t_ + h;
                y_ = y5;
                k1 = k7;  // FSAL
                ++accepted_;
                if (norm_inf(y_) > opt_.growth_limit)
                    throw error(errc::step_size_underflow, "solution exceeded the growth limit");
                const double fac = e == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(e, -0.2), 0.2, 5.0);
                // Keep the unclipped step for the next call when the last step was shortened.
                if (!last || h == h_) h_ = h * fac;
            } else {
                ++rejected_;
                h_ = h * std::clamp(0.9 * std::pow(e, -0.2), 0.1, 0.9);
                if (h_ < opt_.min_step * std::max(1.0, std::abs(t_)))
                    throw error(errc::step_size_underflow, "step size below minimum");
            }
        }
        return y_;
    }

private:
    double initial_step(double span) {
        const State f0 = rhs_(t_, y_);
        const double d0 = norm_inf(y_);
        const double d1 = norm_inf(f0);
        double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h = std::min(h, span);
        return std::max(h, 1e-12 * std::max(1.0, span));
    }

    void step(double h, const State& k1, State& y5, State& err, State& k7) {
        // Dormand-Prince coefficients.
        constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        constexpr double a21 = 1.0 / 5;
        constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                         a54 = -212.0 / 729;
        constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                         a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                         b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                         e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

        State tmp;
        auto combo = [&](auto&&... terms) {
            for (std::size_t i = 0; i < N; ++i) tmp[i] = y_[i] + h * (... + (terms.first * terms.second[i]));
            return tmp;
        };
        using P = std::pair<double, const State&>;

        const State k2 = rhs_(t_ + c2 * h, combo(P{a21, k1}));
        const State k3 = rhs_(t_ + c3 * h, combo(P{a31, k1}, P{a32, k2}));
        const State k4 = rhs_(t_ + c4 * h, combo(P{a41, k1}, P{a42, k2}, P{a43, k3}));
        const State k5 = rhs_(t_ + c5 * h, combo(P{a51, k1}, P{a52, k2}, P{a53, k3}, P{a54, k4}));
        const State k6 =
            rhs_(t_ + h, combo(P{a61, k1}, P{a62, k2}, P{a63, k3}, P{a64, k4}, P{a65, k5}));
        y5 = combo(P{b1, k1}, P{b3, k3}, P{b4, k4}, P{b5, k5}, P{b6, k6});
        k7 = rhs_(t_ + h, y5);
        for (std::size_t i = 0; i < N; ++i)
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }

    Rhs rhs_;
    double t_;
    State y_;
    IntegratorOptions opt_;
    double h_ = 0.0;
    std::size_t accepted_ = 0;
    std::size_t rejected_ = 0;
};

template <std::size_t N, class Rhs>
Dopri5<N, Rhs> make_dopri5(Rhs rhs, double t0, const std::array<cplx, N>& y0, IntegratorOptions opt = {}) {
    return Dopri5<N, Rhs>(std::move(rhs), t0, y0, opt);
}

}  // namespace nhbrach
