// run.hpp
// Command execution for the CLI: compute, sweep, trajectory, verify, fig1-3.
// Exit codes: 0 ok, 1 invalid configuration, 2 numerical failure,
// 3 verification residual or figure assertion failed.

#pragma once

#include "nhbrach/config.hpp"
#include "nhbrach/csv.hpp"
#include "nhbrach/dissipative.hpp"
#include "nhbrach/figures.hpp"
#include "nhbrach/geometry.hpp"

#include <atomic>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

namespace nhbrach {

enum ExitCode : int { exit_ok = 0, exit_invalid = 1, exit_numerical = 2, exit_verification = 3 };

inline int exit_code_for(errc c) {
    switch (c) {
        case errc::invalid_config:
        case errc::domain_error:
        case errc::not_normalized:
        case errc::degenerate_target: return exit_invalid;
        default: return exit_numerical;
    }
}

/// Runs f(i) for i in [0, n) on up to `jobs` threads. Each index is visited
/// exactly once; results must be stored by index.
inline void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& f) {
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (jobs == 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned k = 0; k < jobs; ++k)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) f(i);
        });
    for (auto& t : pool) t.join();
}

// ---------------------------------------------------------------------------
// Oracle suite

struct OracleCase {
    std::string label;
    cplx theta;
    double omega_mag;
    BoundaryStates b;
    double tol;  // integrator tolerance
};

/// 50 cases: 20 Hermitian (real theta, alpha), 20 PT-symmetric
/// (theta = pi/2 + i eta, eta in [0, 3]) and 10 near the exceptional point
/// (|Omega| = Omega0 small, sinh(eta) = delta/Omega0).
inline std::vector<OracleCase> default_oracle_suite() {
    std::vector<OracleCase> out;
    const double thetas[] = {pi / 2, pi / 3, 2 * pi / 3, pi / 4, 3 * pi / 4};
    const double alphas[] = {pi / 2, pi, 2 * pi / 3, 1.0};
    for (double th : thetas)
        for (double a : alphas) out.push_back({"hermitian", th, 1.0, BoundaryStates::of(a, 0.3), 1e-11});
    for (int k = 0; k < 10; ++k) {
        const double eta = 3.0 * k / 9.0;
        out.push_back({"pt", cplx{pi / 2, eta}, 1.0, BoundaryStates::of(pi, 0.0), 1e-11});
        out.push_back({"pt", cplx{pi / 2, eta}, 2.0, BoundaryStates::of(pi / 2, 0.0), 1e-11});
    }
    for (double w0 : {1e-3, 1e-2})
        for (double d : {0.5, 1.0, 2.0, 3.0, 5.0})
            out.push_back({"near_ep", cplx{pi / 2, std::asinh(d / w0)}, w0, BoundaryStates::of(pi, 0.0), 1e-13});
    return out;
}

// ---------------------------------------------------------------------------

namespace detail {

struct CellOutcome {
    Row row;
    std::optional<std::string> failure;  // numerical failure description
};

inline std::string describe(const std::exception& e) {
    if (const auto* ne = dynamic_cast<const error*>(&e)) return std::string(to_string(ne->code())) + ": " + e.what();
    return e.what();
}

inline EffectiveHamiltonian hamiltonian_from(const RunConfig& c) {
    if (c.has("theta")) {
        return from_spherical(make_spherical(c.get_complex("theta"), c.get_complex("phi", 0.0),
                                             c.get_complex("omega", 1.0), c.get_complex("lambda0", 0.0)));
    }
    std::map<std::string, double> rec;
    for (const char* k : {"lambda0_re", "lambda0_im", "x_re", "x_im", "y_re", "y_im", "z_re", "z_im"})
        if (c.has(k)) rec[k] = c.get_real(k);
    EffectiveHamiltonian h = from_record(rec);
    if (c.has("lambda0")) h.lambda0 = c.get_complex("lambda0");
    if (c.has("x")) h.x = c.get_complex("x");
    if (c.has("y")) h.y = c.get_complex("y");
    if (c.has("z")) h.z = c.get_complex("z");
    return h;
}

inline int run_compute(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const std::string q = c.get_string("quantity", "tau_p");
    write_header(out, {"quantity", "value", "regime", "omega_arg", "diverged"});
    auto emit = [&](const PassageTimeResult& r) {
        write_row(out, {q, r.tau, to_string(r.regime), r.omega_arg, r.diverged ? 1 : 0});
        if (r.diverged) {
            err << "diverged: passage time is infinite for these parameters\n";
            return int(exit_numerical);
        }
        return int(exit_ok);
    };
    if (q == "tau_p") {
        if (c.has("z")) return emit(passage_time_general(c.get_complex("z"), c.get_complex("omega", 1.0)));
        return emit(evolution_time(pi, c.get_complex("theta"), std::abs(c.get_complex("omega", 1.0))));
    }
    if (q == "tau")
        return emit(evolution_time(c.get_complex("alpha", pi), c.get_complex("theta"),
                                   std::abs(c.get_complex("omega", 1.0))));
    if (q == "length") {
        const double l = brachistochrone_length(c.get_complex("alpha", pi), c.get_complex("theta"));
        write_row(out, {q, l, "Generic", 0.0, 0});
        return exit_ok;
    }
    if (q == "speed") {
        const EvolutionSpeed s = evolution_speed(c.get_complex("theta"), c.get_complex("omega", 1.0));
        write_row(out, {q, s.v / s.v_geodesic, "Generic", 0.0, 0});
        return exit_ok;
    }
    // regime of the resonant driven system
    const RabiSystem r = RabiSystem::resonant(c.get_real("rho"), c.get_real("delta"), c.get_real("lambda", 0.0));
    write_row(out, {q, r.rabi_frequency(), to_string(regime(r)), 0.0, 0});
    return exit_ok;
}

inline int run_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const std::string p1 = c.get_string("param1", ""), p2 = c.get_string("param2", "");
    const GridSpec g1 = c.get_grid("param1_grid"), g2 = c.get_grid("param2_grid");
    const bool oracle = c.get_real("oracle", 1.0) != 0.0;
    const double tol = c.tolerance(1e-10);
    OracleOptions oopt;
    oopt.tol = tol;

    const cplx alpha = c.get_complex("alpha", pi);
    const cplx beta = c.get_complex("beta", 0.0);
    const cplx omega = c.get_complex("omega", 1.0);
    const cplx lambda0 = c.get_complex("lambda0", 0.0);
    const bool incoherent = c.get_string("branch", "coherent") == "incoherent";
    const double nan = std::nan("");

    const std::size_t n = g1.count * g2.count;
    std::vector<CellOutcome> cells(n);

    parallel_for(n, c.jobs, [&](std::size_t idx) {
        const double a = g1.at(idx / g2.count);
        const double b = g2.at(idx % g2.count);
        CellOutcome& cell = cells[idx];
        PassageTimeResult r;
        double tn = nan;
        try {
            if (p1 == "re_theta") {
                const cplx theta{a, b};
                r = evolution_time(alpha, theta, std::abs(omega));
                if (oracle && !r.diverged)
                    tn = verify_against_oracle(make_spherical(theta, 0.0, std::abs(omega), lambda0),
                                               BoundaryStates::of(alpha, beta), oopt)
                             .tau_numeric;
            } else if (p1 == "re_z") {
                const cplx z{a, b};
                r = passage_time_general(z, omega);
                if (oracle && !r.diverged) {
                    const cplx theta = std::acos(z / omega);
                    tn = verify_against_oracle(make_spherical(theta, 0.0, std::abs(omega), lambda0),
                                               BoundaryStates::of(pi, beta), oopt)
                             .tau_numeric;
                }
            } else {
                // (omega0, delta) for the resonant driven system
                if (incoherent && !(a < b)) {
                    cell.row = {a, b, nan, nan, nan, "Incoherent", 0};
                    return;
                }
                const double rho = incoherent ? std::sqrt((b - a) * (b + a)) : std::hypot(a, b);
                const RabiSystem sys = RabiSystem::resonant(rho, b, 0.0);
                r = rabi_passage_time(sys);
                if (oracle) tn = rabi_passage_oracle(sys, oopt).tau_numeric;
            }
            const double res = std::isfinite(tn) ? std::abs(r.tau - tn) : nan;
            cell.row = {a, b, r.tau, r.diverged ? std::numeric_limits<double>::infinity() : tn, res,
                        to_string(r.regime), r.diverged ? 1 : 0};
        } catch (const std::exception& e) {
            cell.row = {a, b, r.tau, nan, nan, to_string(r.regime), r.diverged ? 1 : 0};
            cell.failure = describe(e);
        }
    });

    write_header(out, {"param1", "param2", "tau_closed", "tau_numeric", "residual", "regime", "diverged"});
    int code = exit_ok;
    for (std::size_t i = 0; i < n; ++i) {
        write_row(out, cells[i].row);
        if (cells[i].failure) {
            err << "row " << i + 1 << " (" << p1 << "=" << cells[i].row[0].text << ", " << p2 << "="
                << cells[i].row[1].text << "): " << *cells[i].failure << "\n";
            code = exit_numerical;
        }
    }
    return code;
}

inline int run_trajectory(const RunConfig& c, std::ostream& out) {
    const EffectiveHamiltonian h = hamiltonian_from(c);
    const double t_end = c.get_real("t_end");
    const auto steps = static_cast<std::size_t>(c.get_real("steps", 200.0));
    AdjointStatePair s0;
    s0.u = {c.get_complex("u1", 1.0), c.get_complex("u2", 0.0)};
    s0.u_tilde = {c.get_complex("ut1", 1.0), c.get_complex("ut2", 0.0)};
    if (std::abs(s0.pseudo_norm() - 1.0) > normalization_tolerance)
        throw error(errc::not_normalized, "initial pair must satisfy <~u|u> = 1");
    const Trajectory tr = sample_trajectory(h, s0, t_end, steps, c.tolerance(1e-12));

    write_header(out, {"t", "u1_re", "u1_im", "u2_re", "u2_im", "ut1_re", "ut1_im", "ut2_re", "ut2_im", "n1_re",
                       "n1_im", "n2_re", "n2_im", "n3_re", "n3_im"});
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const auto& s = tr.states[i];
        // the pseudo-norm is conserved by the flow, so n is always defined here
        const BlochVector n = bloch_vector(s);
        write_row(out, {tr.times[i], s.u[0].real(), s.u[0].imag(), s.u[1].real(), s.u[1].imag(), s.u_tilde[0].real(),
                        s.u_tilde[0].imag(), s.u_tilde[1].real(), s.u_tilde[1].imag(), n.n1.real(), n.n1.imag(),
                        n.n2.real(), n.n2.imag(), n.n3.real(), n.n3.imag()});
    }
    return exit_ok;
}

inline int run_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const double limit = c.get_real("residual_tol", 1e-6);
    const std::vector<OracleCase> suite = default_oracle_suite();
    std::vector<CellOutcome> cells(suite.size());
    std::vector<double> residuals(suite.size(), std::nan(""));

    parallel_for(suite.size(), c.jobs, [&](std::size_t i) {
        const OracleCase& oc = suite[i];
        OracleOptions opt;
        opt.tol = c.tol ? *c.tol : oc.tol;
        try {
            const OracleResult r = verify_against_oracle(make_spherical(oc.theta, 0.0, oc.omega_mag), oc.b, opt);
            residuals[i] = r.residual;
            cells[i].row = {i + 1, oc.label, oc.theta.real(), oc.theta.imag(), oc.b.alpha.real(), oc.omega_mag,
                            r.tau_closed, r.tau_numeric, r.residual};
        } catch (const std::exception& e) {
            cells[i].row = {i + 1, oc.label, oc.theta.real(), oc.theta.imag(), oc.b.alpha.real(), oc.omega_mag,
                            std::nan(""), std::nan(""), std::nan("")};
            cells[i].failure = describe(e);
        }
    });

    write_header(out, {"case", "label", "theta_re", "theta_im", "alpha", "omega_mag", "tau_closed", "tau_numeric",
                       "residual"});
    int code = exit_ok;
    for (std::size_t i = 0; i < suite.size(); ++i) {
        write_row(out, cells[i].row);
        if (cells[i].failure) {
            err << "case " << i + 1 << ": " << *cells[i].failure << "\n";
            code = exit_numerical;
        } else if (!(residuals[i] < limit) && code == exit_ok) {
            code = exit_verification;
        }
    }
    for (std::size_t i = 0; i < suite.size(); ++i)
        if (!cells[i].failure && !(residuals[i] < limit))
            err << "case " << i + 1 << ": residual " << format_real(residuals[i]) << " exceeds "
                << format_real(limit) << "\n";
    return code;
}

inline int report(const FigureCheck& chk, const char* name, std::ostream& err) {
    if (chk.ok()) return exit_ok;
    err << name << ": " << chk.failures.size() << " of " << chk.checked << " assertions failed\n";
    for (std::size_t i = 0; i < std::min<std::size_t>(chk.failures.size(), 10); ++i)
        err << "  " << chk.failures[i] << "\n";
    return exit_verification;
}

inline int run_fig1(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto cells = fig1_data(fig1_panels(static_cast<std::size_t>(c.get_real("n", 41.0))));
    write_fig1(out, cells);
    return report(check_fig1(cells), "fig1", err);
}

inline int run_fig2(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto rows = fig2_data(c.get_grid("delta_grid", fig2_grid()));
    write_fig2(out, rows);
    return report(check_fig2(rows), "fig2", err);
}

inline int run_fig3(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto [re0, im0] = fig3_grids();
    const auto cells = fig3_data(c.get_grid("re_theta_grid", re0), c.get_grid("im_theta_grid", im0));
    write_fig3(out, cells);
    return report(check_fig3(cells), "fig3", err);
}

}  // namespace detail

/// Validates and executes cfg. CSV goes to cfg.output_path when set, else to
/// `out`; diagnostics go to `err`.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    try {
        validate(cfg);
    } catch (const error& e) {
        err << "invalid configuration: " << e.what() << "\n";
        return exit_invalid;
    }

    std::ostringstream buf;
    int code = exit_ok;
    try {
        switch (cfg.command) {
            case Command::Compute: code = detail::run_compute(cfg, buf, err); break;
            case Command::Sweep: code = detail::run_sweep(cfg, buf, err); break;
            case Command::Trajectory: code = detail::run_trajectory(cfg, buf); break;
            case Command::Verify: code = detail::run_verify(cfg, buf, err); break;
            case Command::Fig1: code = detail::run_fig1(cfg, buf, err); break;
            case Command::Fig2: code = detail::run_fig2(cfg, buf, err); break;
            case Command::Fig3: code = detail::run_fig3(cfg, buf, err); break;
        }
    } catch (const error& e) {
        err << to_string(e.code()) << ": " << e.what() << "\n";
        return exit_code_for(e.code());
    }

    if (cfg.output_path.empty()) {
        out << buf.str();
    } else {
        std::ofstream f(cfg.output_path, std::ios::binary);
        if (!f) {
            err << "cannot write " << cfg.output_path << "\n";
            return exit_invalid;
        }
        f << buf.str();
        if (cfg.command == Command::Compute) out << buf.str();
    }
    return code;
}

}  // namespace nhbrach
