// figures.hpp
// Data behind the three figures (passage-time surface over complex Z, the
// coherent/incoherent passage-time curves with their bounds, and the speed
// surface over complex theta) together with the numeric checks each data set
// must satisfy.

#pragma once

#include "nhbrach/config.hpp"
#include "nhbrach/csv.hpp"
#include "nhbrach/geometry.hpp"

#include <limits>
#include <string>
#include <vector>

namespace nhbrach {

/// Result of the numeric assertions on a figure data set.
struct FigureCheck {
    std::vector<std::string> failures;
    std::size_t checked = 0;

    bool ok() const { return failures.empty(); }
    void expect(bool cond, const std::string& what) {
        ++checked;
        if (!cond) failures.push_back(what);
    }
};

// ---------------------------------------------------------------------------
// fig1: tau_p(Re Z, Im Z) for two complex Omega

struct Fig1Cell {
    cplx omega;
    cplx z;
    PassageTimeResult r;
};

struct Fig1Panel {
    cplx omega;
    GridSpec re_z;
    GridSpec im_z;
};

/// Panels Omega = 1 + 0.1i and 1 + 10i. Both grids hit Z = 0 and Z = +-Omega.
inline std::vector<Fig1Panel> fig1_panels(std::size_t n = 41) {
    // n = 40 m + 1 puts grid points on multiples of 0.1 (panel 1) and 1 (panel 2)
    return {{cplx{1.0, 0.1}, {-2.0, 2.0, n}, {-2.0, 2.0, n}}, {cplx{1.0, 10.0}, {-2.0, 2.0, n}, {-20.0, 20.0, n}}};
}

inline std::vector<Fig1Cell> fig1_data(const std::vector<Fig1Panel>& panels) {
    std::vector<Fig1Cell> out;
    for (const auto& p : panels)
        for (std::size_t i = 0; i < p.re_z.count; ++i)
            for (std::size_t j = 0; j < p.im_z.count; ++j) {
                const cplx z{p.re_z.at(i), p.im_z.at(j)};
                out.push_back({p.omega, z, passage_time_general(z, p.omega)});
            }
    return out;
}

inline void write_fig1(std::ostream& out, const std::vector<Fig1Cell>& cells) {
    write_header(out, {"omega_re", "omega_im", "z_re", "z_im", "tau_p", "diverged"});
    for (const auto& c : cells)
        write_row(out, {c.omega.real(), c.omega.imag(), c.z.real(), c.z.imag(), c.r.tau, c.r.diverged ? 1 : 0});
}

/// Saddle value pi/|Omega| at Z = 0, Diverged exactly at Z = +-Omega and
/// nowhere else, tau_p -> 0 far from the origin.
inline FigureCheck check_fig1(const std::vector<Fig1Cell>& cells) {
    FigureCheck chk;
    std::size_t saddles = 0, poles = 0;
    for (const auto& c : cells) {
        const double scale = std::abs(c.omega);
        const bool at_pole = std::abs(c.z - c.omega) <= 1e-12 * scale || std::abs(c.z + c.omega) <= 1e-12 * scale;
        if (std::abs(c.z) == 0.0) {
            ++saddles;
            chk.expect(!c.r.diverged && std::abs(c.r.tau - pi / scale) <= 1e-12,
                       "saddle value pi/|Omega| at Z = 0, Omega = " + format_real(c.omega.imag()) + "i");
        }
        if (at_pole) {
            ++poles;
            chk.expect(c.r.diverged && std::isinf(c.r.tau), "Diverged flag at Z = +-Omega");
        } else {
            chk.expect(!c.r.diverged && std::isfinite(c.r.tau) && c.r.tau > 0.0,
                       "finite positive tau_p at Z = " + format_real(c.z.real()) + "+" + format_real(c.z.imag()) + "j");
        }
    }
    chk.expect(saddles == 2, "grid contains Z = 0 in both panels");
    chk.expect(poles == 4, "grid contains Z = +-Omega in both panels");
    // large |Z|: tau_p -> 0
    for (cplx w : {cplx{1.0, 0.1}, cplx{1.0, 10.0}}) {
        const double far = passage_time_general(cplx{1e6, 0.0}, w).tau;
        chk.expect(far < 3e-6, "tau_p -> 0 as |Z| -> inf");
    }
    return chk;
}

// ---------------------------------------------------------------------------
// fig2: passage time vs delta at Omega0 = 1

struct Fig2Row {
    double delta;
    double tau_coherent;
    double tau_incoherent;  // nan where Omega0 >= delta
    double bound_lower;     // 2/sqrt(Omega0^2 + delta^2)
    double bound_2_over_delta;
};

inline GridSpec fig2_grid(std::size_t n = 1000) { return {0.01, 100.0, n}; }

inline std::vector<Fig2Row> fig2_data(const GridSpec& g, double omega0 = 1.0) {
    std::vector<Fig2Row> out;
    out.reserve(g.count);
    for (std::size_t i = 0; i < g.count; ++i) {
        const double d = g.at(i);
        const double tc = passage_time_coherent(omega0, d).tau;
        const double ti = omega0 < d ? passage_time_incoherent(omega0, d).tau : std::nan("");
        out.push_back({d, tc, ti, 2.0 / std::hypot(omega0, d), 2.0 / d});
    }
    return out;
}

inline void write_fig2(std::ostream& out, const std::vector<Fig2Row>& rows) {
    write_header(out, {"delta", "tau_coherent", "tau_incoherent", "bound_lower", "bound_2_over_delta"});
    for (const auto& r : rows) write_row(out, {r.delta, r.tau_coherent, r.tau_incoherent, r.bound_lower, r.bound_2_over_delta});
}

/// Strict bounds on both branches and the common asymptote 2/delta.
inline FigureCheck check_fig2(const std::vector<Fig2Row>& rows, double omega0 = 1.0) {
    FigureCheck chk;
    for (const auto& r : rows) {
        chk.expect(r.bound_lower < r.tau_coherent && r.tau_coherent < std::min(pi / omega0, r.bound_2_over_delta),
                   "coherent bounds at delta = " + format_real(r.delta));
        if (r.delta > omega0)
            chk.expect(r.tau_incoherent > r.bound_2_over_delta, "incoherent bound at delta = " + format_real(r.delta));
        else
            chk.expect(std::isnan(r.tau_incoherent), "incoherent branch undefined at delta = " + format_real(r.delta));
    }
    if (!rows.empty()) {
        const auto& last = rows.back();
        const double rel_c = std::abs(last.tau_coherent - last.bound_2_over_delta) / last.bound_2_over_delta;
        const double rel_i = std::abs(last.tau_incoherent - last.bound_2_over_delta) / last.bound_2_over_delta;
        chk.expect(rel_c < 1e-3 && rel_i < 1e-3, "both branches approach 2/delta");
        // the relative gap shrinks monotonically with delta on the incoherent side
        double prev = std::numeric_limits<double>::infinity();
        bool mono = true;
        for (const auto& r : rows) {
            if (!(r.delta > omega0)) continue;
            const double gap = (r.tau_incoherent - r.bound_2_over_delta) / r.bound_2_over_delta;
            if (!(gap < prev)) mono = false;
            prev = gap;
        }
        chk.expect(mono, "incoherent gap to 2/delta decreases with delta");
        // small-delta end of the coherent branch is close to the Hermitian value pi/Omega0
        chk.expect(std::abs(rows.front().tau_coherent - pi / omega0) < 0.05, "coherent branch -> pi/Omega0");
    }
    return chk;
}

// ---------------------------------------------------------------------------
// fig3: |v|/|Omega| = |sin theta| over (Re theta, Im theta)

struct Fig3Cell {
    double re_theta;
    double im_theta;
    double v_over_vg;
};

inline std::pair<GridSpec, GridSpec> fig3_grids(std::size_t n = 101) { return {{0.0, pi, n}, {-2.0, 2.0, n}}; }

inline std::vector<Fig3Cell> fig3_data(const GridSpec& re, const GridSpec& im) {
    std::vector<Fig3Cell> out;
    out.reserve(re.count * im.count);
    for (std::size_t i = 0; i < re.count; ++i)
        for (std::size_t j = 0; j < im.count; ++j) {
            const double x = re.at(i), y = im.at(j);
            const EvolutionSpeed s = evolution_speed(cplx{x, y}, 1.0);
            out.push_back({x, y, s.v / s.v_geodesic});
        }
    return out;
}

inline void write_fig3(std::ostream& out, const std::vector<Fig3Cell>& cells) {
    write_header(out, {"re_theta", "im_theta", "v_over_vg"});
    for (const auto& c : cells) write_row(out, {c.re_theta, c.im_theta, c.v_over_vg});
}

/// v >= v_g beyond the threshold |Im theta0| = arsinh|cos Re theta|, equality
/// on the threshold curve, v <= v_g on the real axis.
inline FigureCheck check_fig3(const std::vector<Fig3Cell>& cells) {
    FigureCheck chk;
    std::size_t above = 0;
    for (const auto& c : cells) {
        const double y0 = speed_threshold(c.re_theta);
        if (std::abs(c.im_theta) >= y0) {
            ++above;
            chk.expect(c.v_over_vg >= 1.0 - 1e-12, "v >= v_g beyond threshold at (" + format_real(c.re_theta) + ", " +
                                                       format_real(c.im_theta) + ")");
        }
        if (c.im_theta == 0.0) chk.expect(c.v_over_vg <= 1.0 + 1e-15, "v <= v_g for real theta");
        // threshold curve itself
        const double on = evolution_speed(cplx{c.re_theta, y0}, 1.0).v;
        chk.expect(std::abs(on - 1.0) <= 1e-12, "v = v_g on the threshold curve at Re theta = " + format_real(c.re_theta));
    }
    chk.expect(above > 0, "grid reaches beyond the threshold curve");
    return chk;
}

}  // namespace nhbrach
