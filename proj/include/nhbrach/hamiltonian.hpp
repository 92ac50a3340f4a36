// hamiltonian.hpp
// Effective two-level non-Hermitian Hamiltonians
//
//   H = (lambda0/2) 1 + (1/2) Omega . sigma,   Omega = (X, Y, Z) complex,
//
// their complex spherical chart (theta, phi, R), the split form
// Omega = r - i delta with real r, delta, the bi-orthogonal eigensystem and
// classification of eigenvalue coalescence (diabolic vs exceptional).
//
// Branch conventions: every square root and logarithm is principal. The chart
// uses cos(theta/2) = sqrt((R+Z)/2R), sin(theta/2) = sqrt((R-Z)/2R) and takes
// the square root of R^2 - Z^2 to be R sin(theta) = 2 R cos(theta/2) sin(theta/2),
// which makes the chart round trip exact.

#pragma once

#include "nhbrach/types.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>

namespace nhbrach {

struct EffectiveHamiltonian {
    cplx lambda0{};
    cplx x{};
    cplx y{};
    cplx z{};

    Vec3 omega_vec() const { return {x, y, z}; }

    /// R^2 = X^2 + Y^2 + Z^2.
    cplx omega_sq() const { return x * x + y * y + z * z; }

    /// R, principal square root of R^2.
    cplx omega() const { return std::sqrt(omega_sq()); }

    /// (lambda0/2) 1 + (1/2) Omega . sigma
    Mat2 matrix() const {
        return Mat2{{0.5 * (lambda0 + z), 0.5 * (x - I * y), 0.5 * (x + I * y), 0.5 * (lambda0 - z)}};
    }

    /// Inverse of matrix(): recovers (lambda0, X, Y, Z) from any 2x2 matrix.
    static EffectiveHamiltonian from_matrix(const Mat2& m) {
        return {m(0, 0) + m(1, 1), m(0, 1) + m(1, 0), I * (m(0, 1) - m(1, 0)), m(0, 0) - m(1, 1)};
    }

    /// Max-modulus of the Omega components.
    double omega_scale() const { return norm_inf(omega_vec()); }
};

/// Build H_eff from the four matrix elements <~i|H|i>, <~i|H|0>, <~0|H|i>, <~0|H|0>.
inline EffectiveHamiltonian build_effective(cplx h_ii, cplx h_i0, cplx h_0i, cplx h_00) {
    return {h_ii + h_00, h_i0 + h_0i, I * (h_i0 - h_0i), h_ii - h_00};
}

// ---------------------------------------------------------------------------
// Spherical chart

struct SphericalParams {
    cplx theta{};
    cplx phi{};
    cplx omega{};  // R
    cplx lambda0{};

    // Half-angle values the chart was built from; when constructed by hand
    // these are filled from theta by make_spherical().
    cplx cos_half{1.0};
    cplx sin_half{0.0};

    /// Set when R^2 - Z^2 vanishes: phi is undefined and fixed to 0.
    bool polar_axis = false;

    cplx cos_theta() const { return std::cos(theta); }
    cplx sin_theta() const { return std::sin(theta); }
};

inline SphericalParams make_spherical(cplx theta, cplx phi, cplx omega, cplx lambda0 = 0.0) {
    SphericalParams p;
    p.theta = theta;
    p.phi = phi;
    p.omega = omega;
    p.lambda0 = lambda0;
    p.cos_half = std::cos(0.5 * theta);
    p.sin_half = std::sin(0.5 * theta);
    return p;
}

/// Complex spherical coordinates of Omega. Throws DegenerateHamiltonian when
/// |R| <= tol * max(1, |Omega|_inf) (the chart needs R != 0).
inline SphericalParams to_spherical(const EffectiveHamiltonian& h, double rel_tol = 1e-9) {
    const double tol = rel_tol * std::max(1.0, h.omega_scale());
    const cplx r = h.omega();
    if (std::abs(r) <= tol)
        throw error(errc::degenerate_hamiltonian, "spherical chart undefined for R = 0");

    SphericalParams p;
    p.omega = r;
    p.lambda0 = h.lambda0;
    p.cos_half = std::sqrt((r + h.z) / (2.0 * r));
    p.sin_half = std::sqrt((r - h.z) / (2.0 * r));
    // theta/2 = -i log(cos + i sin); the pair satisfies c^2 + s^2 = 1 exactly.
    p.theta = 2.0 * (-I) * std::log(p.cos_half + I * p.sin_half);

    const cplx d = 2.0 * r * p.cos_half * p.sin_half;  // a square root of R^2 - Z^2
    if (std::abs(d) <= tol) {
        p.polar_axis = true;
        p.phi = 0.0;
    } else {
        p.phi = -I * std::log((h.x + I * h.y) / d);
    }
    return p;
}

/// X = R sin(theta) cos(phi), Y = R sin(theta) sin(phi), Z = R cos(theta).
inline EffectiveHamiltonian from_spherical(const SphericalParams& p) {
    const cplx st = std::sin(p.theta);
    return {p.lambda0, p.omega * st * std::cos(p.phi), p.omega * st * std::sin(p.phi),
            p.omega * std::cos(p.theta)};
}

// ---------------------------------------------------------------------------
// Split form Omega = r - i delta

struct SplitForm {
    RVec3 r_vec{};
    RVec3 delta_vec{};
    double gamma_angle = 0.0;  // angle between r and delta

    // Cylindrical coordinates of r about the delta axis (z-axis if delta = 0).
    double rho = 0.0;
    double z = 0.0;
    double phi_c = 0.0;
    double delta = 0.0;  // |delta_vec|
    RVec3 axis{0.0, 0.0, 1.0};

    /// rho^2 + z^2 - delta^2 - 2 i z delta
    cplx omega_sq_cylindrical() const {
        return cplx{rho * rho + z * z - delta * delta, -2.0 * z * delta};
    }
};

namespace detail {

// Orthonormal completion (e1, e2) of a unit vector e.
inline std::pair<RVec3, RVec3> complete_basis(const RVec3& e) {
    RVec3 seed = std::abs(e[0]) < 0.9 ? RVec3{1.0, 0.0, 0.0} : RVec3{0.0, 1.0, 0.0};
    const double proj = dot(seed, e);
    RVec3 e1{seed[0] - proj * e[0], seed[1] - proj * e[1], seed[2] - proj * e[2]};
    const double n1 = norm(e1);
    for (auto& c : e1) c /= n1;
    RVec3 e2{e[1] * e1[2] - e[2] * e1[1], e[2] * e1[0] - e[0] * e1[2], e[0] * e1[1] - e[1] * e1[0]};
    return {e1, e2};
}

}  // namespace detail

inline SplitForm split_form(const EffectiveHamiltonian& h) {
    SplitForm s;
    const Vec3 w = h.omega_vec();
    for (std::size_t k = 0; k < 3; ++k) {
        s.r_vec[k] = w[k].real();
        s.delta_vec[k] = -w[k].imag();
    }
    const double nr = norm(s.r_vec);
    const double nd = norm(s.delta_vec);
    s.delta = nd;
    if (nr > 0.0 && nd > 0.0) {
        const double c = std::clamp(dot(s.r_vec, s.delta_vec) / (nr * nd), -1.0, 1.0);
        s.gamma_angle = std::acos(c);
    }
    if (nd > 0.0) s.axis = {s.delta_vec[0] / nd, s.delta_vec[1] / nd, s.delta_vec[2] / nd};

    const auto [e1, e2] = detail::complete_basis(s.axis);
    s.z = dot(s.r_vec, s.axis);
    const double a = dot(s.r_vec, e1);
    const double b = dot(s.r_vec, e2);
    s.rho = std::hypot(a, b);
    s.phi_c = std::atan2(b, a);
    return s;
}

// ---------------------------------------------------------------------------
// Degeneracy

enum class Degeneracy { None, Diabolic, Exceptional };

inline const char* to_string(Degeneracy d) {
    switch (d) {
        case Degeneracy::None: return "None";
        case Degeneracy::Diabolic: return "Diabolic";
        case Degeneracy::Exceptional: return "Exceptional";
    }
    return "?";
}

/// Coalescence test on R^2: |R^2| <= tol * max(1, |Omega|_inf)^2. Rounding in
/// X^2 + Y^2 + Z^2 is O(eps * scale^2), so testing |R| itself would need
/// tol ~ sqrt(eps).
inline bool coalescent(const EffectiveHamiltonian& h, double tol) {
    const double s = std::max(1.0, h.omega_scale());
    return std::abs(h.omega_sq()) <= tol * s * s;
}

/// tol is relative to max(1, |Omega|_inf).
inline Degeneracy classify_degeneracy(const EffectiveHamiltonian& h, double tol = 1e-9) {
    if (!coalescent(h, tol)) return Degeneracy::None;
    const SplitForm s = split_form(h);
    const double scale = std::max(1.0, h.omega_scale());
    if (norm(s.r_vec) <= tol * scale && norm(s.delta_vec) <= tol * scale) return Degeneracy::Diabolic;
    return Degeneracy::Exceptional;
}

// ---------------------------------------------------------------------------
// Eigensystem

struct EigenSystem {
    cplx lambda_plus{};
    cplx lambda_minus{};
    Vec2 right_plus{};
    Vec2 right_minus{};
    Row2 left_plus{};
    Row2 left_minus{};
    Degeneracy degeneracy = Degeneracy::None;

    // Exceptional point only: u+ = e^{i kappa} u-, when it can be resolved.
    std::optional<cplx> kappa;
    bool kappa_ill_conditioned = false;
};

/// Eigenvalues (lambda0 +- R)/2 with the half-angle eigenvectors
///   u+ = (c, e^{i phi} s), u- = (-e^{-i phi} s, c),
///   ~u+ = (c, e^{-i phi} s), ~u- = (-e^{i phi} s, c),
/// bi-orthonormal away from coalescence. At an exceptional point the single
/// merged right/left pair is returned in both slots (unit Euclidean norm).
inline EigenSystem eigensystem(const EffectiveHamiltonian& h, double tol = 1e-9) {
    EigenSystem es;
    const cplx r = h.omega();
    es.lambda_plus = 0.5 * (h.lambda0 + r);
    es.lambda_minus = 0.5 * (h.lambda0 - r);
    es.degeneracy = classify_degeneracy(h, tol);

    if (es.degeneracy == Degeneracy::Diabolic) {
        es.right_plus = {1.0, 0.0};
        es.left_plus = {1.0, 0.0};
        es.right_minus = {0.0, 1.0};
        es.left_minus = {0.0, 1.0};
        return es;
    }

    auto half_angle_vectors = [&](const cplx& c, const cplx& s, const cplx& eip, const cplx& eim) {
        es.right_plus = {c, eip * s};
        es.left_plus = {c, eim * s};
        es.right_minus = {-eim * s, c};
        es.left_minus = {-eip * s, c};
    };

    if (es.degeneracy == Degeneracy::None) {
        const cplx c = std::sqrt((r + h.z) / (2.0 * r));
        const cplx s = std::sqrt((r - h.z) / (2.0 * r));
        const cplx d = 2.0 * r * c * s;
        if (std::abs(d) <= tol * std::max(1.0, h.omega_scale())) {
            // Polar axis: Omega parallel to z up to a null X +- iY part.
            // H - lambda0/2 = (1/2)[[Z, X-iY],[X+iY, -Z]] with R = +-Z.
            const cplx wm = h.x - I * h.y;
            const cplx wp = h.x + I * h.y;
            if (std::abs(r - h.z) <= std::abs(r + h.z)) {
                // lambda+ pairs with the |up> direction.
                es.right_plus = {1.0, wp / (r + h.z)};
                es.left_plus = {1.0, wm / (r + h.z)};
                es.right_minus = {-wm / (r + h.z), 1.0};
                es.left_minus = {-wp / (r + h.z), 1.0};
            } else {
                es.right_plus = {wm / (r - h.z), 1.0};
                es.left_plus = {wp / (r - h.z), 1.0};
                es.right_minus = {1.0, -wp / (r - h.z)};
                es.left_minus = {1.0, -wm / (r - h.z)};
            }
            // Rescale the left vectors so that <~u|u> = 1.
            const cplx np = pair(es.left_plus, es.right_plus);
            const cplx nm = pair(es.left_minus, es.right_minus);
            for (auto& x : es.left_plus) x /= np;
            for (auto& x : es.left_minus) x /= nm;
            return es;
        }
        half_angle_vectors(c, s, (h.x + I * h.y) / d, (h.x - I * h.y) / d);
        return es;
    }

    // Exceptional: H - lambda0/2 is nilpotent.
    const cplx wm = h.x - I * h.y;
    const cplx wp = h.x + I * h.y;
    Vec2 u = std::abs(wm) >= std::abs(wp) ? Vec2{wm, -h.z} : Vec2{h.z, wp};
    Row2 ut = std::abs(wm) >= std::abs(wp) ? Row2{h.z, wm} : Row2{wp, -h.z};
    const double nu = norm2(u);
    const double nut = norm2(ut);
    if (nu > 0.0)
        for (auto& x : u) x /= nu;
    if (nut > 0.0)
        for (auto& x : ut) x /= nut;
    es.right_plus = es.right_minus = u;
    es.left_plus = es.left_minus = ut;

    // kappa from the half-angle vectors of the (numerically) nearby
    // non-degenerate problem, when R does not vanish outright.
    if (std::abs(r) > 0.0) {
        const cplx c = std::sqrt((r + h.z) / (2.0 * r));
        const cplx s = std::sqrt((r - h.z) / (2.0 * r));
        const cplx d = 2.0 * r * c * s;
        if (std::abs(d) > 0.0 && std::isfinite(std::abs(c)) && std::isfinite(std::abs(s))) {
            const Vec2 up{c, (wp / d) * s};
            const Vec2 um{-(wm / d) * s, c};
            // e^{i kappa} = <u-, u+> / <u-, u-> (Hermitian projection)
            const cplx num = std::conj(um[0]) * up[0] + std::conj(um[1]) * up[1];
            const double den = std::norm(um[0]) + std::norm(um[1]);
            if (den > 0.0 && std::abs(num) > 0.0) {
                es.kappa = -I * std::log(num / den);
                es.kappa_ill_conditioned = std::abs(r) < 1e3 * tol * std::max(1.0, h.omega_scale());
            }
        }
    }
    return es;
}

// ---------------------------------------------------------------------------
// Flat key-value record: lambda0_re, lambda0_im, x_re, x_im, y_re, y_im, z_re, z_im

inline std::map<std::string, double> to_record(const EffectiveHamiltonian& h) {
    return {{"lambda0_re", h.lambda0.real()}, {"lambda0_im", h.lambda0.imag()},
            {"x_re", h.x.real()},             {"x_im", h.x.imag()},
            {"y_re", h.y.real()},             {"y_im", h.y.imag()},
            {"z_re", h.z.real()},             {"z_im", h.z.imag()}};
}

/// Missing keys read as zero.
inline EffectiveHamiltonian from_record(const std::map<std::string, double>& rec) {
    auto get = [&](const char* k) {
        const auto it = rec.find(k);
        return it == rec.end() ? 0.0 : it->second;
    };
    return {{get("lambda0_re"), get("lambda0_im")},
            {get("x_re"), get("x_im")},
            {get("y_re"), get("y_im")},
            {get("z_re"), get("z_im")}};
}

}  // namespace nhbrach
