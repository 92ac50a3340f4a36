// types.hpp
// Small fixed-size complex linear algebra and the library error type.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nhbrach {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

/// Column 2-vector (right state coefficients).
using Vec2 = std::array<cplx, 2>;
/// Row 2-vector (left state coefficients).
using Row2 = std::array<cplx, 2>;
/// Complex 3-vector (Bloch vector, Omega).
using Vec3 = std::array<cplx, 3>;
/// Real 3-vector.
using RVec3 = std::array<double, 3>;

/// Row-major 2x2 complex matrix.
struct Mat2 {
    std::array<cplx, 4> a{};

    cplx& operator()(int r, int c) { return a[static_cast<std::size_t>(2 * r + c)]; }
    const cplx& operator()(int r, int c) const { return a[static_cast<std::size_t>(2 * r + c)]; }

    static Mat2 identity() { return Mat2{{1.0, 0.0, 0.0, 1.0}}; }
};

inline Mat2 operator*(const Mat2& m, const Mat2& n) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r(i, j) = m(i, 0) * n(0, j) + m(i, 1) * n(1, j);
    return r;
}

inline Mat2 operator+(const Mat2& m, const Mat2& n) {
    Mat2 r;
    for (std::size_t k = 0; k < 4; ++k) r.a[k] = m.a[k] + n.a[k];
    return r;
}

inline Mat2 operator-(const Mat2& m, const Mat2& n) {
    Mat2 r;
    for (std::size_t k = 0; k < 4; ++k) r.a[k] = m.a[k] - n.a[k];
    return r;
}

inline Mat2 operator*(cplx s, const Mat2& m) {
    Mat2 r;
    for (std::size_t k = 0; k < 4; ++k) r.a[k] = s * m.a[k];
    return r;
}

inline Vec2 operator*(const Mat2& m, const Vec2& v) {
    return {m(0, 0) * v[0] + m(0, 1) * v[1], m(1, 0) * v[0] + m(1, 1) * v[1]};
}

/// Row vector times matrix.
inline Row2 left_mul(const Row2& w, const Mat2& m) {
    return {w[0] * m(0, 0) + w[1] * m(1, 0), w[0] * m(0, 1) + w[1] * m(1, 1)};
}

/// Bilinear pairing <w|v> = w0 v0 + w1 v1 (no conjugation).
inline cplx pair(const Row2& w, const Vec2& v) { return w[0] * v[0] + w[1] * v[1]; }

/// Bilinear dot product a.b (no conjugation).
inline cplx dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double norm_inf(const Mat2& m) {
    double r = 0.0;
    for (const auto& x : m.a) r = std::max(r, std::abs(x));
    return r;
}

template <std::size_t N>
double norm_inf(const std::array<cplx, N>& v) {
    double r = 0.0;
    for (const auto& x : v) r = std::max(r, std::abs(x));
    return r;
}

template <std::size_t N>
double norm2(const std::array<cplx, N>& v) {
    double r = 0.0;
    for (const auto& x : v) r += std::norm(x);
    return std::sqrt(r);
}

inline double dot(const RVec3& a, const RVec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const RVec3& a) { return std::sqrt(dot(a, a)); }

enum class errc {
    degenerate_hamiltonian,
    step_size_underflow,
    not_normalized,
    degenerate_target,
    singular_geometry,
    no_crossing,
    domain_error,
    invalid_config,
};

inline const char* to_string(errc e) {
    switch (e) {
        case errc::degenerate_hamiltonian: return "DegenerateHamiltonian";
        case errc::step_size_underflow: return "StepSizeUnderflow";
        case errc::not_normalized: return "NotNormalized";
        case errc::degenerate_target: return "DegenerateTarget";
        case errc::singular_geometry: return "SingularGeometry";
        case errc::no_crossing: return "NoCrossing";
        case errc::domain_error: return "DomainError";
        case errc::invalid_config: return "InvalidConfig";
    }
    return "Unknown";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

}  // namespace nhbrach
