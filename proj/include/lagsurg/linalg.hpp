#pragma once
// Small fixed-size complex linear algebra used throughout the toolkit.
// Points of C^2 double as R^4 vectors via (Re z0, Im z0, Re z1, Im z1).

#include <array>
#include <cmath>
#include <complex>

namespace lagsurg {

using cplx = std::complex<double>;
using C2 = std::array<cplx, 2>;
using C3 = std::array<cplx, 3>;

inline constexpr double PI = 3.14159265358979323846;
inline constexpr double TWO_PI = 2.0 * PI;

inline C2 operator+(const C2& a, const C2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline C2 operator-(const C2& a, const C2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline C2 operator*(cplx s, const C2& a) { return {s * a[0], s * a[1]}; }
inline C2 operator*(double s, const C2& a) { return {s * a[0], s * a[1]}; }

/// Real inner product on C^2 = R^4.
inline double dot_re(const C2& a, const C2& b) {
    return std::real(std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1]);
}
inline double norm2(const C2& a) { return dot_re(a, a); }
inline double norm(const C2& a) { return std::sqrt(norm2(a)); }

/// Hermitian inner product, conjugate-linear in the first slot.
inline cplx dot_herm(const C2& a, const C2& b) {
    return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
}

inline double norm(const C3& a) {
    return std::sqrt(std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]));
}

/// 2x2 complex matrix, column-major storage: columns are frame vectors.
struct M2c {
    C2 col0, col1;
    cplx det() const { return col0[0] * col1[1] - col0[1] * col1[0]; }
};

/// Gram-Schmidt with respect to the real inner product Re<.,.>.
/// For a Lagrangian plane the resulting column matrix is unitary.
inline M2c orthonormalize_re(const C2& v1, const C2& v2) {
    C2 u1 = (1.0 / norm(v1)) * v1;
    C2 w = v2 - dot_re(v2, u1) * u1;
    C2 u2 = (1.0 / norm(w)) * w;
    return {u1, u2};
}

/// Deviation of M from unitarity, max-abs entry of M^dagger M - I.
inline double unitary_defect(const M2c& m) {
    cplx g00 = dot_herm(m.col0, m.col0) - 1.0;
    cplx g01 = dot_herm(m.col0, m.col1);
    cplx g11 = dot_herm(m.col1, m.col1) - 1.0;
    return std::max({std::abs(g00), std::abs(g01), std::abs(g11)});
}

/// Principal-branch angle in (-pi, pi].
inline double wrap_angle(double a) {
    a = std::fmod(a, TWO_PI);
    if (a <= -PI) a += TWO_PI;
    if (a > PI) a -= TWO_PI;
    return a;
}

}  // namespace lagsurg
