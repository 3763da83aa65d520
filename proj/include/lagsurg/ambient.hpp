#pragma once
// CP^2 and CP^1 x CP^1 with the normalizations used throughout: the symplectic
// area of a projective line is 3 (CP^2) resp. 2 (each CP^1 factor).
//
// Everything is chart-based. A chart fixes one homogeneous coordinate per
// factor to 1; the remaining coordinates, in ascending index order, are the
// chart coordinates (z in C^2). The Fubini-Study form comes from the Kahler
// potential (A/pi) log(1+|z|^2) per factor, giving in real coordinates
//   omega(u, v) = -Im( sum_jk h_jk u_j conj(v_k) ),
//   h_jk = (A/pi) (delta_jk / rho - conj(z_j) z_k / rho^2),  rho = 1 + |z|^2.
// A chart also carries an exact Darboux map
//   Z = sqrt(A/pi) z / sqrt(1 + |z|^2)      (per factor),
// a symplectomorphism onto the flat ball of capacity A that fixes all real
// rays through the origin. The local moment sum there is exactly pi |Z|^2.

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "quadrature.hpp"

namespace lagsurg {

enum class SpaceKind { CP2, CP1xCP1 };

struct AmbientSpace {
    SpaceKind kind;
    double line_area;  // 3 for CP2, 2 for each CP1 factor

    static AmbientSpace cp2() { return {SpaceKind::CP2, 3.0}; }
    static AmbientSpace cp1xcp1() { return {SpaceKind::CP1xCP1, 2.0}; }

    int factors() const { return kind == SpaceKind::CP2 ? 1 : 2; }
};

/// Homogeneous coordinates: 3 entries for CP2, 2+2 for CP1xCP1 (unused slots
/// ignored per kind). Tuples equal up to per-factor complex scale represent
/// the same point.
struct HomogeneousPoint {
    SpaceKind kind;
    std::array<cplx, 4> z{};  // CP2: z[0..2]; product: factor0 = z[0..1], factor1 = z[2..3]

    static HomogeneousPoint cp2(cplx z0, cplx z1, cplx z2) {
        return {SpaceKind::CP2, {z0, z1, z2, 0.0}};
    }
    static HomogeneousPoint product(cplx z0, cplx z1, cplx w0, cplx w1) {
        return {SpaceKind::CP1xCP1, {z0, z1, w0, w1}};
    }
};

/// Which homogeneous coordinate is set to 1 (per factor for the product).
struct ChartId {
    SpaceKind kind;
    int pivot0 = 2;  // CP2: index in {0,1,2}; product: factor-0 pivot in {0,1}
    int pivot1 = 0;  // product only: factor-1 pivot in {0,1}

    bool operator==(const ChartId& o) const {
        return kind == o.kind && pivot0 == o.pivot0 && (kind == SpaceKind::CP2 || pivot1 == o.pivot1);
    }
};

struct ChartPoint {
    ChartId chart;
    C2 z;  // chart coordinates
};

namespace detail {
inline std::array<int, 2> cp2_free_indices(int pivot) {
    switch (pivot) {
        case 0: return {1, 2};
        case 1: return {0, 2};
        default: return {0, 1};
    }
}
}  // namespace detail

inline HomogeneousPoint chart_embed(const ChartPoint& p) {
    if (p.chart.kind == SpaceKind::CP2) {
        std::array<cplx, 4> h{};
        auto free = detail::cp2_free_indices(p.chart.pivot0);
        h[p.chart.pivot0] = 1.0;
        h[free[0]] = p.z[0];
        h[free[1]] = p.z[1];
        return {SpaceKind::CP2, h};
    }
    std::array<cplx, 4> h{};
    h[p.chart.pivot0] = 1.0;
    h[1 - p.chart.pivot0] = p.z[0];
    h[2 + p.chart.pivot1] = 1.0;
    h[2 + (1 - p.chart.pivot1)] = p.z[1];
    return {SpaceKind::CP1xCP1, h};
}

inline ChartPoint chart_project(const HomogeneousPoint& h, const ChartId& c) {
    constexpr double kPivotTol = 0.0;  // exact zero pivots rejected; relative check below
    if (c.kind == SpaceKind::CP2) {
        cplx piv = h.z[c.pivot0];
        double scale = norm(C3{h.z[0], h.z[1], h.z[2]});
        if (std::abs(piv) <= kPivotTol * scale || piv == cplx(0.0))
            throw ProjectionOutsideChart("pivot coordinate vanishes");
        auto free = detail::cp2_free_indices(c.pivot0);
        return {c, {h.z[free[0]] / piv, h.z[free[1]] / piv}};
    }
    cplx p0 = h.z[c.pivot0], p1 = h.z[2 + c.pivot1];
    if (p0 == cplx(0.0) || p1 == cplx(0.0))
        throw ProjectionOutsideChart("pivot coordinate vanishes");
    return {c, {h.z[1 - c.pivot0] / p0, h.z[2 + (1 - c.pivot1)] / p1}};
}

/// Moment map in the paper's normalization; image is the side-3 triangle for
/// CP2 and the side-2 square for the product.
inline std::array<double, 2> moment_map(const HomogeneousPoint& h) {
    if (h.kind == SpaceKind::CP2) {
        double s = std::norm(h.z[0]) + std::norm(h.z[1]) + std::norm(h.z[2]);
        return {3.0 * std::norm(h.z[0]) / s, 3.0 * std::norm(h.z[1]) / s};
    }
    double s0 = std::norm(h.z[0]) + std::norm(h.z[1]);
    double s1 = std::norm(h.z[2]) + std::norm(h.z[3]);
    return {2.0 * std::norm(h.z[0]) / s0, 2.0 * std::norm(h.z[2]) / s1};
}

/// Fubini-Study chordal distance; for the product, the l2 combination of the
/// per-factor distances. Scale-invariant per factor.
inline double proj_distance(const HomogeneousPoint& a, const HomogeneousPoint& b) {
    // Cancellation-free: 1 - cos^2 = |x ^ y|^2 / (|x|^2 |y|^2), then
    // d^2 = 2(1 - cos) = 2 w / (1 + sqrt(1 - w)) with w = 1 - cos^2.
    auto factor_dist2 = [](const cplx* x, const cplx* y, int n) {
        double nx = 0, ny = 0, wedge = 0;
        for (int i = 0; i < n; ++i) {
            nx += std::norm(x[i]);
            ny += std::norm(y[i]);
            for (int j = i + 1; j < n; ++j) wedge += std::norm(x[i] * y[j] - x[j] * y[i]);
        }
        double w = wedge / (nx * ny);
        if (w > 1.0) w = 1.0;
        return 2.0 * w / (1.0 + std::sqrt(std::max(0.0, 1.0 - w)));
    };
    if (a.kind == SpaceKind::CP2) return std::sqrt(factor_dist2(a.z.data(), b.z.data(), 3));
    return std::sqrt(factor_dist2(a.z.data(), b.z.data(), 2) +
                     factor_dist2(a.z.data() + 2, b.z.data() + 2, 2));
}

inline bool proj_equal(const HomogeneousPoint& a, const HomogeneousPoint& b, double tol = 1e-12) {
    return proj_distance(a, b) <= tol;
}

// ---------------------------------------------------------------------------
// Chart-local differential forms.

/// The 2x2 complex Hermitian coefficient matrix h_jk of omega at a chart point.
inline std::array<std::array<cplx, 2>, 2> fs_hermitian(const AmbientSpace& sp, const ChartPoint& p) {
    double A = sp.line_area;
    std::array<std::array<cplx, 2>, 2> h{};
    if (sp.kind == SpaceKind::CP2) {
        double rho = 1.0 + std::norm(p.z[0]) + std::norm(p.z[1]);
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                cplx v = (j == k ? cplx(1.0 / rho) : cplx(0.0));
                v -= std::conj(p.z[j]) * p.z[k] / (rho * rho);
                h[j][k] = (A / PI) * v;
            }
    } else {
        for (int j = 0; j < 2; ++j) {
            double rho = 1.0 + std::norm(p.z[j]);
            h[j][j] = (A / PI) / (rho * rho);
        }
    }
    return h;
}

/// omega(u, v) at a chart point, u and v real tangent vectors in C^2.
inline double fubini_study(const AmbientSpace& sp, const ChartPoint& p, const C2& u, const C2& v) {
    auto h = fs_hermitian(sp, p);
    cplx s = 0.0;
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) s += h[j][k] * u[j] * std::conj(v[k]);
    return -std::imag(s);
}

/// The 4x4 real antisymmetric matrix of omega in coordinates (x0,y0,x1,y1).
inline std::array<std::array<double, 4>, 4> fubini_study_matrix(const AmbientSpace& sp,
                                                                const ChartPoint& p) {
    const C2 basis[4] = {{cplx(1, 0), 0}, {cplx(0, 1), 0}, {0, cplx(1, 0)}, {0, cplx(0, 1)}};
    std::array<std::array<double, 4>, 4> m{};
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
            double w = fubini_study(sp, p, basis[a], basis[b]);
            m[a][b] = w;
            m[b][a] = -w;
        }
    return m;
}

/// Operator norm of omega at p (largest singular value of the 4x4 matrix),
/// in closed form from the Frobenius norm and the Pfaffian.
inline double fs_operator_norm(const AmbientSpace& sp, const ChartPoint& p) {
    auto m = fubini_study_matrix(sp, p);
    double fro2 = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) fro2 += m[a][b] * m[a][b];
    double pf = m[0][1] * m[2][3] - m[0][2] * m[1][3] + m[0][3] * m[1][2];
    double S = fro2 / 2.0, P = std::abs(pf);
    double disc = std::max(0.0, S * S - 4.0 * P * P);
    return std::sqrt((S + std::sqrt(disc)) / 2.0);
}

/// A primitive lambda of omega: lambda(u) = (1/2) Im(sum_j g_j u_j) with
/// g_j = (A/pi) conj(z_j)/rho per factor. d lambda = omega (verified by tests
/// through finite differences rather than trusted).
inline double primitive(const AmbientSpace& sp, const ChartPoint& p, const C2& u) {
    double A = sp.line_area;
    cplx s = 0.0;
    if (sp.kind == SpaceKind::CP2) {
        double rho = 1.0 + std::norm(p.z[0]) + std::norm(p.z[1]);
        for (int j = 0; j < 2; ++j) s += (A / PI) * std::conj(p.z[j]) / rho * u[j];
    } else {
        for (int j = 0; j < 2; ++j) {
            double rho = 1.0 + std::norm(p.z[j]);
            s += (A / PI) * std::conj(p.z[j]) / rho * u[j];
        }
    }
    return 0.5 * std::imag(s);
}

/// Finite-difference exterior derivative of a chart 1-form alpha at p in the
/// plane (u, v):  d alpha (u,v) ~ D_u[alpha(.)(v)] - D_v[alpha(.)(u)].
template <class OneFormFn>
double fd_exterior_derivative(OneFormFn&& alpha, const ChartPoint& p, const C2& u, const C2& v,
                              double h = 1e-6) {
    auto shift = [&](const C2& dir, double t) {
        ChartPoint q = p;
        q.z = q.z + t * dir;
        return q;
    };
    double da = (alpha(shift(u, h), v) - alpha(shift(u, -h), v)) / (2 * h);
    double db = (alpha(shift(v, h), u) - alpha(shift(v, -h), u)) / (2 * h);
    return da - db;
}

/// Quadrature of omega over a coordinate projective line {z_coord = 0}
/// (of factor `factor` for the product); reproduces line_area. The line is
/// parametrized in a chart, compactified by r = tan(psi).
inline double line_area_quadrature(const AmbientSpace& sp, int factor, int coord,
                                   int panels = 24, int order = 12) {
    ChartId chart{sp.kind, 0, 0};
    int slot;  // chart coordinate slot that sweeps the line
    if (sp.kind == SpaceKind::CP2) {
        chart.pivot0 = (coord + 1) % 3;
        auto free = detail::cp2_free_indices(chart.pivot0);
        slot = (free[0] == coord) ? 1 : 0;
    } else {
        chart.pivot0 = factor == 0 ? 1 - coord : 0;
        chart.pivot1 = factor == 1 ? 1 - coord : 0;
        slot = 1 - factor;
    }
    C2 dir{0.0, 0.0}, idir{0.0, 0.0};
    dir[size_t(slot)] = 1.0;
    idir[size_t(slot)] = cplx(0, 1);
    auto f = [&](double psi, double phi) {
        double r = std::tan(psi);
        C2 z{0.0, 0.0};
        z[size_t(slot)] = std::polar(r, phi);
        ChartPoint p{chart, z};
        double sec2 = 1.0 + r * r;
        return fubini_study(sp, p, dir, idir) * r * sec2;
    };
    return integrate_2d(f, 0.0, PI / 2 - 1e-12, 0.0, TWO_PI, panels, order);
}

// ---------------------------------------------------------------------------
// Exact Darboux coordinates per chart.

/// Chart -> flat ball of capacity A (per factor). Fixes arguments, hence all
/// real-linear subspaces through the origin.
inline C2 darboux_fwd(const AmbientSpace& sp, const C2& z) {
    double A = sp.line_area;
    if (sp.kind == SpaceKind::CP2) {
        double f = std::sqrt(A / PI) / std::sqrt(1.0 + std::norm(z[0]) + std::norm(z[1]));
        return {f * z[0], f * z[1]};
    }
    C2 out;
    for (int j = 0; j < 2; ++j)
        out[j] = std::sqrt(A / PI) / std::sqrt(1.0 + std::norm(z[j])) * z[j];
    return out;
}

inline C2 darboux_inv(const AmbientSpace& sp, const C2& Z) {
    double cap = sp.line_area / PI;
    if (sp.kind == SpaceKind::CP2) {
        double s = std::norm(Z[0]) + std::norm(Z[1]);
        if (s >= cap) throw ChartOverflow("point outside the Darboux ball");
        double f = 1.0 / std::sqrt(cap - s);
        return {f * Z[0], f * Z[1]};
    }
    C2 out;
    for (int j = 0; j < 2; ++j) {
        double s = std::norm(Z[j]);
        if (s >= cap) throw ChartOverflow("point outside the Darboux ball");
        out[j] = Z[j] / std::sqrt(cap - s);
    }
    return out;
}

/// Differential of darboux_inv at Z applied to a real tangent vector V.
inline C2 darboux_inv_jacobian(const AmbientSpace& sp, const C2& Z, const C2& V) {
    double cap = sp.line_area / PI;
    if (sp.kind == SpaceKind::CP2) {
        double s = std::norm(Z[0]) + std::norm(Z[1]);
        double g = 1.0 / std::sqrt(cap - s);
        double gp = 0.5 * g / (cap - s);  // d/ds (cap-s)^(-1/2)
        double ds = 2.0 * std::real(std::conj(Z[0]) * V[0] + std::conj(Z[1]) * V[1]);
        return {g * V[0] + gp * ds * Z[0], g * V[1] + gp * ds * Z[1]};
    }
    C2 out;
    for (int j = 0; j < 2; ++j) {
        double s = std::norm(Z[j]);
        double g = 1.0 / std::sqrt(cap - s);
        double gp = 0.5 * g / (cap - s);
        double ds = 2.0 * std::real(std::conj(Z[j]) * V[j]);
        out[j] = g * V[j] + gp * ds * Z[j];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Action-angle coordinates.

/// x in the open moment polytope interior (moment units), theta in R/2piZ.
struct ActionAngleCoords {
    std::array<double, 2> x;
    std::array<double, 2> theta;
};

/// The torus fiber over x, with the angle origin chosen so the real part sits
/// over theta in {pi/2, 3pi/2} (the convention behind the eight-preimage
/// formula). With 2pi-periodic angles, omega = (1/2pi) sum dx_j ^ dtheta_j.
inline HomogeneousPoint from_action_angle(const AmbientSpace& sp, const ActionAngleCoords& aa) {
    auto phase = [](double th) { return std::polar(1.0, th - PI / 2.0); };
    if (sp.kind == SpaceKind::CP2) {
        double x1 = aa.x[0], x2 = aa.x[1];
        if (!(x1 > 0 && x2 > 0 && x1 + x2 < 3.0))
            throw OutsidePolytopeInterior("action outside the open triangle");
        return HomogeneousPoint::cp2(std::sqrt(x1) * phase(aa.theta[0]),
                                     std::sqrt(x2) * phase(aa.theta[1]),
                                     std::sqrt(3.0 - x1 - x2));
    }
    double x1 = aa.x[0], x2 = aa.x[1];
    if (!(x1 > 0 && x1 < 2.0 && x2 > 0 && x2 < 2.0))
        throw OutsidePolytopeInterior("action outside the open square");
    return HomogeneousPoint::product(std::sqrt(x1) * phase(aa.theta[0]), std::sqrt(2.0 - x1),
                                     std::sqrt(x2) * phase(aa.theta[1]), std::sqrt(2.0 - x2));
}

/// Holomorphic chart transition Jacobian applied to a tangent vector, exact.
/// The transition is a ratio of affine coordinate functions: each homogeneous
/// slot is 1, z0 or z1 in the source chart, so w_i = N_i/P differentiates in
/// closed form.
inline C2 transition_tangent(const ChartPoint& p, const ChartId& to, const C2& u) {
    HomogeneousPoint hp = chart_embed(p);
    // dh[slot] = derivative of the homogeneous slot as a function of source coords.
    std::array<cplx, 4> dh{};
    if (p.chart.kind == SpaceKind::CP2) {
        auto free = detail::cp2_free_indices(p.chart.pivot0);
        dh[free[0]] = u[0];
        dh[free[1]] = u[1];
    } else {
        dh[1 - p.chart.pivot0] = u[0];
        dh[2 + (1 - p.chart.pivot1)] = u[1];
    }
    auto quot = [&](int num, int den) {
        cplx P = hp.z[den];
        if (P == cplx(0.0)) throw ProjectionOutsideChart("transition pivot vanishes");
        return (dh[num] * P - hp.z[num] * dh[den]) / (P * P);
    };
    if (to.kind == SpaceKind::CP2) {
        auto free = detail::cp2_free_indices(to.pivot0);
        return {quot(free[0], to.pivot0), quot(free[1], to.pivot0)};
    }
    return {quot(1 - to.pivot0, to.pivot0), quot(2 + (1 - to.pivot1), 2 + to.pivot1)};
}

}  // namespace lagsurg
