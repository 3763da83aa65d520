#pragma once
// Every named Lagrangian of the study as an explicit atlas: the three
// reference tori, the real parts, the surgered surfaces K#Sigma_2 (CP^2),
// K#Sigma_4 (CP^1 x CP^1, two variants), the product torus from bundle
// surgery, and Theta_surg. Plus the eight-preimage utility, delta tuning,
// chopped-polytope data and the rho_Ch invariance check.

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ambient.hpp"
#include "bundle.hpp"
#include "errors.hpp"
#include "gamma.hpp"
#include "handle.hpp"
#include "profile.hpp"
#include "quadrature.hpp"
#include "surfaces.hpp"

namespace lagsurg {

enum class ConstructionId {
    Clifford,
    ChekanovSchlenk,
    ModifiedChekanov,
    RealCP2,
    RealProduct,
    KSigma2,
    KSigma4_seam,
    KSigma4_delta,
    ProductTorus41,
    ThetaSurg,
};

inline const char* construction_name(ConstructionId id) {
    switch (id) {
        case ConstructionId::Clifford: return "clifford";
        case ConstructionId::ChekanovSchlenk: return "chekanov-schlenk";
        case ConstructionId::ModifiedChekanov: return "modified-chekanov";
        case ConstructionId::RealCP2: return "real-cp2";
        case ConstructionId::RealProduct: return "real-product";
        case ConstructionId::KSigma2: return "k-sigma2";
        case ConstructionId::KSigma4_seam: return "k-sigma4-seam";
        case ConstructionId::KSigma4_delta: return "k-sigma4-delta";
        case ConstructionId::ProductTorus41: return "product-torus";
        case ConstructionId::ThetaSurg: return "theta-surg";
    }
    return "?";
}

inline std::optional<ConstructionId> parse_construction(const std::string& s) {
    for (ConstructionId id :
         {ConstructionId::Clifford, ConstructionId::ChekanovSchlenk, ConstructionId::ModifiedChekanov,
          ConstructionId::RealCP2, ConstructionId::RealProduct, ConstructionId::KSigma2,
          ConstructionId::KSigma4_seam, ConstructionId::KSigma4_delta, ConstructionId::ProductTorus41,
          ConstructionId::ThetaSurg})
        if (s == construction_name(id)) return id;
    return std::nullopt;
}

struct ConstructionParams {
    GammaCurve gamma = GammaCurve::standard();
    double eps1 = std::exp(-5.0);
    double T = 4.0;
    double lambda = 0.05;
    double eps = 0.05;
    double collar = 0.5;
    double delta = std::nan("");  // surgery-angle offset; NaN = closed-form default

    HandleSpec handle(double theta0, double theta1) const {
        HandleSpec s{theta0, theta1, eps1, T, lambda, eps, collar};
        return s;
    }
};

/// One half-plane of the chopped polytope: n . mu >= c.
struct PolytopeCut {
    double nx, ny, c;
};

struct SurgerySite {
    ChartId chart;
    HandleSpec spec;
};

struct Construction {
    ConstructionId id;
    ConstructionParams params;
    LagrangianAtlas atlas;
    int expected_euler = 0;
    bool expected_orientable = false;
    bool closed_surface = true;
    std::vector<PolytopeCut> cuts;  // beyond the ambient polytope
    std::vector<std::pair<CoordLine, int>> seam_expectations;
    std::vector<SurgerySite> sites;
    std::vector<CircleBundleSpec> bundles;
    double a_eps = 0.0;   // measured per-factor handle area (when surgeries exist)
    double delta = 0.0;   // angle offset actually used
};

// ===========================================================================
// detail: geometry helpers for the real-part atlases
// ===========================================================================

namespace detail {

using V3 = std::array<double, 3>;

inline V3 operator+(const V3& a, const V3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline V3 operator-(const V3& a, const V3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline V3 operator*(double s, const V3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const V3& a, const V3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double vnorm(const V3& a) { return std::sqrt(dot(a, a)); }

using A2v = std::array<double, 2>;
inline A2v operator+(const A2v& a, const A2v& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline A2v operator-(const A2v& a, const A2v& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline A2v operator*(double s, const A2v& a) { return {s * a[0], s * a[1]}; }

/// A parametrized curve with derivative, on [0,1].
template <class V>
struct CurveT {
    std::function<V(double)> f;
    std::function<V(double)> df;
};
using Curve3 = CurveT<V3>;
using Curve2 = CurveT<std::array<double, 2>>;

inline Curve3 slerp(const V3& A, const V3& B) {
    double c = std::clamp(dot(A, B) / (vnorm(A) * vnorm(B)), -1.0, 1.0);
    double om = std::acos(c);
    return {[=](double s) {
                double d = std::sin(om);
                return (1.0 / d) * (std::sin((1 - s) * om) * A + std::sin(s * om) * B);
            },
            [=](double s) {
                double d = std::sin(om);
                return (om / d) * ((-std::cos((1 - s) * om)) * A + std::cos(s * om) * B);
            }};
}

/// Cap-circle arc of colatitude psi around axis k, eta affine over [eta0,eta1];
/// the eta convention matches the axis-k chart (chart coords tan(psi) e^{i eta}).
inline Curve3 cap_arc(int axis, double psi, double eta0, double eta1) {
    int i = axis == 0 ? 1 : 0;
    int j = axis == 2 ? 1 : 2;
    double cp = std::cos(psi), sp = std::sin(psi);
    return {[=](double s) {
                double eta = eta0 + (eta1 - eta0) * s;
                V3 p{};
                p[size_t(axis)] = cp;
                p[size_t(i)] = sp * std::cos(eta);
                p[size_t(j)] = sp * std::sin(eta);
                return p;
            },
            [=](double s) {
                double eta = eta0 + (eta1 - eta0) * s, de = eta1 - eta0;
                V3 p{};
                p[size_t(i)] = -sp * std::sin(eta) * de;
                p[size_t(j)] = sp * std::cos(eta) * de;
                return p;
            }};
}

/// Coons blend of four boundary curves (bottom P0->P1, right P1->P2,
/// top P3->P2, left P0->P3), with derivative.
template <class V>
struct CoonsPatch {
    CurveT<V> cb, cr, ct, cl;
    V P0, P1, P2, P3;

    V eval(double u, double v) const {
        V r = (1 - v) * cb.f(u) + v * ct.f(u) + (1 - u) * cl.f(v) + u * cr.f(v);
        V bil = ((1 - u) * (1 - v)) * P0 + (u * (1 - v)) * P1 + (u * v) * P2 + ((1 - u) * v) * P3;
        return r - bil;
    }
    V du(double u, double v) const {
        V r = (1 - v) * cb.df(u) + v * ct.df(u) + (-1.0) * cl.f(v) + cr.f(v);
        V bil = (-(1 - v)) * P0 + (1 - v) * P1 + v * P2 + (-v) * P3;
        return r - bil;
    }
    V dv(double u, double v) const {
        V r = (-1.0) * cb.f(u) + ct.f(u) + (1 - u) * cl.df(v) + u * cr.df(v);
        V bil = (-(1 - u)) * P0 + (-u) * P1 + u * P2 + (1 - u) * P3;
        return r - bil;
    }
};

template <class V>
inline CoonsPatch<V> coons(const CurveT<V>& cb, const CurveT<V>& cr, const CurveT<V>& ct,
                           const CurveT<V>& cl) {
    return {cb, cr, ct, cl, cb.f(0.0), cb.f(1.0), ct.f(1.0), ct.f(0.0)};
}

/// Sphere-octant quad -> chart patch: normalize the Coons blend to the unit
/// sphere, read off the pivot chart coordinates, apply per-coordinate phases
/// (identity for the real part, the ambient isotopy phases for the L1 copy).
inline Patch sphere_quad_patch(const CoonsPatch<V3>& q, const std::array<double, 3>& sign_flips,
                               int pivot, cplx phase0, cplx phase1, std::string name) {
    auto free = cp2_free_indices(pivot);
    int i = free[0], j = free[1];
    Patch p;
    p.name = std::move(name);
    p.chart = ChartId{SpaceKind::CP2, pivot, 0};
    auto N_of = [q, sign_flips](double u, double v) {
        V3 b = q.eval(u, v);
        V3 m{sign_flips[0] * b[0], sign_flips[1] * b[1], sign_flips[2] * b[2]};
        return (1.0 / vnorm(m)) * m;
    };
    p.f = [N_of, i, j, pivot, phase0, phase1](double u, double v) {
        V3 n = N_of(u, v);
        return C2{phase0 * (n[size_t(i)] / n[size_t(pivot)]),
                  phase1 * (n[size_t(j)] / n[size_t(pivot)])};
    };
    p.df = [q, sign_flips, i, j, pivot, phase0, phase1](double u, double v) {
        V3 b = q.eval(u, v), bu = q.du(u, v), bv = q.dv(u, v);
        for (int k = 0; k < 3; ++k) {
            b[size_t(k)] *= sign_flips[size_t(k)];
            bu[size_t(k)] *= sign_flips[size_t(k)];
            bv[size_t(k)] *= sign_flips[size_t(k)];
        }
        double nb = vnorm(b);
        V3 n = (1.0 / nb) * b;
        auto dnormalize = [&](const V3& db) { return (1.0 / nb) * (db - dot(n, db) * n); };
        V3 nu = dnormalize(bu), nv = dnormalize(bv);
        auto dquot = [&](const V3& dn) {
            double P = n[size_t(pivot)], dP = dn[size_t(pivot)];
            return C2{phase0 * ((dn[size_t(i)] * P - n[size_t(i)] * dP) / (P * P)),
                      phase1 * ((dn[size_t(j)] * P - n[size_t(j)] * dP) / (P * P))};
        };
        return std::array<C2, 2>{dquot(nu), dquot(nv)};
    };
    return p;
}

/// Build the 6 quads of one trimmed octant of S^2 (the (+++) model, then sign
/// flipped into octant sigma). psi[k] is the trim colatitude at axis k.
/// Phases apply to the chart coordinates per pivot (L1 copies).
inline void append_octant_quads(std::vector<Patch>& out, const std::array<double, 3>& sigma,
                                const std::array<double, 3>& psi,
                                const std::array<cplx, 3>& hom_phase, bool twin,
                                const std::string& tag) {
    double p0 = psi[0], p1 = psi[1], p2 = psi[2];
    const double s2 = std::sqrt(0.5), s3 = std::sqrt(1.0 / 3.0);
    V3 C{s3, s3, s3};
    V3 M01{s2, s2, 0}, M02{s2, 0, s2}, M12{0, s2, s2};
    V3 H1{std::cos(p0), std::sin(p0), 0}, H2{std::cos(p0), 0, std::sin(p0)};
    V3 H3{std::sin(p2), 0, std::cos(p2)}, H4{0, std::sin(p2), std::cos(p2)};
    V3 H5{0, std::cos(p1), std::sin(p1)}, H6{std::sin(p1), std::cos(p1), 0};
    double q = PI / 4;
    V3 q0m = cap_arc(0, p0, 0, PI / 2).f(0.5), q1m = cap_arc(1, p1, PI / 2, 0).f(0.5),
       q2m = cap_arc(2, p2, 0, PI / 2).f(0.5);
    (void)q;

    auto rev = [](const Curve3& c) {
        return Curve3{[c](double s) { return c.f(1 - s); },
                      [c](double s) { return (-1.0) * c.df(1 - s); }};
    };

    struct QuadSpec {
        CoonsPatch<V3> cp;
        int pivot;
        const char* name;
    };
    std::vector<QuadSpec> quads;
    // piece 0 (x0 maximal)
    quads.push_back({coons(slerp(C, M01), slerp(M01, H1), rev(cap_arc(0, p0, 0, q)), slerp(C, q0m)),
                     0, "p0a"});
    quads.push_back({coons(slerp(C, q0m), cap_arc(0, p0, q, PI / 2), slerp(M02, H2), slerp(C, M02)),
                     0, "p0b"});
    // piece 1 (x1 maximal); cap1 runs eta pi/2 -> 0 from H5 to H6
    quads.push_back({coons(slerp(C, M12), slerp(M12, H5), rev(cap_arc(1, p1, PI / 2, q)), slerp(C, q1m)),
                     1, "p1a"});
    quads.push_back({coons(slerp(C, q1m), cap_arc(1, p1, q, 0), slerp(M01, H6), slerp(C, M01)),
                     1, "p1b"});
    // piece 2 (x2 maximal)
    quads.push_back({coons(slerp(C, M02), slerp(M02, H3), rev(cap_arc(2, p2, 0, q)), slerp(C, q2m)),
                     2, "p2a"});
    quads.push_back({coons(slerp(C, q2m), cap_arc(2, p2, q, PI / 2), slerp(M12, H4), slerp(C, M12)),
                     2, "p2b"});

    for (auto& qs : quads) {
        auto free = cp2_free_indices(qs.pivot);
        cplx ph0 = hom_phase[size_t(free[0])] / hom_phase[size_t(qs.pivot)];
        cplx ph1 = hom_phase[size_t(free[1])] / hom_phase[size_t(qs.pivot)];
        Patch p = sphere_quad_patch(qs.cp, sigma, qs.pivot, ph0, ph1, tag + "-" + qs.name);
        p.deck_twin = twin;
        out.push_back(std::move(p));
    }
}

/// All 8 octants (double cover) with deck records appended; `phase` are the
/// per-homogeneous-coordinate phases of the copy (1,1,1 for the real part).
inline void append_real_cp2_sheets(LagrangianAtlas& atlas, const std::array<double, 3>& psi,
                                   const std::array<cplx, 3>& hom_phase, const std::string& tag) {
    std::vector<std::array<double, 3>> primary = {
        {1, 1, 1}, {1, 1, -1}, {1, -1, 1}, {-1, 1, 1}};
    for (const auto& sigma : primary) {
        int base = int(atlas.patches.size());
        append_octant_quads(atlas.patches, sigma, psi, hom_phase, false,
                            tag + "+o" + std::to_string(base));
        std::array<double, 3> anti{-sigma[0], -sigma[1], -sigma[2]};
        int twin = int(atlas.patches.size());
        append_octant_quads(atlas.patches, anti, psi, hom_phase, true,
                            tag + "-o" + std::to_string(base));
        for (int k = 0; k < 6; ++k) atlas.deck.push_back({base + k, twin + k, false, false});
    }
}

}  // namespace detail

// ===========================================================================
// Simple constructions
// ===========================================================================

namespace detail {

inline Construction build_clifford(const ConstructionParams& par) {
    Construction c;
    c.id = ConstructionId::Clifford;
    c.params = par;
    c.atlas.space = AmbientSpace::cp2();
    c.atlas.label = "clifford";
    Patch p;
    p.name = "clifford";
    p.chart = ChartId{SpaceKind::CP2, 2, 0};
    p.u_range = {0, TWO_PI};
    p.v_range = {0, TWO_PI};
    p.f = [](double a, double b) { return C2{std::polar(1.0, a), std::polar(1.0, b)}; };
    p.df = [](double a, double b) {
        return std::array<C2, 2>{C2{cplx(0, 1) * std::polar(1.0, a), 0.0},
                                 C2{0.0, cplx(0, 1) * std::polar(1.0, b)}};
    };
    c.atlas.patches.push_back(std::move(p));
    c.expected_euler = 0;
    c.expected_orientable = true;
    return c;
}

inline Construction build_cs_torus(const ConstructionParams& par, bool modified) {
    Construction c;
    c.id = modified ? ConstructionId::ModifiedChekanov : ConstructionId::ChekanovSchlenk;
    c.params = par;
    c.atlas.space = AmbientSpace::cp2();
    c.atlas.label = construction_name(c.id);
    GammaCurve g = par.gamma;
    Patch p;
    p.name = c.atlas.label;
    p.chart = ChartId{SpaceKind::CP2, 2, 0};
    p.u_range = {0, TWO_PI};  // theta
    p.v_range = {0, TWO_PI};  // s
    auto w_of = [g](double s) {
        double r = g.rho(s);
        return std::sqrt(3.0 / PI - r * r);
    };
    if (modified) {
        p.f = [g, w_of](double th, double s) {
            cplx ga = g.eval(s);
            double w = w_of(s);
            return C2{std::cos(th) * ga / w, std::sin(th) * ga / w};
        };
        p.df = [g, w_of](double th, double s) {
            cplx ga = g.eval(s), dga = g.deriv(s);
            double w = w_of(s);
            double dw = -g.rho(s) * g.drho(s) / w;
            cplx dsq = (dga * w - ga * dw) / (w * w);
            return std::array<C2, 2>{C2{-std::sin(th) * ga / w, std::cos(th) * ga / w},
                                     C2{std::cos(th) * dsq, std::sin(th) * dsq}};
        };
    } else {
        const double r2 = std::sqrt(0.5);
        p.f = [g, w_of, r2](double th, double s) {
            cplx ga = g.eval(s);
            double w = w_of(s);
            return C2{r2 * ga * std::polar(1.0, th) / w, r2 * ga * std::polar(1.0, -th) / w};
        };
        p.df = [g, w_of, r2](double th, double s) {
            cplx ga = g.eval(s), dga = g.deriv(s);
            double w = w_of(s);
            double dw = -g.rho(s) * g.drho(s) / w;
            cplx dsq = (dga * w - ga * dw) / (w * w);
            cplx ep = std::polar(1.0, th), em = std::polar(1.0, -th);
            return std::array<C2, 2>{
                C2{r2 * ga * cplx(0, 1) * ep / w, r2 * ga * cplx(0, -1) * em / w},
                C2{r2 * dsq * ep, r2 * dsq * em}};
        };
    }
    c.atlas.patches.push_back(std::move(p));
    c.expected_euler = 0;
    c.expected_orientable = true;
    for (int k = 0; k < 3; ++k) c.seam_expectations.push_back({CoordLine{0, k}, 0});
    return c;
}

inline Construction build_real_cp2(const ConstructionParams& par) {
    Construction c;
    c.id = ConstructionId::RealCP2;
    c.params = par;
    c.atlas.space = AmbientSpace::cp2();
    c.atlas.label = "real-cp2";
    // Cube-face double cover with the antipodal deck identification.
    for (int axis = 0; axis < 3; ++axis) {
        for (int sign = 0; sign < 2; ++sign) {
            Patch p;
            p.name = "face" + std::to_string(axis) + (sign ? "-" : "+");
            p.chart = ChartId{SpaceKind::CP2, axis, 0};
            p.u_range = {-1, 1};
            p.v_range = {-1, 1};
            double s = sign ? -1.0 : 1.0;
            p.f = [s](double u, double v) { return C2{s * u, s * v}; };
            p.df = [s](double, double) {
                return std::array<C2, 2>{C2{s, 0.0}, C2{0.0, s}};
            };
            p.deck_twin = sign == 1;
            c.atlas.patches.push_back(std::move(p));
        }
        c.atlas.deck.push_back({2 * axis, 2 * axis + 1, true, true});
    }
    c.expected_euler = 1;
    c.expected_orientable = false;
    return c;
}

inline Construction build_real_product(const ConstructionParams& par) {
    Construction c;
    c.id = ConstructionId::RealProduct;
    c.params = par;
    c.atlas.space = AmbientSpace::cp1xcp1();
    c.atlas.label = "real-product";
    // (a, b) in RP^1 x RP^1; four pivot-safe half-by-half patches.
    for (int ia = 0; ia < 2; ++ia)
        for (int ib = 0; ib < 2; ++ib) {
            Patch p;
            p.name = "rp-" + std::to_string(ia) + std::to_string(ib);
            int pa = ia == 0 ? 0 : 1, pb = ib == 0 ? 0 : 1;
            p.chart = ChartId{SpaceKind::CP1xCP1, pa, pb};
            p.u_range = {ia == 0 ? -PI / 4 : PI / 4, ia == 0 ? PI / 4 : 3 * PI / 4};
            p.v_range = {ib == 0 ? -PI / 4 : PI / 4, ib == 0 ? PI / 4 : 3 * PI / 4};
            p.f = [pa, pb](double a, double b) {
                double ca = pa == 0 ? std::tan(a) : 1.0 / std::tan(a);
                double cb = pb == 0 ? std::tan(b) : 1.0 / std::tan(b);
                return C2{ca, cb};
            };
            p.df = [pa, pb](double a, double b) {
                double da = pa == 0 ? 1.0 / std::pow(std::cos(a), 2) : -1.0 / std::pow(std::sin(a), 2);
                double db = pb == 0 ? 1.0 / std::pow(std::cos(b), 2) : -1.0 / std::pow(std::sin(b), 2);
                return std::array<C2, 2>{C2{da, 0.0}, C2{0.0, db}};
            };
            c.atlas.patches.push_back(std::move(p));
        }
    c.expected_euler = 0;
    c.expected_orientable = true;
    return c;
}

// ===========================================================================
// K#Sigma_2 in CP^2
// ===========================================================================

inline Construction build_ksigma2(const ConstructionParams& par) {
    Construction c;
    c.id = ConstructionId::KSigma2;
    c.params = par;
    AmbientSpace sp = AmbientSpace::cp2();
    c.atlas.space = sp;
    c.atlas.label = "k-sigma2";

    // Handles: corner index = the nonzero homogeneous coordinate.
    // corner 2 = [0:0:1], corner 1 = [0:1:0], corner 0 = [1:0:0].
    std::array<HandleSpec, 3> specs = {
        par.handle(PI / 3, 2 * PI / 3),      // corner 0 (the h' choice)
        par.handle(2 * PI / 3, PI / 3),      // corner 1
        par.handle(PI / 3, 2 * PI / 3),      // corner 2 (the mixed-sign handle)
    };
    for (auto& s : specs) s.validate();
    double W = specs[0].sheet_radius();
    double rc = W / std::sqrt(3.0 / PI - W * W);
    double psi = std::atan(rc);

    // L0 = real part, L1 = diag(e^{i pi/3}, e^{-i pi/3}, 1) . L0.
    std::array<cplx, 3> ph_l0{1.0, 1.0, 1.0};
    std::array<cplx, 3> ph_l1{std::polar(1.0, PI / 3), std::polar(1.0, -PI / 3), 1.0};
    detail::append_real_cp2_sheets(c.atlas, {psi, psi, psi}, ph_l0, "L0");
    detail::append_real_cp2_sheets(c.atlas, {psi, psi, psi}, ph_l1, "L1");

    for (int corner = 0; corner < 3; ++corner) {
        ChartId chart{SpaceKind::CP2, corner, 0};
        c.sites.push_back({chart, specs[size_t(corner)]});
        for (int j = 0; j < 8; ++j)
            c.atlas.patches.push_back(handle_patch(sp, chart, specs[size_t(corner)], j * PI / 4,
                                                   (j + 1) * PI / 4,
                                                   "h" + std::to_string(corner) + "-" +
                                                       std::to_string(j)));
    }

    c.a_eps = measure_a_eps(specs[0]);
    c.expected_euler = -4;
    c.expected_orientable = false;
    for (int k = 0; k < 3; ++k) c.seam_expectations.push_back({CoordLine{0, k}, 1});

    // Chopped polytope: vertex cuts at the exact handle minimum of the local
    // moment sum, pi (lambda eps1)^2 (2 + 2 min_j cos theta_j).
    auto cutval = [&](const HandleSpec& s) {
        double m = 2.0 + 2.0 * std::min(std::cos(s.theta0), std::cos(s.theta1));
        return PI * s.lambda * s.lambda * s.eps1 * s.eps1 * m;
    };
    c.cuts.push_back({1, 1, cutval(specs[2])});                       // corner [0:0:1]
    c.cuts.push_back({-1, 0, cutval(specs[0]) - 3.0});                // corner [1:0:0]
    c.cuts.push_back({0, -1, cutval(specs[1]) - 3.0});                // corner [0:1:0]
    return c;
}

// ===========================================================================
// K#Sigma_4 in CP^1 x CP^1
// ===========================================================================

/// Trimmed torus sheets: (a,b) in [0,pi]^2 with the four surgery corners
/// notched at parameter depth d = asin(sqrt(pi/2) W). Each of the four
/// subsquares contributes six pivot-safe quads. `phase0/phase1` multiply the
/// factor chart coordinates z_other/z_pivot for pivot = 0 (conjugated for
/// pivot = 1).
inline void append_torus_sheets(LagrangianAtlas& atlas, double d, cplx l1_phase0, cplx l1_phase1,
                                const std::string& tag) {
    using A2 = std::array<double, 2>;
    double s = std::sin(d);
    auto seg = [](A2 P, A2 Q) {
        return Curve2{[=](double t) { return A2{P[0] + t * (Q[0] - P[0]), P[1] + t * (Q[1] - P[1])}; },
                      [=](double) { return A2{Q[0] - P[0], Q[1] - P[1]}; }};
    };
    // corner trim arc in the (0,0)-subsquare frame around corner (ca, cb):
    // ca, cb in {0,1} marking which end of [0, pi/2] the corner sits at.
    auto trim = [s](int ca, int cb) {
        auto coord = [s](int c, double w) {
            double y = std::asin(s * w);
            return c == 0 ? y : PI / 2 - y;
        };
        return Curve2{[=](double t) {
                          double eta = t * PI / 2;
                          return A2{coord(ca, std::cos(eta)), coord(cb, std::sin(eta))};
                      },
                      [=](double t) {
                          double eta = t * PI / 2, de = PI / 2;
                          auto dcoord = [s](int c, double w, double dw) {
                              double g = s * dw / std::sqrt(1.0 - s * s * w * w);
                              return c == 0 ? g : -g;
                          };
                          return A2{dcoord(ca, std::cos(eta), -std::sin(eta) * de),
                                    dcoord(cb, std::sin(eta), std::cos(eta) * de)};
                      }};
    };
    auto rev = [](const Curve2& c) {
        return Curve2{[c](double t) { return c.f(1 - t); },
                      [c](double t) {
                          auto d_ = c.df(1 - t);
                          return std::array<double, 2>{-d_[0], -d_[1]};
                      }};
    };

    const double q = PI / 4, h = PI / 2;
    struct Q {
        CoonsPatch<A2> cp;
        const char* name;
    };
    std::vector<Q> quads;
    // left strip (a in [0, d])
    quads.push_back({coons(trim(0, 0), seg({0, d}, {0, q}), seg({d, q}, {0, q}), seg({d, 0}, {d, q})),
                     "ql0"});
    quads.push_back({coons(seg({0, q}, {d, q}), seg({d, q}, {d, h}), rev(trim(0, 1)),
                           seg({0, q}, {0, h - d})),
                     "ql1"});
    // middle strip
    quads.push_back({coons(seg({d, 0}, {h - d, 0}), seg({h - d, 0}, {h - d, q}),
                           seg({d, q}, {h - d, q}), seg({d, 0}, {d, q})),
                     "qm0"});
    quads.push_back({coons(seg({d, q}, {h - d, q}), seg({h - d, q}, {h - d, h}),
                           seg({d, h}, {h - d, h}), seg({d, q}, {d, h})),
                     "qm1"});
    // right strip (a in [pi/2 - d, pi/2])
    quads.push_back({coons(trim(1, 0), seg({h, d}, {h, q}), seg({h - d, q}, {h, q}),
                           seg({h - d, 0}, {h - d, q})),
                     "qr0"});
    quads.push_back({coons(seg({h - d, q}, {h, q}), seg({h, q}, {h, h - d}), trim(1, 1),
                           seg({h - d, q}, {h - d, h})),
                     "qr1"});

    for (int ia = 0; ia < 2; ++ia)
        for (int ib = 0; ib < 2; ++ib)
            for (const Q& qq : quads) {
                Patch p;
                p.name = tag + "-s" + std::to_string(ia) + std::to_string(ib) + "-" + qq.name;
                // Reflected subsquares: a -> pi - a, b -> pi - b.
                auto reflect = [ia, ib](A2 ab) {
                    return A2{ia ? PI - ab[0] : ab[0], ib ? PI - ab[1] : ab[1]};
                };
                // pivot 0 when the quad hugs a in {0, pi}; else pivot 1
                A2 c0 = reflect(qq.cp.eval(0.5, 0.5));
                int pa = (std::abs(std::cos(c0[0])) > std::abs(std::sin(c0[0]))) ? 0 : 1;
                int pb = (std::abs(std::cos(c0[1])) > std::abs(std::sin(c0[1]))) ? 0 : 1;
                p.chart = ChartId{SpaceKind::CP1xCP1, pa, pb};
                cplx f0 = l1_phase0, f1 = l1_phase1;
                cplx ph0 = pa == 0 ? std::conj(f0) : f0;  // coord z1/z0 vs z0/z1
                cplx ph1 = pb == 0 ? std::conj(f1) : f1;
                auto cp = qq.cp;
                double sa = ia ? -1.0 : 1.0, sb = ib ? -1.0 : 1.0;
                p.f = [cp, ia, ib, pa, pb, ph0, ph1](double u, double v) {
                    A2 ab = cp.eval(u, v);
                    double a = ia ? PI - ab[0] : ab[0], b = ib ? PI - ab[1] : ab[1];
                    double ca = pa == 0 ? std::tan(a) : 1.0 / std::tan(a);
                    double cb = pb == 0 ? std::tan(b) : 1.0 / std::tan(b);
                    return C2{ph0 * ca, ph1 * cb};
                };
                p.df = [cp, ia, ib, pa, pb, ph0, ph1, sa, sb](double u, double v) {
                    A2 ab = cp.eval(u, v);
                    A2 du = cp.du(u, v), dv = cp.dv(u, v);
                    double a = ia ? PI - ab[0] : ab[0], b = ib ? PI - ab[1] : ab[1];
                    double ga = pa == 0 ? 1.0 / std::pow(std::cos(a), 2)
                                        : -1.0 / std::pow(std::sin(a), 2);
                    double gb = pb == 0 ? 1.0 / std::pow(std::cos(b), 2)
                                        : -1.0 / std::pow(std::sin(b), 2);
                    return std::array<C2, 2>{C2{ph0 * ga * sa * du[0], ph1 * gb * sb * du[1]},
                                             C2{ph0 * ga * sa * dv[0], ph1 * gb * sb * dv[1]}};
                };
                atlas.patches.push_back(std::move(p));
            }
}

inline Construction build_ksigma4(const ConstructionParams& par, bool delta_variant) {
    Construction c;
    c.id = delta_variant ? ConstructionId::KSigma4_delta : ConstructionId::KSigma4_seam;
    c.params = par;
    AmbientSpace sp = AmbientSpace::cp1xcp1();
    c.atlas.space = sp;
    c.atlas.label = construction_name(c.id);

    double delta = 0.0;
    if (delta_variant) {
        if (par.delta == par.delta) {
            delta = par.delta;
        } else {
            // closed-form default delta = 2 pi (2 a) / line_area, solved by a
            // short fixed point since a depends weakly on delta through sin.
            HandleSpec probe = par.handle(PI / 2, PI / 2);
            double a = measure_a_eps(probe);
            for (int it = 0; it < 3; ++it) {
                delta = TWO_PI * 2.0 * a / sp.line_area;
                probe = par.handle(PI / 2 + delta, PI / 2 + delta);
                a = measure_a_eps(probe);
            }
        }
    }
    c.delta = delta;

    double phi = PI / 2 + delta;
    // handle angles per corner (c0, c1) = nonvanishing coordinate pattern
    auto corner_spec = [&](int c0, int c1) {
        if (!delta_variant) return par.handle(PI / 2, PI / 2);
        if (c0 == 1 && c1 == 1) return par.handle(phi, phi);
        if (c0 == 0 && c1 == 1) return par.handle(TWO_PI - phi, phi + PI);
        if (c0 == 1 && c1 == 0) return par.handle(phi + PI, TWO_PI - phi);
        return par.handle(PI - phi, PI - phi);
    };

    HandleSpec ref = corner_spec(1, 1);
    ref.validate();
    double W = ref.sheet_radius();
    double d = std::asin(std::sqrt(PI / 2) * W);

    cplx e_phi = std::polar(1.0, phi);
    append_torus_sheets(c.atlas, d, 1.0, 1.0, "L0");
    append_torus_sheets(c.atlas, d, e_phi, e_phi, "L1");

    for (int c0 = 0; c0 < 2; ++c0)
        for (int c1 = 0; c1 < 2; ++c1) {
            ChartId chart{SpaceKind::CP1xCP1, c0, c1};
            HandleSpec s = corner_spec(c0, c1);
            s.validate();
            c.sites.push_back({chart, s});
            for (int j = 0; j < 4; ++j)
                c.atlas.patches.push_back(handle_patch(sp, chart, s, j * PI / 2, (j + 1) * PI / 2,
                                                       "h" + std::to_string(c0) + std::to_string(c1) +
                                                           "-" + std::to_string(j)));
        }

    c.a_eps = measure_a_eps(ref);
    c.expected_euler = -8;
    c.expected_orientable = false;
    int per_line = delta_variant ? 2 : 1;
    for (int f = 0; f < 2; ++f)
        for (int k = 0; k < 2; ++k) c.seam_expectations.push_back({CoordLine{f, k}, per_line});

    auto cutval = [&](const HandleSpec& s) {
        double m = 2.0 + 2.0 * std::min(std::cos(s.theta0), std::cos(s.theta1));
        return PI * s.lambda * s.lambda * s.eps1 * s.eps1 * m;
    };
    c.cuts.push_back({1, 1, cutval(corner_spec(1, 1))});          // vertex (0,0)
    c.cuts.push_back({-1, 1, cutval(corner_spec(0, 1)) - 2.0});   // vertex (2,0)
    c.cuts.push_back({1, -1, cutval(corner_spec(1, 0)) - 2.0});   // vertex (0,2)
    c.cuts.push_back({-1, -1, cutval(corner_spec(0, 0)) - 4.0});  // vertex (2,2)
    return c;
}

// ===========================================================================
// Bundle-surgery constructions
// ===========================================================================

/// Product torus from fiberwise surgery along N = {[0:1]} x RP^1 and
/// N' = {[1:0]} x RP^1 (trivial subbundles).
inline Construction build_product_torus(const ConstructionParams& par) {
    Construction c;
    c.id = ConstructionId::ProductTorus41;
    c.params = par;
    AmbientSpace sp = AmbientSpace::cp1xcp1();
    c.atlas.space = sp;
    c.atlas.label = "product-torus";

    HandleSpec ref = par.handle(PI / 2, PI / 2);
    ref.validate();
    double W = ref.sheet_radius();
    double d = std::asin(std::sqrt(PI / 2) * W);
    double cap = sp.line_area / PI;

    auto mk_bundle = [&](int pole, double alpha) {
        CircleBundleSpec bs;
        bs.space = sp;
        bs.subbundle = Subbundle::trivial;
        bs.fiber_angle = alpha;
        bs.eps1 = par.eps1;
        bs.T = par.T;
        bs.lambda = par.lambda;
        bs.collar = par.collar;
        bs.base = [](double b) { return HomogeneousPoint::product(0, 1, std::cos(b), std::sin(b)); };
        bs.base_locate = [pole](const HomogeneousPoint& h) {
            double n0 = std::sqrt(std::norm(h.z[0]) + std::norm(h.z[1]));
            double off = std::abs(h.z[pole == 0 ? 0 : 1]) / n0;  // the vanishing coordinate
            cplx w0 = h.z[2], w1 = h.z[3];
            cplx ph = std::abs(w0) > std::abs(w1) ? w0 / std::abs(w0) : w1 / std::abs(w1);
            double im = std::max(std::abs(std::imag(w0 / ph)), std::abs(std::imag(w1 / ph))) /
                        std::sqrt(std::norm(w0) + std::norm(w1));
            if (off > 1e-9 || im > 1e-9) return std::nan("");
            return std::atan2(std::real(w1 / ph), std::real(w0 / ph));
        };
        auto embed = [pole, cap](double b, cplx w) {
            cplx zeta = w / std::sqrt(cap - std::norm(w));
            cplx f0 = pole == 0 ? zeta : cplx(1.0);
            cplx f1 = pole == 0 ? cplx(1.0) : zeta;
            return HomogeneousPoint::product(f0, f1, std::cos(b), std::sin(b));
        };
        bs.embed = {embed, embed};
        bs.valid = {[](double b) { return std::abs(std::cos(b)) > 1e-6; },
                    [](double b) { return std::abs(std::sin(b)) > 1e-6; }};
        return bs;
    };
    // N at [0:1] (pole = 0 means the z0 coordinate carries the fiber) and
    // N' at [1:0], both with alpha = pi/2: the chart inversion between the two
    // poles reverses ray pairings, and this choice is the one that chains the
    // four arcs into a single tennis seam per fiber (a connected torus).
    CircleBundleSpec bN = mk_bundle(0, PI / 2);
    CircleBundleSpec bNp = mk_bundle(1, PI / 2);
    c.bundles.push_back(bN);
    c.bundles.push_back(bNp);

    // sheets: two annuli x two base halves per copy
    auto add_sheets = [&](cplx phase_f0, const std::string& tag) {
        for (int ann = 0; ann < 2; ++ann)
            for (int half = 0; half < 2; ++half) {
                Patch p;
                p.name = tag + "-a" + std::to_string(ann) + std::to_string(half);
                int pb = half == 0 ? 0 : 1;
                p.chart = ChartId{SpaceKind::CP1xCP1, 1, pb};
                p.u_range = {ann == 0 ? d : PI / 2 + d, ann == 0 ? PI / 2 - d : PI - d};
                p.v_range = {half == 0 ? -PI / 4 : PI / 4, half == 0 ? PI / 4 : 3 * PI / 4};
                cplx ph0 = phase_f0;
                p.f = [pb, ph0](double a, double b) {
                    double cb = pb == 0 ? std::tan(b) : 1.0 / std::tan(b);
                    return C2{ph0 / std::tan(a), cb};
                };
                p.df = [pb, ph0](double a, double b) {
                    double gb = pb == 0 ? 1.0 / std::pow(std::cos(b), 2)
                                        : -1.0 / std::pow(std::sin(b), 2);
                    return std::array<C2, 2>{C2{-ph0 / std::pow(std::sin(a), 2), 0.0},
                                             C2{0.0, gb}};
                };
                c.atlas.patches.push_back(std::move(p));
            }
    };
    add_sheets(1.0, "L0");
    add_sheets(std::polar(1.0, PI / 2), "L1");

    auto add_bundle = [&](const CircleBundleSpec& bs, int pole, const std::string& tag) {
        std::vector<BundlePatchPlan> plans;
        for (double x : {1.0, -1.0})
            for (int half = 0; half < 2; ++half) {
                BundlePatchPlan pl;
                pl.b0 = half == 0 ? -PI / 4 : PI / 4;
                pl.b1 = half == 0 ? PI / 4 : 3 * PI / 4;
                pl.x_sign = x;
                pl.triv = 0;
                pl.chart = ChartId{SpaceKind::CP1xCP1, pole == 0 ? 1 : 0, half == 0 ? 0 : 1};
                pl.name = tag + (x > 0 ? "+" : "-") + std::to_string(half);
                plans.push_back(pl);
            }
        for (Patch& p : global_handle(bs, plans)) c.atlas.patches.push_back(std::move(p));
    };
    add_bundle(bN, 0, "bN");
    add_bundle(bNp, 1, "bNp");

    c.a_eps = measure_a_eps(ref);
    c.expected_euler = 0;
    c.expected_orientable = true;
    c.seam_expectations.push_back({CoordLine{0, 0}, 0});
    c.seam_expectations.push_back({CoordLine{0, 1}, 0});
    c.seam_expectations.push_back({CoordLine{1, 0}, 1});
    c.seam_expectations.push_back({CoordLine{1, 1}, 1});

    double cut = PI * par.lambda * par.lambda * par.eps1 * par.eps1 * 2.0;
    c.cuts.push_back({1, 0, cut});         // mu1 >= cut (edge at [0:1])
    c.cuts.push_back({-1, 0, cut - 2.0});  // mu1 <= 2 - cut (edge at [1:0])
    return c;
}

/// Theta_surg in CP^2: point surgery at [0:0:1] with alpha = 2pi/3 + delta and
/// Moebius bundle surgery along the real circle N in {z2 = 0}.
inline Construction build_theta_surg(const ConstructionParams& par) {
    Construction c;
    c.id = ConstructionId::ThetaSurg;
    c.params = par;
    AmbientSpace sp = AmbientSpace::cp2();
    c.atlas.space = sp;
    c.atlas.label = "theta-surg";

    double delta;
    if (par.delta == par.delta) {
        delta = par.delta;
    } else {
        HandleSpec probe = par.handle(2 * PI / 3, 2 * PI / 3);
        double a = measure_a_eps(probe);
        for (int it = 0; it < 3; ++it) {
            delta = TWO_PI * 2.0 * a / sp.line_area;
            probe = par.handle(2 * PI / 3 + delta, 2 * PI / 3 + delta);
            a = measure_a_eps(probe);
        }
    }
    c.delta = delta;
    double alpha = 2 * PI / 3 + delta;

    HandleSpec point_spec = par.handle(alpha, alpha);
    point_spec.validate();
    double Wp = point_spec.sheet_radius();

    CircleBundleSpec bs;
    bs.space = sp;
    bs.subbundle = Subbundle::moebius;
    bs.fiber_angle = TWO_PI - alpha;  // fiber handle x B(-alpha)(c)
    bs.eps1 = par.eps1;
    bs.T = par.T;
    bs.lambda = par.lambda;
    bs.collar = par.collar;
    bs.base = [](double b) { return HomogeneousPoint::cp2(std::cos(b), std::sin(b), 0); };
    bs.base_locate = [](const HomogeneousPoint& h) {
        double n = norm(C3{h.z[0], h.z[1], h.z[2]});
        if (std::abs(h.z[2]) / n > 1e-9) return std::nan("");
        cplx z0 = h.z[0], z1 = h.z[1];
        cplx ph = std::abs(z0) > std::abs(z1) ? z0 / std::abs(z0) : z1 / std::abs(z1);
        if (std::max(std::abs(std::imag(z0 / ph)), std::abs(std::imag(z1 / ph))) / n > 1e-9)
            return std::nan("");
        return std::atan2(std::real(z1 / ph), std::real(z0 / ph));
    };
    // The fiber coordinate is Darboux-normalized: the local moment toward the
    // z2 = 0 edge is exactly pi |w|^2, so the bundle handle's per-factor area
    // equals the point handle's a(eps) and the edge cut is exact.
    auto fiber_hom = [](cplx w) { return w / std::sqrt(3.0 / PI - std::norm(w)); };
    bs.embed = {[fiber_hom](double b, cplx w) {
                    double sg = std::cos(b) >= 0 ? 1.0 : -1.0;
                    return HomogeneousPoint::cp2(std::cos(b), std::sin(b), sg * fiber_hom(w));
                },
                [fiber_hom](double b, cplx w) {
                    double sg = std::sin(b) >= 0 ? 1.0 : -1.0;
                    return HomogeneousPoint::cp2(std::cos(b), std::sin(b), sg * fiber_hom(w));
                }};
    bs.valid = {[](double b) { return std::abs(std::cos(b)) > 1e-6; },
                [](double b) { return std::abs(std::sin(b)) > 1e-6; }};
    c.bundles.push_back(bs);
    double Wb = bs.sheet_radius();
    double R_ND = std::sqrt(3.0 / PI - Wb * Wb);

    // point handle, four offset quadrants
    ChartId z2{SpaceKind::CP2, 2, 0};
    c.sites.push_back({z2, point_spec});
    for (int j = 0; j < 4; ++j)
        c.atlas.patches.push_back(handle_patch(sp, z2, point_spec, -PI / 4 + j * PI / 2,
                                               PI / 4 + j * PI / 2, "hp-" + std::to_string(j)));

    // sheet annuli, four offset quadrants per copy; the radial parameter is
    // the colatitude sigma (round-uniform sampling), Darboux radius
    // sqrt(3/pi) sin(sigma), chart radius tan(sigma)
    double sig_in = std::asin(std::sqrt(PI / 3.0) * Wp);
    double sig_out = std::asin(std::min(1.0, std::sqrt(PI / 3.0) * R_ND));
    auto add_annuli = [&](cplx phase, const std::string& tag) {
        for (int k = 0; k < 4; ++k) {
            Patch p;
            p.name = tag + "-q" + std::to_string(k);
            p.chart = z2;
            p.u_range = {-PI / 4 + k * PI / 2, PI / 4 + k * PI / 2};
            p.v_range = {sig_in, sig_out};
            p.f = [phase](double th, double sig) {
                double rc = std::tan(sig);
                return C2{phase * rc * std::cos(th), phase * rc * std::sin(th)};
            };
            p.df = [phase](double th, double sig) {
                double rc = std::tan(sig);
                double drc = 1.0 / std::pow(std::cos(sig), 2);
                return std::array<C2, 2>{C2{-phase * rc * std::sin(th), phase * rc * std::cos(th)},
                                         C2{phase * drc * std::cos(th), phase * drc * std::sin(th)}};
            };
            c.atlas.patches.push_back(std::move(p));
        }
    };
    add_annuli(1.0, "L0");
    add_annuli(std::polar(1.0, alpha), "L1");

    // bundle strips: two branches x two base halves; the Moebius wrap closes
    // branch + onto branch - across b = 3pi/4 ~ -pi/4.
    std::vector<BundlePatchPlan> plans;
    for (double x : {1.0, -1.0})
        for (int half = 0; half < 2; ++half) {
            BundlePatchPlan pl;
            pl.b0 = half == 0 ? -PI / 4 : PI / 4;
            pl.b1 = half == 0 ? PI / 4 : 3 * PI / 4;
            pl.x_sign = x;
            pl.triv = half;
            pl.chart = ChartId{SpaceKind::CP2, half == 0 ? 0 : 1, 0};
            pl.name = std::string("bb") + (x > 0 ? "+" : "-") + std::to_string(half);
            plans.push_back(pl);
        }
    for (Patch& p : global_handle(bs, plans)) c.atlas.patches.push_back(std::move(p));

    c.a_eps = measure_a_eps(point_spec);
    c.expected_euler = 0;
    c.expected_orientable = true;
    c.seam_expectations.push_back({CoordLine{0, 0}, 2});
    c.seam_expectations.push_back({CoordLine{0, 1}, 2});
    c.seam_expectations.push_back({CoordLine{0, 2}, 0});

    double m = 2.0 + 2.0 * std::cos(alpha);
    double cut = PI * par.lambda * par.lambda * par.eps1 * par.eps1 * m;
    c.cuts.push_back({1, 1, cut});          // vertex [0:0:1]
    c.cuts.push_back({-1, -1, cut - 3.0});  // the z2 = 0 edge pushed inward
    return c;
}

}  // namespace detail

// ===========================================================================
// Public catalog surface
// ===========================================================================

inline Construction build(ConstructionId id, const ConstructionParams& par = {}) {
    switch (id) {
        case ConstructionId::Clifford: return detail::build_clifford(par);
        case ConstructionId::ChekanovSchlenk: return detail::build_cs_torus(par, false);
        case ConstructionId::ModifiedChekanov: return detail::build_cs_torus(par, true);
        case ConstructionId::RealCP2: return detail::build_real_cp2(par);
        case ConstructionId::RealProduct: return detail::build_real_product(par);
        case ConstructionId::KSigma2: return detail::build_ksigma2(par);
        case ConstructionId::KSigma4_seam: return detail::build_ksigma4(par, false);
        case ConstructionId::KSigma4_delta: return detail::build_ksigma4(par, true);
        case ConstructionId::ProductTorus41: return detail::build_product_torus(par);
        case ConstructionId::ThetaSurg: return detail::build_theta_surg(par);
    }
    throw InadmissibleParameters("unknown construction");
}

/// The eight action-angle preimages A_{eps,k,l} of a point of the modified
/// Chekanov torus' moment image.
inline std::array<ActionAngleCoords, 8> eight_preimages(const GammaCurve& g, double s,
                                                        double theta) {
    if (!(s > 0 && s < PI) || !(theta > 0 && theta < PI / 2))
        throw DegenerateParameter("s in (0,pi) and theta in (0,pi/2) required");
    double rho = g.rho(s), t = g.arg(s);
    double x1 = PI * std::pow(std::cos(theta) * rho, 2);
    double x2 = PI * std::pow(std::sin(theta) * rho, 2);
    std::array<ActionAngleCoords, 8> out;
    int idx = 0;
    for (double eps : {1.0, -1.0})
        for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l)
                out[size_t(idx++)] =
                    ActionAngleCoords{{x1, x2}, {eps * t + PI / 2 + k * PI, eps * t + PI / 2 + l * PI}};
    return out;
}

/// Max deviation of the rho_Ch-rotated sample cloud from the atlas, plus the
/// minimum of |z2|/|z| over the samples (the torus avoids z2 = 0).
struct RhoChReport {
    double max_deviation;
    double min_z2_fraction;
};

inline RhoChReport rho_ch_orbit_check(const Construction& c, int n_samples = 1000,
                                      int n_angles = 16) {
    if (c.atlas.space.kind != SpaceKind::CP2)
        throw InadmissibleParameters("rho_Ch acts on CP^2 constructions");
    std::vector<HomogeneousPoint> samples;
    int per = std::max(1, int(std::sqrt(double(n_samples) / double(c.atlas.patches.size()))) + 1);
    for (const Patch& p : c.atlas.patches)
        for (int i = 0; i < per && int(samples.size()) < n_samples; ++i)
            for (int j = 0; j < per && int(samples.size()) < n_samples; ++j) {
                double u = p.u_range[0] + (p.u_range[1] - p.u_range[0]) * (i + 0.5) / per;
                double v = p.v_range[0] + (p.v_range[1] - p.v_range[0]) * (j + 0.5) / per;
                samples.push_back(p.ambient(u, v));
            }
    RhoChReport rep{0.0, 1.0};
    for (const HomogeneousPoint& h : samples) {
        double nz = norm(C3{h.z[0], h.z[1], h.z[2]});
        rep.min_z2_fraction = std::min(rep.min_z2_fraction, std::abs(h.z[2]) / nz);
    }
    for (int a = 0; a < n_angles; ++a) {
        double th = TWO_PI * a / n_angles;
        double ct = std::cos(th), st = std::sin(th);
        for (const HomogeneousPoint& h : samples) {
            HomogeneousPoint r = h;
            r.z[0] = ct * h.z[0] - st * h.z[1];
            r.z[1] = st * h.z[0] + ct * h.z[1];
            NearestResult nr = nearest_point(c.atlas, r, 16);
            rep.max_deviation = std::max(rep.max_deviation, nr.distance);
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Moment sampling and polytope containment

struct MomentSample {
    int patch;
    double u, v;
    double mx, my;
};

inline std::vector<MomentSample> sample_moment(const Construction& c, int n = 32) {
    std::vector<MomentSample> out;
    for (int pi = 0; pi < int(c.atlas.patches.size()); ++pi) {
        const Patch& p = c.atlas.patches[size_t(pi)];
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) {
                double u = p.u_range[0] + (p.u_range[1] - p.u_range[0]) * i / n;
                double v = p.v_range[0] + (p.v_range[1] - p.v_range[0]) * j / n;
                auto m = moment_map(p.ambient(u, v));
                out.push_back({pi, u, v, m[0], m[1]});
            }
    }
    return out;
}

/// Worst violation (negative = inside) of the ambient polytope and of the
/// construction's chopped cuts over the moment samples.
struct ContainmentReport {
    double ambient_violation;  // > 0 means outside the closed ambient polytope
    double cut_violation;      // > 0 means inside a forbidden cut region
};

inline ContainmentReport moment_containment(const Construction& c,
                                            const std::vector<MomentSample>& samples) {
    double A = c.atlas.space.line_area;
    ContainmentReport rep{-1e300, -1e300};
    for (const MomentSample& s : samples) {
        double amb;
        if (c.atlas.space.kind == SpaceKind::CP2)
            amb = std::max({-s.mx, -s.my, s.mx + s.my - A});
        else
            amb = std::max({-s.mx, -s.my, s.mx - A, s.my - A});
        rep.ambient_violation = std::max(rep.ambient_violation, amb);
        for (const PolytopeCut& cut : c.cuts)
            rep.cut_violation =
                std::max(rep.cut_violation, cut.c - (cut.nx * s.mx + cut.ny * s.my));
    }
    return rep;
}

}  // namespace lagsurg
