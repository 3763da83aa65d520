#pragma once
// The point-surgery handle family: shear of the smoothed hyperbola model to
// prescribed asymptotic angles, conformal rescaling, and the per-factor area
// bookkeeping a(eps).
//
// In flat (Darboux) coordinates the handle is
//   F(t, eta) = lambda (B(theta0)(c(t) eps1 cos eta), B(theta1)(c(t) eps1 sin eta)),
// B(theta) z = Re z + Im z e^{i theta}. The model (c xi0, c xi1) is Lagrangian
// for any shared profile, and B rescales omega by the common factor
// sin(theta0) = sin(theta1), so the patch is exactly Lagrangian. For
// t <= -(T+1) it lies in R^2, for t >= T+1 in (e^{i theta0} x0, e^{i theta1} x1).
// Sign variants are encoded by adding pi to an angle.

#include <cmath>

#include "ambient.hpp"
#include "errors.hpp"
#include "profile.hpp"
#include "quadrature.hpp"
#include "surfaces.hpp"

namespace lagsurg {

struct HandleSpec {
    double theta0, theta1;  // asymptotic angles of the two C-factors, in (0,2pi)\{pi}
    double eps1 = std::exp(-5.0);  // handle radius before scaling
    double T = 4.0;                // truncation
    double lambda = 0.05;          // conformal scale
    double eps = 0.05;             // containment ball radius
    double collar = 0.5;           // linear extension beyond the smoothing window
    bool smoothed = true;

    double t_out() const { return T + (smoothed ? 1.0 : 0.0) + collar; }
    /// Darboux radius at which the handle boundary meets the sheets.
    double sheet_radius() const { return lambda * eps1 * std::exp(t_out()); }

    void validate() const {
        auto bad_angle = [](double a) {
            double m = std::fmod(a, PI);
            return std::min(std::abs(m), PI - std::abs(m)) < 1e-12;
        };
        if (bad_angle(theta0) || bad_angle(theta1))
            throw InadmissibleParameters("handle angle is a multiple of pi");
        if (std::abs(std::sin(theta0) - std::sin(theta1)) > 1e-12)
            throw AngleMismatch("sin(theta0) != sin(theta1)");
        if (eps1 <= 0 || T <= 0 || lambda <= 0) throw InadmissibleParameters("handle scales");
        if (eps1 * std::exp(T + 1.0) * lambda > eps * (1 + 1e-12))
            throw ContainmentViolation("eps1 e^{T+1} lambda exceeds eps");
    }
};

/// The handle in flat coordinates (value and t/eta derivatives).
inline C2 handle_flat(const HandleSpec& s, const ProfileCurve& prof, double t, double eta) {
    ProfileValue pv = prof.eval(t);
    cplx z0 = pv.c * (s.eps1 * std::cos(eta)), z1 = pv.c * (s.eps1 * std::sin(eta));
    return {s.lambda * shear(s.theta0, z0), s.lambda * shear(s.theta1, z1)};
}

inline std::array<C2, 2> handle_flat_jacobian(const HandleSpec& s, const ProfileCurve& prof,
                                              double t, double eta) {
    ProfileValue pv = prof.eval(t);
    double c = std::cos(eta), sn = std::sin(eta);
    C2 dt = {s.lambda * shear(s.theta0, pv.dc * (s.eps1 * c)),
             s.lambda * shear(s.theta1, pv.dc * (s.eps1 * sn))};
    C2 de = {s.lambda * shear(s.theta0, pv.c * (-s.eps1 * sn)),
             s.lambda * shear(s.theta1, pv.c * (s.eps1 * c))};
    return {dt, de};
}

/// The handle as a chart patch of `space` through the exact Darboux map of
/// `chart`, on (t, eta) in [-t_out, t_out] x [eta0, eta1].
inline Patch handle_patch(const AmbientSpace& space, const ChartId& chart, const HandleSpec& s,
                          double eta0 = 0.0, double eta1 = TWO_PI, std::string name = "handle") {
    s.validate();
    ProfileCurve prof(s.T, s.smoothed);
    Patch p;
    p.name = std::move(name);
    p.chart = chart;
    p.u_range = {-s.t_out(), s.t_out()};
    p.v_range = {eta0, eta1};
    p.f = [space, s, prof](double t, double eta) {
        return darboux_inv(space, handle_flat(s, prof, t, eta));
    };
    p.df = [space, s, prof](double t, double eta) {
        C2 Z = handle_flat(s, prof, t, eta);
        auto J = handle_flat_jacobian(s, prof, t, eta);
        return std::array<C2, 2>{darboux_inv_jacobian(space, Z, J[0]),
                                 darboux_inv_jacobian(space, Z, J[1])};
    };
    return p;
}

/// Trace of the handle along one C-factor: z(t) = lambda B(theta_f)(c(t) eps1).
inline cplx factor_trace(const HandleSpec& s, const ProfileCurve& prof, int factor, double t) {
    double th = factor == 0 ? s.theta0 : s.theta1;
    return s.lambda * shear(th, prof.eval(t).c * s.eps1);
}

namespace detail {

/// Signed sector-area integrand (1/2)(x y' - y x') of the factor trace.
inline double trace_sector_integrand(const HandleSpec& s, const ProfileCurve& prof, int factor,
                                     double t) {
    double th = factor == 0 ? s.theta0 : s.theta1;
    ProfileValue pv = prof.eval(t);
    cplx z = s.lambda * shear(th, pv.c * s.eps1);
    cplx dz = s.lambda * shear(th, pv.dc * s.eps1);
    return 0.5 * std::imag(std::conj(z) * dz);
}

}  // namespace detail

/// Area enclosed between the factor trace and its two asymptote rays inside
/// the disk of radius disk_radius. Rays through the origin contribute nothing
/// to the sector integral; the unsmoothed trace is closed by the segments
/// joining its endpoints perpendicularly to the rays (the classical 2T+1
/// picture for the pi/2 model).
inline double factor_trace_area(const HandleSpec& s, int factor, double disk_radius) {
    ProfileCurve prof(s.T, s.smoothed);
    double reach = s.lambda * s.eps1 * std::exp(prof.model_end());
    if (disk_radius < reach * (1 - 1e-12))
        throw InadmissibleParameters("disk_radius does not contain the smoothing windows");
    // t-range covered inside the disk: |trace| <= disk_radius on the linear tails.
    double t_hi = std::log(disk_radius / (s.lambda * s.eps1));
    double t_lo = -t_hi;
    std::vector<double> breaks{-s.T - 1.0, -s.T, 0.0, s.T, s.T + 1.0};
    double sector = integrate_1d_breaks(
        [&](double t) { return detail::trace_sector_integrand(s, prof, factor, t); }, t_lo, t_hi,
        breaks, 8, 20);
    double area = std::abs(sector);
    if (!s.smoothed) {
        // Two closing triangles between the arc ends and the rays.
        double th = factor == 0 ? s.theta0 : s.theta1;
        double sin_th = std::abs(std::sin(th));
        double a = s.lambda * s.eps1 * std::exp(-s.T), b = s.lambda * s.eps1 * std::exp(s.T);
        area += std::abs(0.5 * a * b * sin_th) * 2.0;
    }
    return area;
}

/// The common per-factor grey area a(eps) of the scaled smoothed handle; the
/// linear tails contribute nothing, so the integral over the full profile is
/// the area inside any containing ball.
inline double measure_a_eps(const HandleSpec& s) {
    s.validate();
    ProfileCurve prof(s.T, true);
    std::vector<double> breaks{-s.T - 1.0, -s.T, 0.0, s.T, s.T + 1.0};
    double a0 = std::abs(integrate_1d_breaks(
        [&](double t) { return detail::trace_sector_integrand(s, prof, 0, t); }, -s.t_out(),
        s.t_out(), breaks, 8, 20));
    double a1 = std::abs(integrate_1d_breaks(
        [&](double t) { return detail::trace_sector_integrand(s, prof, 1, t); }, -s.t_out(),
        s.t_out(), breaks, 8, 20));
    if (std::abs(a0 - a1) > 1e-9 * std::max(1.0, std::max(a0, a1)))
        throw Error("factor areas differ beyond tolerance");
    return 0.5 * (a0 + a1);
}

}  // namespace lagsurg
