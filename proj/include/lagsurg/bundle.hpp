#pragma once
// Fiberwise Lagrangian surgery along an isotropic circle. The symplectic
// normal bundle is presented concretely through two chart-induced
// trivializations, positively rescaled so their transition is exactly +-1;
// the 1-dimensional fiber handle x . B(alpha)(c(t)) is odd in x, so it
// descends through the -1 transition and the handle globalizes over the
// circle (trivial or Moebius subbundle).

#include <cmath>
#include <functional>
#include <vector>

#include "ambient.hpp"
#include "errors.hpp"
#include "handle.hpp"
#include "profile.hpp"
#include "surfaces.hpp"

namespace lagsurg {

enum class Subbundle { trivial, moebius };

struct CircleBundleSpec {
    AmbientSpace space;
    Subbundle subbundle;
    double fiber_angle;  // alpha: the asymptotic angle of the L1-trace in the fiber
    double eps1 = std::exp(-5.0);
    double T = 4.0;
    double lambda = 0.05;
    double collar = 0.5;

    /// Base circle, b in [0, pi) (projective parametrization: b and b+pi give
    /// the same point when the circle is an RP^1).
    std::function<HomogeneousPoint(double)> base;
    /// Locate a homogeneous point on the circle; returns NaN if off-circle.
    std::function<double(const HomogeneousPoint&)> base_locate;
    /// The two trivializations: embed[j](b, w) is the ambient point with
    /// normal coordinate w over base(b); valid[j](b) marks the covered arcs.
    std::array<std::function<HomogeneousPoint(double, cplx)>, 2> embed;
    std::array<std::function<bool(double)>, 2> valid;

    double t_out() const { return T + 1.0 + collar; }
    double sheet_radius() const { return lambda * eps1 * std::exp(t_out()); }
};

/// The smoothed fiber handle curve in the normal coordinate.
inline cplx fiber_curve(const CircleBundleSpec& s, const ProfileCurve& prof, double x_sign,
                        double t) {
    return s.lambda * s.eps1 * x_sign * shear(s.fiber_angle, prof.eval(t).c);
}

/// Transition between the two trivializations over base(b), snapped to +-1.
inline double transition_sign(const CircleBundleSpec& s, double b, double tol = 1e-9) {
    if (!s.valid[0](b) || !s.valid[1](b)) throw TransitionInconsistent("b not in the overlap");
    cplx w(0.37 * s.sheet_radius(), 0.11 * s.sheet_radius());
    HomogeneousPoint p0 = s.embed[0](b, w);
    for (double sign : {1.0, -1.0})
        if (proj_distance(p0, s.embed[1](b, sign * w)) <= tol) return sign;
    throw TransitionInconsistent("transition is not +-1 after rescaling");
}

/// Descent check: both trivialization lifts of the fiber handle describe the
/// same ambient set. `fiber` maps (x_sign, t) to the normal coordinate; the
/// default handle is odd in x_sign, which is exactly what descent needs.
inline double descent_check(const CircleBundleSpec& s,
                            const std::function<cplx(double, double)>& fiber,
                            int n_base = 32, int n_t = 9, double tol = 1e-12) {
    double worst = 0.0;
    for (int i = 0; i < n_base; ++i) {
        double b = (i + 0.5) * PI / n_base;
        if (!s.valid[0](b) || !s.valid[1](b)) continue;
        double tr = transition_sign(s, b);
        for (int k = 0; k < n_t; ++k) {
            double t = -s.t_out() + 2 * s.t_out() * k / (n_t - 1);
            for (double x : {1.0, -1.0}) {
                HomogeneousPoint lift0 = s.embed[0](b, fiber(x, t));
                HomogeneousPoint lift1 = s.embed[1](b, fiber(tr * x, t));
                worst = std::max(worst, proj_distance(lift0, lift1));
            }
        }
    }
    if (worst > tol)
        throw TransitionInconsistent("fiber handle does not descend: gap " + std::to_string(worst));
    return worst;
}

/// One point of the global handle: the smoothed 1-dimensional handle in the
/// fiber over base_point, pushed to the ambient.
inline HomogeneousPoint fiber_handle(const CircleBundleSpec& s, const HomogeneousPoint& base_point,
                                     double t, double x_sign) {
    double b = s.base_locate(base_point);
    if (!(b == b)) throw BaseOffCircle("point is not on the surgery circle");
    if (std::abs(t) > s.t_out() + 1e-12) throw InadmissibleParameters("|t| beyond the handle");
    ProfileCurve prof(s.T, true);
    int j = s.valid[1](b) ? 1 : 0;
    return s.embed[size_t(j)](b, fiber_curve(s, prof, x_sign, t));
}

/// Plan for one patch of the assembled global handle.
struct BundlePatchPlan {
    double b0, b1;
    double x_sign;
    int triv;
    ChartId chart;
    std::string name;
};

/// Assemble the global handle patches over the circle; runs the descent check
/// first. Patches are (b, t) rectangles; edge gluings (including the Moebius
/// cross-branch wrap) are geometric and resolved by the atlas welder.
inline std::vector<Patch> global_handle(const CircleBundleSpec& s,
                                        const std::vector<BundlePatchPlan>& plans) {
    ProfileCurve prof(s.T, true);
    descent_check(s, [&](double x, double t) { return fiber_curve(s, prof, x, t); });
    std::vector<Patch> out;
    for (const BundlePatchPlan& plan : plans) {
        Patch p;
        p.name = plan.name;
        p.chart = plan.chart;
        p.u_range = {plan.b0, plan.b1};
        p.v_range = {-s.t_out(), s.t_out()};
        double x = plan.x_sign;
        int j = plan.triv;
        p.f = [s, prof, x, j, chart = plan.chart](double b, double t) {
            cplx w = fiber_curve(s, prof, x, t);
            return chart_project(s.embed[size_t(j)](b, w), chart).z;
        };
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace lagsurg
