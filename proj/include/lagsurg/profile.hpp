#pragma once
// The smoothed hyperbola profile behind every handle.
//
//   c(t) = e^{-t} + i e^{t}     |t| <= T      (the hyperbola arc)
//   c(t) = e^{-t}               t <= -T-1     (real ray)
//   c(t) = i e^{t}              t >= T+1      (imaginary ray)
//
// with C^2 blends on the transition windows of width 1, done in log-polar
// coordinates (log|c|, arg c) by quintic Hermite interpolation matching value
// and first two derivatives at both window ends. For t < 0 the curve is the
// exact mirror c(t) = i conj(c(-t)), so |c(-t)| = |c(t)| and
// arg c(-t) = pi/2 - arg c(t) hold identically.
//
// Lagrangian-ness of the model (c xi_0, c xi_1) does not depend on the blend:
// the pullback of the standard form cancels between the two factors for any
// shared profile (Im(conj(c') c) drops out of omega(F_t, F_eta)).

#include <cmath>

#include "errors.hpp"
#include "linalg.hpp"

namespace lagsurg {

namespace detail {

struct Quintic {
    double a[6];
    double eval(double u) const {
        return a[0] + u * (a[1] + u * (a[2] + u * (a[3] + u * (a[4] + u * a[5]))));
    }
    double deriv(double u) const {
        return a[1] + u * (2 * a[2] + u * (3 * a[3] + u * (4 * a[4] + u * 5 * a[5])));
    }
    double deriv2(double u) const {
        return 2 * a[2] + u * (6 * a[3] + u * (12 * a[4] + u * 20 * a[5]));
    }
};

/// Quintic on [0,1] with prescribed value/first/second derivative at the ends.
inline Quintic hermite5(double f0, double d0, double s0, double f1, double d1, double s1) {
    Quintic q;
    q.a[0] = f0;
    q.a[1] = d0;
    q.a[2] = 0.5 * s0;
    double r0 = f1 - (f0 + d0 + 0.5 * s0);
    double r1 = d1 - (d0 + s0);
    double r2 = s1 - s0;
    q.a[3] = 10 * r0 - 4 * r1 + 0.5 * r2;
    q.a[4] = -15 * r0 + 7 * r1 - r2;
    q.a[5] = 6 * r0 - 3 * r1 + 0.5 * r2;
    return q;
}

}  // namespace detail

struct ProfileValue {
    cplx c, dc, d2c;
};

class ProfileCurve {
  public:
    /// smoothed = false keeps the raw hyperbola/ray junctions (used by the
    /// unsmoothed area oracles only).
    explicit ProfileCurve(double T, bool smoothed = true) : T_(T), smoothed_(smoothed) {
        if (T <= 0) throw InadmissibleParameters("profile truncation T must be positive");
        // Hyperbola data at t = T in log-polar coordinates.
        double lH = 0.5 * std::log(2.0 * std::cosh(2 * T));
        double lH1 = std::tanh(2 * T);
        double lH2 = 2.0 / std::pow(std::cosh(2 * T), 2);
        double aH = std::atan(std::exp(2 * T));
        double aH1 = 1.0 / std::cosh(2 * T);
        double aH2 = -2.0 * std::tanh(2 * T) / std::cosh(2 * T);
        // Ray data at t = T+1: log|c| = t, arg c = pi/2.
        blend_log_ = detail::hermite5(lH, lH1, lH2, T + 1.0, 1.0, 0.0);
        blend_arg_ = detail::hermite5(aH, aH1, aH2, PI / 2.0, 0.0, 0.0);
    }

    double truncation() const { return T_; }
    bool smoothed() const { return smoothed_; }
    /// Parameter extent of the non-linear part (rays beyond).
    double model_end() const { return smoothed_ ? T_ + 1.0 : T_; }

    ProfileValue eval(double t) const {
        if (t < 0) {
            ProfileValue m = eval(-t);
            // c(t) = i conj(c(-t)); chain rule flips alternating signs.
            return {cplx(0, 1) * std::conj(m.c), -cplx(0, 1) * std::conj(m.dc),
                    cplx(0, 1) * std::conj(m.d2c)};
        }
        if (!smoothed_) {
            if (t <= T_) return hyperbola(t);
            cplx c = cplx(0, 1) * std::exp(t);
            return {c, c, c};
        }
        if (t <= T_) return hyperbola(t);
        if (t >= T_ + 1.0) {
            cplx c = cplx(0, 1) * std::exp(t);
            return {c, c, c};
        }
        double u = t - T_;
        double l = blend_log_.eval(u), l1 = blend_log_.deriv(u), l2 = blend_log_.deriv2(u);
        double a = blend_arg_.eval(u), a1 = blend_arg_.deriv(u), a2 = blend_arg_.deriv2(u);
        cplx c = std::exp(cplx(l, a));
        cplx w1 = cplx(l1, a1);
        cplx dc = w1 * c;
        cplx d2c = (cplx(l2, a2) + w1 * w1) * c;
        return {c, dc, d2c};
    }

  private:
    static ProfileValue hyperbola(double t) {
        double em = std::exp(-t), ep = std::exp(t);
        return {{em, ep}, {-em, ep}, {em, ep}};
    }

    double T_;
    bool smoothed_;
    detail::Quintic blend_log_, blend_arg_;
};

/// The angle shear: z -> Re z + Im z e^{i theta}. Rescales the plane area form
/// by sin(theta); block-diagonally over C^2 it maps Lagrangians to Lagrangians
/// exactly when the two sines agree.
inline cplx shear(double theta, cplx z) {
    return std::real(z) + std::imag(z) * std::polar(1.0, theta);
}

}  // namespace lagsurg
