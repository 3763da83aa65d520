#pragma once
// The profile curve gamma behind the Chekanov-Schlenk and modified Chekanov
// tori: a closed curve in the half-plane Re > 0, symmetric about the real
// axis, enclosing area exactly 1, contained in the disk of area 2 + eps', with
// |gamma| strictly monotone from rho_min to rho_max on (0, pi).
//
//   gamma(s) = rho(s) e^{i t(s)},
//   rho(s)^2 = rho_min^2 + (rho_max^2 - rho_min^2) (1 - cos s)/2,
//   t(s)     = t_amp tanh(k sin s)/tanh(k),
//
// with t_amp fixed by the enclosed-area-1 condition
//   area = int_0^pi (rho^2)'(s) t(s) ds  =  drho2 * t_amp * J(k),
//   J(k) = int_0^pi sin(s) tanh(k sin s) ds / (2 tanh k).

#include <cmath>

#include "errors.hpp"
#include "linalg.hpp"
#include "quadrature.hpp"

namespace lagsurg {

struct GammaCurve {
    double rho_min = 0.15;
    double rho_max = 0.92;
    double steepness = 3.0;   // k
    double eps_prime = 0.75;  // containment disk has area 2 + eps'
    double t_amp = 0.0;       // derived

    static GammaCurve standard() {
        GammaCurve g;
        g.finalize();
        return g;
    }

    void finalize() {
        if (!(rho_min > 0 && rho_max > rho_min)) throw InadmissibleParameters("gamma radii");
        double k = steepness;
        double J = integrate_1d(
                       [&](double s) { return std::sin(s) * std::tanh(k * std::sin(s)); }, 0.0,
                       PI, 32, 16) /
                   (2.0 * std::tanh(k));
        double drho2 = rho_max * rho_max - rho_min * rho_min;
        t_amp = 1.0 / (drho2 * J);
        if (!(t_amp < PI / 2))
            throw InadmissibleParameters("gamma: area-1 requires t_max >= pi/2");
        if (!(rho_max < std::sqrt((2.0 + eps_prime) / PI)))
            throw InadmissibleParameters("gamma exceeds the configured containment disk");
        if (!(rho_max < std::sqrt(3.0 / PI)))
            throw InadmissibleParameters("gamma exceeds the capacity-3 chart disk");
    }

    double rho(double s) const {
        double d = rho_max * rho_max - rho_min * rho_min;
        return std::sqrt(rho_min * rho_min + d * 0.5 * (1.0 - std::cos(s)));
    }
    double drho(double s) const {
        double d = rho_max * rho_max - rho_min * rho_min;
        return d * 0.25 * std::sin(s) / rho(s);
    }
    /// Polar angle t(s); odd around s = 0 and s = pi.
    double arg(double s) const {
        return t_amp * std::tanh(steepness * std::sin(s)) / std::tanh(steepness);
    }
    double darg(double s) const {
        double u = steepness * std::sin(s);
        double sech = 1.0 / std::cosh(u);
        return t_amp * steepness * std::cos(s) * sech * sech / std::tanh(steepness);
    }
    double t_max() const { return t_amp; }

    cplx eval(double s) const { return std::polar(rho(s), arg(s)); }
    cplx deriv(double s) const {
        return std::polar(1.0, arg(s)) * cplx(drho(s), rho(s) * darg(s));
    }

    /// Signed enclosed area by the shoelace integral (for verification).
    double enclosed_area() const {
        return std::abs(integrate_1d(
            [&](double s) {
                cplx g = eval(s), dg = deriv(s);
                return 0.5 * std::imag(std::conj(g) * dg);
            },
            0.0, TWO_PI, 64, 16));
    }
};

}  // namespace lagsurg
