#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "lagsurg/gamma.hpp"
#include "lagsurg/handle.hpp"
#include "lagsurg/profile.hpp"
#include "lagsurg/surfaces.hpp"

using namespace lagsurg;

TEST_CASE("profile curve is C2 across the blend windows") {
    ProfileCurve c(4.0);
    // FD continuity of c, c', c'' at the window boundaries
    for (double t0 : {4.0, 5.0, -4.0, -5.0}) {
        double h = 1e-4;
        ProfileValue lo = c.eval(t0 - h), hi = c.eval(t0 + h), mid = c.eval(t0);
        CHECK(std::abs(hi.c - lo.c) < 3.0 * h * std::abs(mid.dc) + 1e-6);
        CHECK(std::abs((hi.c - lo.c) / (2 * h) - mid.dc) < 1e-6 * std::abs(mid.dc) + 1e-6);
        CHECK(std::abs((hi.dc - lo.dc) / (2 * h) - mid.d2c) < 1e-5 * std::abs(mid.d2c) + 1e-5);
        CHECK(std::abs((hi.c - 2.0 * mid.c + lo.c) / (h * h) - mid.d2c) <
              1e-4 * std::abs(mid.d2c) + 1e-4);
    }
}

TEST_CASE("profile mirror symmetry and model identity") {
    ProfileCurve c(3.0);
    for (double t : {0.1, 0.8, 2.4, 3.3, 3.9, 4.4, 5.2}) {
        ProfileValue p = c.eval(t), m = c.eval(-t);
        CHECK(std::abs(m.c) == Catch::Approx(std::abs(p.c)).epsilon(1e-14));
        CHECK(wrap_angle(std::arg(m.c) - (PI / 2 - std::arg(p.c))) ==
              Catch::Approx(0.0).margin(1e-12));
        CHECK(std::abs(p.c) > 0.0);
    }
    for (double t = -3.0; t <= 3.0; t += 0.171) {
        ProfileValue p = c.eval(t);
        CHECK(std::imag(std::conj(p.dc) * p.c) == Catch::Approx(-2.0).epsilon(1e-14));
    }
}

TEST_CASE("handle patch is exactly Lagrangian with analytic Jacobians") {
    AmbientSpace cp2 = AmbientSpace::cp2();
    ChartId z2{SpaceKind::CP2, 2, 0};

    HandleSpec s{PI / 3, 2 * PI / 3};
    Patch p = handle_patch(cp2, z2, s, 0.0, TWO_PI, "h001");
    CHECK(lagrangian_defect(cp2, p, 32) < 1e-12);

    HandleSpec mixed{PI / 2, PI / 2};
    Patch q = handle_patch(AmbientSpace::cp1xcp1(), {SpaceKind::CP1xCP1, 1, 1}, mixed);
    CHECK(lagrangian_defect(AmbientSpace::cp1xcp1(), q, 32) < 1e-12);
}

TEST_CASE("handle asymptotes are exactly linear outside the model window") {
    HandleSpec s{PI / 3, 2 * PI / 3};
    ProfileCurve prof(s.T, true);
    for (double t : {s.T + 1.0, s.T + 1.3, s.t_out()}) {
        for (double eta : {0.3, 1.7, 4.0}) {
            C2 z = handle_flat(s, prof, t, eta);
            // on l1: components lie on the rays e^{i theta_j} R
            CHECK(std::abs(std::imag(z[0] * std::polar(1.0, -s.theta0))) < 1e-15);
            CHECK(std::abs(std::imag(z[1] * std::polar(1.0, -s.theta1))) < 1e-15);
            C2 w = handle_flat(s, prof, -t, eta);
            CHECK(std::abs(std::imag(w[0])) < 1e-15);  // on l0 = R^2
            CHECK(std::abs(std::imag(w[1])) < 1e-15);
        }
    }
}

TEST_CASE("Lagrangian angle condition") {
    HandleSpec bad{PI / 3, 5 * PI / 3};
    CHECK_THROWS_AS(bad.validate(), AngleMismatch);
    HandleSpec good{PI / 3, 2 * PI / 3};
    CHECK_NOTHROW(good.validate());
    // the paper's mixed handle at [0:0:1] is the (pi/3, -pi/3+pi) encoding
    HandleSpec mixed{PI / 3, -PI / 3 + PI};
    CHECK_NOTHROW(mixed.validate());
}

TEST_CASE("unsmoothed pi/2 model traces the hyperbola xy = eps1^2") {
    HandleSpec s{PI / 2, PI / 2, 1.0, 3.0, 1.0, 1e9};
    s.smoothed = false;
    ProfileCurve prof(s.T, false);
    for (double t = -3.0; t <= 3.0; t += 0.25) {
        cplx z = factor_trace(s, prof, 0, t);
        CHECK(std::real(z) * std::imag(z) == Catch::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("factor trace areas") {
    SECTION("grey area 2T+1 for the unsmoothed pi/2 model") {
        HandleSpec s{PI / 2, PI / 2, 1.0, 3.0, 1.0, 1e9};
        s.smoothed = false;
        double a = factor_trace_area(s, 0, 80.0);
        CHECK(a == Catch::Approx(7.0).margin(1e-6));
    }
    SECTION("area ratio is sin(alpha) at T = 5") {
        HandleSpec a{PI / 3, 2 * PI / 3, 1.0, 5.0, 1.0, 1e9};
        HandleSpec b{PI / 2, PI / 2, 1.0, 5.0, 1.0, 1e9};
        a.smoothed = b.smoothed = false;
        double ratio = factor_trace_area(a, 0, 1e3) / factor_trace_area(b, 0, 1e3);
        CHECK(ratio == Catch::Approx(std::sin(PI / 3)).epsilon(0.01));
    }
    SECTION("conformal rescaling scales areas by lambda^2") {
        HandleSpec s{PI / 3, 2 * PI / 3};
        HandleSpec half = s;
        half.lambda = s.lambda / 2;
        double a1 = factor_trace_area(s, 1, 1.0);
        double a2 = factor_trace_area(half, 1, 1.0);
        CHECK(a2 * 4.0 == Catch::Approx(a1).epsilon(1e-8));
    }
}

TEST_CASE("a(eps) measurements") {
    HandleSpec s{PI / 3, 2 * PI / 3};
    SECTION("the two factors agree") {
        ProfileCurve prof(s.T, true);
        double a0 = std::abs(integrate_1d_breaks(
            [&](double t) { return detail::trace_sector_integrand(s, prof, 0, t); }, -s.t_out(),
            s.t_out(), {-s.T - 1, -s.T, 0.0, s.T, s.T + 1}, 8, 20));
        double a1 = std::abs(integrate_1d_breaks(
            [&](double t) { return detail::trace_sector_integrand(s, prof, 1, t); }, -s.t_out(),
            s.t_out(), {-s.T - 1, -s.T, 0.0, s.T, s.T + 1}, 8, 20));
        CHECK(std::abs(a0 - a1) < 1e-9);
        CHECK_NOTHROW(measure_a_eps(s));
    }
    SECTION("lambda halved divides a(eps) by four") {
        HandleSpec half = s;
        half.lambda = s.lambda / 2;
        CHECK(measure_a_eps(half) * 4.0 == Catch::Approx(measure_a_eps(s)).epsilon(1e-8));
    }
    SECTION("independent coarser quadrature agrees to 1e-4 relative") {
        ProfileCurve prof(s.T, true);
        double fine = measure_a_eps(s);
        // trapezoid oracle on a dense uniform grid, no Gauss machinery
        int n = 20000;
        double lo = -s.t_out(), hi = s.t_out(), sum = 0.0;
        for (int i = 0; i < n; ++i) {
            double t0 = lo + (hi - lo) * i / n, t1 = lo + (hi - lo) * (i + 1) / n;
            sum += 0.5 * (detail::trace_sector_integrand(s, prof, 0, t0) +
                          detail::trace_sector_integrand(s, prof, 0, t1)) *
                   (t1 - t0);
        }
        CHECK(std::abs(std::abs(sum) - fine) < 1e-4 * fine);
    }
}

TEST_CASE("containment precondition") {
    HandleSpec s{PI / 3, 2 * PI / 3};
    s.lambda *= 2.0;  // eps1 e^{T+1} lambda now exceeds eps
    CHECK_THROWS_AS(s.validate(), ContainmentViolation);
}

TEST_CASE("gamma curve satisfies every constraint") {
    GammaCurve g = GammaCurve::standard();
    CHECK(g.enclosed_area() == Catch::Approx(1.0).margin(1e-9));
    CHECK(g.t_max() < PI / 2);
    CHECK(g.rho(0.0) == Catch::Approx(g.rho_min));
    CHECK(g.rho(PI) == Catch::Approx(g.rho_max));
    // strict monotonicity of |gamma| on (0, pi)
    double prev = g.rho(1e-3);
    for (double s = 0.02; s < PI; s += 0.02) {
        CHECK(g.rho(s) > prev);
        prev = g.rho(s);
    }
    // symmetry about the real axis and containment
    for (double s = 0.0; s < TWO_PI; s += 0.05) {
        cplx a = g.eval(s), b = g.eval(TWO_PI - s);
        CHECK(std::abs(std::conj(a) - b) < 1e-12);
        CHECK(std::abs(a) < std::sqrt((2.0 + g.eps_prime) / PI));
        CHECK(std::real(a) > 0.0);
    }
    // finite differences confirm the analytic derivative
    for (double s = 0.1; s < TWO_PI; s += 0.37) {
        double h = 1e-6;
        cplx fd = (g.eval(s + h) - g.eval(s - h)) / (2 * h);
        CHECK(std::abs(fd - g.deriv(s)) < 1e-7);
    }
}
