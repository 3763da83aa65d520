#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "lagsurg/ambient.hpp"

using namespace lagsurg;

TEST_CASE("chart embed/project round trips") {
    AmbientSpace cp2 = AmbientSpace::cp2();
    (void)cp2;
    ChartId z2{SpaceKind::CP2, 2, 0};

    HomogeneousPoint p = HomogeneousPoint::cp2(1, 1, 1);
    ChartPoint c = chart_project(p, z2);
    CHECK(std::abs(c.z[0] - 1.0) < 1e-15);
    CHECK(std::abs(c.z[1] - 1.0) < 1e-15);
    CHECK(proj_distance(chart_embed(c), p) < 1e-12);

    ChartPoint origin = chart_project(HomogeneousPoint::cp2(0, 0, 1), z2);
    CHECK(std::abs(origin.z[0]) == 0.0);
    CHECK(std::abs(origin.z[1]) == 0.0);

    CHECK_THROWS_AS(chart_project(HomogeneousPoint::cp2(1, 0, 0), z2), ProjectionOutsideChart);

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-2, 2);
    for (int k = 0; k < 50; ++k) {
        HomogeneousPoint h = HomogeneousPoint::cp2({U(rng), U(rng)}, {U(rng), U(rng)}, {U(rng) + 3.0, U(rng)});
        ChartPoint cp = chart_project(h, z2);
        CHECK(proj_distance(chart_embed(cp), h) < 1e-12);
    }
}

TEST_CASE("projective equality respects per-factor scaling") {
    HomogeneousPoint a = HomogeneousPoint::cp2(1, 2, 3);
    HomogeneousPoint b = HomogeneousPoint::cp2(cplx(0, 2), cplx(0, 4), cplx(0, 6));
    CHECK(proj_equal(a, b));
    HomogeneousPoint p = HomogeneousPoint::product(1, 2, 3, 4);
    HomogeneousPoint q = HomogeneousPoint::product(cplx(0, 1), cplx(0, 2), -3, -4);
    CHECK(proj_equal(p, q));
    CHECK(!proj_equal(a, HomogeneousPoint::cp2(1, 2, 3.001)));
}

TEST_CASE("moment map values") {
    auto m = moment_map(HomogeneousPoint::cp2(1, 1, 1));
    CHECK(m[0] == Catch::Approx(1.0).margin(1e-15));
    CHECK(m[1] == Catch::Approx(1.0).margin(1e-15));
    auto o = moment_map(HomogeneousPoint::cp2(0, 0, 1));
    CHECK(o[0] == 0.0);
    CHECK(o[1] == 0.0);
    auto pr = moment_map(HomogeneousPoint::product(1, 1, 1, 0));
    CHECK(pr[0] == Catch::Approx(1.0));
    CHECK(pr[1] == Catch::Approx(2.0));
}

TEST_CASE("moment map is phase invariant") {
    HomogeneousPoint h = HomogeneousPoint::cp2({0.3, 0.2}, {-1.1, 0.4}, {0.9, -0.7});
    HomogeneousPoint g = h;
    g.z[0] *= std::polar(1.0, 1.234);
    g.z[1] *= std::polar(1.0, -2.5);
    g.z[2] *= std::polar(1.0, 0.77);
    auto a = moment_map(h), b = moment_map(g);
    CHECK(a[0] == Catch::Approx(b[0]).margin(1e-15));
    CHECK(a[1] == Catch::Approx(b[1]).margin(1e-15));
}

TEST_CASE("line area quadrature reproduces the normalization") {
    AmbientSpace cp2 = AmbientSpace::cp2();
    for (int coord = 0; coord < 3; ++coord)
        CHECK(line_area_quadrature(cp2, 0, coord) == Catch::Approx(3.0).margin(1e-6));
    AmbientSpace pp = AmbientSpace::cp1xcp1();
    for (int f = 0; f < 2; ++f)
        CHECK(line_area_quadrature(pp, f, 0) == Catch::Approx(2.0).margin(1e-6));
}

TEST_CASE("omega at the chart origin is the flat form scaled by line_area/pi") {
    AmbientSpace cp2 = AmbientSpace::cp2();
    ChartPoint origin{{SpaceKind::CP2, 2, 0}, {0.0, 0.0}};
    auto M = fubini_study_matrix(cp2, origin);
    double s = 3.0 / PI;
    CHECK(M[0][1] == Catch::Approx(s).margin(1e-14));
    CHECK(M[2][3] == Catch::Approx(s).margin(1e-14));
    CHECK(std::abs(M[0][2]) < 1e-14);
    CHECK(std::abs(M[0][3]) < 1e-14);
    CHECK(std::abs(M[1][2]) < 1e-14);
}

TEST_CASE("primitive: d lambda = omega by finite differences") {
    AmbientSpace cp2 = AmbientSpace::cp2();
    ChartId z2{SpaceKind::CP2, 2, 0};
    auto alpha = [&](const ChartPoint& p, const C2& u) { return primitive(cp2, p, u); };

    ChartPoint p{z2, {cplx(0.3, 0.1), cplx(0.0, -0.2)}};
    const C2 basis[4] = {{cplx(1, 0), 0}, {cplx(0, 1), 0}, {0, cplx(1, 0)}, {0, cplx(0, 1)}};
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
            double d = fd_exterior_derivative(alpha, p, basis[a], basis[b]);
            double w = fubini_study(cp2, p, basis[a], basis[b]);
            CHECK(d == Catch::Approx(w).margin(1e-6));
        }

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> U(-1.5, 1.5);
    AmbientSpace pp = AmbientSpace::cp1xcp1();
    for (int k = 0; k < 10; ++k) {
        ChartPoint q{{SpaceKind::CP1xCP1, 0, 1}, {cplx(U(rng), U(rng)), cplx(U(rng), U(rng))}};
        auto alphap = [&](const ChartPoint& r, const C2& u) { return primitive(pp, r, u); };
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b) {
                double d = fd_exterior_derivative(alphap, q, basis[a], basis[b]);
                double w = fubini_study(pp, q, basis[a], basis[b]);
                CHECK(d == Catch::Approx(w).margin(1e-6));
            }
    }
}

TEST_CASE("chart transitions pull the form back consistently") {
    AmbientSpace cp2 = AmbientSpace::cp2();
    ChartId z2{SpaceKind::CP2, 2, 0}, z0{SpaceKind::CP2, 0, 0}, z1{SpaceKind::CP2, 1, 0};
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(0.2, 1.3);
    const C2 basis[4] = {{cplx(1, 0), 0}, {cplx(0, 1), 0}, {0, cplx(1, 0)}, {0, cplx(0, 1)}};
    for (int k = 0; k < 20; ++k) {
        ChartPoint p{z2, {cplx(U(rng), U(rng)), cplx(U(rng), -U(rng))}};
        for (const ChartId& to : {z0, z1}) {
            ChartPoint q = chart_project(chart_embed(p), to);
            for (int a = 0; a < 4; ++a)
                for (int b = a + 1; b < 4; ++b) {
                    C2 ta = transition_tangent(p, to, basis[a]);
                    C2 tb = transition_tangent(p, to, basis[b]);
                    double w_from = fubini_study(cp2, p, basis[a], basis[b]);
                    double w_to = fubini_study(cp2, q, ta, tb);
                    CHECK(w_to == Catch::Approx(w_from).margin(1e-9));
                }
        }
    }
}

TEST_CASE("Darboux map is an exact symplectomorphism onto the flat ball") {
    AmbientSpace cp2 = AmbientSpace::cp2();
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const C2 basis[4] = {{cplx(1, 0), 0}, {cplx(0, 1), 0}, {0, cplx(1, 0)}, {0, cplx(0, 1)}};
    for (int k = 0; k < 25; ++k) {
        C2 z{cplx(U(rng), U(rng)), cplx(U(rng), U(rng))};
        C2 Z = darboux_fwd(cp2, z);
        C2 back = darboux_inv(cp2, Z);
        CHECK(std::abs(back[0] - z[0]) < 1e-12);
        CHECK(std::abs(back[1] - z[1]) < 1e-12);
        CHECK(std::norm(Z[0]) + std::norm(Z[1]) < 3.0 / PI);  // capacity-3 ball
        // flat form pulled back through darboux_inv equals omega at darboux_inv(Z)
        double h = 1e-6;
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b) {
                auto push = [&](const C2& dir) {
                    C2 plus = darboux_inv(cp2, Z + h * dir);
                    C2 minus = darboux_inv(cp2, Z - h * dir);
                    return (1.0 / (2 * h)) * (plus - minus);
                };
                C2 ua = push(basis[a]), ub = push(basis[b]);
                double flat = -std::imag(basis[a][0] * std::conj(basis[b][0]) +
                                         basis[a][1] * std::conj(basis[b][1]));
                ChartPoint cp{{SpaceKind::CP2, 2, 0}, z};
                double fs = fubini_study(cp2, cp, ua, ub);
                CHECK(fs == Catch::Approx(flat).margin(1e-7));
            }
        // analytic inverse Jacobian matches finite differences
        for (int a = 0; a < 4; ++a) {
            C2 fd = (1.0 / (2 * h)) * (darboux_inv(cp2, Z + h * basis[a]) - darboux_inv(cp2, Z - h * basis[a]));
            C2 an = darboux_inv_jacobian(cp2, Z, basis[a]);
            CHECK(std::abs(fd[0] - an[0]) < 1e-7);
            CHECK(std::abs(fd[1] - an[1]) < 1e-7);
        }
    }
}

TEST_CASE("action-angle coordinates") {
    AmbientSpace cp2 = AmbientSpace::cp2();

    SECTION("barycenter fiber hits the Clifford torus; theta=pi/2 gives [1:1:1]") {
        HomogeneousPoint h = from_action_angle(cp2, {{1, 1}, {PI / 2, PI / 2}});
        CHECK(proj_distance(h, HomogeneousPoint::cp2(1, 1, 1)) < 1e-12);
        HomogeneousPoint g = from_action_angle(cp2, {{1, 1}, {0.3, 2.2}});
        auto m = moment_map(g);
        CHECK(m[0] == Catch::Approx(1.0).margin(1e-12));
        CHECK(m[1] == Catch::Approx(1.0).margin(1e-12));
    }

    SECTION("moment round trip") {
        HomogeneousPoint h = from_action_angle(cp2, {{0.5, 0.7}, {1.2, 2.5}});
        auto m = moment_map(h);
        CHECK(m[0] == Catch::Approx(0.5).margin(1e-10));
        CHECK(m[1] == Catch::Approx(0.7).margin(1e-10));
    }

    SECTION("outside the open polytope") {
        CHECK_THROWS_AS(from_action_angle(cp2, {{2.0, 1.5}, {0, 0}}), OutsidePolytopeInterior);
        CHECK_THROWS_AS(from_action_angle(cp2, {{0.0, 1.0}, {0, 0}}), OutsidePolytopeInterior);
    }

    SECTION("fiber-plus-radial families reproduce the product form (1/2pi) dx^dtheta") {
        ChartId z2{SpaceKind::CP2, 2, 0};
        std::array<double, 2> x0{0.8, 0.9};
        std::array<double, 2> th0{0.7, 1.9};
        double h = 1e-5;
        auto embed = [&](double x1, double x2, double t1, double t2) {
            return chart_project(from_action_angle(cp2, {{x1, x2}, {t1, t2}}), z2);
        };
        ChartPoint base = embed(x0[0], x0[1], th0[0], th0[1]);
        auto tangent = [&](int var) {
            std::array<double, 4> q{x0[0], x0[1], th0[0], th0[1]};
            auto qp = q, qm = q;
            qp[size_t(var)] += h;
            qm[size_t(var)] -= h;
            ChartPoint a = embed(qp[0], qp[1], qp[2], qp[3]);
            ChartPoint b = embed(qm[0], qm[1], qm[2], qm[3]);
            return (1.0 / (2 * h)) * (a.z - b.z);
        };
        C2 dx1 = tangent(0), dx2 = tangent(1), dt1 = tangent(2), dt2 = tangent(3);
        CHECK(fubini_study(cp2, base, dx1, dt1) == Catch::Approx(1.0 / TWO_PI).margin(1e-6));
        CHECK(fubini_study(cp2, base, dx2, dt2) == Catch::Approx(1.0 / TWO_PI).margin(1e-6));
        CHECK(std::abs(fubini_study(cp2, base, dx1, dt2)) < 1e-6);
        CHECK(std::abs(fubini_study(cp2, base, dx2, dt1)) < 1e-6);
        CHECK(std::abs(fubini_study(cp2, base, dt1, dt2)) < 1e-6);  // fibers are Lagrangian
    }
}
