#include <catch2/catch_amalgamated.hpp>

#include "lagsurg/catalog.hpp"
#include "lagsurg/surfaces.hpp"

using namespace lagsurg;

TEST_CASE("defect: Clifford torus is exactly Lagrangian") {
    Construction c = detail::build_clifford({});
    CHECK(lagrangian_defect(c.atlas.space, c.atlas.patches[0], 32) < 1e-13);
    // finite differences stay within the loose gate
    CHECK(lagrangian_defect(c.atlas.space, c.atlas.patches[0], 32, 1e-5 * TWO_PI) < 1e-6);
}

TEST_CASE("defect: a complex line is maximally non-Lagrangian") {
    Patch p;
    p.name = "cxline";
    p.chart = ChartId{SpaceKind::CP2, 2, 0};
    p.u_range = {-0.5, 0.5};
    p.v_range = {-0.5, 0.5};
    p.f = [](double u, double v) { return C2{cplx(u, v), 0.0}; };
    double d = lagrangian_defect(AmbientSpace::cp2(), p, 16);
    CHECK(d == Catch::Approx(1.0).margin(1e-2));
}

TEST_CASE("defect: degenerate Jacobian is reported") {
    Patch p;
    p.name = "degenerate";
    p.chart = ChartId{SpaceKind::CP2, 2, 0};
    p.f = [](double u, double v) { return C2{cplx(u + v, 0), cplx(u + v, 0)}; };
    CHECK_THROWS_AS(lagrangian_defect(AmbientSpace::cp2(), p, 8), DegenerateJacobian);
}

TEST_CASE("defect: modified Chekanov torus") {
    Construction c = detail::build_cs_torus({}, true);
    CHECK(lagrangian_defect(c.atlas.space, c.atlas.patches[0], 64) < 1e-12);
    CHECK(lagrangian_defect(c.atlas.space, c.atlas.patches[0], 64, 1e-5 * TWO_PI) < 1e-6);
}

TEST_CASE("mesh topology of the simple atlases") {
    SECTION("torus patch: chi = 0, orientable") {
        Construction c = detail::build_clifford({});
        SurfaceMesh m = build_mesh(c.atlas, 12);
        CHECK(m.closed);
        CHECK(m.euler == 0);
        CHECK(m.orientable);
    }
    SECTION("real CP2 via cube faces and deck: chi = 1, nonorientable") {
        Construction c = detail::build_real_cp2({});
        SurfaceMesh m = build_mesh(c.atlas, 12);
        CHECK(m.closed);
        CHECK(m.euler == 1);
        CHECK_FALSE(m.orientable);
    }
    SECTION("real product torus") {
        Construction c = detail::build_real_product({});
        SurfaceMesh m = build_mesh(c.atlas, 12);
        CHECK(m.closed);
        CHECK(m.euler == 0);
        CHECK(m.orientable);
    }
}

TEST_CASE("K#Sigma2 atlas") {
    Construction c = detail::build_ksigma2({});

    SECTION("topology: chi = -4, nonorientable; invariant under refinement") {
        SurfaceMesh m = build_mesh(c.atlas, 8);
        CHECK(m.closed);
        CHECK(m.euler == -4);
        CHECK_FALSE(m.orientable);
        CHECK(m.max_glue_gap < 1e-9);
        SurfaceMesh m2 = build_mesh(c.atlas, 16);
        CHECK(m2.euler == -4);
        CHECK_FALSE(m2.orientable);
    }

    SECTION("exactly Lagrangian with analytic Jacobians") {
        CHECK(atlas_defect(c.atlas, 24) < 1e-9);
    }

    SECTION("seam: one circle per coordinate line") {
        for (int k = 0; k < 3; ++k) {
            auto curves = restrict_to_line(c.atlas, CoordLine{0, k}, 48);
            CHECK(curves.size() == 1);
            CHECK(curves[0].closed);
        }
    }

    SECTION("handle quadrants per Figure: opposite 2pi/3-sectors at [0:0:1]") {
        // the {z0 = 0} trace of the corner-2 handle lies in arg-(0..2pi/3)
        // and its opposite sector
        const HandleSpec& s = c.sites[2].spec;
        ProfileCurve prof(s.T, true);
        for (double t = -s.t_out(); t <= s.t_out(); t += 0.23) {
            cplx z1 = s.lambda * shear(s.theta1, prof.eval(t).c * s.eps1);
            double a = std::arg(z1);
            if (a < 0) a += TWO_PI;
            CHECK((a <= 2 * PI / 3 + 1e-9 ||
                   (a >= PI - 1e-9 && a <= PI + 2 * PI / 3 + 1e-9)));
        }
    }
}

TEST_CASE("Clifford torus misses the coordinate lines") {
    Construction c = detail::build_clifford({});
    auto curves = restrict_to_line(c.atlas, CoordLine{0, 0}, 32);
    CHECK(curves.empty());
}
