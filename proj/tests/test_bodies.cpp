#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "opm/bodies.hpp"
#include "opm/errors.hpp"

using namespace opm;
using std::numbers::pi;

namespace {

// Deterministic random H-polytope whose normals escape every hemisphere:
// a regular frame plus jittered extra facets.
HPolytope random_polytope(std::mt19937_64& rng, std::size_t n, std::size_t extra) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> z(0.6, 2.0);
    std::vector<UnitVector> normals;
    std::vector<double> offsets;
    for (std::size_t d = 0; d < n; ++d) {
        normals.push_back(UnitVector::axis(n, d, 1.0));
        normals.push_back(UnitVector::axis(n, d, -1.0));
        offsets.push_back(z(rng));
        offsets.push_back(z(rng));
    }
    for (std::size_t k = 0; k < extra; ++k) {
        Vec v(n);
        for (double& c : v) c = u(rng);
        if (norm(v) < 1e-3) v[0] = 1.0;
        normals.push_back(UnitVector::normalize(v));
        offsets.push_back(z(rng));
    }
    return HPolytope(std::move(normals), std::move(offsets));
}

}  // namespace

TEST_CASE("vertex enumeration on the catalog") {
    HPolytope cube = cube_polytope(3, 1.0);
    CHECK(cube.vertices().vertices.size() == 8);

    // simplex with normals {-e1, -e2, (1,1)/sqrt2} and z = (1, 1, 1/sqrt2)
    HPolytope simplex({UnitVector::axis(2, 0, -1.0), UnitVector::axis(2, 1, -1.0),
                       UnitVector::normalize({1.0, 1.0})},
                      {1.0, 1.0, 1.0 / std::sqrt(2.0)});
    CHECK(simplex.vertices().vertices.size() == 3);
    bool found = false;
    for (const Vec& v : simplex.vertices().vertices)
        if (std::abs(v[0] + 1.0) < 1e-9 && std::abs(v[1] + 1.0) < 1e-9) found = true;
    CHECK(found);
    CHECK(simplex.volume() == doctest::Approx(4.5).epsilon(1e-9));  // shoelace on the 3 vertices

    // every vertex satisfies the constraints
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 5; ++trial) {
        HPolytope p = random_polytope(rng, 2, 4);
        for (const Vec& v : p.vertices().vertices)
            for (std::size_t i = 0; i < p.facet_count(); ++i)
                CHECK(dot(p.normals()[i], v) <= p.offsets()[i] + 1e-9);
    }
}

TEST_CASE("support matches a dense radial-sampling oracle") {
    // oracle = max over boundary points rho(w) <w, u>, where rho comes from
    // the normals/offsets alone (never the vertex enumeration): dense angular
    // grid, then golden-section refinement around the best angle.
    std::mt19937_64 rng(2024);
    const std::size_t grid = 4096;
    auto boundary_max = [&](const HPolytope& p, const UnitVector& u) {
        auto f = [&](double ang) {
            UnitVector w = UnitVector::normalize({std::cos(ang), std::sin(ang)});
            return p.radial(w) * dot(w, u);
        };
        double best = -1e300, best_ang = 0.0;
        for (std::size_t k = 0; k < grid; ++k) {
            double ang = 2.0 * pi * double(k) / double(grid);
            double v = f(ang);
            if (v > best) {
                best = v;
                best_ang = ang;
            }
        }
        double a = best_ang - 2.0 * pi / double(grid), b = best_ang + 2.0 * pi / double(grid);
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = f(x1), f2 = f(x2);
        for (int it = 0; it < 120; ++it) {
            if (f1 > f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = f(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = f(x2);
            }
        }
        return std::max(f1, f2);
    };
    for (int trial = 0; trial < 6; ++trial) {
        HPolytope p = random_polytope(rng, 2, 4);
        double worst = 0.0;
        auto probe = product_rule(2, 32);
        for (const UnitVector& u : probe.nodes())
            worst = std::max(worst, std::abs(boundary_max(p, u) - p.support(u)));
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("radial closed forms") {
    StarBody ball = StarBody::ball(3, 2.0);
    CHECK(ball.radial(UnitVector::axis(3, 1)) == doctest::Approx(2.0));

    // flattened ellipsoid: rho(e_n) = eps
    StarBody flat = StarBody::ellipsoid({1.0, 1.0, 0.5});
    CHECK(flat.radial(UnitVector::axis(3, 2)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(flat.radial(UnitVector::axis(3, 0)) == doctest::Approx(1.0).epsilon(1e-12));

    // cone radial: 1/r at the apex, sqrt(2)/(R+r) at 45 degrees, 1/R at the equator
    StarBody cone = StarBody::cone(3, 1.0, 0.5);
    CHECK(cone.radial(UnitVector::axis(3, 2)) == doctest::Approx(2.0));
    UnitVector diag = UnitVector::normalize({1.0, 0.0, 1.0});
    CHECK(cone.radial(diag) == doctest::Approx(std::sqrt(2.0) / 1.5).epsilon(1e-12));
    UnitVector equator = UnitVector::axis(3, 0);
    CHECK(cone.radial(equator) == doctest::Approx(1.0));
    CHECK(cone.radial(UnitVector::axis(3, 2, -1.0)) == doctest::Approx(0.0));
    CHECK_THROWS_AS(cone.support(equator), SchemaError);

    // square P(z) with z = 1: rho((1,1)/sqrt2) = sqrt2
    HPolytope square = cube_polytope(2, 1.0);
    CHECK(square.radial(UnitVector::normalize({1.0, 1.0})) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("support and polar support on cubes") {
    HPolytope square = cube_polytope(2, 1.0);
    CHECK(square.support(UnitVector::axis(2, 0)) == doctest::Approx(1.0));
    CHECK(square.support(UnitVector::normalize({1.0, 1.0})) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(square.polar_support(UnitVector::axis(2, 0)) == doctest::Approx(1.0));

    HPolytope big = cube_polytope(2, 2.0);
    CHECK(big.polar_support(UnitVector::axis(2, 0)) == doctest::Approx(0.5));

    // circumscribed polygon support of the ball stays within [1, 1/cos(pi/m)]
    HPolytope poly = regular_polygon(64, 1.0);
    double worst = 0.0;
    auto fine = product_rule(2, 256);
    for (const UnitVector& u : fine.nodes())
        worst = std::max(worst, std::abs(poly.support(u) - 1.0));
    CHECK(worst <= 0.01);
}

TEST_CASE("duality identities at random directions") {
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> c(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        HPolytope p = random_polytope(rng, trial % 2 ? 2 : 3, 4);
        for (int k = 0; k < 100; ++k) {
            Vec v(p.dim());
            for (double& x : v) x = c(rng);
            if (norm(v) < 1e-3) continue;
            UnitVector u = UnitVector::normalize(v);
            CHECK(p.polar_radial(u) * p.support(u) == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(p.polar_support(u) * p.radial(u) == doctest::Approx(1.0).epsilon(1e-9));
        }
        // polar H-form agrees with the closed-form polar support
        HPolytope polar = p.polar();
        for (int k = 0; k < 20; ++k) {
            Vec v(p.dim());
            for (double& x : v) x = c(rng);
            if (norm(v) < 1e-3) continue;
            UnitVector u = UnitVector::normalize(v);
            CHECK(polar.support(u) == doctest::Approx(p.polar_support(u)).epsilon(1e-9));
        }
    }
}

TEST_CASE("scaling and monotone inclusion") {
    std::mt19937_64 rng(31);
    HPolytope p = random_polytope(rng, 2, 3);
    HPolytope p2 = p.scaled(2.5);
    StarBody body = StarBody::polytope(p);
    StarBody scaled_body = StarBody::scaled(StarBody::polytope(p), 2.5);
    auto rule32 = product_rule(2, 32);
    for (const UnitVector& u : rule32.nodes()) {
        CHECK(scaled_body.radial(u) == doctest::Approx(2.5 * body.radial(u)));
        CHECK(p2.support(u) == doctest::Approx(2.5 * p.support(u)).epsilon(1e-12));
    }

    // z <= z' componentwise implies rho_P(z) <= rho_P(z')
    std::vector<double> z2 = p.offsets();
    for (double& z : z2) z *= 1.3;
    HPolytope bigger(p.normals(), z2);
    for (const UnitVector& u : rule32.nodes())
        CHECK(p.radial(u) <= bigger.radial(u) + 1e-12);
}

TEST_CASE("surface area measure and volume") {
    HPolytope cube = cube_polytope(3, 1.0);
    SurfaceAreaMeasure sam = cube.surface_area_measure();
    CHECK(sam.areas.size() == 6);
    for (double a : sam.areas) CHECK(a == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(cube.volume() == doctest::Approx(8.0).epsilon(1e-10));

    HPolytope square = cube_polytope(2, 1.0);
    SurfaceAreaMeasure sam2 = square.surface_area_measure();
    CHECK(sam2.areas.size() == 4);
    for (double a : sam2.areas) CHECK(a == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(square.volume() == doctest::Approx(4.0).epsilon(1e-12));

    // shoelace cross-check: (1/2) sum length_i z_i equals the polygon area
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 8; ++trial) {
        HPolytope p = random_polytope(rng, 2, 4);
        std::vector<Vec> vs = p.vertices().vertices;
        Vec center(2, 0.0);
        for (const Vec& v : vs) {
            center[0] += v[0];
            center[1] += v[1];
        }
        center[0] /= double(vs.size());
        center[1] /= double(vs.size());
        std::sort(vs.begin(), vs.end(), [&](const Vec& a, const Vec& b) {
            return std::atan2(a[1] - center[1], a[0] - center[0]) <
                   std::atan2(b[1] - center[1], b[0] - center[0]);
        });
        double shoelace = 0.0;
        for (std::size_t i = 0; i < vs.size(); ++i) {
            const Vec& a = vs[i];
            const Vec& b = vs[(i + 1) % vs.size()];
            shoelace += a[0] * b[1] - b[0] * a[1];
        }
        shoelace = 0.5 * std::abs(shoelace);
        CHECK(p.volume() == doctest::Approx(shoelace).epsilon(1e-9));
    }
}

TEST_CASE("hausdorff distance") {
    auto rule = product_rule(2, 64);
    HPolytope square = cube_polytope(2, 1.0);
    CHECK(hausdorff_distance(square, square, rule) == doctest::Approx(0.0));

    HPolytope big = cube_polytope(2, 2.0);
    // sup |2-1| h_square = sqrt2 on the diagonal (a rule node at 64 points)
    CHECK(hausdorff_distance(square, big, rule) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));

    HPolytope tri({UnitVector::axis(2, 0, -1.0), UnitVector::axis(2, 1, -1.0),
                   UnitVector::normalize({1.0, 1.0})},
                  {1.0, 1.0, 1.0});
    HPolytope tri_small = tri.scaled(0.9);
    double maxh = 0.0;
    for (const UnitVector& u : rule.nodes()) maxh = std::max(maxh, tri.support(u));
    CHECK(hausdorff_distance(tri, tri_small, rule) == doctest::Approx(0.1 * maxh).epsilon(1e-9));
}

TEST_CASE("support average matches the harmonic-mean polar identity") {
    std::mt19937_64 rng(88);
    HPolytope p = random_polytope(rng, 2, 3);
    HPolytope q = random_polytope(rng, 2, 5);
    StarBody avg = StarBody::support_average(p, q);
    auto rule48 = product_rule(2, 48);
    for (const UnitVector& u : rule48.nodes()) {
        CHECK(avg.support(u) == doctest::Approx(0.5 * (p.support(u) + q.support(u))).epsilon(1e-12));
        double rp = p.polar_radial(u), rq = q.polar_radial(u);
        CHECK(avg.polar_radial(u) ==
              doctest::Approx(2.0 * rp * rq / (rp + rq)).epsilon(1e-10));
    }
    // in the plane the radial of the average is exact: consistent with support
    auto rule16 = product_rule(2, 16);
    for (const UnitVector& u : rule16.nodes()) {
        double rho = avg.radial(u);
        CHECK(rho <= avg.support(u) + 1e-12);
        CHECK(rho > 0.0);
    }
}

TEST_CASE("invariant violations are rejected") {
    // offsets must be positive
    CHECK_THROWS_AS(HPolytope({UnitVector::axis(2, 0), UnitVector::axis(2, 1),
                               UnitVector::axis(2, 0, -1.0)},
                              {1.0, 1.0, -1.0}),
                    SchemaError);
    // fewer than n+1 facets
    CHECK_THROWS_AS(HPolytope({UnitVector::axis(2, 0), UnitVector::axis(2, 1)}, {1.0, 1.0}),
                    SchemaError);
    // normals concentrated on a hemisphere (unbounded)
    CHECK_THROWS_AS(HPolytope({UnitVector::axis(2, 0), UnitVector::axis(2, 1),
                               UnitVector::normalize({1.0, 1.0})},
                              {1.0, 1.0, 1.0}),
                    SchemaError);
    CHECK_THROWS_AS(StarBody::ball(3, -1.0), SchemaError);
    CHECK_THROWS_AS(StarBody::ellipsoid({1.0, 0.0, 1.0}), SchemaError);
    CHECK_THROWS_AS(StarBody::scaled(StarBody::ball(2, 1.0), 0.0), SchemaError);
}
