#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "opm/errors.hpp"
#include "opm/functionals.hpp"

using namespace opm;
using std::numbers::pi;

namespace {

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

BorelMeasure uniform_atoms(const std::vector<UnitVector>& dirs, double weight = 1.0) {
    std::vector<BorelMeasure::Atom> atoms;
    for (const UnitVector& u : dirs) atoms.push_back({u, weight});
    return BorelMeasure::discrete(std::move(atoms));
}

}  // namespace

TEST_CASE("function class certificates") {
    GFunction::power(3.0, 1.0 / 3.0).validate(product_rule(3, 8));
    GFunction::power(-1.0, 1.0).validate(product_rule(3, 8));
    GFunction::power_sum({{2.0, 0.5}, {4.0, 0.25}}).validate(product_rule(3, 8));
    PhiFunction::power(2.0).validate();
    PhiFunction::power(-1.0).validate();

    // mislabeled classes are caught by sampling
    auto bad_g = GFunction::custom([](double t, const UnitVector&) { return 1.0 / t; },
                                   MonotoneClass::Increasing, false);
    CHECK_THROWS_AS(bad_g.validate(product_rule(2, 8)), SchemaError);
    auto bad_phi = PhiFunction::custom([](double t) { return t * t; },
                                       [](double y) { return std::sqrt(y); },
                                       PhiClass::Decreasing, true);
    CHECK_THROWS_AS(bad_phi.validate(), SchemaError);
    // phi(1) != 1
    auto off_phi = PhiFunction::custom([](double t) { return 2.0 * t; },
                                       [](double y) { return 0.5 * y; },
                                       PhiClass::Increasing, true);
    CHECK_THROWS_AS(off_phi.validate(), SchemaError);
}

TEST_CASE("growth condition certificates") {
    auto rule = product_rule(3, 16);
    GFunction g3 = GFunction::power(3.0, 1.0 / 3.0);
    auto cert = check_growth_condition(g3, 2.0, 1.0, 128, rule);
    CHECK(cert.holds);
    CHECK(cert.inf_estimate == doctest::Approx(1.0 / 3.0).epsilon(1e-6));

    GFunction gq = GFunction::power(2.0, 1.0 / 3.0);
    auto cert2 = check_growth_condition(gq, 2.0, 1.0, 128, rule);
    CHECK(cert2.holds);
    CHECK(cert2.inf_estimate == doctest::Approx(1.0 / 3.0).epsilon(1e-9));

    // decreasing G never satisfies the condition with q >= n-1
    GFunction gd = GFunction::power(-1.0, 1.0);
    CHECK_FALSE(check_growth_condition(gd, 2.0, 1.0, 128, rule).holds);

    CHECK_THROWS_AS(check_growth_condition(g3, 2.0, 1.0, 50, rule), SchemaError);
}

TEST_CASE("dual volume closed forms") {
    auto rule = product_rule(3, 48);
    GFunction g = GFunction::power(3.0, 1.0 / 3.0);

    CHECK(dual_volume(g, StarBody::ball(3, 1.0), rule) ==
          doctest::Approx(4.0 * pi / 3.0).epsilon(1e-10));

    // cone: V(B^{n-1}) / (n R^{n-1} r) = pi / (3 * 1 * 0.5) = 2 pi / 3
    CHECK(dual_volume(g, StarBody::cone(3, 1.0, 0.5), rule) ==
          doctest::Approx(2.0 * pi / 3.0).epsilon(1e-6));

    // constant integrand: s^q V(B^n)
    GFunction g2 = GFunction::power(2.0, 1.0 / 3.0);
    CHECK(dual_volume(g2, StarBody::ball(3, 1.7), rule) ==
          doctest::Approx(1.7 * 1.7 * 4.0 * pi / 3.0).epsilon(1e-10));

    // decreasing G cannot see the cone's vanishing radial
    GFunction gd = GFunction::power(-1.0, 1.0);
    CHECK_THROWS_AS(dual_volume(gd, StarBody::cone(3, 1.0, 0.5), rule), NumericError);
}

TEST_CASE("homogeneous dual volume") {
    auto rule = product_rule(3, 48);
    GFunction g = GFunction::power(3.0, 1.0 / 3.0);
    double vhat = homogeneous_dual_volume(g, StarBody::ball(3, 1.0), rule);
    CHECK(vhat == doctest::Approx(std::pow(4.0 * pi / 3.0, 1.0 / 3.0)).epsilon(1e-9));

    GFunction g2 = GFunction::power(2.0, 1.0 / 3.0);
    CHECK(homogeneous_dual_volume(g2, StarBody::ball(3, 1.0), rule) ==
          doctest::Approx(std::sqrt(4.0 * pi / 3.0)).epsilon(1e-9));

    // degree-1 homogeneity, including non-power G, catalog bodies
    std::mt19937_64 rng(11);
    GFunction mixed = GFunction::power_sum({{2.0, 0.5}, {4.0, 0.25}});
    for (double s : {0.5, 2.0, 7.0}) {
        for (int trial = 0; trial < 2; ++trial) {
            StarBody body = StarBody::polytope(random_polytope(rng, 3, 2));
            double base = homogeneous_dual_volume(mixed, body, rule);
            double scaled = homogeneous_dual_volume(mixed, StarBody::scaled(body, s), rule);
            CHECK(scaled == doctest::Approx(s * base).epsilon(1e-8));
        }
    }

    // strict monotonicity under strict inclusion
    GFunction gi = GFunction::power(3.0, 1.0 / 3.0);
    CHECK(homogeneous_dual_volume(gi, StarBody::ball(3, 1.0), rule) <
          homogeneous_dual_volume(gi, StarBody::ball(3, 1.1), rule));
    StarBody cube = StarBody::polytope(cube_polytope(3, 1.0));
    StarBody cube_big = StarBody::polytope(cube_polytope(3, 1.1));
    CHECK(homogeneous_dual_volume(gi, cube, rule) <
          homogeneous_dual_volume(gi, cube_big, rule));
}

TEST_CASE("general volume and its homogeneous variant") {
    HPolytope cube = cube_polytope(3, 1.0);
    GFunction lin = GFunction::power(1.0, 1.0 / 3.0);
    CHECK(general_volume(lin, cube) == doctest::Approx(8.0).epsilon(1e-12));

    // constant G picks up surface area / n
    GFunction con = GFunction::custom([](double, const UnitVector&) { return 1.0 / 3.0; },
                                      MonotoneClass::None, false);
    CHECK(general_volume(con, cube) == doctest::Approx(8.0).epsilon(1e-12));

    HPolytope square = cube_polytope(2, 1.0);
    GFunction lin2 = GFunction::power(1.0, 0.5);
    CHECK(general_volume(lin2, square) == doctest::Approx(4.0).epsilon(1e-12));

    // homogeneous variant recovers the volume for G = t/n
    CHECK(homogeneous_general_volume(lin, cube) == doctest::Approx(8.0).epsilon(1e-9));
    CHECK(homogeneous_general_volume(lin2, square) == doctest::Approx(4.0).epsilon(1e-9));

    // degree-n homogeneity
    std::mt19937_64 rng(12);
    GFunction mixed = GFunction::power_sum({{1.0, 0.3}, {3.0, 0.2}});
    for (int trial = 0; trial < 3; ++trial) {
        HPolytope p = random_polytope(rng, 3, 2);
        double base = homogeneous_general_volume(mixed, p);
        CHECK(homogeneous_general_volume(mixed, p.scaled(2.0)) ==
              doctest::Approx(8.0 * base).epsilon(1e-8));
    }
}

TEST_CASE("general volume scaling monotone when t^{n-1} G is increasing") {
    std::mt19937_64 rng(13);
    HPolytope p = random_polytope(rng, 3, 3);
    GFunction g = GFunction::power(1.0, 1.0 / 3.0);  // t^{n-1} G = t^3/3 increasing
    double prev = 0.0;
    bool first = true;
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
        double v = general_volume(g, p.scaled(t));
        if (!first) CHECK(v > prev);
        prev = v;
        first = false;
    }
}

TEST_CASE("orlicz norm identities") {
    std::vector<UnitVector> dirs = {UnitVector::axis(2, 0), UnitVector::axis(2, 1),
                                    UnitVector::axis(2, 0, -1.0), UnitVector::axis(2, 1, -1.0)};
    BorelMeasure mu = uniform_atoms(dirs);
    PhiFunction phi = PhiFunction::power(2.0);

    auto h_one = [](const UnitVector&) { return 1.0; };
    CHECK(orlicz_norm(h_one, mu, phi) == doctest::Approx(1.0).epsilon(1e-10));

    auto h_c = [](const UnitVector&) { return 3.7; };
    CHECK(orlicz_norm(h_c, mu, phi) == doctest::Approx(3.7).epsilon(1e-10));

    // closed form for power phi: (sum lambda h^p / sum lambda)^{1/p}
    CHECK(orlicz_norm_from_values({1.0, 1.0, 2.0, 2.0}, {1.0, 1.0, 1.0, 1.0}, phi) ==
          doctest::Approx(std::sqrt(2.5)).epsilon(1e-9));

    // homogeneity and monotonicity
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> hdist(0.5, 3.0);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> h(4), masses{1.0, 2.0, 0.5, 1.5};
        for (double& x : h) x = hdist(rng);
        double base = orlicz_norm_from_values(h, masses, phi);
        for (double c : {0.5, 3.0}) {
            std::vector<double> hc(h);
            for (double& x : hc) x *= c;
            CHECK(orlicz_norm_from_values(hc, masses, phi) ==
                  doctest::Approx(c * base).epsilon(1e-9));
        }
        std::vector<double> hup(h);
        for (double& x : hup) x += 0.3;
        CHECK(orlicz_norm_from_values(hup, masses, phi) >= base);
    }

    // decreasing phi also admits the normalization:
    // phi = 1/t, values (1,4): (l + l/4)/2 = 1 so l = 1.6
    PhiFunction phid = PhiFunction::power(-1.0);
    CHECK(orlicz_norm_from_values({1.0, 4.0}, {1.0, 1.0}, phid) ==
          doctest::Approx(1.6).epsilon(1e-9));

    CHECK_THROWS_AS(orlicz_norm_from_values({1.0, -1.0}, {1.0, 1.0}, phi), NumericError);
}

TEST_CASE("objective integral") {
    PhiFunction lin = PhiFunction::power(1.0);
    BorelMeasure single = BorelMeasure::discrete({{UnitVector::axis(3, 0), 2.0}});
    CHECK(objective_integral(lin, [](const UnitVector&) { return 3.0; }, single) ==
          doctest::Approx(6.0));

    PhiFunction sq = PhiFunction::power(2.0);
    std::vector<UnitVector> dirs = {UnitVector::axis(2, 0), UnitVector::axis(2, 1),
                                    UnitVector::axis(2, 0, -1.0), UnitVector::axis(2, 1, -1.0)};
    BorelMeasure mu = uniform_atoms(dirs);
    CHECK(objective_integral(sq, [](const UnitVector&) { return 1.0; }, mu) ==
          doctest::Approx(4.0));

    HPolytope square = cube_polytope(2, 1.0);
    CHECK(objective_integral(sq, [&](const UnitVector& u) { return square.support(u); }, mu) ==
          doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("orlicz mixed volumes") {
    HPolytope square = cube_polytope(2, 1.0);
    PhiFunction phi = PhiFunction::power(2.0);
    auto h_k = [&](const UnitVector& u) { return square.support(u); };
    CHECK(orlicz_mixed_volume(square, h_k, phi, MixedVolumeVariant::Integral) ==
          doctest::Approx(square.volume()).epsilon(1e-10));
    CHECK(orlicz_mixed_volume(square, h_k, phi, MixedVolumeVariant::Hat) ==
          doctest::Approx(1.0).epsilon(1e-9));

    PhiFunction lin = PhiFunction::power(1.0);
    auto h_2k = [&](const UnitVector& u) { return 2.0 * square.support(u); };
    CHECK(orlicz_mixed_volume(square, h_2k, lin, MixedVolumeVariant::Integral) ==
          doctest::Approx(8.0).epsilon(1e-10));
}

TEST_CASE("rotation invariance of the dual volume") {
    auto rule = product_rule(3, 48);
    GFunction g = GFunction::power(3.0, 1.0 / 3.0);
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> c(-1.0, 1.0);
    StarBody plain = StarBody::ellipsoid({1.3, 0.8, 0.6});
    double base = dual_volume(g, plain, rule);
    for (int trial = 0; trial < 4; ++trial) {
        UnitVector a = UnitVector::normalize({c(rng), c(rng), c(rng)});
        UnitVector b = UnitVector::normalize({c(rng), c(rng), c(rng)});
        Rotation t = rotation_sending(a, b);
        StarBody rotated = StarBody::ellipsoid({1.3, 0.8, 0.6}, t);
        CHECK(dual_volume(g, rotated, rule) == doctest::Approx(base).epsilon(3e-6));
    }
}

TEST_CASE("refinement continuity of dual volume on the catalog") {
    GFunction g = GFunction::power(3.0, 1.0 / 3.0);
    auto coarse = product_rule(3, 48);
    auto fine = product_rule(3, 96);
    auto finer = product_rule(3, 192);

    // smooth radial functions: doubling the default resolution moves the
    // value by less than 1e-4 relative
    std::vector<StarBody> smooth = {StarBody::ball(3, 1.0),
                                    StarBody::ellipsoid({1.0, 1.0, 0.4}),
                                    StarBody::cone(3, 1.0, 0.5)};
    for (const StarBody& body : smooth) {
        double v1 = dual_volume(g, body, coarse);
        double v2 = dual_volume(g, body, fine);
        CHECK(std::abs(v2 - v1) <= 1e-4 * std::abs(v1));
    }

    // polytope radial functions are kinked: the error is controlled by
    // resolution doubling (roughly quarters per doubling) rather than being
    // spectrally small
    std::vector<StarBody> kinked = {StarBody::polytope(cube_polytope(3, 1.0)),
                                    StarBody::polar_polytope(cube_polytope(3, 1.0))};
    for (const StarBody& body : kinked) {
        double v1 = dual_volume(g, body, coarse);
        double v2 = dual_volume(g, body, fine);
        double v3 = dual_volume(g, body, finer);
        CHECK(std::abs(v2 - v1) <= 5e-3 * std::abs(v1));
        CHECK(std::abs(v3 - v2) <= 0.35 * std::abs(v2 - v1));
    }
}

TEST_CASE("isoperimetric inequality on random polytopes") {
    std::mt19937_64 rng(16);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = trial % 2 ? 3 : 2;
        HPolytope p = random_polytope(rng, n, 4);
        double s = p.surface_area();
        double v = p.volume();
        double bound = double(n) * std::pow(unit_ball_volume(n), 1.0 / double(n)) *
                       std::pow(v, (double(n) - 1.0) / double(n));
        CHECK(s >= bound * (1.0 - 1e-12));
    }
    // the regular 64-gon is within 0.2% of equality
    HPolytope gon = regular_polygon(64, 1.0);
    double ratio = gon.surface_area() /
                   (2.0 * std::pow(unit_ball_volume(2), 0.5) * std::pow(gon.volume(), 0.5));
    CHECK(ratio >= 1.0);
    CHECK(ratio <= 1.002);
}

TEST_CASE("jensen direction used by the polar interiority argument") {
    // for q in (1-n, 0), x -> x^q is convex: the SAM-average of h^q
    // dominates (average of h)^q
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 6; ++trial) {
        std::size_t n = trial % 2 ? 3 : 2;
        double q = -0.5 * (double(n) - 1.0);
        HPolytope p = random_polytope(rng, n, 3);
        SurfaceAreaMeasure sam = p.surface_area_measure();
        double s = 0.0, mean_h = 0.0, mean_hq = 0.0;
        for (std::size_t i = 0; i < sam.areas.size(); ++i) {
            s += sam.areas[i];
            mean_h += sam.areas[i] * sam.offsets[i];
            mean_hq += sam.areas[i] * std::pow(sam.offsets[i], q);
        }
        mean_h /= s;
        mean_hq /= s;
        CHECK(mean_hq >= std::pow(mean_h, q) * (1.0 - 1e-12));
    }
}

TEST_CASE("measure hemisphere condition") {
    std::vector<UnitVector> square = {UnitVector::axis(2, 0), UnitVector::axis(2, 1),
                                      UnitVector::axis(2, 0, -1.0), UnitVector::axis(2, 1, -1.0)};
    uniform_atoms(square).require_hemisphere_condition();

    std::vector<UnitVector> half = {UnitVector::axis(2, 0), UnitVector::axis(2, 1),
                                    UnitVector::normalize({1.0, 1.0})};
    CHECK_THROWS_AS(uniform_atoms(half).require_hemisphere_condition(), SchemaError);

    auto rule = product_rule(2, 32);
    BorelMeasure dens = BorelMeasure::density([](const UnitVector&) { return 1.0; }, rule);
    CHECK(dens.total_mass() == doctest::Approx(2.0 * pi).epsilon(1e-10));
    dens.require_hemisphere_condition();
}
