#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "tmv/errors.hpp"
#include "tmv/metrics.hpp"

using namespace tmv;
using namespace tmv::testing;

namespace {

const ArcConfig kArc;

MetricConfig make_cfg(Theta origin, double gamma = 0.5) {
    MetricConfig cfg;
    cfg.origin = std::move(origin);
    cfg.gamma = gamma;
    return cfg;
}

}  // namespace

TEST_CASE("separability declaration must partition the modes") {
    SeparabilityDecl decl;
    decl.blocks = {{0}, {1}};
    CHECK_NOTHROW(decl.check_partition(2));
    decl.blocks = {{0}, {0, 1}};
    CHECK_THROWS_AS(decl.check_partition(2), Error);
    decl.blocks = {{0}};
    CHECK_THROWS_AS(decl.check_partition(2), Error);
}

TEST_CASE("declared separability is verified numerically") {
    SUBCASE("vertical and horizontal modes separate") {
        SeparabilityDecl decl = SeparabilityDecl::singletons(2);
        CHECK_NOTHROW(validate_separability(vertical_horizontal(), decl,
                                            {{-0.5, 0.5}, {-1.0, 1.0}}));
    }
    SUBCASE("width and location do not separate") {
        SeparabilityDecl decl = SeparabilityDecl::singletons(2);
        CHECK_THROWS_AS(
            validate_separability(width_location(), decl, {{0.6, 1.6}, {-0.5, 0.5}}),
            NotSeparableError);
    }
}

TEST_CASE("per-mode arc components ignore the anchor on separable models") {
    const Manifold man = vertical_horizontal();
    const double at0 = c_component(man, 0, -0.2, 0.7, {0.0, 0.0}, kArc);
    const double at5 = c_component(man, 0, -0.2, 0.7, {0.0, 5.0}, kArc);
    CHECK(at0 == doctest::Approx(at5).epsilon(1e-10));

    const Manifold vman = vertical_only();
    CHECK(c_component(vman, 0, 0.0, 2.0, {0.0}, kArc) ==
          doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-12));
    CHECK(c_component(vman, 0, 0.4, 0.4, {0.0}, kArc) == 0.0);
}

TEST_CASE("anchor-dependent components are rejected") {
    const Manifold man = width_location();
    CHECK_THROWS_AS(c_component(man, 1, -0.2, 0.4, {1.0, 0.0}, kArc), NotSeparableError);
}

TEST_CASE("separable distance combines per-mode arc lengths in quadrature") {
    const Manifold man = vertical_horizontal();
    const SeparabilityDecl decl = SeparabilityDecl::singletons(2);
    // horizontal leg 0->1 and vertical leg 0->2 on the parabola fixture;
    // both leg values were frozen from an independent quadrature check.
    const double v = dist_separable(man, {0.0, 0.0}, {1.0, 2.0}, decl, kArc);
    CHECK(v == doctest::Approx(4.873092356497101).epsilon(1e-9));
    CHECK(dist_separable(man, {0.3, -1.2}, {0.3, -1.2}, decl, kArc) == 0.0);
}

TEST_CASE("separable distance satisfies the triangle inequality") {
    const Manifold man = vertical_horizontal();
    const SeparabilityDecl decl = SeparabilityDecl::singletons(2);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> um(-0.8, 0.8), uh(-2.0, 2.0);
    for (int rep = 0; rep < 200; ++rep) {
        const Theta a{um(rng), uh(rng)}, b{um(rng), uh(rng)}, c{um(rng), uh(rng)};
        const double ab = dist_separable(man, a, b, decl, kArc);
        const double bc = dist_separable(man, b, c, decl, kArc);
        const double ac = dist_separable(man, a, c, decl, kArc);
        CHECK(ac <= ab + bc + 1e-9 * (ab + bc + 1.0));
    }
}

TEST_CASE("origin-anchored coordinates vanish at the origin") {
    const Manifold man = width_location();
    const MetricConfig cfg = make_cfg({1.0, 0.0});
    const PairMetric pm(man, 0, 1, cfg);
    const auto c = pm.coords({1.0, 0.0});
    CHECK(c.eta == 0.0);
    CHECK(c.zeta == 0.0);
    CHECK(c.a == 0.0);
    CHECK(c.b == 0.0);
    CHECK(pm.d1({0.7, -0.2}, {0.7, -0.2}) == 0.0);
    CHECK(pm.d2({0.7, -0.2}, {0.7, -0.2}) == 0.0);
}

TEST_CASE("two-mode path metrics collapse to the separable distance on separable models") {
    const Manifold man = vertical_horizontal();
    const SeparabilityDecl decl = SeparabilityDecl::singletons(2);
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> um(-0.6, 0.6), uh(-1.5, 1.5);
    for (int rep = 0; rep < 40; ++rep) {
        const MetricConfig cfg = make_cfg({um(rng), uh(rng)});
        const Theta a{um(rng), uh(rng)}, b{um(rng), uh(rng)};
        const double ds = dist_separable(man, a, b, decl, kArc);
        CHECK(std::abs(d1(man, a, b, cfg) - d2(man, a, b, cfg)) <= 1e-8);
        CHECK(std::abs(d1(man, a, b, cfg) - ds) <= 1e-8);
    }
}

TEST_CASE("blend is exactly linear in gamma on the squared scale") {
    const Manifold man = width_location();
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> uw(0.7, 1.5), um(-0.4, 0.4);
    for (int rep = 0; rep < 10; ++rep) {
        const Theta origin{uw(rng), um(rng)}, a{uw(rng), um(rng)}, b{uw(rng), um(rng)};
        const double v1 = d1(man, a, b, make_cfg(origin, 1.0));
        const double v2 = d2(man, a, b, make_cfg(origin, 0.0));
        for (double g : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const double vv = dv(man, a, b, make_cfg(origin, g));
            CHECK(vv * vv ==
                  doctest::Approx(g * v1 * v1 + (1.0 - g) * v2 * v2).epsilon(1e-12));
        }
    }
    CHECK(dv(man, {1.1, 0.2}, {0.8, -0.1}, make_cfg({1.0, 0.0}, 1.0)) ==
          doctest::Approx(d1(man, {1.1, 0.2}, {0.8, -0.1}, make_cfg({1.0, 0.0}))));
    CHECK(dv(man, {1.1, 0.2}, {0.8, -0.1}, make_cfg({1.0, 0.0}, 0.0)) ==
          doctest::Approx(d2(man, {1.1, 0.2}, {0.8, -0.1}, make_cfg({1.0, 0.0}))));
}

TEST_CASE("blended metric satisfies the triangle inequality on the curved pair") {
    const Manifold man = width_location();
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> uw(0.7, 1.5), um(-0.4, 0.4);
    for (double g : {0.25, 0.5, 1.0}) {
        const MetricConfig cfg = make_cfg({1.0, 0.0}, g);
        const PairMetric pm(man, 0, 1, cfg);
        for (int rep = 0; rep < 100; ++rep) {
            const Theta a{uw(rng), um(rng)}, b{uw(rng), um(rng)}, c{uw(rng), um(rng)};
            const double ab = pm.dv(a, b), bc = pm.dv(b, c), ac = pm.dv(a, c);
            CHECK(ac <= ab + bc + 1e-9 * (ab + bc + 1.0));
            CHECK(pm.dv(a, b) == pm.dv(b, a));
        }
    }
}

TEST_CASE("composite distance mixes singleton and pair blocks") {
    const Manifold man = three_mode();  // modes: vertical, horizontal, genspec
    SeparabilityDecl decl;
    decl.blocks = {{0}, {1, 2}};
    const MetricConfig cfg = make_cfg({0.0, 0.0, 1.0});

    SUBCASE("identical points are at distance zero") {
        CHECK(dist_composite(man, {0.5, 0.1, 1.2}, {0.5, 0.1, 1.2}, cfg, decl) == 0.0);
    }
    SUBCASE("pure height difference uses the grid-size factor") {
        const double v = dist_composite(man, {0.0, 0.1, 1.2}, {2.0, 0.1, 1.2}, cfg, decl);
        CHECK(v == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-9));
    }
    SUBCASE("pure warp difference reduces to the pair metric") {
        const Manifold pair = width_location();
        const MetricConfig pcfg = make_cfg({1.0, 0.0});
        const double whole =
            dist_composite(man, {0.7, 0.1, 1.2}, {0.7, -0.2, 0.9}, cfg, decl);
        const double block = dv(pair, {1.2, 0.1}, {0.9, -0.2}, pcfg);
        CHECK(whole == doctest::Approx(block).epsilon(1e-9));
    }
    SUBCASE("blocks of three or more modes are rejected") {
        SeparabilityDecl bad;
        bad.blocks = {{0, 1, 2}};
        CHECK_THROWS_AS(dist_composite(man, {0.0, 0.0, 1.0}, {1.0, 0.1, 1.1}, cfg, bad),
                        UnsupportedBlockSizeError);
    }
}
