#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "tmv/errors.hpp"
#include "tmv/geometry.hpp"

using namespace tmv;
using namespace tmv::testing;

namespace {
const ArcConfig kArc;
}

TEST_CASE("vertical-shift arc length is straight-line distance times sqrt(d)") {
    const Manifold man = vertical_only();
    CHECK(arcdist(man, 0, 0.0, 2.0, {0.0}, kArc) ==
          doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-12));
    CHECK(arcdist_polyline(man, 0, 0.0, 2.0, {0.0}, 7) ==
          doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("zero-length intervals have zero arc length") {
    const Manifold man = horizontal_only();
    CHECK(arcdist(man, 0, 0.37, 0.37, {0.0}, kArc) == 0.0);
}

TEST_CASE("horizontal-shift arc length on the parabola matches the frozen quadrature value") {
    // speed(m) = sqrt(sum_j (2(t_j - m))^2) = 2 sqrt(3m^2 + 2) on grid (-1,0,1);
    // the integral over [0,1] was evaluated independently before being frozen here.
    const Manifold man = horizontal_only();
    const double v = arcdist(man, 0, 0.0, 1.0, {0.0}, kArc);
    CHECK(v == doctest::Approx(3.4273939246824936).epsilon(1e-9));
    const double poly = arcdist_polyline(man, 0, 0.0, 1.0, {0.0}, 100000);
    CHECK(std::abs(poly - v) / v <= 1e-6);
}

TEST_CASE("arc length is symmetric and additive") {
    const Manifold man = horizontal_only();
    const Theta fixed{0.0};
    CHECK(arcdist(man, 0, -0.4, 0.9, fixed, kArc) == arcdist(man, 0, 0.9, -0.4, fixed, kArc));
    const double whole = arcdist(man, 0, -0.4, 0.9, fixed, kArc);
    const double split =
        arcdist(man, 0, -0.4, 0.3, fixed, kArc) + arcdist(man, 0, 0.3, 0.9, fixed, kArc);
    CHECK(whole == doctest::Approx(split).epsilon(1e-9));
}

TEST_CASE("chord never exceeds the arc") {
    const Manifold man = width_location();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> um(-0.5, 0.5), uw(0.6, 1.8);
    for (int rep = 0; rep < 50; ++rep) {
        const Theta fixed{uw(rng), um(rng)};
        const double a = um(rng), b = um(rng);
        const double arc = arcdist(man, 1, a, b, fixed, kArc);
        const double chord = arcdist_polyline(man, 1, a, b, fixed, 1);
        CHECK(chord <= arc + 1e-9);
    }
}

TEST_CASE("polyline estimate sharpens with refinement") {
    const Manifold man = horizontal_only();
    const double exact = arcdist(man, 0, -0.8, 1.1, {0.0}, kArc);
    double prev_err = 1e300;
    for (int n : {16, 256, 4096}) {
        const double err = std::abs(arcdist_polyline(man, 0, -0.8, 1.1, {0.0}, n) - exact);
        CHECK(err < prev_err);
        prev_err = err;
    }
}

TEST_CASE("arc coordinate is signed and monotone") {
    const Manifold man = vertical_only();
    CHECK(arc_coordinate(man, 0, 0.5, 0.5, {0.0}, kArc) == 0.0);
    CHECK(arc_coordinate(man, 0, -2.0, 0.0, {0.0}, kArc) ==
          doctest::Approx(-2.0 * std::sqrt(3.0)).epsilon(1e-12));

    const Manifold hman = horizontal_only();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> thetas(100);
    for (double& t : thetas) t = u(rng);
    std::sort(thetas.begin(), thetas.end());
    double prev = -1e300;
    for (double t : thetas) {
        const double c = arc_coordinate(hman, 0, t, -0.3, {0.0}, kArc);
        CHECK(c > prev);
        prev = c;
    }
}

TEST_CASE("arc coordinate inversion round-trips") {
    const Manifold man = horizontal_only();
    for (double t : {-0.9, -0.2, 0.0, 0.4, 1.2}) {
        const double c = arc_coordinate(man, 0, t, 0.1, {0.0}, kArc);
        const double back = invert_arc_coordinate(man, 0, c, 0.1, {0.0}, kArc, -2.0, 2.0);
        CHECK(back == doctest::Approx(t).epsilon(1e-8));
    }
    const double far = arc_coordinate(man, 0, 5.0, 0.0, {0.0}, kArc);
    CHECK_THROWS_AS(invert_arc_coordinate(man, 0, far, 0.0, {0.0}, kArc, -1.0, 1.0),
                    NonInvertibleError);
}
