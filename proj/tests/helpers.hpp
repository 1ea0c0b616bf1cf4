#ifndef TMV_TESTS_HELPERS_HPP_
#define TMV_TESTS_HELPERS_HPP_

#include <vector>

#include "tmv/model.hpp"

namespace tmv::testing {

// z(t) = -t^2 on the 3-point grid (-1, 0, 1), the workhorse fixture.
inline PolynomialTemplate parabola() { return PolynomialTemplate({0.0, 0.0, -1.0}); }

inline SamplingGrid grid3() { return SamplingGrid({-1.0, 0.0, 1.0}); }

inline Manifold manifold(std::vector<ModeSpec> modes,
                         PolynomialTemplate tmpl = parabola(),
                         SamplingGrid grid = grid3()) {
    return Manifold{Model(std::move(tmpl), std::move(modes)), std::move(grid)};
}

inline Manifold vertical_only() { return manifold({ModeSpec::vertical_shift()}); }

inline Manifold horizontal_only() { return manifold({ModeSpec::horizontal_shift()}); }

// Separable two-mode fixture: z(t - m) + h.
inline Manifold vertical_horizontal() {
    return manifold({ModeSpec::horizontal_shift(), ModeSpec::vertical_shift()});
}

// Non-separable two-mode fixture: w z(w(t - m)).
inline Manifold width_location() {
    return manifold({ModeSpec::generalist_specialist(), ModeSpec::horizontal_shift()});
}

// Full 3-mode composition w z(w(t - m)) + h.
inline Manifold three_mode(PolynomialTemplate tmpl = parabola(), SamplingGrid grid = grid3()) {
    return manifold({ModeSpec::vertical_shift(), ModeSpec::horizontal_shift(),
                     ModeSpec::generalist_specialist()},
                    std::move(tmpl), std::move(grid));
}

}  // namespace tmv::testing

#endif  // TMV_TESTS_HELPERS_HPP_
