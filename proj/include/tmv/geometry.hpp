#ifndef TMV_GEOMETRY_HPP_
#define TMV_GEOMETRY_HPP_

#include <cstddef>

#include "tmv/model.hpp"

namespace tmv {

struct ArcConfig {
    double rel_tol = 1e-9;
    int max_depth = 40;
    int polyline_segments = 4096;
};

// Arc length along the mode-k curve between parameter values a and b, all
// other components held at `fixed` (its k-th entry is ignored). Adaptive
// Simpson quadrature of the speed; symmetric in (a, b).
double arcdist(const Manifold& man, std::size_t k, double a, double b,
               const Theta& fixed, const ArcConfig& cfg);

// Polyline (chord-sum) approximation over a uniform partition of [a, b];
// converges to arcdist from below as n_segments grows.
double arcdist_polyline(const Manifold& man, std::size_t k, double a, double b,
                        const Theta& fixed, int n_segments);

// Signed arc-length coordinate sign(theta_k - origin_k) * arcdist(origin_k, theta_k);
// strictly increasing in theta_k wherever the speed is positive.
double arc_coordinate(const Manifold& man, std::size_t k, double theta_k,
                      double origin_k, const Theta& fixed, const ArcConfig& cfg);

// Inverts the arc-coordinate map by bisection on [lo, hi]; the target
// coordinate must be bracketed. Tolerance 1e-10 in coordinate units.
double invert_arc_coordinate(const Manifold& man, std::size_t k, double coord,
                             double origin_k, const Theta& fixed, const ArcConfig& cfg,
                             double lo, double hi);

}  // namespace tmv

#endif  // TMV_GEOMETRY_HPP_
