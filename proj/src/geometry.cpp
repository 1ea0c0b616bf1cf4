#include "tmv/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "tmv/errors.hpp"

namespace tmv {

namespace {

double simpson(double h, double fa, double fm, double fb) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double simpson_recurse(const F& f, double a, double m, double b, double fa, double fm,
                       double fb, double whole, double tol, int depth, int max_depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(m - a, fa, flm, fm);
    const double right = simpson(b - m, fm, frm, fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth >= max_depth)
        throw NonConvergentError("adaptive Simpson: max depth exceeded");
    return simpson_recurse(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth) +
           simpson_recurse(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double rel_tol, int max_depth) {
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = simpson(b - a, fa, fm, fb);
    const double tol = rel_tol * std::max(std::abs(whole), 1e-30);
    return simpson_recurse(f, a, m, b, fa, fm, fb, whole, tol, 0, max_depth);
}

}  // namespace

double arcdist(const Manifold& man, std::size_t k, double a, double b,
               const Theta& fixed, const ArcConfig& cfg) {
    if (a == b) return 0.0;
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    Theta th = fixed;
    auto speed = [&](double x) {
        th[k] = x;
        return man.speed(th, k);
    };
    return adaptive_simpson(speed, lo, hi, cfg.rel_tol, cfg.max_depth);
}

double arcdist_polyline(const Manifold& man, std::size_t k, double a, double b,
                        const Theta& fixed, int n_segments) {
    if (n_segments < 1) throw Error("arcdist_polyline: need at least one segment");
    if (a == b) return 0.0;
    Theta th = fixed;
    th[k] = a;
    std::vector<double> prev = man.eval(th);
    double total = 0.0;
    for (int s = 1; s <= n_segments; ++s) {
        th[k] = a + (b - a) * (static_cast<double>(s) / n_segments);
        const std::vector<double> cur = man.eval(th);
        double ss = 0.0;
        for (std::size_t j = 0; j < cur.size(); ++j) {
            const double d = cur[j] - prev[j];
            ss += d * d;
        }
        total += std::sqrt(ss);
        prev = cur;
    }
    return total;
}

double arc_coordinate(const Manifold& man, std::size_t k, double theta_k,
                      double origin_k, const Theta& fixed, const ArcConfig& cfg) {
    if (theta_k == origin_k) return 0.0;
    const double sign = theta_k > origin_k ? 1.0 : -1.0;
    return sign * arcdist(man, k, origin_k, theta_k, fixed, cfg);
}

double invert_arc_coordinate(const Manifold& man, std::size_t k, double coord,
                             double origin_k, const Theta& fixed, const ArcConfig& cfg,
                             double lo, double hi) {
    if (!(lo <= hi)) throw NonInvertibleError("invert_arc_coordinate: empty bracket");
    auto L = [&](double x) { return arc_coordinate(man, k, x, origin_k, fixed, cfg); };
    double flo = L(lo);
    double fhi = L(hi);
    const double pad = 1e-9 * std::max({std::abs(coord), std::abs(flo), std::abs(fhi), 1.0});
    if (coord < flo - pad || coord > fhi + pad)
        throw NonInvertibleError("invert_arc_coordinate: target not bracketed");
    if (coord <= flo) return lo;
    if (coord >= fhi) return hi;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = L(mid);
        if (std::abs(fm - coord) <= 1e-10) return mid;
        if (fm < coord)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-15 * std::max(1.0, std::abs(lo))) return 0.5 * (lo + hi);
    }
    return 0.5 * (lo + hi);
}

}  // namespace tmv
