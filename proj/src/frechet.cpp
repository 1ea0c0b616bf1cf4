#include "tmv/frechet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>

#include "tmv/errors.hpp"

namespace tmv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double midpoint(const std::pair<double, double>& iv) { return 0.5 * (iv.first + iv.second); }

}  // namespace

OriginGrid OriginGrid::from_sample(const std::vector<Theta>& thetas, double expand, int res) {
    if (thetas.empty()) throw Error("OriginGrid::from_sample: empty sample");
    OriginGrid g;
    const std::size_t n = thetas.front().size();
    for (std::size_t k = 0; k < n; ++k) {
        double lo = thetas.front()[k], hi = lo;
        for (const Theta& th : thetas) {
            lo = std::min(lo, th[k]);
            hi = std::max(hi, th[k]);
        }
        const double pad = 0.5 * expand * std::max(hi - lo, 1e-12);
        g.intervals.emplace_back(lo - pad, hi + pad);
        g.resolution.push_back(res);
    }
    return g;
}

std::vector<double> OriginGrid::axis(std::size_t k) const {
    if (k >= intervals.size()) throw Error("OriginGrid::axis: index out of range");
    const int res = resolution[k];
    if (res < 1) throw Error("OriginGrid: resolution must be >= 1");
    std::vector<double> pts;
    if (res == 1) {
        pts.push_back(midpoint(intervals[k]));
        return pts;
    }
    const auto [lo, hi] = intervals[k];
    for (int i = 0; i < res; ++i)
        pts.push_back(lo + (hi - lo) * static_cast<double>(i) / (res - 1));
    return pts;
}

std::vector<std::pair<double, double>> MeanSearchSpec::sample_box(
    const std::vector<Theta>& thetas, double expand) {
    OriginGrid g = OriginGrid::from_sample(thetas, expand, 2);
    return g.intervals;
}

double frechet_fn(const std::vector<Theta>& sample, const Theta& candidate,
                  const std::function<double(const Theta&, const Theta&)>& dist) {
    if (sample.empty()) throw Error("frechet_fn: empty sample");
    double acc = 0.0;
    for (const Theta& th : sample) {
        const double d = dist(th, candidate);
        acc += d * d;
    }
    return acc;
}

FrechetResult frechet_mean_1d(const Manifold& man, const std::vector<Theta>& sample,
                              std::size_t k, const ArcConfig& cfg) {
    if (sample.empty()) throw Error("frechet_mean_1d: empty sample");
    if (k >= man.dim()) throw Error("frechet_mean_1d: mode index out of range");

    FrechetResult r;
    r.mean_theta = sample.front();
    if (sample.size() == 1) return r;

    const Theta& anchor = sample.front();
    double lo = anchor[k], hi = anchor[k];
    std::vector<double> coords(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        coords[i] = arc_coordinate(man, k, sample[i][k], anchor[k], anchor, cfg);
        lo = std::min(lo, sample[i][k]);
        hi = std::max(hi, sample[i][k]);
    }
    double mean_coord = 0.0;
    for (double c : coords) mean_coord += c;
    mean_coord /= static_cast<double>(coords.size());

    const double theta_mean =
        invert_arc_coordinate(man, k, mean_coord, anchor[k], anchor, cfg, lo, hi);
    r.mean_theta[k] = theta_mean;

    double ss = 0.0;
    for (double c : coords) {
        const double d = c - mean_coord;
        ss += d * d;
    }
    r.attained_value = ss;
    r.variance = ss / static_cast<double>(sample.size());
    return r;
}

namespace {

// Objective for one non-separable pair block, expressed in the origin-anchored
// coordinates so each evaluation costs four quadratures.
struct PairObjective {
    const Manifold& man;
    const PairMetric& pm;
    const std::vector<PairMetric::Coords>& pts;
    Theta base;  // non-pair components pinned here
    mutable int evals = 0;

    double operator()(double alpha, double beta) const {
        ++evals;
        Theta th = base;
        th[pm.mode_a()] = alpha;
        th[pm.mode_b()] = beta;
        PairMetric::Coords c;
        try {
            c = pm.coords(th);
        } catch (const Error&) {
            return kInf;
        }
        double acc = 0.0;
        for (const auto& p : pts) acc += pm.dv_sq(p, c);
        return acc;
    }
};

struct Candidate {
    double a = 0.0, b = 0.0, f = kInf;
};

// Plain 2-D Nelder-Mead; out-of-domain evaluations return +inf.
Candidate nelder_mead_2d(const PairObjective& f, Candidate start, double ha, double hb,
                         int max_iter = 300) {
    struct Vtx {
        double x, y, f;
    };
    std::array<Vtx, 3> s{Vtx{start.a, start.b, start.f},
                         Vtx{start.a + ha, start.b, f(start.a + ha, start.b)},
                         Vtx{start.a, start.b + hb, f(start.a, start.b + hb)}};
    auto order = [&] {
        std::sort(s.begin(), s.end(), [](const Vtx& u, const Vtx& v) { return u.f < v.f; });
    };
    order();
    for (int it = 0; it < max_iter; ++it) {
        const double size = std::max(std::abs(s[0].x - s[2].x) + std::abs(s[0].y - s[2].y),
                                     std::abs(s[0].x - s[1].x) + std::abs(s[0].y - s[1].y));
        const double scale = std::abs(s[0].x) + std::abs(s[0].y) + 1.0;
        if (size <= 1e-11 * scale && std::isfinite(s[2].f) &&
            s[2].f - s[0].f <= 1e-13 * (std::abs(s[0].f) + 1e-300))
            break;
        const double cx = 0.5 * (s[0].x + s[1].x);
        const double cy = 0.5 * (s[0].y + s[1].y);
        const double rx = cx + (cx - s[2].x);
        const double ry = cy + (cy - s[2].y);
        const double fr = f(rx, ry);
        if (fr < s[0].f) {
            const double ex = cx + 2.0 * (cx - s[2].x);
            const double ey = cy + 2.0 * (cy - s[2].y);
            const double fe = f(ex, ey);
            s[2] = fe < fr ? Vtx{ex, ey, fe} : Vtx{rx, ry, fr};
        } else if (fr < s[1].f) {
            s[2] = Vtx{rx, ry, fr};
        } else {
            const double kx = cx + 0.5 * (s[2].x - cx);
            const double ky = cy + 0.5 * (s[2].y - cy);
            const double fk = f(kx, ky);
            if (fk < s[2].f) {
                s[2] = Vtx{kx, ky, fk};
            } else {
                for (int i = 1; i < 3; ++i) {
                    s[i].x = s[0].x + 0.5 * (s[i].x - s[0].x);
                    s[i].y = s[0].y + 0.5 * (s[i].y - s[0].y);
                    s[i].f = f(s[i].x, s[i].y);
                }
            }
        }
        order();
    }
    return Candidate{s[0].x, s[0].y, s[0].f};
}

struct PairBlockSolve {
    double alpha = 0.0, beta = 0.0;
    double attained = 0.0;
    SearchDiagnostics diag;
};

PairBlockSolve solve_pair_block(const Manifold& man, const std::vector<Theta>& sample,
                                std::size_t ka, std::size_t kb, const MetricConfig& cfg,
                                const MeanSearchSpec& search) {
    const PairMetric pm(man, ka, kb, cfg);
    std::vector<PairMetric::Coords> pts;
    pts.reserve(sample.size());
    for (const Theta& th : sample) pts.push_back(pm.coords(th));

    std::vector<std::pair<double, double>> box =
        search.box.empty() ? MeanSearchSpec::sample_box(sample) : search.box;

    PairObjective obj{man, pm, pts, cfg.origin};

    const auto [alo, ahi] = box[ka];
    const auto [blo, bhi] = box[kb];
    const double wa = ahi - alo;
    const double wb = bhi - blo;
    const bool pin_a = wa <= 1e-13 * std::max(1.0, std::abs(alo));
    const bool pin_b = wb <= 1e-13 * std::max(1.0, std::abs(blo));

    PairBlockSolve out;
    if (pin_a && pin_b) {
        out.alpha = 0.5 * (alo + ahi);
        out.beta = 0.5 * (blo + bhi);
        out.attained = obj(out.alpha, out.beta);
        return out;
    }

    const int res = std::max(2, search.resolution);
    const int ra = pin_a ? 1 : res;
    const int rb = pin_b ? 1 : res;
    std::vector<Candidate> cells;
    for (int i = 0; i < ra; ++i) {
        const double a = pin_a ? 0.5 * (alo + ahi)
                               : alo + wa * static_cast<double>(i) / (ra - 1);
        for (int j = 0; j < rb; ++j) {
            const double b = pin_b ? 0.5 * (blo + bhi)
                                   : blo + wb * static_cast<double>(j) / (rb - 1);
            cells.push_back({a, b, obj(a, b)});
        }
    }
    out.diag.grid_evals = obj.evals;
    std::stable_sort(cells.begin(), cells.end(),
                     [](const Candidate& u, const Candidate& v) { return u.f < v.f; });

    const int starts = std::max(1, std::min<int>(search.multistart, static_cast<int>(cells.size())));
    const double ha = pin_a ? 0.0 : wa / (2.0 * (ra - 1));
    const double hb = pin_b ? 0.0 : wb / (2.0 * (rb - 1));

    std::vector<Candidate> results;
    for (int s = 0; s < starts; ++s) {
        Candidate c = cells[s];
        if (!std::isfinite(c.f)) continue;
        if (pin_a || pin_b) {
            // refine the free axis by golden-section around the best cell
            const bool free_is_a = pin_b;
            double lo = free_is_a ? std::max(alo, c.a - 2 * ha) : std::max(blo, c.b - 2 * hb);
            double hi = free_is_a ? std::min(ahi, c.a + 2 * ha) : std::min(bhi, c.b + 2 * hb);
            const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
            double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
            auto val = [&](double x) { return free_is_a ? obj(x, c.b) : obj(c.a, x); };
            double f1 = val(x1), f2 = val(x2);
            for (int it = 0; it < 80 && hi - lo > 1e-12 * std::max(1.0, std::abs(lo)); ++it) {
                if (f1 < f2) {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - gr * (hi - lo);
                    f1 = val(x1);
                } else {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + gr * (hi - lo);
                    f2 = val(x2);
                }
            }
            const double x = 0.5 * (lo + hi);
            c = free_is_a ? Candidate{x, c.b, val(x)} : Candidate{c.a, x, val(x)};
        } else {
            c = nelder_mead_2d(obj, c, ha, hb);
        }
        results.push_back(c);
    }
    if (results.empty()) throw Error("frechet_mean: every search start was infeasible");

    const Candidate best = *std::min_element(
        results.begin(), results.end(),
        [](const Candidate& u, const Candidate& v) { return u.f < v.f; });
    out.diag.refine_evals = obj.evals - out.diag.grid_evals;
    for (std::size_t i = 0; i < results.size(); ++i)
        for (std::size_t j = i + 1; j < results.size(); ++j)
            out.diag.multistart_spread =
                std::max(out.diag.multistart_spread,
                         std::hypot(results[i].a - results[j].a, results[i].b - results[j].b));
    out.diag.unique = out.diag.multistart_spread < 1e-6;

    if (!pin_a) {
        const double margin = 1e-6 * wa;
        if (best.a - alo < margin || ahi - best.a < margin)
            throw SearchBoxTooSmallError("pair-block minimizer lies on the search box boundary");
    }
    if (!pin_b) {
        const double margin = 1e-6 * wb;
        if (best.b - blo < margin || bhi - best.b < margin)
            throw SearchBoxTooSmallError("pair-block minimizer lies on the search box boundary");
    }

    out.alpha = best.a;
    out.beta = best.b;
    out.attained = best.f;
    return out;
}

bool all_equal(const std::vector<Theta>& sample) {
    for (std::size_t i = 1; i < sample.size(); ++i)
        if (sample[i] != sample.front()) return false;
    return true;
}

}  // namespace

FrechetResult frechet_mean(const Manifold& man, const std::vector<Theta>& sample,
                           const MetricConfig& cfg, const SeparabilityDecl& decl,
                           const MeanSearchSpec& search) {
    if (sample.empty()) throw Error("frechet_mean: empty sample");
    decl.check_partition(man.dim());

    FrechetResult r;
    r.mean_theta = sample.front();
    if (sample.size() == 1 || all_equal(sample)) return r;

    double attained = 0.0;
    for (const auto& block : decl.blocks) {
        if (block.size() == 1) {
            const FrechetResult one = frechet_mean_1d(man, sample, block.front(), cfg.arc);
            r.mean_theta[block.front()] = one.mean_theta[block.front()];
            attained += one.attained_value;
        } else if (block.size() == 2) {
            const PairBlockSolve ps =
                solve_pair_block(man, sample, block[0], block[1], cfg, search);
            r.mean_theta[block[0]] = ps.alpha;
            r.mean_theta[block[1]] = ps.beta;
            attained += ps.attained;
            r.diagnostics.grid_evals += ps.diag.grid_evals;
            r.diagnostics.refine_evals += ps.diag.refine_evals;
            r.diagnostics.multistart_spread =
                std::max(r.diagnostics.multistart_spread, ps.diag.multistart_spread);
            r.diagnostics.unique = r.diagnostics.unique && ps.diag.unique;
        } else {
            throw UnsupportedBlockSizeError("frechet_mean: blocks of 3+ modes unsupported");
        }
    }
    r.attained_value = attained;
    r.variance = attained / static_cast<double>(sample.size());
    return r;
}

double frechet_variance(const FrechetResult& mean, std::size_t n) {
    if (n == 0) throw Error("frechet_variance: empty sample");
    return mean.attained_value / static_cast<double>(n);
}

std::pair<Theta, double> select_origin(const Manifold& man, const std::vector<Theta>& sample,
                                       const OriginGrid& grid, double gamma,
                                       const SeparabilityDecl& decl, const ArcConfig& arc,
                                       const MeanSearchSpec& search) {
    if (sample.empty()) throw Error("select_origin: empty sample");
    decl.check_partition(man.dim());
    if (grid.intervals.size() != man.dim())
        throw Error("select_origin: origin grid dimension mismatch");

    const std::size_t n_modes = man.dim();
    std::vector<std::vector<double>> axes;
    for (std::size_t k = 0; k < n_modes; ++k) axes.push_back(grid.axis(k));

    // Singleton-block contributions do not depend on the origin; compute once.
    double singleton_attained = 0.0;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto& block : decl.blocks) {
        if (block.size() == 1) {
            if (sample.size() > 1 && !all_equal(sample))
                singleton_attained +=
                    frechet_mean_1d(man, sample, block.front(), arc).attained_value;
        } else if (block.size() == 2) {
            pairs.emplace_back(block[0], block[1]);
        } else {
            throw UnsupportedBlockSizeError("select_origin: blocks of 3+ modes unsupported");
        }
    }

    const double inv_n = 1.0 / static_cast<double>(sample.size());
    // Only the pair-block coordinates of the origin matter; memoize on them.
    std::map<std::vector<double>, double> pair_cache;

    Theta best_origin;
    double best_value = kInf;
    std::vector<std::size_t> idx(n_modes, 0);
    const bool degenerate = sample.size() == 1 || all_equal(sample);
    while (true) {
        Theta origin(n_modes);
        for (std::size_t k = 0; k < n_modes; ++k) origin[k] = axes[k][idx[k]];

        double value = singleton_attained * inv_n;
        if (!degenerate && !pairs.empty()) {
            std::vector<double> key;
            for (const auto& [ka, kb] : pairs) {
                key.push_back(origin[ka]);
                key.push_back(origin[kb]);
            }
            auto it = pair_cache.find(key);
            if (it == pair_cache.end()) {
                double pair_attained = 0.0;
                MetricConfig cfg{origin, gamma, arc};
                for (const auto& [ka, kb] : pairs)
                    pair_attained +=
                        solve_pair_block(man, sample, ka, kb, cfg, search).attained;
                it = pair_cache.emplace(std::move(key), pair_attained * inv_n).first;
            }
            value += it->second;
        }
        if (value < best_value) {
            best_value = value;
            best_origin = origin;
        }

        // lexicographic advance
        bool done = true;
        for (std::size_t k = n_modes; k-- > 0;) {
            if (++idx[k] < axes[k].size()) {
                done = false;
                break;
            }
            idx[k] = 0;
        }
        if (done) break;
    }
    return {best_origin, best_value};
}

}  // namespace tmv
