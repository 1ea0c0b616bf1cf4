#include "tmv/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "tmv/errors.hpp"

namespace tmv {

SeparabilityDecl SeparabilityDecl::singletons(std::size_t n_modes) {
    SeparabilityDecl d;
    for (std::size_t k = 0; k < n_modes; ++k) d.blocks.push_back({k});
    return d;
}

void SeparabilityDecl::check_partition(std::size_t n_modes) const {
    std::vector<bool> seen(n_modes, false);
    std::size_t count = 0;
    for (const auto& block : blocks) {
        if (block.empty()) throw Error("SeparabilityDecl: empty block");
        for (std::size_t k : block) {
            if (k >= n_modes) throw Error("SeparabilityDecl: mode index out of range");
            if (seen[k]) throw Error("SeparabilityDecl: mode appears in two blocks");
            seen[k] = true;
            ++count;
        }
    }
    if (count != n_modes) throw Error("SeparabilityDecl: blocks do not cover all modes");
}

void validate_separability(const Manifold& man, const SeparabilityDecl& decl,
                           const std::vector<std::pair<double, double>>& box,
                           std::uint64_t seed) {
    const std::size_t n = man.dim();
    decl.check_partition(n);
    if (box.size() != n) throw Error("validate_separability: box/mode count mismatch");

    std::vector<std::size_t> block_of(n);
    for (std::size_t b = 0; b < decl.blocks.size(); ++b)
        for (std::size_t k : decl.blocks[b]) block_of[k] = b;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int draw = 0; draw < 20; ++draw) {
        Theta th(n);
        for (std::size_t k = 0; k < n; ++k)
            th[k] = box[k].first + (box[k].second - box[k].first) * unit(rng);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                if (block_of[j] == block_of[k]) continue;
                const double step = 1e-5 * std::max(1.0, std::abs(th[k]));
                Theta plus = th, minus = th;
                plus[k] += step;
                minus[k] -= step;
                const std::vector<double> vp = man.velocity(plus, j);
                const std::vector<double> vm = man.velocity(minus, j);
                double scale = 1.0;
                for (double v : vp) scale = std::max(scale, std::abs(v));
                for (std::size_t g = 0; g < vp.size(); ++g) {
                    const double mixed = (vp[g] - vm[g]) / (2.0 * step);
                    if (std::abs(mixed) > 1e-6 * scale)
                        throw NotSeparableError(
                            "cross-block mixed partial does not vanish between modes '" +
                            man.model.mode(j).name + "' and '" + man.model.mode(k).name + "'");
                }
            }
        }
    }
}

namespace {

// Perturb one coordinate to probe anchor independence; widths are scaled
// multiplicatively to stay positive.
double perturb(const Manifold& man, std::size_t k, double value, double delta) {
    if (man.model.mode(k).kind == ModeKind::GeneralistSpecialist)
        return value * (1.0 + delta);
    return value + delta;
}

}  // namespace

double c_component(const Manifold& man, std::size_t k, double a, double b,
                   const Theta& anchor, const ArcConfig& cfg, bool verify_anchors) {
    if (k >= man.dim()) throw Error("c_component: mode index out of range");
    const double base = arcdist(man, k, a, b, anchor, cfg);
    if (verify_anchors && man.dim() > 1) {
        for (double delta : {0.25, -0.25}) {
            Theta other = anchor;
            for (std::size_t j = 0; j < man.dim(); ++j)
                if (j != k) other[j] = perturb(man, j, anchor[j], delta);
            const double alt = arcdist(man, k, a, b, other, cfg);
            const double scale = std::max({std::abs(base), std::abs(alt), 1e-12});
            if (std::abs(alt - base) > 1e-7 * scale)
                throw NotSeparableError("arc length along mode '" + man.model.mode(k).name +
                                        "' depends on the other parameters");
        }
    }
    return base;
}

double dist_separable(const Manifold& man, const Theta& theta1, const Theta& theta2,
                      const SeparabilityDecl& decl, const ArcConfig& cfg) {
    decl.check_partition(man.dim());
    for (const auto& block : decl.blocks)
        if (block.size() != 1)
            throw NotSeparableError("dist_separable: all blocks must be singletons");
    double ss = 0.0;
    for (const auto& block : decl.blocks) {
        const std::size_t k = block.front();
        const double c = c_component(man, k, theta1[k], theta2[k], theta1, cfg);
        ss += c * c;
    }
    return std::sqrt(ss);
}

PairMetric::PairMetric(const Manifold& man, std::size_t ka, std::size_t kb, MetricConfig cfg)
    : man_(man), ka_(ka), kb_(kb), cfg_(std::move(cfg)) {
    if (ka >= man.dim() || kb >= man.dim() || ka == kb)
        throw Error("PairMetric: bad mode indices");
    if (cfg_.origin.size() != man.dim()) throw Error("PairMetric: origin/mode count mismatch");
    if (cfg_.gamma < 0.0 || cfg_.gamma > 1.0) throw Error("PairMetric: gamma outside [0,1]");
}

PairMetric::Coords PairMetric::coords(const Theta& theta) const {
    Coords c;
    // along ka with kb at the origin's value (curve through the origin)
    Theta fixed = cfg_.origin;
    c.eta = arc_coordinate(man_, ka_, theta[ka_], cfg_.origin[ka_], fixed, cfg_.arc);
    // along kb with ka at the origin's value
    c.zeta = arc_coordinate(man_, kb_, theta[kb_], cfg_.origin[kb_], fixed, cfg_.arc);
    // along ka with kb at the point's own value (curve through the point)
    fixed[kb_] = theta[kb_];
    c.a = arc_coordinate(man_, ka_, theta[ka_], cfg_.origin[ka_], fixed, cfg_.arc);
    // along kb with ka at the point's own value
    fixed = cfg_.origin;
    fixed[ka_] = theta[ka_];
    c.b = arc_coordinate(man_, kb_, theta[kb_], cfg_.origin[kb_], fixed, cfg_.arc);
    return c;
}

double PairMetric::d1_sq(const Coords& p, const Coords& q) {
    const double de = p.eta - q.eta;
    const double dz = p.zeta - q.zeta;
    return de * de + dz * dz;
}

double PairMetric::d2_sq(const Coords& p, const Coords& q) {
    const double da = p.a - q.a;
    const double db = p.b - q.b;
    return da * da + db * db;
}

double PairMetric::dv_sq(const Coords& p, const Coords& q) const {
    return cfg_.gamma * d1_sq(p, q) + (1.0 - cfg_.gamma) * d2_sq(p, q);
}

double PairMetric::d1(const Theta& t1, const Theta& t2) const {
    return std::sqrt(d1_sq(coords(t1), coords(t2)));
}

double PairMetric::d2(const Theta& t1, const Theta& t2) const {
    return std::sqrt(d2_sq(coords(t1), coords(t2)));
}

double PairMetric::dv(const Theta& t1, const Theta& t2) const {
    return std::sqrt(dv_sq(coords(t1), coords(t2)));
}

namespace {

PairMetric two_mode_metric(const Manifold& man, const MetricConfig& cfg) {
    if (man.dim() != 2) throw Error("two-mode metric requires exactly two active modes");
    return PairMetric(man, 0, 1, cfg);
}

}  // namespace

double d1(const Manifold& man, const Theta& theta1, const Theta& theta2,
          const MetricConfig& cfg) {
    return two_mode_metric(man, cfg).d1(theta1, theta2);
}

double d2(const Manifold& man, const Theta& theta1, const Theta& theta2,
          const MetricConfig& cfg) {
    return two_mode_metric(man, cfg).d2(theta1, theta2);
}

double dv(const Manifold& man, const Theta& theta1, const Theta& theta2,
          const MetricConfig& cfg) {
    return two_mode_metric(man, cfg).dv(theta1, theta2);
}

double dist_composite(const Manifold& man, const Theta& theta1, const Theta& theta2,
                      const MetricConfig& cfg, const SeparabilityDecl& decl) {
    decl.check_partition(man.dim());
    double ss = 0.0;
    for (const auto& block : decl.blocks) {
        if (block.size() == 1) {
            const std::size_t k = block.front();
            const double c = c_component(man, k, theta1[k], theta2[k], cfg.origin, cfg.arc);
            ss += c * c;
        } else if (block.size() == 2) {
            const PairMetric pm(man, block[0], block[1], cfg);
            ss += pm.dv_sq(pm.coords(theta1), pm.coords(theta2));
        } else {
            throw UnsupportedBlockSizeError(
                "dist_composite: non-separable blocks of 3+ modes are not supported");
        }
    }
    return std::sqrt(ss);
}

}  // namespace tmv
