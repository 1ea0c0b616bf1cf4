#include "tmv/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "tmv/errors.hpp"

namespace tmv {

double sse(const std::vector<SampledCurve>& curves, const FitResult& fit,
           const SamplingGrid& grid) {
    if (curves.size() != fit.theta_hat.size())
        throw Error("sse: curve/theta count mismatch");
    const Manifold man{fit.model(), grid};
    double total = 0.0;
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const std::vector<double> r = man.eval(fit.theta_hat[i]);
        for (std::size_t j = 0; j < r.size(); ++j) {
            const double d = curves[i].z[j] - r[j];
            total += d * d;
        }
    }
    return total;
}

Decomposition decompose(const FitResult& fit, const SamplingGrid& grid,
                        const MetricConfig& cfg, const SeparabilityDecl& decl,
                        const DecomposeOptions& opts) {
    const Manifold man{fit.model(), grid};
    decl.check_partition(man.dim());

    Decomposition out;
    out.origin = cfg.origin;
    out.gamma = cfg.gamma;
    for (std::size_t k = 0; k < man.dim(); ++k)
        out.mode_names.push_back(man.model.mode(k).name);

    const std::vector<Theta>& thetas = fit.theta_hat;
    const FrechetResult mean = frechet_mean(man, thetas, cfg, decl, opts.search);
    out.frechet_mean = mean.mean_theta;
    out.diagnostics = mean.diagnostics;

    out.ssm_per_mode.assign(man.dim(), 0.0);
    for (const auto& block : decl.blocks) {
        if (block.size() == 1) {
            const std::size_t k = block.front();
            for (const Theta& th : thetas) {
                const double c = c_component(man, k, th[k], out.frechet_mean[k], cfg.origin,
                                             cfg.arc, false);
                out.ssm_per_mode[k] += c * c;
            }
        } else if (block.size() == 2) {
            const PairMetric pm(man, block[0], block[1], cfg);
            const PairMetric::Coords mc = pm.coords(out.frechet_mean);
            const double g = cfg.gamma;
            for (const Theta& th : thetas) {
                const PairMetric::Coords c = pm.coords(th);
                const double de = c.eta - mc.eta, da = c.a - mc.a;
                const double dz = c.zeta - mc.zeta, db = c.b - mc.b;
                out.ssm_per_mode[block[0]] += g * de * de + (1.0 - g) * da * da;
                out.ssm_per_mode[block[1]] += g * dz * dz + (1.0 - g) * db * db;
            }
        } else {
            throw UnsupportedBlockSizeError(
                "decompose: non-separable blocks of 3+ modes are not supported");
        }
    }
    for (double s : out.ssm_per_mode) out.ssm_total += s;

    if (opts.weighted_sse) {
        if (opts.weights.size() != fit.sse_i.size())
            throw Error("decompose: weighted_sse requires one weight per curve");
        for (std::size_t i = 0; i < fit.sse_i.size(); ++i)
            out.sse += opts.weights[i] * fit.sse_i[i];
    } else {
        for (double s : fit.sse_i) out.sse += s;
    }

    const double denom = out.ssm_total + out.sse;
    out.rss_per_mode.assign(man.dim(), 0.0);
    if (denom <= 0.0) {
        out.degenerate = true;
    } else {
        for (std::size_t k = 0; k < man.dim(); ++k)
            out.rss_per_mode[k] = 100.0 * out.ssm_per_mode[k] / denom;
        for (double r : out.rss_per_mode) out.rss_total += r;
    }
    return out;
}

std::vector<Decomposition> gamma_sweep(const FitResult& fit, const SamplingGrid& grid,
                                       MetricConfig cfg, const SeparabilityDecl& decl,
                                       const std::vector<double>& gammas,
                                       const DecomposeOptions& opts) {
    std::vector<Decomposition> out;
    out.reserve(gammas.size());
    for (double g : gammas) {
        cfg.gamma = g;
        out.push_back(decompose(fit, grid, cfg, decl, opts));
    }
    return out;
}

PipelineResult run_pipeline(const std::vector<SampledCurve>& curves, const SamplingGrid& grid,
                            const PipelineConfig& cfg) {
    PipelineResult out;
    out.fit = fit_all(curves, grid, cfg.degree, cfg.modes, cfg.fit);
    if (cfg.normalize) {
        std::vector<double> weights;
        for (const auto& c : curves) weights.push_back(c.weight);
        out.fit = normalize_identifiability(out.fit, grid, weights);
    }

    MetricConfig mcfg;
    mcfg.gamma = cfg.gamma;
    mcfg.arc = cfg.arc;
    if (cfg.origin_pinned) {
        mcfg.origin = cfg.origin;
    } else {
        const OriginGrid ogrid =
            OriginGrid::from_sample(out.fit.theta_hat, 0.1, cfg.origin_resolution);
        mcfg.origin = select_origin(Manifold{out.fit.model(), grid}, out.fit.theta_hat, ogrid,
                                    cfg.gamma, cfg.decl, cfg.scan_arc, cfg.search)
                          .first;
    }

    DecomposeOptions opts;
    opts.weighted_sse = cfg.weighted_sse;
    if (cfg.weighted_sse)
        for (const auto& c : curves) opts.weights.push_back(c.weight);
    opts.search = cfg.search;
    out.decomposition = decompose(out.fit, grid, mcfg, cfg.decl, opts);
    return out;
}

namespace {

BootstrapSummary::Stats summarize(std::vector<double> v) {
    BootstrapSummary::Stats s;
    const std::size_t n = v.size();
    for (double x : v) s.mean += x;
    s.mean /= n;
    if (n > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.sd = std::sqrt(ss / (n - 1));
    }
    std::sort(v.begin(), v.end());
    const auto quantile = [&](double p) {
        const double pos = p * (n - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, n - 1);
        const double frac = pos - lo;
        return v[lo] * (1.0 - frac) + v[hi] * frac;
    };
    s.median = quantile(0.5);
    s.p5 = quantile(0.05);
    s.p95 = quantile(0.95);
    return s;
}

}  // namespace

BootstrapSummary bootstrap(const std::vector<SampledCurve>& curves, const SamplingGrid& grid,
                           const PipelineConfig& cfg, int B, std::uint64_t seed) {
    if (B < 1) throw Error("bootstrap: B must be at least 1");
    const std::size_t n = curves.size();

    std::vector<std::vector<double>> shares;  // per successful replicate
    int failures = 0;
    for (int rep = 0; rep < B; ++rep) {
        std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(rep));
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::vector<SampledCurve> sample;
        sample.reserve(n);
        for (std::size_t i = 0; i < n; ++i) sample.push_back(curves[pick(rng)]);
        try {
            const PipelineResult r = run_pipeline(sample, grid, cfg);
            std::vector<double> row = r.decomposition.rss_per_mode;
            row.push_back(r.decomposition.rss_total);
            shares.push_back(std::move(row));
        } catch (const Error&) {
            ++failures;
        }
        if (failures * 5 > B)
            throw NoConvergenceError("bootstrap: more than 20% of replicates failed");
    }

    BootstrapSummary out;
    out.B = B;
    out.seed = seed;
    out.failures = failures;
    for (const ModeSpec& m : cfg.modes) out.quantity.push_back("rss_" + m.name);
    out.quantity.push_back("rss_total");
    for (std::size_t q = 0; q < out.quantity.size(); ++q) {
        std::vector<double> col;
        col.reserve(shares.size());
        for (const auto& row : shares) col.push_back(row[q]);
        out.stats.push_back(summarize(std::move(col)));
    }
    return out;
}

}  // namespace tmv
