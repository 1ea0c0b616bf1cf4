// Acceptance gate: one pass/fail line per criterion, exit code = failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "tmv/decompose.hpp"
#include "tmv/workbench.hpp"

using namespace tmv;

namespace {

int failures = 0;

void report(int num, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] %2d. %s%s%s\n", pass ? "PASS" : "FAIL", num, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!pass) ++failures;
}

void run(int num, const std::string& name,
         const std::function<std::pair<bool, std::string>()>& body) {
    try {
        const auto [pass, detail] = body();
        report(num, name, pass, detail);
    } catch (const std::exception& e) {
        report(num, name, false, std::string("exception: ") + e.what());
    }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// The shared 50-curve synthetic study.
SyntheticSpec study_spec() {
    SyntheticSpec spec;
    spec.template_coeffs = {2.0, 0.1, -1.0, 0.05, 0.12};
    spec.mode_kinds = {"vertical", "horizontal", "genspec"};
    spec.laws = {{"normal", 0.0, 0.2}, {"uniform", -0.3, 0.3}, {"uniform", 0.8, 1.25}};
    spec.noise_sd = 0.02;
    spec.noise_relative = true;
    spec.n_curves = 50;
    spec.grid_points = {-1.5, -0.9, -0.3, 0.3, 0.9, 1.5};
    spec.seed = 2024;
    return spec;
}

PipelineConfig study_pipeline() {
    PipelineConfig p;
    p.modes = make_modes({"vertical", "horizontal", "genspec"});
    p.decl = default_declaration(p.modes);
    return p;
}

Manifold parabola_manifold(std::vector<ModeSpec> modes) {
    return Manifold{Model(PolynomialTemplate({0.0, 0.0, -1.0}), std::move(modes)),
                    SamplingGrid({-1.0, 0.0, 1.0})};
}

// Closed-form signed arc coordinate for the horizontal shift on the parabola
// fixture: speed(m) = 2 sqrt(3 m^2 + 2).
double horizontal_arc_closed_form(double th) {
    const double c = 2.0 / 3.0;
    return std::sqrt(3.0) * (th * std::sqrt(th * th + c) + c * std::asinh(th / std::sqrt(c)));
}

struct Shared {
    SimulationResult sim{SamplingGrid({0.0, 1.0, 2.0}), {}, {}, {}};
    PipelineResult run;
    double fit_seconds = 0.0;
};

}  // namespace

int main() {
    const ArcConfig arc;
    Shared sh;

    run(1, "synthetic 3-mode recovery within 3 points per mode, under 60 s", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        const SyntheticSpec spec = study_spec();
        const PipelineConfig pipe = study_pipeline();
        sh.sim = simulate(spec, pipe);
        sh.run = run_pipeline(sh.sim.curves, sh.sim.grid, pipe);
        sh.fit_seconds = seconds_since(t0);
        double worst = 0.0;
        for (std::size_t k = 0; k < 3; ++k)
            worst = std::max(worst, std::abs(sh.run.decomposition.rss_per_mode[k] -
                                             sh.sim.oracle.rss_per_mode[k]));
        const bool pass = worst <= 3.0 && sh.fit_seconds < 60.0;
        return std::pair{pass, fmt("max share error %.3f points, %.1f s", worst,
                                   sh.fit_seconds)};
    });

    run(2, "horizontal arc length matches polyline and the frozen quadrature value", [&] {
        const Manifold man = parabola_manifold({ModeSpec::horizontal_shift()});
        const double quad = arcdist(man, 0, 0.0, 1.0, {0.0}, arc);
        const double poly = arcdist_polyline(man, 0, 0.0, 1.0, {0.0}, 100000);
        const double frozen = 3.4273939246824936;
        const bool pass = std::abs(quad - poly) / quad <= 1e-6 &&
                          std::abs(quad - frozen) / frozen <= 1e-9 &&
                          std::abs(poly - frozen) / frozen <= 1e-6;
        return std::pair{pass, fmt("quad %.12f poly %.12f", quad, poly)};
    });

    run(3, "metric axioms hold on 1000 random triples", [&] {
        const Manifold sep =
            parabola_manifold({ModeSpec::horizontal_shift(), ModeSpec::vertical_shift()});
        const SeparabilityDecl singles = SeparabilityDecl::singletons(2);
        const Manifold pairman =
            parabola_manifold({ModeSpec::generalist_specialist(), ModeSpec::horizontal_shift()});
        MetricConfig mcfg;
        mcfg.origin = {1.0, 0.0};
        const PairMetric pm(pairman, 0, 1, mcfg);

        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> um(-0.5, 0.5), uh(-1.5, 1.5), uw(0.7, 1.5);
        bool pass = true;
        for (int rep = 0; rep < 1000 && pass; ++rep) {
            const Theta a{um(rng), uh(rng)}, b{um(rng), uh(rng)}, c{um(rng), uh(rng)};
            const double ab = dist_separable(sep, a, b, singles, arc);
            const double ba = dist_separable(sep, b, a, singles, arc);
            const double bc = dist_separable(sep, b, c, singles, arc);
            const double ac = dist_separable(sep, a, c, singles, arc);
            pass = pass && ab == ba && dist_separable(sep, a, a, singles, arc) == 0.0 &&
                   ac <= ab + bc + 1e-9 * (ab + bc + 1.0);

            const Theta x{uw(rng), um(rng)}, y{uw(rng), um(rng)}, z{uw(rng), um(rng)};
            const auto cx = pm.coords(x), cy = pm.coords(y), cz = pm.coords(z);
            const double d1xx = PairMetric::d1_sq(cx, cx);
            pass = pass && d1xx == 0.0 && pm.dv_sq(cx, cx) == 0.0;
            for (double g : {0.25, 0.5, 1.0}) {
                const auto dvg = [&](const PairMetric::Coords& p, const PairMetric::Coords& q) {
                    return std::sqrt(g * PairMetric::d1_sq(p, q) +
                                     (1.0 - g) * PairMetric::d2_sq(p, q));
                };
                const double xy = dvg(cx, cy), yx = dvg(cy, cx);
                const double yz = dvg(cy, cz), xz = dvg(cx, cz);
                pass = pass && xy == yx && xz <= xy + yz + 1e-9 * (xy + yz + 1.0);
            }
        }
        return std::pair{pass, std::string{}};
    });

    run(4, "path metrics collapse to the separable distance on separable models", [&] {
        const Manifold sep =
            parabola_manifold({ModeSpec::horizontal_shift(), ModeSpec::vertical_shift()});
        const SeparabilityDecl singles = SeparabilityDecl::singletons(2);
        std::mt19937_64 rng(41);
        std::uniform_real_distribution<double> um(-0.5, 0.5), uh(-1.5, 1.5);
        double worst = 0.0;
        for (int o = 0; o < 5; ++o) {
            MetricConfig cfg;
            cfg.origin = {um(rng), uh(rng)};
            for (int rep = 0; rep < 200; ++rep) {
                const Theta a{um(rng), uh(rng)}, b{um(rng), uh(rng)};
                const double v1 = d1(sep, a, b, cfg);
                const double v2 = d2(sep, a, b, cfg);
                const double ds = dist_separable(sep, a, b, singles, arc);
                worst = std::max({worst, std::abs(v1 - v2), std::abs(v1 - ds)});
            }
        }
        return std::pair{worst <= 1e-8, fmt("max deviation %.2e", worst)};
    });

    run(5, "per-mode sums add up exactly and match the blended metric", [&] {
        const Decomposition& d = sh.run.decomposition;
        double sum = 0.0;
        for (double s : d.ssm_per_mode) sum += s;
        const double add_err = std::abs(d.ssm_total - sum) / d.ssm_total;

        const Manifold man{sh.run.fit.model(), sh.sim.grid};
        MetricConfig cfg;
        cfg.origin = d.origin;
        cfg.gamma = d.gamma;
        double direct = 0.0;
        for (const Theta& th : sh.run.fit.theta_hat) {
            const double dist = dist_composite(man, th, d.frechet_mean, cfg,
                                               study_pipeline().decl);
            direct += dist * dist;
        }
        const double coh_err = std::abs(d.ssm_total - direct) / d.ssm_total;
        return std::pair{add_err <= 1e-10 && coh_err <= 1e-10,
                         fmt("additivity %.2e, coherence %.2e", add_err, coh_err)};
    });

    run(6, "manifold variance estimate converges to the population value", [&] {
        const Manifold man = parabola_manifold({ModeSpec::horizontal_shift()});
        // Sanity: quadrature coordinates agree with the closed form used below.
        for (double th : {-0.8, 0.3, 1.0}) {
            const double q = arc_coordinate(man, 0, th, 0.0, {0.0}, arc);
            if (std::abs(q - horizontal_arc_closed_form(th)) > 1e-8)
                return std::pair{false, std::string("closed-form coordinate mismatch")};
        }
        std::mt19937_64 orc(123456);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double m1 = 0.0, m2 = 0.0;
        const int N = 1000000;
        std::vector<double> draws(N);
        for (double& v : draws) v = horizontal_arc_closed_form(u(orc));
        for (double v : draws) m1 += v;
        m1 /= N;
        for (double v : draws) m2 += (v - m1) * (v - m1);
        const double var_f = m2 / N;

        std::mt19937_64 rng(9);
        std::vector<Theta> sample;
        std::vector<double> err;
        double v1000 = 0.0;
        for (int n : {10, 100, 1000}) {
            while (static_cast<int>(sample.size()) < n) sample.push_back({u(rng)});
            const FrechetResult r = frechet_mean_1d(man, sample, 0, arc);
            err.push_back(std::abs(r.variance - var_f));
            v1000 = r.variance;
        }
        const bool pass = err[0] > err[1] && err[1] > err[2] &&
                          std::abs(v1000 - var_f) / var_f <= 0.10;
        return std::pair{pass, fmt("errors %.4f > %.4f > %.4f, oracle %.4f", err[0], err[1],
                                   err[2], var_f)};
    });

    run(7, "closed-form one-mode mean agrees with a numeric search", [&] {
        const Manifold man = parabola_manifold({ModeSpec::horizontal_shift()});
        std::mt19937_64 rng(77);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double worst = 0.0;
        for (int rep = 0; rep < 20; ++rep) {
            std::vector<Theta> sample;
            for (int i = 0; i < 7; ++i) sample.push_back({u(rng)});
            const FrechetResult closed = frechet_mean_1d(man, sample, 0, arc);

            const auto fn = [&](double th) {
                double acc = 0.0;
                for (const Theta& s : sample) {
                    const double d = arcdist(man, 0, s[0], th, s, arc);
                    acc += d * d;
                }
                return acc;
            };
            double lo = -1.2, hi = 1.2;
            const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
            double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
            double f1 = fn(x1), f2 = fn(x2);
            while (hi - lo > 1e-11) {
                if (f1 < f2) {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - gr * (hi - lo);
                    f1 = fn(x1);
                } else {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + gr * (hi - lo);
                    f2 = fn(x2);
                }
            }
            const double numeric = 0.5 * (lo + hi);
            const double gap = std::abs(horizontal_arc_closed_form(closed.mean_theta[0]) -
                                        horizontal_arc_closed_form(numeric));
            worst = std::max(worst, gap);
        }
        return std::pair{worst <= 1e-6, fmt("max arc-unit gap %.2e", worst)};
    });

    run(8, "blend is linear in gamma and irrelevant on separable studies", [&] {
        const Manifold pairman =
            parabola_manifold({ModeSpec::generalist_specialist(), ModeSpec::horizontal_shift()});
        MetricConfig mcfg;
        mcfg.origin = {1.0, 0.0};
        const PairMetric pm(pairman, 0, 1, mcfg);
        std::mt19937_64 rng(88);
        std::uniform_real_distribution<double> uw(0.7, 1.5), um(-0.4, 0.4);
        double lin_err = 0.0;
        for (int rep = 0; rep < 100; ++rep) {
            const auto ca = pm.coords({uw(rng), um(rng)});
            const auto cb = pm.coords({uw(rng), um(rng)});
            const double s1 = PairMetric::d1_sq(ca, cb), s2 = PairMetric::d2_sq(ca, cb);
            for (double g : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                MetricConfig c2 = mcfg;
                c2.gamma = g;
                const PairMetric pg(pairman, 0, 1, c2);
                lin_err = std::max(lin_err,
                                   std::abs(pg.dv_sq(ca, cb) - (g * s1 + (1.0 - g) * s2)));
            }
        }

        const Manifold sep =
            parabola_manifold({ModeSpec::horizontal_shift(), ModeSpec::vertical_shift()});
        std::mt19937_64 rng2(89);
        std::uniform_real_distribution<double> um2(-0.4, 0.4), uh2(-1.0, 1.0);
        std::vector<Theta> thetas;
        for (int i = 0; i < 10; ++i) thetas.push_back({um2(rng2), uh2(rng2)});
        FitResult fix{PolynomialTemplate({0.0, 0.0, -1.0}),
                      {ModeSpec::horizontal_shift(), ModeSpec::vertical_shift()},
                      thetas,
                      {},
                      std::vector<double>(thetas.size(), 0.0),
                      {},
                      {},
                      1,
                      true};
        SeparabilityDecl pair_decl;
        pair_decl.blocks = {{0, 1}};
        MetricConfig scfg;
        scfg.origin = {0.0, 0.0};
        const auto sweep = gamma_sweep(fix, sep.grid, scfg, pair_decl,
                                       {0.0, 0.25, 0.5, 0.75, 1.0});
        double sweep_err = 0.0;
        for (std::size_t s = 1; s < sweep.size(); ++s)
            for (std::size_t k = 0; k < 2; ++k)
                sweep_err = std::max(sweep_err, std::abs(sweep[s].rss_per_mode[k] -
                                                         sweep[0].rss_per_mode[k]));
        return std::pair{lin_err <= 1e-12 && sweep_err <= 1e-8,
                         fmt("linearity %.2e, sweep spread %.2e", lin_err, sweep_err)};
    });

    run(9, "fit descends and gauge normalization is exact", [&] {
        const PipelineConfig pipe = study_pipeline();
        const FitResult fit =
            fit_all(sh.sim.curves, sh.sim.grid, pipe.degree, pipe.modes, pipe.fit);
        bool monotone = true;
        for (std::size_t i = 1; i < fit.sse_trace.size(); ++i)
            monotone = monotone && fit.sse_trace[i] <= fit.sse_trace[i - 1];

        std::vector<double> weights(sh.sim.curves.size(), 1.0);
        const FitResult norm = normalize_identifiability(fit, sh.sim.grid, weights);
        const Manifold before{fit.model(), sh.sim.grid};
        const Manifold after{norm.model(), sh.sim.grid};
        double curve_err = 0.0;
        for (std::size_t i = 0; i < sh.sim.curves.size(); ++i) {
            const auto a = before.eval(fit.theta_hat[i]);
            const auto b = after.eval(norm.theta_hat[i]);
            for (std::size_t j = 0; j < a.size(); ++j)
                curve_err = std::max(curve_err, std::abs(a[j] - b[j]));
        }
        double hsum = 0.0, msum = 0.0, lgw = 0.0;
        for (const Theta& th : norm.theta_hat) {
            hsum += th[0];
            msum += th[1];
            lgw += std::log(th[2]);
        }
        const bool pass = monotone && curve_err <= 1e-12 && std::abs(hsum) <= 1e-9 &&
                          std::abs(msum) <= 1e-9 && std::abs(lgw) <= 1e-9;
        return std::pair{pass, fmt("curve drift %.2e, constraints %.1e/%.1e/%.1e", curve_err,
                                   hsum, msum, lgw)};
    });

    run(10, "bootstrap intervals cover the oracle shares, under 10 min", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        const BootstrapSummary boot =
            bootstrap(sh.sim.curves, sh.sim.grid, study_pipeline(), 200, 2024);
        const double elapsed = seconds_since(t0);
        bool covered = boot.failures == 0;
        for (std::size_t k = 0; k < 3; ++k) {
            const double oracle = sh.sim.oracle.rss_per_mode[k];
            covered = covered && boot.stats[k].p5 <= oracle && oracle <= boot.stats[k].p95;
        }
        return std::pair{covered && elapsed < 600.0,
                         fmt("%.0f s, failures %d", elapsed, boot.failures)};
    });

    run(11, "rescaling a mode parameter leaves every share unchanged", [&] {
        ArcConfig tight;
        tight.rel_tol = 1e-12;
        const PipelineConfig pipe = study_pipeline();
        MetricConfig cfg;
        cfg.origin = sh.run.decomposition.origin;
        cfg.arc = tight;
        const Decomposition base = decompose(sh.run.fit, sh.sim.grid, cfg, pipe.decl);

        // Same model with m = 2 m': the link absorbs the rescaling.
        std::vector<ModeSpec> modes2 = pipe.modes;
        modes2[1] = ModeSpec::horizontal_shift().with_link(
            [](double u) { return 2.0 * u; }, [](double) { return 2.0; });
        FitResult fit2 = sh.run.fit;
        fit2.modes = modes2;
        for (Theta& th : fit2.theta_hat) th[1] *= 0.5;
        fit2.projections.clear();
        MetricConfig cfg2 = cfg;
        cfg2.origin[1] *= 0.5;
        const Decomposition rep = decompose(fit2, sh.sim.grid, cfg2, pipe.decl);

        double worst = 0.0;
        for (std::size_t k = 0; k < 3; ++k)
            worst = std::max(worst, std::abs(base.rss_per_mode[k] - rep.rss_per_mode[k]));
        return std::pair{worst <= 1e-8, fmt("max share change %.2e", worst)};
    });

    std::printf("%d of 11 criteria passed\n", 11 - failures);
    return failures;
}
