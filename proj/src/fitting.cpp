#include "tmv/fitting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "tmv/errors.hpp"

namespace tmv {

namespace {

double curve_sse(const std::vector<double>& z, const std::vector<double>& fit) {
    double ss = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
        const double d = z[j] - fit[j];
        ss += d * d;
    }
    return ss;
}

struct LmSolution {
    Theta theta;
    double sse = std::numeric_limits<double>::infinity();
    bool ok = false;
};

LmSolution levenberg_marquardt(const Manifold& man, const std::vector<double>& z,
                               Theta theta, int max_iters) {
    const std::size_t d = man.grid.size();
    const std::size_t p = theta.size();
    LmSolution sol;

    std::vector<double> fit;
    try {
        fit = man.eval(theta);
    } catch (const Error&) {
        return sol;  // infeasible start
    }
    double sse = curve_sse(z, fit);
    double lambda = 1e-3;

    Eigen::MatrixXd J(d, p);
    Eigen::VectorXd r(d);
    for (int it = 0; it < max_iters; ++it) {
        for (std::size_t k = 0; k < p; ++k) {
            const std::vector<double> v = man.velocity(theta, k);
            for (std::size_t j = 0; j < d; ++j) J(j, k) = v[j];
        }
        for (std::size_t j = 0; j < d; ++j) r(j) = z[j] - fit[j];

        const Eigen::MatrixXd jtj = J.transpose() * J;
        const Eigen::VectorXd jtr = J.transpose() * r;
        if (jtr.lpNorm<Eigen::Infinity>() <= 1e-14 * (1.0 + sse)) break;

        bool accepted = false;
        for (int tries = 0; tries < 60; ++tries) {
            Eigen::MatrixXd damped = jtj;
            for (std::size_t k = 0; k < p; ++k)
                damped(k, k) += lambda * std::max(jtj(k, k), 1e-12);
            const Eigen::VectorXd step = damped.ldlt().solve(jtr);
            Theta cand = theta;
            for (std::size_t k = 0; k < p; ++k) cand[k] += step(k);
            std::vector<double> cand_fit;
            double cand_sse = std::numeric_limits<double>::infinity();
            try {
                cand_fit = man.eval(cand);
                cand_sse = curve_sse(z, cand_fit);
            } catch (const Error&) {
                // infeasible step (e.g. width driven nonpositive)
            }
            if (cand_sse < sse) {
                double step_norm = 0.0, theta_norm = 0.0;
                for (std::size_t k = 0; k < p; ++k) {
                    step_norm += step(k) * step(k);
                    theta_norm += theta[k] * theta[k];
                }
                theta = std::move(cand);
                fit = std::move(cand_fit);
                const double drop = sse - cand_sse;
                sse = cand_sse;
                lambda = std::max(lambda / 3.0, 1e-12);
                accepted = true;
                if (std::sqrt(step_norm) <= 1e-12 * (1.0 + std::sqrt(theta_norm)) ||
                    drop <= 1e-15 * (sse + 1e-300))
                    it = max_iters;  // converged
                break;
            }
            lambda *= 4.0;
            if (lambda > 1e14) {
                it = max_iters;
                break;
            }
        }
        if (!accepted) break;
    }
    sol.theta = std::move(theta);
    sol.sse = sse;
    sol.ok = true;
    return sol;
}

}  // namespace

ProjectionOutcome project_curve(const Manifold& man, const std::vector<double>& z,
                                const std::vector<Theta>& inits, const FitConfig& cfg) {
    if (inits.empty()) throw Error("project_curve: need at least one init");
    if (z.size() != man.grid.size()) throw GridMismatchError("project_curve: curve/grid mismatch");

    std::vector<LmSolution> sols;
    for (const Theta& init : inits) {
        LmSolution s = levenberg_marquardt(man, z, init, cfg.lm_max_iters);
        if (s.ok) sols.push_back(std::move(s));
    }
    if (sols.empty()) throw NoConvergenceError("project_curve: all starts failed");

    const auto best = std::min_element(
        sols.begin(), sols.end(),
        [](const LmSolution& u, const LmSolution& v) { return u.sse < v.sse; });

    // Count distinct near-optimal solutions: same SSE (1e-8 rel) but theta
    // apart by more than 1e-3.
    std::vector<const Theta*> clusters;
    for (const LmSolution& s : sols) {
        if (s.sse > best->sse * (1.0 + 1e-8) + 1e-300) continue;
        bool found = false;
        for (const Theta* c : clusters) {
            double dist = 0.0;
            for (std::size_t k = 0; k < s.theta.size(); ++k) {
                const double d = s.theta[k] - (*c)[k];
                dist += d * d;
            }
            if (std::sqrt(dist) <= 1e-3) {
                found = true;
                break;
            }
        }
        if (!found) clusters.push_back(&s.theta);
    }

    ProjectionOutcome out;
    out.theta = best->theta;
    out.sse = best->sse;
    out.n_minima = static_cast<int>(clusters.size());
    return out;
}

std::vector<std::vector<Theta>> neighbor_seed(const std::vector<SampledCurve>& curves,
                                              const std::vector<Theta>& current_thetas) {
    if (curves.size() != current_thetas.size())
        throw Error("neighbor_seed: curve/theta count mismatch");
    std::vector<std::vector<Theta>> seeds(curves.size());
    for (std::size_t i = 0; i < curves.size(); ++i) {
        std::size_t nearest = i;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < curves.size(); ++j) {
            if (j == i) continue;
            const double d = curve_sse(curves[i].z, curves[j].z);
            if (d < best) {
                best = d;
                nearest = j;
            }
        }
        seeds[i].push_back(current_thetas[i]);
        if (nearest != i) seeds[i].push_back(current_thetas[nearest]);
    }
    return seeds;
}

namespace {

Theta neutral_theta(const std::vector<ModeSpec>& modes) {
    Theta th(modes.size(), 0.0);
    for (std::size_t k = 0; k < modes.size(); ++k)
        if (modes[k].kind == ModeKind::GeneralistSpecialist) th[k] = 1.0;
    return th;
}

// Weighted linear least squares for the template coefficients with the
// per-curve warps held fixed; R is linear in the coefficients.
PolynomialTemplate solve_template(const std::vector<SampledCurve>& curves,
                                  const SamplingGrid& grid, int degree,
                                  const std::vector<ModeSpec>& modes,
                                  const std::vector<Theta>& thetas) {
    const std::size_t d = grid.size();
    const std::size_t n = curves.size();
    const std::size_t p = static_cast<std::size_t>(degree) + 1;

    // Effective warp parameters per curve (reuse a throwaway model for links).
    Eigen::MatrixXd A(n * d, p);
    Eigen::VectorXd b(n * d);
    std::vector<double> dummy_coeffs(p, 0.0);
    dummy_coeffs.back() = 1.0;
    if (p >= 3) dummy_coeffs[2] = 1.0;
    const Model probe(PolynomialTemplate(dummy_coeffs), modes);

    for (std::size_t i = 0; i < n; ++i) {
        const Model::Effective e = probe.effective(thetas[i]);
        const double sw = std::sqrt(curves[i].weight);
        for (std::size_t j = 0; j < d; ++j) {
            const double u = e.w * (grid[j] - e.m);
            double rhs = curves[i].z[j] - e.h;
            for (std::size_t k = 0; k < modes.size(); ++k)
                if (modes[k].kind == ModeKind::Custom)
                    rhs -= modes[k].custom_term(modes[k].effective(thetas[i][k]), grid[j]);
            double upow = 1.0;
            for (std::size_t q = 0; q < p; ++q) {
                A(i * d + j, q) = sw * e.w * upow;
                upow *= u;
            }
            b(i * d + j) = sw * rhs;
        }
    }
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
    return PolynomialTemplate(std::vector<double>(c.data(), c.data() + p));
}

std::vector<Theta> lhs_draws(const std::vector<std::pair<double, double>>& box, int n_draws,
                             std::uint64_t seed) {
    const std::size_t p = box.size();
    std::vector<Theta> draws(n_draws, Theta(p, 0.0));
    if (n_draws == 0) return draws;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t k = 0; k < p; ++k) {
        std::vector<int> perm(n_draws);
        for (int s = 0; s < n_draws; ++s) perm[s] = s;
        std::shuffle(perm.begin(), perm.end(), rng);
        for (int s = 0; s < n_draws; ++s) {
            const double frac = (perm[s] + unit(rng)) / n_draws;
            draws[s][k] = box[k].first + (box[k].second - box[k].first) * frac;
        }
    }
    return draws;
}

std::vector<std::pair<double, double>> init_box(const std::vector<SampledCurve>& curves,
                                                const SamplingGrid& grid,
                                                const std::vector<ModeSpec>& modes) {
    double zlo = curves.front().z.front(), zhi = zlo;
    for (const auto& c : curves)
        for (double v : c.z) {
            zlo = std::min(zlo, v);
            zhi = std::max(zhi, v);
        }
    const double zr = std::max(zhi - zlo, 1e-12);
    std::vector<std::pair<double, double>> box;
    for (const ModeSpec& m : modes) {
        switch (m.kind) {
            case ModeKind::GeneralistSpecialist:
                box.emplace_back(0.5, 2.0);
                break;
            case ModeKind::HorizontalShift:
                box.emplace_back(-grid.span() / 4.0, grid.span() / 4.0);
                break;
            case ModeKind::VerticalShift:
                box.emplace_back(-zr / 2.0, zr / 2.0);
                break;
            case ModeKind::Custom:
                box.emplace_back(-1.0, 1.0);
                break;
        }
    }
    return box;
}

bool links_are_identity(const std::vector<ModeSpec>& modes) {
    for (const ModeSpec& m : modes)
        if (m.kind != ModeKind::Custom && m.link) return false;
    return true;
}

}  // namespace

FitResult fit_all(const std::vector<SampledCurve>& curves, const SamplingGrid& grid,
                  int degree, const std::vector<ModeSpec>& modes, const FitConfig& cfg) {
    if (curves.size() < 2) throw Error("fit_all: need at least 2 curves");
    if (degree < 0) throw Error("fit_all: negative degree");
    for (const auto& c : curves) check_curve(c, grid);

    const std::size_t n = curves.size();
    std::vector<Theta> thetas(n, neutral_theta(modes));
    const auto box = init_box(curves, grid, modes);

    FitResult result{PolynomialTemplate(std::vector<double>{0.0}), modes, {}, {}, {}, {}, {}, 0,
                     false};
    std::vector<double> sse_i(n, 0.0);
    std::vector<int> minima(n, 1);
    double prev_total = std::numeric_limits<double>::infinity();
    PolynomialTemplate tmpl(std::vector<double>{0.0});
    bool have_state = false;

    const int n_lhs = std::max(0, cfg.multistart - 2);
    for (int outer = 0; outer < cfg.max_outer_iters; ++outer) {
        PolynomialTemplate new_tmpl = solve_template(curves, grid, degree, modes, thetas);
        const Manifold man{Model(new_tmpl, modes), grid};

        const auto seeds = neighbor_seed(curves, thetas);
        std::vector<Theta> new_thetas(n);
        std::vector<double> new_sse(n);
        std::vector<int> new_minima(n);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<Theta> inits = seeds[i];
            const std::uint64_t draw_seed =
                cfg.seed * 1000003ull + static_cast<std::uint64_t>(outer) * 1009ull + i;
            for (Theta& t : lhs_draws(box, n_lhs, draw_seed)) inits.push_back(std::move(t));
            const ProjectionOutcome po = project_curve(man, curves[i].z, inits, cfg);
            new_thetas[i] = po.theta;
            new_sse[i] = po.sse;
            new_minima[i] = po.n_minima;
            total += curves[i].weight * po.sse;
        }

        if (have_state && total > prev_total) {  // numerical plateau; keep last iterate
            result.converged = true;
            break;
        }
        thetas = std::move(new_thetas);
        sse_i = std::move(new_sse);
        minima = std::move(new_minima);
        tmpl = new_tmpl;
        have_state = true;
        result.sse_trace.push_back(total);
        result.iterations = outer + 1;

        const double first_total = result.sse_trace.front();
        if ((outer > 0 && prev_total - total <= cfg.rel_tol * std::max(prev_total, 1e-300)) ||
            total <= 1e-18 * std::max(first_total, 1e-300)) {
            result.converged = true;
            prev_total = total;
            break;
        }
        prev_total = total;
    }
    if (!have_state) throw NoConvergenceError("fit_all: no iteration completed");

    result.shape = tmpl;
    result.theta_hat = thetas;
    result.sse_i = sse_i;
    result.multistart_report = minima;
    const Manifold man{Model(tmpl, modes), grid};
    for (const Theta& th : thetas) result.projections.push_back(ManifoldPoint::make(man, th));
    return result;
}

FitResult normalize_identifiability(const FitResult& fit, const SamplingGrid& grid,
                                    const std::vector<double>& weights) {
    if (weights.size() != fit.theta_hat.size())
        throw Error("normalize_identifiability: weight/theta count mismatch");
    if (!links_are_identity(fit.modes))
        throw Error("normalize_identifiability: named modes must have identity links");

    const Model probe(fit.shape, fit.modes);
    const int ig = probe.genspec_index();
    const int ih = probe.horizontal_index();
    const int iv = probe.vertical_index();

    FitResult out = fit;
    double wsum = 0.0;
    for (double w : weights) wsum += w;

    if (ig >= 0) {
        double lg = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i)
            lg += weights[i] * std::log(out.theta_hat[i][ig]);
        const double rho = std::exp(lg / wsum);
        out.shape = out.shape.rescaled(rho);
        for (Theta& th : out.theta_hat) th[ig] /= rho;
    }
    if (ih >= 0) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            const double wi = ig >= 0 ? out.theta_hat[i][ig] : 1.0;
            num += weights[i] * out.theta_hat[i][ih];
            den += weights[i] / wi;
        }
        const double s = num / den;
        out.shape = out.shape.shifted_argument(-s);
        for (Theta& th : out.theta_hat) {
            const double wi = ig >= 0 ? th[ig] : 1.0;
            th[ih] -= s / wi;
        }
    }
    if (iv >= 0) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            const double wi = ig >= 0 ? out.theta_hat[i][ig] : 1.0;
            num += weights[i] * out.theta_hat[i][iv];
            den += weights[i] * wi;
        }
        const double delta = num / den;
        out.shape = out.shape.plus_constant(delta);
        for (std::size_t i = 0; i < out.theta_hat.size(); ++i) {
            const double wi = ig >= 0 ? out.theta_hat[i][ig] : 1.0;
            out.theta_hat[i][iv] -= wi * delta;
        }
    }

    const Manifold man{Model(out.shape, out.modes), grid};
    out.projections.clear();
    for (const Theta& th : out.theta_hat) out.projections.push_back(ManifoldPoint::make(man, th));
    return out;
}

}  // namespace tmv
