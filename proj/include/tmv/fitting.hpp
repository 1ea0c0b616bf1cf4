#ifndef TMV_FITTING_HPP_
#define TMV_FITTING_HPP_

#include <cstdint>
#include <vector>

#include "tmv/model.hpp"

namespace tmv {

struct FitConfig {
    int max_outer_iters = 100;
    double rel_tol = 1e-8;
    int multistart = 7;  // previous theta + neighbor seed + Latin-hypercube draws
    int lm_max_iters = 200;
    std::uint64_t seed = 1;
};

struct ProjectionOutcome {
    Theta theta;
    double sse = 0.0;
    int n_minima = 1;  // distinct near-optimal solutions found across starts
};

struct FitResult {
    PolynomialTemplate shape;
    std::vector<ModeSpec> modes;
    std::vector<Theta> theta_hat;
    std::vector<ManifoldPoint> projections;
    std::vector<double> sse_i;
    std::vector<int> multistart_report;  // per-curve n_minima
    std::vector<double> sse_trace;       // weighted total SSE per outer iteration
    int iterations = 0;
    bool converged = false;

    Model model() const { return Model(shape, modes); }
};

// Nonlinear projection of one curve onto the manifold: damped Gauss-Newton
// from each init with analytic Jacobians, lowest SSE wins.
ProjectionOutcome project_curve(const Manifold& man, const std::vector<double>& z,
                                const std::vector<Theta>& inits, const FitConfig& cfg);

// Alternating estimation: weighted linear least squares for the template
// coefficients given the warps, then per-curve projection given the template.
// Weighted total SSE is nonincreasing across outer iterations.
FitResult fit_all(const std::vector<SampledCurve>& curves, const SamplingGrid& grid,
                  int degree, const std::vector<ModeSpec>& modes, const FitConfig& cfg);

// Gauge normalization: weighted geometric-mean width 1, weighted mean
// location 0, weighted height sum 0, each absorbed exactly into the template
// so every fitted curve is unchanged.
FitResult normalize_identifiability(const FitResult& fit, const SamplingGrid& grid,
                                    const std::vector<double>& weights);

// Per-curve init lists: own previous theta plus the theta of the nearest
// neighbor in raw-data Euclidean distance.
std::vector<std::vector<Theta>> neighbor_seed(const std::vector<SampledCurve>& curves,
                                              const std::vector<Theta>& current_thetas);

}  // namespace tmv

#endif  // TMV_FITTING_HPP_
