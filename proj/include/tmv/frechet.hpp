#ifndef TMV_FRECHET_HPP_
#define TMV_FRECHET_HPP_

#include <functional>
#include <utility>
#include <vector>

#include "tmv/metrics.hpp"

namespace tmv {

// Compact set K of candidate origins: per-mode closed intervals with a grid
// resolution per axis (resolution 1 pins the axis at the interval midpoint).
struct OriginGrid {
    std::vector<std::pair<double, double>> intervals;
    std::vector<int> resolution;

    static OriginGrid from_sample(const std::vector<Theta>& thetas, double expand = 0.1,
                                  int res = 9);
    std::vector<double> axis(std::size_t k) const;
};

struct SearchDiagnostics {
    int grid_evals = 0;
    int refine_evals = 0;
    double multistart_spread = 0.0;  // max pairwise theta distance across starts
    bool unique = true;              // spread below 1e-6
};

struct FrechetResult {
    Theta mean_theta;
    double variance = 0.0;        // F_n(mean)/n
    double attained_value = 0.0;  // F_n(mean)
    SearchDiagnostics diagnostics;
};

// Search controls for the non-separable pair blocks.
struct MeanSearchSpec {
    std::vector<std::pair<double, double>> box;  // per mode; empty => sample bbox +10%
    int resolution = 9;
    int multistart = 5;

    static std::vector<std::pair<double, double>> sample_box(const std::vector<Theta>& thetas,
                                                             double expand = 0.1);
};

// F_n(candidate) = sum_i d^2(theta_i, candidate) for an arbitrary distance.
double frechet_fn(const std::vector<Theta>& sample, const Theta& candidate,
                  const std::function<double(const Theta&, const Theta&)>& dist);

// Closed-form mean on a one-mode curve: arithmetic mean of signed arc
// coordinates, mapped back by bisection. Unique wherever the speed is
// positive.
FrechetResult frechet_mean_1d(const Manifold& man, const std::vector<Theta>& sample,
                              std::size_t k, const ArcConfig& cfg);

// Mean under the composite metric: singleton blocks reduce to the 1-D closed
// form, pair blocks use a coarse grid scan plus Nelder-Mead refinement from
// the best cells.
FrechetResult frechet_mean(const Manifold& man, const std::vector<Theta>& sample,
                           const MetricConfig& cfg, const SeparabilityDecl& decl,
                           const MeanSearchSpec& search);

double frechet_variance(const FrechetResult& mean, std::size_t n);

// Scans the origin grid and returns the origin minimizing the Fréchet
// variance under d_{V,O,gamma}; ties break toward the lexicographically
// smallest parameter vector.
std::pair<Theta, double> select_origin(const Manifold& man, const std::vector<Theta>& sample,
                                       const OriginGrid& grid, double gamma,
                                       const SeparabilityDecl& decl, const ArcConfig& arc,
                                       const MeanSearchSpec& search);

}  // namespace tmv

#endif  // TMV_FRECHET_HPP_
