#ifndef TMV_DECOMPOSE_HPP_
#define TMV_DECOMPOSE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "tmv/fitting.hpp"
#include "tmv/frechet.hpp"

namespace tmv {

// Variance decomposition about the Fréchet mean: per-mode manifold sums of
// squares plus the off-manifold residual, reported as percentage shares.
struct Decomposition {
    double sse = 0.0;
    std::vector<std::string> mode_names;
    std::vector<double> ssm_per_mode;
    double ssm_total = 0.0;
    std::vector<double> rss_per_mode;  // percent
    double rss_total = 0.0;            // percent
    Theta frechet_mean;
    Theta origin;
    double gamma = 0.5;
    bool degenerate = false;  // ssm_total + sse == 0, shares reported as 0
    SearchDiagnostics diagnostics;
};

struct DecomposeOptions {
    bool weighted_sse = false;  // weight residuals by family weight in the denominator
    std::vector<double> weights;
    MeanSearchSpec search;
};

// Off-manifold residual recomputed from the raw curves.
double sse(const std::vector<SampledCurve>& curves, const FitResult& fit,
           const SamplingGrid& grid);

Decomposition decompose(const FitResult& fit, const SamplingGrid& grid,
                        const MetricConfig& cfg, const SeparabilityDecl& decl,
                        const DecomposeOptions& opts = {});

std::vector<Decomposition> gamma_sweep(const FitResult& fit, const SamplingGrid& grid,
                                       MetricConfig cfg, const SeparabilityDecl& decl,
                                       const std::vector<double>& gammas,
                                       const DecomposeOptions& opts = {});

// End-to-end study: fit, gauge-normalize, pick the origin, decompose.
struct PipelineConfig {
    int degree = 4;
    std::vector<ModeSpec> modes;
    SeparabilityDecl decl;
    FitConfig fit;
    double gamma = 0.5;
    bool origin_pinned = false;
    Theta origin;               // used when origin_pinned
    int origin_resolution = 9;  // per-axis grid for the origin scan
    ArcConfig arc;              // quadrature control for the final decomposition
    ArcConfig scan_arc{1e-7, 40, 4096};  // looser control for the origin scan
    MeanSearchSpec search;
    bool weighted_sse = false;
    bool normalize = true;  // gauge normalization after fitting (identity links only)
};

struct PipelineResult {
    FitResult fit;
    Decomposition decomposition;
};

PipelineResult run_pipeline(const std::vector<SampledCurve>& curves, const SamplingGrid& grid,
                            const PipelineConfig& cfg);

// Family bootstrap: resample curves with replacement, rerun the full pipeline
// per replicate, and summarize the percentage shares.
struct BootstrapSummary {
    struct Stats {
        double mean = 0.0, sd = 0.0, median = 0.0, p5 = 0.0, p95 = 0.0;
    };
    std::vector<std::string> quantity;  // one per mode share, then "rss_total"
    std::vector<Stats> stats;
    int B = 0;
    std::uint64_t seed = 0;
    int failures = 0;
};

BootstrapSummary bootstrap(const std::vector<SampledCurve>& curves, const SamplingGrid& grid,
                           const PipelineConfig& cfg, int B, std::uint64_t seed);

}  // namespace tmv

#endif  // TMV_DECOMPOSE_HPP_
