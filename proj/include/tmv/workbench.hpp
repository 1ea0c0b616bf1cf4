#ifndef TMV_WORKBENCH_HPP_
#define TMV_WORKBENCH_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tmv/decompose.hpp"

namespace tmv {

// Parameter law for synthetic draws: uniform on [a, b] or normal(a, b).
// Laws feeding a width mode are rejection-truncated to stay positive.
struct ParameterLaw {
    std::string kind = "uniform";  // "uniform" | "normal"
    double a = 0.0;
    double b = 1.0;
};

struct SyntheticSpec {
    std::vector<double> template_coeffs;
    std::vector<std::string> mode_kinds;  // "vertical" | "horizontal" | "genspec"
    std::vector<ParameterLaw> laws;       // one per mode
    double noise_sd = 0.0;
    bool noise_relative = false;  // noise_sd as a fraction of the template range
    int n_curves = 50;
    std::vector<double> grid_points;
    std::uint64_t seed = 1;
};

struct SimulationResult {
    SamplingGrid grid;
    std::vector<SampledCurve> curves;
    std::vector<Theta> true_thetas;
    Decomposition oracle;  // decomposition of the noiseless points, same metric stack
};

// Study-level configuration, loadable from JSON.
struct StudyConfig {
    std::vector<double> grid;        // optional; CSV input carries its own grid
    int degree = 4;
    std::vector<std::string> modes;  // kind names, in model order
    std::vector<std::vector<std::size_t>> blocks;  // empty => default declaration
    double gamma = 0.5;
    std::string origin_policy = "auto";  // "auto" | "pinned"
    Theta origin;
    FitConfig fit;
    int bootstrap_B = 0;
    std::uint64_t seed = 1;
    bool weighted_sse = false;
    std::optional<SyntheticSpec> synthetic;
};

StudyConfig load_study_config(const std::string& path);
std::vector<ModeSpec> make_modes(const std::vector<std::string>& kinds);
// Pair any width/location modes into one block, everything else a singleton.
SeparabilityDecl default_declaration(const std::vector<ModeSpec>& modes);
PipelineConfig to_pipeline(const StudyConfig& cfg);

// Curves CSV: header curve_id,t,z[,weight]; one row per (curve, grid point).
std::pair<SamplingGrid, std::vector<SampledCurve>> load_curves(const std::string& path);
void save_curves(const std::string& path, const SamplingGrid& grid,
                 const std::vector<SampledCurve>& curves);

SimulationResult simulate(const SyntheticSpec& spec, const PipelineConfig& pipeline);

// Writes report.json plus CSV/SVG diagnostic pairs (raw vs fitted overlay,
// warped data vs template) into out_dir. Curves whose warped trace strays
// from the template by more than deviation_band (in z units) are flagged.
struct ReportInputs {
    const FitResult* fit = nullptr;
    const Decomposition* decomposition = nullptr;
    const BootstrapSummary* bootstrap = nullptr;             // optional
    const std::vector<Decomposition>* gamma_sweep = nullptr;  // optional
    std::vector<double> sweep_gammas;
    std::string config_json = "{}";
    double deviation_band = 0.1;
};

void emit_report(const ReportInputs& in, const std::vector<SampledCurve>& curves,
                 const SamplingGrid& grid, const std::string& out_dir);

}  // namespace tmv

#endif  // TMV_WORKBENCH_HPP_
