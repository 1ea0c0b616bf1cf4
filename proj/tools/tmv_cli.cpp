// Command-line front end: simulate synthetic studies, fit the model,
// decompose variation, bootstrap the shares, and emit full reports.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tmv/workbench.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string input_path;
    std::string out_dir = ".";
    std::optional<int> degree;
    std::optional<double> gamma;
    std::optional<int> boot;
    std::optional<std::uint64_t> seed;
    std::vector<double> sweep_gammas;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool needs_input) {
    cmd->add_option("--config", a.config_path, "Study configuration JSON");
    auto* in = cmd->add_option("--input", a.input_path, "Curves CSV (curve_id,t,z[,weight])");
    if (needs_input) in->required();
    cmd->add_option("--out", a.out_dir, "Output directory");
    cmd->add_option("--degree", a.degree, "Template polynomial degree");
    cmd->add_option("--gamma", a.gamma, "Blend weight for the two path metrics");
    cmd->add_option("--boot", a.boot, "Bootstrap replicate count");
    cmd->add_option("--seed", a.seed, "Random seed");
    cmd->add_option("--sweep-gamma", a.sweep_gammas, "Comma-separated gamma values")
        ->delimiter(',');
}

tmv::StudyConfig load_config(const CommonArgs& a) {
    tmv::StudyConfig cfg;
    if (!a.config_path.empty()) cfg = tmv::load_study_config(a.config_path);
    if (a.degree) cfg.degree = *a.degree;
    if (a.gamma) cfg.gamma = *a.gamma;
    if (a.boot) cfg.bootstrap_B = *a.boot;
    if (a.seed) {
        cfg.seed = *a.seed;
        cfg.fit.seed = *a.seed;
        if (cfg.synthetic) cfg.synthetic->seed = *a.seed;
    }
    return cfg;
}

std::string config_echo(const tmv::StudyConfig& cfg) {
    json j{{"degree", cfg.degree}, {"modes", cfg.modes},     {"gamma", cfg.gamma},
           {"seed", cfg.seed},     {"origin_policy", cfg.origin_policy},
           {"weighted_sse", cfg.weighted_sse}};
    return j.dump();
}

int run_simulate(const CommonArgs& a) {
    const tmv::StudyConfig cfg = load_config(a);
    if (!cfg.synthetic) {
        std::cerr << "simulate: config has no 'synthetic' block\n";
        return 1;
    }
    const tmv::PipelineConfig pipe = tmv::to_pipeline(cfg);
    const tmv::SimulationResult sim = tmv::simulate(*cfg.synthetic, pipe);
    fs::create_directories(a.out_dir);
    tmv::save_curves((fs::path(a.out_dir) / "curves.csv").string(), sim.grid, sim.curves);

    json truth;
    truth["true_thetas"] = sim.true_thetas;
    json rss = json::object();
    for (std::size_t k = 0; k < sim.oracle.mode_names.size(); ++k)
        rss[sim.oracle.mode_names[k]] = sim.oracle.rss_per_mode[k];
    truth["oracle"] = json{{"rss", rss},
                           {"rss_total", sim.oracle.rss_total},
                           {"ssm_total", sim.oracle.ssm_total},
                           {"frechet_mean", sim.oracle.frechet_mean},
                           {"origin", sim.oracle.origin}};
    std::ofstream out(fs::path(a.out_dir) / "truth.json");
    out << truth.dump(2) << '\n';
    std::cout << "wrote " << sim.curves.size() << " curves to " << a.out_dir << "/curves.csv\n";
    return 0;
}

int run_study(const CommonArgs& a, bool want_fit_only, bool want_boot, bool want_sweep) {
    const tmv::StudyConfig cfg = load_config(a);
    const tmv::PipelineConfig pipe = tmv::to_pipeline(cfg);
    const auto [grid, curves] = tmv::load_curves(a.input_path);

    if (want_fit_only) {
        tmv::FitResult fit = tmv::fit_all(curves, grid, pipe.degree, pipe.modes, pipe.fit);
        std::vector<double> weights;
        for (const auto& c : curves) weights.push_back(c.weight);
        fit = tmv::normalize_identifiability(fit, grid, weights);
        fs::create_directories(a.out_dir);
        json j;
        j["template"] = json{{"degree", static_cast<int>(fit.shape.coefficients().size()) - 1},
                             {"coefficients", fit.shape.coefficients()}};
        json jcurves = json::array();
        for (std::size_t i = 0; i < curves.size(); ++i)
            jcurves.push_back(json{{"id", curves[i].id},
                                   {"theta_hat", fit.theta_hat[i]},
                                   {"sse", fit.sse_i[i]}});
        j["curves"] = jcurves;
        j["sse_trace"] = fit.sse_trace;
        j["iterations"] = fit.iterations;
        j["converged"] = fit.converged;
        std::ofstream out(fs::path(a.out_dir) / "fit.json");
        out << j.dump(2) << '\n';
        std::cout << "fit converged=" << fit.converged << " iterations=" << fit.iterations
                  << '\n';
        return 0;
    }

    const tmv::PipelineResult result = tmv::run_pipeline(curves, grid, pipe);

    std::optional<tmv::BootstrapSummary> boot;
    if (want_boot) {
        const int B = cfg.bootstrap_B > 0 ? cfg.bootstrap_B : 200;
        boot = tmv::bootstrap(curves, grid, pipe, B, cfg.seed);
    }
    std::optional<std::vector<tmv::Decomposition>> sweep;
    if (want_sweep && !a.sweep_gammas.empty()) {
        tmv::MetricConfig mcfg;
        mcfg.origin = result.decomposition.origin;
        mcfg.gamma = pipe.gamma;
        mcfg.arc = pipe.arc;
        tmv::DecomposeOptions opts;
        opts.search = pipe.search;
        sweep = tmv::gamma_sweep(result.fit, grid, mcfg, pipe.decl, a.sweep_gammas, opts);
    }

    tmv::ReportInputs in;
    in.fit = &result.fit;
    in.decomposition = &result.decomposition;
    if (boot) in.bootstrap = &*boot;
    if (sweep) {
        in.gamma_sweep = &*sweep;
        in.sweep_gammas = a.sweep_gammas;
    }
    in.config_json = config_echo(cfg);
    tmv::emit_report(in, curves, grid, a.out_dir);

    std::cout << "rss_total=" << result.decomposition.rss_total << " (";
    for (std::size_t k = 0; k < result.decomposition.mode_names.size(); ++k) {
        if (k) std::cout << ", ";
        std::cout << result.decomposition.mode_names[k] << '='
                  << result.decomposition.rss_per_mode[k];
    }
    std::cout << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Template-mode-of-variation analysis of sampled curves"};
    app.require_subcommand(1);

    CommonArgs sim_args, fit_args, dec_args, boot_args, rep_args;
    add_common(app.add_subcommand("simulate", "Generate a synthetic study"), sim_args, false);
    add_common(app.add_subcommand("fit", "Fit template and per-curve parameters"), fit_args,
               true);
    add_common(app.add_subcommand("decompose", "Fit and decompose variation"), dec_args, true);
    add_common(app.add_subcommand("bootstrap", "Decompose with bootstrap uncertainty"),
               boot_args, true);
    add_common(app.add_subcommand("report", "Full pipeline report with all extras"), rep_args,
               true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("simulate")) return run_simulate(sim_args);
        if (app.got_subcommand("fit")) return run_study(fit_args, true, false, false);
        if (app.got_subcommand("decompose")) return run_study(dec_args, false, false, true);
        if (app.got_subcommand("bootstrap")) return run_study(boot_args, false, true, false);
        if (app.got_subcommand("report")) return run_study(rep_args, false, true, true);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
