#include "tmv/workbench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "tmv/errors.hpp"

namespace tmv {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::vector<ModeSpec> make_modes(const std::vector<std::string>& kinds) {
    std::vector<ModeSpec> modes;
    for (const std::string& k : kinds) {
        if (k == "vertical")
            modes.push_back(ModeSpec::vertical_shift());
        else if (k == "horizontal")
            modes.push_back(ModeSpec::horizontal_shift());
        else if (k == "genspec")
            modes.push_back(ModeSpec::generalist_specialist());
        else
            throw Error("unknown mode kind '" + k + "'");
    }
    return modes;
}

SeparabilityDecl default_declaration(const std::vector<ModeSpec>& modes) {
    int ig = -1, ih = -1;
    for (std::size_t k = 0; k < modes.size(); ++k) {
        if (modes[k].kind == ModeKind::GeneralistSpecialist) ig = static_cast<int>(k);
        if (modes[k].kind == ModeKind::HorizontalShift) ih = static_cast<int>(k);
    }
    SeparabilityDecl decl;
    for (std::size_t k = 0; k < modes.size(); ++k) {
        if (static_cast<int>(k) == ig && ih >= 0) {
            decl.blocks.push_back({std::min<std::size_t>(ig, ih), std::max<std::size_t>(ig, ih)});
        } else if (static_cast<int>(k) == ih && ig >= 0) {
            continue;  // already paired with the width mode
        } else {
            decl.blocks.push_back({k});
        }
    }
    return decl;
}

StudyConfig load_study_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(std::string("config JSON: ") + e.what());
    }

    StudyConfig cfg;
    cfg.grid = j.value("grid", std::vector<double>{});
    cfg.degree = j.value("degree", 4);
    cfg.modes = j.value("modes", std::vector<std::string>{"vertical", "horizontal", "genspec"});
    cfg.blocks = j.value("blocks", std::vector<std::vector<std::size_t>>{});
    cfg.gamma = j.value("gamma", 0.5);
    cfg.origin_policy = j.value("origin_policy", "auto");
    cfg.origin = j.value("origin", Theta{});
    cfg.bootstrap_B = j.value("bootstrap_B", 0);
    cfg.seed = j.value("seed", std::uint64_t{1});
    cfg.weighted_sse = j.value("weighted_sse", false);
    if (j.contains("fit")) {
        const json& f = j["fit"];
        cfg.fit.max_outer_iters = f.value("max_outer_iters", cfg.fit.max_outer_iters);
        cfg.fit.rel_tol = f.value("rel_tol", cfg.fit.rel_tol);
        cfg.fit.multistart = f.value("multistart", cfg.fit.multistart);
        cfg.fit.lm_max_iters = f.value("lm_max_iters", cfg.fit.lm_max_iters);
    }
    cfg.fit.seed = cfg.seed;
    if (j.contains("synthetic")) {
        const json& s = j["synthetic"];
        SyntheticSpec spec;
        spec.template_coeffs = s.value("template_coeffs", std::vector<double>{});
        spec.mode_kinds = s.value("mode_kinds", cfg.modes);
        if (s.contains("laws")) {
            for (const json& l : s["laws"]) {
                ParameterLaw law;
                law.kind = l.value("kind", "uniform");
                law.a = l.value("a", 0.0);
                law.b = l.value("b", 1.0);
                spec.laws.push_back(law);
            }
        }
        spec.noise_sd = s.value("noise_sd", 0.0);
        spec.noise_relative = s.value("noise_relative", false);
        spec.n_curves = s.value("n_curves", 50);
        spec.grid_points = s.value("grid_points", cfg.grid);
        spec.seed = s.value("seed", cfg.seed);
        cfg.synthetic = std::move(spec);
    }
    if (cfg.origin_policy != "auto" && cfg.origin_policy != "pinned")
        throw ParseError("origin_policy must be 'auto' or 'pinned'");
    if (cfg.modes.empty()) throw ParseError("config declares no modes");
    return cfg;
}

PipelineConfig to_pipeline(const StudyConfig& cfg) {
    PipelineConfig p;
    p.degree = cfg.degree;
    p.modes = make_modes(cfg.modes);
    if (cfg.blocks.empty())
        p.decl = default_declaration(p.modes);
    else
        p.decl.blocks = cfg.blocks;
    p.decl.check_partition(p.modes.size());
    p.fit = cfg.fit;
    p.gamma = cfg.gamma;
    p.origin_pinned = cfg.origin_policy == "pinned";
    p.origin = cfg.origin;
    if (p.origin_pinned && p.origin.size() != p.modes.size())
        throw ParseError("pinned origin must list one value per mode");
    p.weighted_sse = cfg.weighted_sse;
    return p;
}

std::pair<SamplingGrid, std::vector<SampledCurve>> load_curves(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open curves file: " + path);

    struct Row {
        double t, z, weight;
        bool has_weight;
    };
    std::vector<std::string> order;
    std::map<std::string, std::vector<Row>> rows;

    std::string line;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!header_seen) {
            if (cells.size() < 3 || cells[0] != "curve_id" || cells[1] != "t" || cells[2] != "z")
                throw ParseError("line 1: expected header curve_id,t,z[,weight]");
            header_seen = true;
            continue;
        }
        if (cells.size() < 3 || cells.size() > 4)
            throw ParseError("line " + std::to_string(lineno) + ": expected 3 or 4 fields");
        Row r{};
        try {
            std::size_t used = 0;
            r.t = std::stod(cells[1], &used);
            if (used != cells[1].size()) throw std::invalid_argument("t");
            r.z = std::stod(cells[2], &used);
            if (used != cells[2].size()) throw std::invalid_argument("z");
            r.has_weight = cells.size() == 4 && !cells[3].empty();
            r.weight = r.has_weight ? std::stod(cells[3]) : 1.0;
        } catch (const std::exception&) {
            throw ParseError("line " + std::to_string(lineno) + ": malformed number");
        }
        if (r.has_weight && r.weight <= 0.0)
            throw ParseError("line " + std::to_string(lineno) + ": nonpositive weight");
        if (!rows.count(cells[0])) order.push_back(cells[0]);
        rows[cells[0]].push_back(r);
    }
    if (!header_seen) throw ParseError("empty curves file: " + path);
    if (order.empty()) throw ParseError("no data rows in curves file: " + path);

    const std::vector<Row>& first = rows[order.front()];
    std::vector<double> grid_points;
    for (const Row& r : first) grid_points.push_back(r.t);
    SamplingGrid grid(grid_points);  // validates strict monotonicity

    std::vector<SampledCurve> curves;
    for (const std::string& id : order) {
        const std::vector<Row>& rs = rows[id];
        if (rs.size() != grid.size())
            throw GridMismatchError("curve '" + id + "' has " + std::to_string(rs.size()) +
                                    " rows, grid has " + std::to_string(grid.size()));
        SampledCurve c;
        c.id = id;
        c.weight = rs.front().has_weight ? rs.front().weight : 1.0;
        for (std::size_t j = 0; j < rs.size(); ++j) {
            if (rs[j].t != grid[j])
                throw GridMismatchError("curve '" + id + "' sampled off the shared grid");
            if (rs[j].has_weight && rs[j].weight != c.weight)
                throw ParseError("curve '" + id + "' carries inconsistent weights");
            c.z.push_back(rs[j].z);
        }
        curves.push_back(std::move(c));
    }
    return {grid, curves};
}

void save_curves(const std::string& path, const SamplingGrid& grid,
                 const std::vector<SampledCurve>& curves) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write curves file: " + path);
    out << "curve_id,t,z,weight\n";
    for (const SampledCurve& c : curves) {
        check_curve(c, grid);
        for (std::size_t j = 0; j < grid.size(); ++j)
            out << c.id << ',' << fmt17(grid[j]) << ',' << fmt17(c.z[j]) << ','
                << fmt17(c.weight) << '\n';
    }
}

SimulationResult simulate(const SyntheticSpec& spec, const PipelineConfig& pipeline) {
    if (spec.mode_kinds.empty()) throw Error("simulate: no modes declared");
    if (spec.laws.size() != spec.mode_kinds.size())
        throw Error("simulate: need one parameter law per mode");
    if (spec.n_curves < 1) throw Error("simulate: n_curves must be positive");

    SimulationResult out{SamplingGrid(spec.grid_points), {}, {}, {}};
    const std::vector<ModeSpec> modes = make_modes(spec.mode_kinds);
    const PolynomialTemplate tmpl(spec.template_coeffs);
    const Model model(tmpl, modes);
    const Manifold man{model, out.grid};

    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto draw_law = [&](const ParameterLaw& law, bool positive) {
        for (int tries = 0; tries < 1000; ++tries) {
            double v;
            if (law.kind == "uniform")
                v = law.a + (law.b - law.a) * unit(rng);
            else if (law.kind == "normal")
                v = law.a + law.b * gauss(rng);
            else
                throw Error("simulate: unknown law kind '" + law.kind + "'");
            if (!positive || v > 1e-6) return v;
        }
        throw Error("simulate: width law failed to produce a positive draw");
    };

    double noise = spec.noise_sd;
    if (spec.noise_relative) {
        double lo = tmpl.value(out.grid.front()), hi = lo;
        for (std::size_t j = 0; j < out.grid.size(); ++j) {
            lo = std::min(lo, tmpl.value(out.grid[j]));
            hi = std::max(hi, tmpl.value(out.grid[j]));
        }
        noise *= hi - lo;
    }

    for (int i = 0; i < spec.n_curves; ++i) {
        Theta th(modes.size());
        for (std::size_t k = 0; k < modes.size(); ++k)
            th[k] = draw_law(spec.laws[k], modes[k].kind == ModeKind::GeneralistSpecialist);
        SampledCurve c;
        c.id = "c" + std::to_string(i + 1);
        c.z = man.eval(th);
        for (double& z : c.z) z += noise * gauss(rng);
        out.true_thetas.push_back(std::move(th));
        out.curves.push_back(std::move(c));
    }

    // Oracle: decompose the noiseless points about their own Fréchet mean
    // with the same metric stack the pipeline will use.
    FitResult truth{tmpl, modes, out.true_thetas, {}, std::vector<double>(spec.n_curves, 0.0),
                    {}, {}, 0, true};
    MetricConfig mcfg;
    mcfg.gamma = pipeline.gamma;
    mcfg.arc = pipeline.arc;
    if (pipeline.origin_pinned) {
        mcfg.origin = pipeline.origin;
    } else {
        const OriginGrid ogrid =
            OriginGrid::from_sample(out.true_thetas, 0.1, pipeline.origin_resolution);
        mcfg.origin = select_origin(man, out.true_thetas, ogrid, pipeline.gamma, pipeline.decl,
                                    pipeline.scan_arc, pipeline.search)
                          .first;
    }
    DecomposeOptions opts;
    opts.search = pipeline.search;
    out.oracle = decompose(truth, out.grid, mcfg, pipeline.decl, opts);
    return out;
}

namespace {

void write_svg(const std::string& path, const std::vector<std::vector<double>>& xs,
               const std::vector<std::vector<double>>& ys,
               const std::vector<std::string>& colors,
               const std::vector<double>& widths) {
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (std::size_t s = 0; s < xs.size(); ++s)
        for (std::size_t j = 0; j < xs[s].size(); ++j) {
            xlo = std::min(xlo, xs[s][j]);
            xhi = std::max(xhi, xs[s][j]);
            ylo = std::min(ylo, ys[s][j]);
            yhi = std::max(yhi, ys[s][j]);
        }
    if (xhi <= xlo) xhi = xlo + 1.0;
    if (yhi <= ylo) yhi = ylo + 1.0;
    const double W = 640, H = 420, M = 40;
    const auto px = [&](double x) { return M + (x - xlo) / (xhi - xlo) * (W - 2 * M); };
    const auto py = [&](double y) { return H - M - (y - ylo) / (yhi - ylo) * (H - 2 * M); };

    std::ofstream out(path);
    if (!out) throw Error("cannot write svg: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t s = 0; s < xs.size(); ++s) {
        out << "<polyline fill=\"none\" stroke=\"" << colors[s] << "\" stroke-width=\""
            << widths[s] << "\" points=\"";
        for (std::size_t j = 0; j < xs[s].size(); ++j)
            out << px(xs[s][j]) << ',' << py(ys[s][j]) << ' ';
        out << "\"/>\n";
    }
    out << "</svg>\n";
}

json stats_json(const BootstrapSummary::Stats& s) {
    return json{{"mean", s.mean}, {"sd", s.sd}, {"median", s.median}, {"p5", s.p5},
                {"p95", s.p95}};
}

json decomposition_json(const Decomposition& d) {
    json ssm = json::object(), rss = json::object();
    for (std::size_t k = 0; k < d.mode_names.size(); ++k) {
        ssm[d.mode_names[k]] = d.ssm_per_mode[k];
        rss[d.mode_names[k]] = d.rss_per_mode[k];
    }
    return json{{"sse", d.sse},
                {"ssm", ssm},
                {"ssm_total", d.ssm_total},
                {"rss", rss},
                {"rss_total", d.rss_total},
                {"frechet_mean", d.frechet_mean},
                {"origin", d.origin},
                {"gamma", d.gamma},
                {"degenerate", d.degenerate}};
}

}  // namespace

void emit_report(const ReportInputs& in, const std::vector<SampledCurve>& curves,
                 const SamplingGrid& grid, const std::string& out_dir) {
    if (!in.fit || !in.decomposition) throw Error("emit_report: fit and decomposition required");
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const FitResult& fit = *in.fit;
    const Model model = fit.model();

    json report;
    report["config"] = json::parse(in.config_json);
    report["template"] = json{{"degree", static_cast<int>(fit.shape.coefficients().size()) - 1},
                              {"coefficients", fit.shape.coefficients()}};
    json jcurves = json::array();
    for (std::size_t i = 0; i < curves.size(); ++i)
        jcurves.push_back(json{{"id", curves[i].id},
                               {"theta_hat", fit.theta_hat[i]},
                               {"sse", fit.sse_i[i]}});
    report["curves"] = jcurves;
    report["decomposition"] = decomposition_json(*in.decomposition);
    if (in.bootstrap) {
        json q = json::object();
        for (std::size_t i = 0; i < in.bootstrap->quantity.size(); ++i)
            q[in.bootstrap->quantity[i]] = stats_json(in.bootstrap->stats[i]);
        report["bootstrap"] = json{{"quantities", q},
                                   {"B", in.bootstrap->B},
                                   {"seed", in.bootstrap->seed},
                                   {"failures", in.bootstrap->failures}};
    }
    if (in.gamma_sweep) {
        json sweep = json::array();
        for (const Decomposition& d : *in.gamma_sweep) sweep.push_back(decomposition_json(d));
        report["gamma_sweep"] = sweep;
    }
    {
        std::ofstream out(fs::path(out_dir) / "report.json");
        if (!out) throw Error("cannot write report.json");
        out << report.dump(2) << '\n';
    }

    // Raw vs fitted overlay.
    {
        std::ofstream csv(fs::path(out_dir) / "fitted_curves.csv");
        csv << "curve_id,t,z,fitted\n";
        std::vector<std::vector<double>> xs, ys;
        std::vector<std::string> colors;
        std::vector<double> widths;
        for (std::size_t i = 0; i < curves.size(); ++i) {
            const std::vector<double> r = model.eval(fit.theta_hat[i], grid);
            std::vector<double> raw, fitted;
            for (std::size_t j = 0; j < grid.size(); ++j) {
                csv << curves[i].id << ',' << fmt17(grid[j]) << ',' << fmt17(curves[i].z[j])
                    << ',' << fmt17(r[j]) << '\n';
                raw.push_back(curves[i].z[j]);
                fitted.push_back(r[j]);
            }
            xs.push_back(grid.points());
            ys.push_back(std::move(raw));
            colors.push_back("#9aa0a6");
            widths.push_back(1.0);
            xs.push_back(grid.points());
            ys.push_back(std::move(fitted));
            colors.push_back("#1a73e8");
            widths.push_back(1.0);
        }
        write_svg((fs::path(out_dir) / "fitted_curves.svg").string(), xs, ys, colors, widths);
    }

    // Warped data vs template overlay.
    {
        std::ofstream csv(fs::path(out_dir) / "warped_curves.csv");
        csv << "curve_id,t_warped,z_warped,template,deviation,flagged\n";
        std::vector<std::vector<double>> xs, ys;
        std::vector<std::string> colors;
        std::vector<double> widths;
        double tlo = 1e300, thi = -1e300;
        for (std::size_t i = 0; i < curves.size(); ++i) {
            const WarpedCurve w = warp_curve(curves[i].z, model, fit.theta_hat[i], grid);
            double worst = 0.0;
            std::vector<double> devs(w.t.size());
            for (std::size_t j = 0; j < w.t.size(); ++j) {
                devs[j] = w.z[j] - fit.shape.value(w.t[j]);
                worst = std::max(worst, std::abs(devs[j]));
                tlo = std::min(tlo, w.t[j]);
                thi = std::max(thi, w.t[j]);
            }
            const bool flagged = worst > in.deviation_band;
            for (std::size_t j = 0; j < w.t.size(); ++j)
                csv << curves[i].id << ',' << fmt17(w.t[j]) << ',' << fmt17(w.z[j]) << ','
                    << fmt17(fit.shape.value(w.t[j])) << ',' << fmt17(devs[j]) << ','
                    << (flagged ? 1 : 0) << '\n';
            xs.push_back(w.t);
            ys.push_back(w.z);
            colors.push_back(flagged ? "#d93025" : "#9aa0a6");
            widths.push_back(1.0);
        }
        std::vector<double> tt, tz;
        for (int j = 0; j <= 200; ++j) {
            const double t = tlo + (thi - tlo) * j / 200.0;
            tt.push_back(t);
            tz.push_back(fit.shape.value(t));
        }
        xs.push_back(std::move(tt));
        ys.push_back(std::move(tz));
        colors.push_back("#188038");
        widths.push_back(2.0);
        write_svg((fs::path(out_dir) / "warped_curves.svg").string(), xs, ys, colors, widths);
    }
}

}  // namespace tmv
