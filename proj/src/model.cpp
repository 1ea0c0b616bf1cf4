#include "tmv/model.hpp"

#include <cmath>

#include "tmv/errors.hpp"

namespace tmv {

namespace {

// Probe lattice for validating custom analytic derivatives at construction.
constexpr double kProbeTheta[] = {-0.7, -0.1, 0.4, 1.3};
constexpr double kProbeT[] = {-1.5, 0.0, 0.8, 2.0};

void validate_custom_derivative(const std::string& name,
                                const std::function<double(double, double)>& f,
                                const std::function<double(double, double)>& df) {
    for (double u : kProbeTheta) {
        for (double t : kProbeT) {
            const double step = 1e-6 * std::max(1.0, std::abs(u));
            const double fd = (f(u + step, t) - f(u - step, t)) / (2.0 * step);
            const double an = df(u, t);
            const double scale = std::max({std::abs(fd), std::abs(an), 1e-8});
            if (std::abs(fd - an) > 1e-5 * scale)
                throw Error("custom mode '" + name +
                            "': analytic derivative disagrees with finite differences");
        }
    }
}

}  // namespace

ModeSpec ModeSpec::vertical_shift(std::string name) {
    ModeSpec s;
    s.kind = ModeKind::VerticalShift;
    s.name = std::move(name);
    return s;
}

ModeSpec ModeSpec::horizontal_shift(std::string name) {
    ModeSpec s;
    s.kind = ModeKind::HorizontalShift;
    s.name = std::move(name);
    return s;
}

ModeSpec ModeSpec::generalist_specialist(std::string name) {
    ModeSpec s;
    s.kind = ModeKind::GeneralistSpecialist;
    s.name = std::move(name);
    return s;
}

ModeSpec ModeSpec::custom(std::string name,
                          std::function<double(double, double)> term,
                          std::function<double(double, double)> dterm) {
    if (!term || !dterm) throw Error("custom mode needs both a term and its derivative");
    validate_custom_derivative(name, term, dterm);
    ModeSpec s;
    s.kind = ModeKind::Custom;
    s.name = std::move(name);
    s.custom_term = std::move(term);
    s.custom_dterm = std::move(dterm);
    return s;
}

ModeSpec ModeSpec::with_link(std::function<double(double)> g,
                             std::function<double(double)> dg) const {
    if (!g || !dg) throw Error("mode link needs both the map and its derivative");
    ModeSpec s(*this);
    s.link = std::move(g);
    s.dlink = std::move(dg);
    return s;
}

Model::Model(PolynomialTemplate tmpl, std::vector<ModeSpec> modes)
    : tmpl_(std::move(tmpl)), modes_(std::move(modes)) {
    if (modes_.empty()) throw Error("Model: mode list is empty");
    bool nonlinear_warp = false;
    for (std::size_t k = 0; k < modes_.size(); ++k) {
        switch (modes_[k].kind) {
            case ModeKind::VerticalShift:
                if (iv_ >= 0) throw Error("Model: duplicate vertical-shift mode");
                iv_ = static_cast<int>(k);
                break;
            case ModeKind::HorizontalShift:
                if (ih_ >= 0) throw Error("Model: duplicate horizontal-shift mode");
                ih_ = static_cast<int>(k);
                nonlinear_warp = true;
                break;
            case ModeKind::GeneralistSpecialist:
                if (ig_ >= 0) throw Error("Model: duplicate generalist-specialist mode");
                ig_ = static_cast<int>(k);
                nonlinear_warp = true;
                break;
            case ModeKind::Custom:
                if (!modes_[k].custom_term || !modes_[k].custom_dterm)
                    throw Error("Model: custom mode lacks term/derivative");
                break;
        }
    }
    if (nonlinear_warp && (tmpl_.degree() < 2 || !tmpl_.has_curvature()))
        throw Error("Model: nonlinear warps need a template of degree >= 2 with curvature");
}

void Model::check_theta(const Theta& theta) const {
    if (theta.size() != modes_.size())
        throw Error("theta has " + std::to_string(theta.size()) + " components, model has " +
                    std::to_string(modes_.size()) + " modes");
}

Model::Effective Model::effective(const Theta& theta) const {
    check_theta(theta);
    Effective e;
    if (ig_ >= 0) e.w = modes_[ig_].effective(theta[ig_]);
    if (ih_ >= 0) e.m = modes_[ih_].effective(theta[ih_]);
    if (iv_ >= 0) e.h = modes_[iv_].effective(theta[iv_]);
    if (!(e.w > 0.0)) throw Error("generalist-specialist width must be positive");
    return e;
}

double Model::eval_at(const Theta& theta, double t) const {
    const Effective e = effective(theta);
    const double u = e.w * (t - e.m);
    double v = e.w * tmpl_.value(u) + e.h;
    for (std::size_t k = 0; k < modes_.size(); ++k)
        if (modes_[k].kind == ModeKind::Custom)
            v += modes_[k].custom_term(modes_[k].effective(theta[k]), t);
    return v;
}

std::vector<double> Model::eval(const Theta& theta, const SamplingGrid& grid) const {
    std::vector<double> out(grid.size());
    const Effective e = effective(theta);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double u = e.w * (grid[j] - e.m);
        out[j] = e.w * tmpl_.value(u) + e.h;
    }
    for (std::size_t k = 0; k < modes_.size(); ++k) {
        if (modes_[k].kind != ModeKind::Custom) continue;
        const double u = modes_[k].effective(theta[k]);
        for (std::size_t j = 0; j < grid.size(); ++j)
            out[j] += modes_[k].custom_term(u, grid[j]);
    }
    return out;
}

double Model::velocity_at(const Theta& theta, std::size_t k, double t) const {
    if (k >= modes_.size()) throw Error("velocity: mode index out of range");
    const Effective e = effective(theta);
    const ModeSpec& mode = modes_[k];
    const double chain = mode.effective_derivative(theta[k]);
    const double u = e.w * (t - e.m);
    switch (mode.kind) {
        case ModeKind::VerticalShift:
            return chain;
        case ModeKind::HorizontalShift:
            // d/dm [w z(w(t-m))] = -w^2 z'(w(t-m))
            return chain * (-e.w * e.w * tmpl_.derivative_value(u));
        case ModeKind::GeneralistSpecialist:
            // d/dw [w z(w(t-m))] = z(u) + u z'(u)
            return chain * (tmpl_.value(u) + u * tmpl_.derivative_value(u));
        case ModeKind::Custom:
            return chain * mode.custom_dterm(mode.effective(theta[k]), t);
    }
    throw Error("velocity: unreachable");
}

std::vector<double> Model::velocity(const Theta& theta, std::size_t k,
                                    const SamplingGrid& grid) const {
    std::vector<double> out(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) out[j] = velocity_at(theta, k, grid[j]);
    return out;
}

double Manifold::speed(const Theta& theta, std::size_t k) const {
    double ss = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double v = model.velocity_at(theta, k, grid[j]);
        ss += v * v;
    }
    return std::sqrt(ss);
}

WarpedCurve warp_curve(const std::vector<double>& z, const Model& model,
                       const Theta& theta_hat, const SamplingGrid& grid) {
    if (z.size() != grid.size()) throw GridMismatchError("warp_curve: curve/grid length mismatch");
    const Model::Effective e = model.effective(theta_hat);
    WarpedCurve w;
    w.t.resize(grid.size());
    w.z.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        w.t[j] = (grid[j] - e.m) * e.w;
        w.z[j] = (z[j] - e.h) / e.w;
    }
    return w;
}

}  // namespace tmv
