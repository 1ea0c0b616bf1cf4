#ifndef TMV_MODEL_HPP_
#define TMV_MODEL_HPP_

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tmv/polynomial.hpp"
#include "tmv/types.hpp"

namespace tmv {

enum class ModeKind { VerticalShift, HorizontalShift, GeneralistSpecialist, Custom };

// One predetermined mode of variation. The named kinds compose as
//   R(theta, t) = w * z(w * (t - m)) + h  (+ custom additive terms),
// with w = 1, m = 0, h = 0 when the corresponding mode is absent.
//
// A mode may carry a link u = g(theta) reparameterizing its raw coordinate;
// the effective parameter fed into the composition is u. Links must be
// strictly monotone and smooth, with an exact derivative.
//
// Custom modes contribute an additive term f(u, t) with an analytic
// derivative df/du; the derivative is validated against central finite
// differences when the mode is created.
struct ModeSpec {
    ModeKind kind = ModeKind::VerticalShift;
    std::string name;
    std::function<double(double)> link;    // empty => identity
    std::function<double(double)> dlink;   // empty => 1
    std::function<double(double, double)> custom_term;   // f(u, t)
    std::function<double(double, double)> custom_dterm;  // df/du(u, t)

    static ModeSpec vertical_shift(std::string name = "vertical");
    static ModeSpec horizontal_shift(std::string name = "horizontal");
    static ModeSpec generalist_specialist(std::string name = "genspec");
    static ModeSpec custom(std::string name,
                           std::function<double(double, double)> term,
                           std::function<double(double, double)> dterm);

    ModeSpec with_link(std::function<double(double)> g,
                       std::function<double(double)> dg) const;

    double effective(double theta) const { return link ? link(theta) : theta; }
    double effective_derivative(double theta) const { return dlink ? dlink(theta) : 1.0; }
};

// Template plus ordered mode list; evaluates the regression surface
// R(theta, t) and its exact per-mode partial derivatives.
class Model {
public:
    Model(PolynomialTemplate tmpl, std::vector<ModeSpec> modes);

    std::size_t n_modes() const { return modes_.size(); }
    const ModeSpec& mode(std::size_t k) const { return modes_[k]; }
    const std::vector<ModeSpec>& modes() const { return modes_; }
    const PolynomialTemplate& shape() const { return tmpl_; }

    int vertical_index() const { return iv_; }
    int horizontal_index() const { return ih_; }
    int genspec_index() const { return ig_; }

    struct Effective {
        double w = 1.0;
        double m = 0.0;
        double h = 0.0;
    };
    // Effective named parameters after links; throws on w <= 0.
    Effective effective(const Theta& theta) const;

    double eval_at(const Theta& theta, double t) const;
    std::vector<double> eval(const Theta& theta, const SamplingGrid& grid) const;

    // dR/dtheta_k at one location / over the grid (analytic, chain rule
    // through the link).
    double velocity_at(const Theta& theta, std::size_t k, double t) const;
    std::vector<double> velocity(const Theta& theta, std::size_t k,
                                 const SamplingGrid& grid) const;

    Model with_shape(PolynomialTemplate tmpl) const { return Model(std::move(tmpl), modes_); }

private:
    void check_theta(const Theta& theta) const;

    PolynomialTemplate tmpl_;
    std::vector<ModeSpec> modes_;
    int iv_ = -1, ih_ = -1, ig_ = -1;
};

// Model bound to the study grid: the metric and statistics layers work on
// points of the induced space of variation.
struct Manifold {
    Model model;
    SamplingGrid grid;

    std::size_t dim() const { return model.n_modes(); }
    std::vector<double> eval(const Theta& theta) const { return model.eval(theta, grid); }
    std::vector<double> velocity(const Theta& theta, std::size_t k) const {
        return model.velocity(theta, k, grid);
    }
    // Euclidean norm of the mode-k velocity, the arc-length integrand.
    double speed(const Theta& theta, std::size_t k) const;
};

// Parameter vector with its cached image on the manifold.
struct ManifoldPoint {
    Theta theta;
    std::vector<double> image;

    static ManifoldPoint make(const Manifold& man, Theta theta) {
        ManifoldPoint p;
        p.image = man.eval(theta);
        p.theta = std::move(theta);
        return p;
    }
};

// (z - h)/w plotted against (t - m)w: noiseless model curves land exactly
// on the template.
struct WarpedCurve {
    std::vector<double> t;
    std::vector<double> z;
};
WarpedCurve warp_curve(const std::vector<double>& z, const Model& model,
                       const Theta& theta_hat, const SamplingGrid& grid);

}  // namespace tmv

#endif  // TMV_MODEL_HPP_
