#ifndef TMV_METRICS_HPP_
#define TMV_METRICS_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tmv/geometry.hpp"
#include "tmv/model.hpp"

namespace tmv {

// Everything needed to evaluate the origin-anchored manifold metrics.
struct MetricConfig {
    Theta origin;
    double gamma = 0.5;  // weight on d1 in the blend
    ArcConfig arc;
};

// Partition of mode indices into additively separable blocks, e.g.
// {(genspec, horizontal), (vertical)} for the 3-parameter model.
struct SeparabilityDecl {
    std::vector<std::vector<std::size_t>> blocks;

    static SeparabilityDecl singletons(std::size_t n_modes);
    void check_partition(std::size_t n_modes) const;
};

// Numerically verifies the declaration: cross-block mixed partials of R must
// vanish at random points drawn from `box` (per-mode intervals), tol 1e-6.
void validate_separability(const Manifold& man, const SeparabilityDecl& decl,
                           const std::vector<std::pair<double, double>>& box,
                           std::uint64_t seed = 20u);

// Arc length along mode k between parameter values a and b; by equality of
// paths the value is independent of where the other components sit. With
// verify_anchors set, independence is checked at perturbed anchors (tol 1e-7)
// and NotSeparableError is thrown on disagreement.
double c_component(const Manifold& man, std::size_t k, double a, double b,
                   const Theta& anchor, const ArcConfig& cfg, bool verify_anchors = true);

// Pythagorean metric sqrt(sum_k C_k^2) for fully separable models (all
// blocks singletons).
double dist_separable(const Manifold& man, const Theta& theta1, const Theta& theta2,
                      const SeparabilityDecl& decl, const ArcConfig& cfg);

// Origin-anchored coordinates of a point for one pair of modes (ka, kb):
//   eta  : signed arc along ka with kb held at the origin
//   zeta : signed arc along kb with ka held at the origin
//   a    : signed arc along ka with kb held at the point's own value
//   b    : signed arc along kb with ka held at the point's own value
// d1 is the Euclidean distance between (eta, zeta) images, d2 between (a, b)
// images. The statistics layer reuses these coordinates so that per-mode sums
// of squares regroup exactly.
class PairMetric {
public:
    PairMetric(const Manifold& man, std::size_t ka, std::size_t kb, MetricConfig cfg);

    struct Coords {
        double eta = 0.0, zeta = 0.0, a = 0.0, b = 0.0;
    };
    Coords coords(const Theta& theta) const;

    static double d1_sq(const Coords& p, const Coords& q);
    static double d2_sq(const Coords& p, const Coords& q);
    double dv_sq(const Coords& p, const Coords& q) const;

    double d1(const Theta& t1, const Theta& t2) const;
    double d2(const Theta& t1, const Theta& t2) const;
    double dv(const Theta& t1, const Theta& t2) const;

    double gamma() const { return cfg_.gamma; }
    std::size_t mode_a() const { return ka_; }
    std::size_t mode_b() const { return kb_; }

private:
    const Manifold& man_;
    std::size_t ka_, kb_;
    MetricConfig cfg_;
};

// Two-mode path metrics on a model with exactly two modes.
double d1(const Manifold& man, const Theta& theta1, const Theta& theta2,
          const MetricConfig& cfg);
double d2(const Manifold& man, const Theta& theta1, const Theta& theta2,
          const MetricConfig& cfg);
double dv(const Manifold& man, const Theta& theta1, const Theta& theta2,
          const MetricConfig& cfg);

// Composite metric over separable blocks: singleton blocks contribute C^2,
// pair blocks contribute dv^2 with the configured gamma. Blocks of three or
// more modes are not supported.
double dist_composite(const Manifold& man, const Theta& theta1, const Theta& theta2,
                      const MetricConfig& cfg, const SeparabilityDecl& decl);

}  // namespace tmv

#endif  // TMV_METRICS_HPP_
