#ifndef TMV_TYPES_HPP_
#define TMV_TYPES_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "tmv/errors.hpp"

namespace tmv {

// Parameter vector; component order follows the model's mode list and is
// identical for every curve in a study.
using Theta = std::vector<double>;

// Shared observation design: ordered sampling locations t_1 < ... < t_d.
class SamplingGrid {
public:
    explicit SamplingGrid(std::vector<double> t) : t_(std::move(t)) {
        if (t_.size() < 3)
            throw Error("SamplingGrid: need at least 3 sampling points");
        for (std::size_t j = 1; j < t_.size(); ++j)
            if (!(t_[j] > t_[j - 1]))
                throw Error("SamplingGrid: sampling points must be strictly increasing");
    }

    std::size_t size() const { return t_.size(); }
    double operator[](std::size_t j) const { return t_[j]; }
    const std::vector<double>& points() const { return t_; }
    double span() const { return t_.back() - t_.front(); }
    double front() const { return t_.front(); }
    double back() const { return t_.back(); }

private:
    std::vector<double> t_;
};

// One observed curve: responses on the study grid plus a family weight.
struct SampledCurve {
    std::string id;
    std::vector<double> z;
    double weight = 1.0;
};

inline void check_curve(const SampledCurve& c, const SamplingGrid& grid) {
    if (c.z.size() != grid.size())
        throw GridMismatchError("curve '" + c.id + "' has " + std::to_string(c.z.size()) +
                                " samples, grid has " + std::to_string(grid.size()));
    if (!(c.weight > 0.0))
        throw Error("curve '" + c.id + "': weight must be positive");
}

}  // namespace tmv

#endif  // TMV_TYPES_HPP_
