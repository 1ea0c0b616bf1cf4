#include "tmv/polynomial.hpp"

#include "tmv/errors.hpp"

namespace tmv {

PolynomialTemplate::PolynomialTemplate(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw Error("PolynomialTemplate: empty coefficient vector");
}

double PolynomialTemplate::value(double x) const {
    double acc = 0.0;
    for (std::size_t q = coeffs_.size(); q-- > 0;) acc = acc * x + coeffs_[q];
    return acc;
}

double PolynomialTemplate::derivative_value(double x) const {
    double acc = 0.0;
    for (std::size_t q = coeffs_.size(); q-- > 1;)
        acc = acc * x + static_cast<double>(q) * coeffs_[q];
    return acc;
}

bool PolynomialTemplate::has_curvature() const {
    for (std::size_t q = 2; q < coeffs_.size(); ++q)
        if (coeffs_[q] != 0.0) return true;
    return false;
}

PolynomialTemplate PolynomialTemplate::shifted_argument(double s) const {
    const std::size_t n = coeffs_.size();
    std::vector<double> out(n, 0.0);
    std::vector<double> binom{1.0};  // row q of Pascal's triangle
    for (std::size_t q = 0; q < n; ++q) {
        double spow = 1.0;  // s^(q-r), r descending from q
        for (std::size_t r = q + 1; r-- > 0;) {
            out[r] += coeffs_[q] * binom[r] * spow;
            spow *= s;
        }
        binom.push_back(0.0);
        for (std::size_t r = binom.size() - 1; r >= 1; --r) binom[r] += binom[r - 1];
    }
    return PolynomialTemplate(out);
}

PolynomialTemplate PolynomialTemplate::rescaled(double rho) const {
    std::vector<double> out(coeffs_);
    double p = rho;
    for (std::size_t q = 0; q < out.size(); ++q) {
        out[q] *= p;
        p *= rho;
    }
    return PolynomialTemplate(out);
}

PolynomialTemplate PolynomialTemplate::plus_constant(double delta) const {
    std::vector<double> out(coeffs_);
    out[0] += delta;
    return PolynomialTemplate(out);
}

}  // namespace tmv
