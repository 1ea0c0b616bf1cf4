#ifndef TMV_POLYNOMIAL_HPP_
#define TMV_POLYNOMIAL_HPP_

#include <cstddef>
#include <vector>

namespace tmv {

// Polynomial common-shape template z(x) = sum_q c_q x^q.
// Kept permissive here (constants are valid polynomials); the curvature
// requirements for nonlinear warps are enforced when a Model is built.
class PolynomialTemplate {
public:
    PolynomialTemplate() : coeffs_{0.0} {}
    explicit PolynomialTemplate(std::vector<double> coeffs);

    double value(double x) const;             // Horner
    double derivative_value(double x) const;  // dz/dx

    std::size_t degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
    const std::vector<double>& coefficients() const { return coeffs_; }

    // True if some coefficient of index >= 2 is nonzero.
    bool has_curvature() const;

    // q(u) = z(u + s), coefficients by binomial expansion.
    PolynomialTemplate shifted_argument(double s) const;
    // q(u) = rho * z(rho * u), the width/height rescaling gauge.
    PolynomialTemplate rescaled(double rho) const;
    PolynomialTemplate plus_constant(double delta) const;

private:
    std::vector<double> coeffs_;
};

}  // namespace tmv

#endif  // TMV_POLYNOMIAL_HPP_
