#ifndef TMV_ERRORS_HPP_
#define TMV_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace tmv {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive quadrature exceeded its depth budget; the mode speed function is
// pathological on the requested interval.
struct NonConvergentError : Error {
    using Error::Error;
};

// A component claimed to be separable gave anchor-dependent arc lengths.
struct NotSeparableError : Error {
    using Error::Error;
};

// Composite metrics only handle blocks of one or two modes.
struct UnsupportedBlockSizeError : Error {
    using Error::Error;
};

// The arc-coordinate map could not be inverted on the given bracket.
struct NonInvertibleError : Error {
    using Error::Error;
};

// A numeric minimizer landed on the boundary of its search box.
struct SearchBoxTooSmallError : Error {
    using Error::Error;
};

// Nonlinear least squares failed from every starting point.
struct NoConvergenceError : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct GridMismatchError : Error {
    using Error::Error;
};

}  // namespace tmv

#endif  // TMV_ERRORS_HPP_
