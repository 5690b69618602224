#ifndef NATCAT_ERRORS_HPP
#define NATCAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace natcat {

// Bad user input: malformed CSV, out-of-range coordinates, invalid flags.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A distribution fit could not be carried out (too few points, degenerate
// sample, non-integrable parameters).
class FitError : public std::runtime_error {
public:
    explicit FitError(const std::string& what) : std::runtime_error(what) {}
};

// Quadrature or root finding failed to reach the requested tolerance.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace natcat

#endif
