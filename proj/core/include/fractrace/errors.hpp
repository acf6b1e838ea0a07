#pragma once

#include <stdexcept>
#include <string>

namespace fractrace {

// Parameter / hypothesis violations (bad grid shapes, out-of-range exponents,
// violated inequality hypotheses such as alpha <= (1+mu)/q). CLI exit code 2.
class param_error : public std::invalid_argument {
public:
    explicit param_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// A numerical routine failed to reach its accuracy target (series did not
// converge, adaptive quadrature exhausted its budget). CLI exit code 3.
class accuracy_error : public std::runtime_error {
public:
    explicit accuracy_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Grid cannot resolve the requested object (too few dyadic shells, ...).
class resolution_error : public param_error {
public:
    explicit resolution_error(const std::string& msg) : param_error(msg) {}
};

} // namespace fractrace
