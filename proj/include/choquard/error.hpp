#pragma once

#include <stdexcept>
#include <string>

namespace choquard {

// Raised when an input lies outside its admissible parameter domain
// (dimension, grid size, Riesz order, exponents, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Two fields, or a field and a kernel, live on different grids.
class GridMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The nonlocal term vanishes, so quotient-type quantities are undefined.
class DegenerateField : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace choquard
