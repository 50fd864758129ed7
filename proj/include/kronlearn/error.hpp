#pragma once

#include <stdexcept>
#include <string>

namespace kronlearn {

/// Malformed or inconsistent input data (files, indices, label domains).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical failure: NaN/Inf encountered, solver breakdown, diverging objective.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace kronlearn
