#ifndef OPM_ERRORS_HPP
#define OPM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace opm {

// Invalid configuration, schema violation, or broken type invariant.
// The CLI maps this to exit code 2.
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

// Numeric failure: non-finite values, bracket expansion exhausted, and the
// like. The CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace opm

#endif
