#pragma once

#include <stdexcept>
#include <string>

namespace crnet {

/// Malformed or out-of-domain input (bad parameters, inconsistent scenario).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine did not reach its tolerance.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double achieved_error)
        : std::runtime_error(what), achieved_error_(achieved_error) {}

    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

}  // namespace crnet
