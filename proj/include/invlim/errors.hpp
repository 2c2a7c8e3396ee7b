#pragma once

#include <stdexcept>
#include <string>

namespace invlim {

/// Argument outside the domain of an operation (bad p, eps out of range, grid mismatch, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical procedure (quadrature, bracketing) failed to converge.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Time stepping produced non-finite values.
class InstabilityError : public std::runtime_error {
public:
    InstabilityError(const std::string& what, double time, double cfl)
        : std::runtime_error(what), time_(time), cfl_(cfl) {}
    double time() const { return time_; }
    double cfl() const { return cfl_; }

private:
    double time_;
    double cfl_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace invlim
