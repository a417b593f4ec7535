#ifndef CASDEV_ERRORS_HPP
#define CASDEV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace casdev {

// Bad run configuration: unknown model kind, invalid grid, unsupported
// regime/model combination.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Work refused because it would exceed a resource guard (e.g. tree size).
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

// The moment recursion is invalid at the requested order: h >= chi(r) makes
// the defining equation unusable, it does not merely return infinity.
class MomentDivergence : public DomainError {
public:
    explicit MomentDivergence(const std::string& msg) : DomainError(msg) {}
};

// An iteration cap was hit before the requested tolerance was met.  Carries
// the sub-interval of the domain that had not stabilized.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& msg, double unstable_lo, double unstable_hi)
        : std::runtime_error(msg), lo_(unstable_lo), hi_(unstable_hi) {}
    double unstable_lo() const { return lo_; }
    double unstable_hi() const { return hi_; }

private:
    double lo_;
    double hi_;
};

} // namespace casdev

#endif
