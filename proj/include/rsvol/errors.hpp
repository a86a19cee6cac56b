#pragma once

#include <stdexcept>
#include <string>

namespace rsvol {

/// Raised on invalid input data (bad CSV rows, violated invariants,
/// arbitrage-bound violations, ...). The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an operation is evaluated outside its mathematical domain
/// (greeks at tau=0, sigma_c with T<=t, ...).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace rsvol
