#pragma once

#include <stdexcept>
#include <string>

namespace multalpha {

// Argument outside the mathematical domain of an operation (p = 0 for a
// quantile, negative degrees of freedom, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A structural precondition failed: mismatched lengths, a ladder that is not
// strictly decreasing, a schedule that is not proportional, malformed input.
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Quadrature or root finding failed to reach its tolerance, or a cost
// function produced a non-finite value.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require_domain(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

inline void require_contract(bool ok, const std::string& what) {
    if (!ok) throw ContractError(what);
}

}  // namespace detail
}  // namespace multalpha
