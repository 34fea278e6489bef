#pragma once

#include <stdexcept>
#include <string>

namespace elastica {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A requested construction does not exist (e.g. a planar closed curve with an
// odd number of leaves).
class Infeasible : public std::runtime_error {
public:
    explicit Infeasible(const std::string& what) : std::runtime_error(what) {}
};

} // namespace elastica
