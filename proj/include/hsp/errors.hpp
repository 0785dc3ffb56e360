#pragma once

#include <stdexcept>
#include <string>

namespace hsp {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// a solver gave up; carries where and when
struct SolverError : std::runtime_error {
    SolverError(const std::string& kind, double t, long cell, const std::string& what)
        : std::runtime_error(kind + " at t=" + std::to_string(t) + ", cell " + std::to_string(cell) + ": " + what),
          kind(kind), t(t), cell(cell) {}
    std::string kind;
    double t;
    long cell;
};

}  // namespace hsp
