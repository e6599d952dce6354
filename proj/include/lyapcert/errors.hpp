#pragma once

#include <stdexcept>
#include <string>

namespace lyapcert {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// log|T'| evaluated on an interval containing the critical point.
struct SingularityError : std::domain_error {
    using std::domain_error::domain_error;
};

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct AssemblyError : std::runtime_error {
    AssemblyError(const std::string& what, int row, int col, double width)
        : std::runtime_error(what), row(row), col(col), width(width) {}
    int row;
    int col;
    double width;
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CertificationError : std::runtime_error {
    CertificationError(const std::string& what, double best)
        : std::runtime_error(what), best_bound(best) {}
    double best_bound;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace lyapcert
