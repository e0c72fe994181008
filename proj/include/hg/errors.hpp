#pragma once
#include <stdexcept>
#include <string>

namespace hg {

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& w) : std::runtime_error(w) {}
};
struct UnsupportedExtension : std::runtime_error {
    explicit UnsupportedExtension(const std::string& w) : std::runtime_error(w) {}
};
struct NotInvertible : std::runtime_error {
    explicit NotInvertible(const std::string& w) : std::runtime_error(w) {}
};
struct NotIntegrable : std::runtime_error {
    explicit NotIntegrable(const std::string& w) : std::runtime_error(w) {}
};
struct EvaluationDomainError : std::runtime_error {
    explicit EvaluationDomainError(const std::string& w) : std::runtime_error(w) {}
};
struct NonOrdinary : std::runtime_error {
    explicit NonOrdinary(const std::string& w) : std::runtime_error(w) {}
};
struct CalibrationError : std::runtime_error {
    explicit CalibrationError(const std::string& w) : std::runtime_error(w) {}
};
struct MismatchError : std::runtime_error {
    explicit MismatchError(const std::string& w) : std::runtime_error(w) {}
};
struct SolveError : std::runtime_error {
    explicit SolveError(const std::string& w) : std::runtime_error(w) {}
};
struct ResidueError : std::runtime_error {
    explicit ResidueError(const std::string& w) : std::runtime_error(w) {}
};
struct ReductionStall : std::runtime_error {
    explicit ReductionStall(const std::string& w) : std::runtime_error(w) {}
};

} // namespace hg
