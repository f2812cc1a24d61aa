#pragma once

#include <stdexcept>
#include <string>

namespace renew {

enum class ErrorKind {
    BadInput,            ///< malformed file, invariant violation, bad parameter
    AssumptionViolated,  ///< e.g. current stronger than thrust along a path
    NoFeasiblePlan,      ///< every channel blocked or every candidate infeasible
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(const std::string& what) { throw Error(ErrorKind::BadInput, what); }

}  // namespace renew
