#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace deltastrip {

enum class ErrorKind {
    InadmissibleParams,
    InvalidGrid,
    ZeroField,
    ProjectionUndefined,
    BranchAmbiguity,
    BracketNotFound,
    ConsistencyError,
    StepFailure,
    OnDiagonal,
    SingularFormula,
    ParseError,
    ValidationError,
    IoError,
};

std::string_view to_string(ErrorKind kind);

// Every failure surfaced by the library carries a machine-readable kind so the
// CLI can emit structured error records.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace deltastrip
