#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace causal {

enum class ErrorCode {
    InvalidName,
    DuplicateNode,
    DuplicateEdge,
    SelfLoop,
    UnknownNode,
    CycleFound,
    InvalidModeration,
    SameNode,
    InvalidQuery,
    LatentConditioned,
    SizeLimit,
    SyntaxError,
    SemanticError,
    ModerationPresent,
    InvalidParameter,
    SingularMatrix,
    RankDeficient,
    WeakInstrument,
    UnknownCase,
    TooFewRows,
    NonPositiveInput,
    MalformedData,
};

std::string_view to_string(ErrorCode code);

// Base of every domain error raised by the library. IO failures are reported
// through std::ios_base::failure / std::system_error instead.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class CycleError : public Error {
public:
    explicit CycleError(std::vector<std::string> witness);

    // Closed node sequence, first element repeated at the end (A, B, A).
    const std::vector<std::string>& witness() const noexcept { return witness_; }

private:
    std::vector<std::string> witness_;
};

struct SourceLocation {
    std::size_t line = 1;
    std::size_t column = 1;
};

class ParseError : public Error {
public:
    ParseError(ErrorCode code, SourceLocation where, const std::string& message);

    SourceLocation location() const noexcept { return where_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    SourceLocation where_;
    std::string detail_;
};

}  // namespace causal
