#include "causal/error.hpp"

namespace causal {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidName: return "InvalidName";
        case ErrorCode::DuplicateNode: return "DuplicateNode";
        case ErrorCode::DuplicateEdge: return "DuplicateEdge";
        case ErrorCode::SelfLoop: return "SelfLoop";
        case ErrorCode::UnknownNode: return "UnknownNode";
        case ErrorCode::CycleFound: return "CycleFound";
        case ErrorCode::InvalidModeration: return "InvalidModeration";
        case ErrorCode::SameNode: return "SameNode";
        case ErrorCode::InvalidQuery: return "InvalidQuery";
        case ErrorCode::LatentConditioned: return "LatentConditioned";
        case ErrorCode::SizeLimit: return "SizeLimit";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::SemanticError: return "SemanticError";
        case ErrorCode::ModerationPresent: return "ModerationPresent";
        case ErrorCode::InvalidParameter: return "InvalidParameter";
        case ErrorCode::SingularMatrix: return "SingularMatrix";
        case ErrorCode::RankDeficient: return "RankDeficient";
        case ErrorCode::WeakInstrument: return "WeakInstrument";
        case ErrorCode::UnknownCase: return "UnknownCase";
        case ErrorCode::TooFewRows: return "TooFewRows";
        case ErrorCode::NonPositiveInput: return "NonPositiveInput";
        case ErrorCode::MalformedData: return "MalformedData";
    }
    return "Unknown";
}

namespace {

std::string describe_cycle(const std::vector<std::string>& witness) {
    std::string out = "cycle found: ";
    for (std::size_t i = 0; i < witness.size(); ++i) {
        if (i > 0) out += " -> ";
        out += witness[i];
    }
    return out;
}

}  // namespace

CycleError::CycleError(std::vector<std::string> witness)
    : Error(ErrorCode::CycleFound, describe_cycle(witness)), witness_(std::move(witness)) {}

ParseError::ParseError(ErrorCode code, SourceLocation where, const std::string& message)
    : Error(code, std::to_string(where.line) + ":" + std::to_string(where.column) + ": " +
                      (code == ErrorCode::SyntaxError ? "syntax error: " : "semantic error: ") +
                      message),
      where_(where),
      detail_(message) {}

}  // namespace causal
