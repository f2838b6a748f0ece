#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace factdeck {

enum class ErrorCode {
    MalformedInput,
    NullCell,
    DuplicateColumn,
    UnsupportedChartType,
    UnknownColumn,
    MissingMeasure,
    InvalidSpec,
    EmptySubspace,
    MissingParameter,
    FocusNotInChart,
    DuplicateFact,
    UnknownId,
    InvalidPosition,
    SlideFull,
    EmptyStory,
    InvalidConfig,
    CorruptSession,
    RevisionConflict,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::NullCell: return "NullCell";
    case ErrorCode::DuplicateColumn: return "DuplicateColumn";
    case ErrorCode::UnsupportedChartType: return "UnsupportedChartType";
    case ErrorCode::UnknownColumn: return "UnknownColumn";
    case ErrorCode::MissingMeasure: return "MissingMeasure";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::EmptySubspace: return "EmptySubspace";
    case ErrorCode::MissingParameter: return "MissingParameter";
    case ErrorCode::FocusNotInChart: return "FocusNotInChart";
    case ErrorCode::DuplicateFact: return "DuplicateFact";
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::InvalidPosition: return "InvalidPosition";
    case ErrorCode::SlideFull: return "SlideFull";
    case ErrorCode::EmptyStory: return "EmptyStory";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::CorruptSession: return "CorruptSession";
    case ErrorCode::RevisionConflict: return "RevisionConflict";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so the
/// service and the CLI can map it to a status without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// HTTP status for an error code (404 unknown ids, 409 stale revisions, 422 otherwise).
constexpr int http_status(ErrorCode code) {
    switch (code) {
    case ErrorCode::UnknownId: return 404;
    case ErrorCode::RevisionConflict: return 409;
    default: return 422;
    }
}

} // namespace factdeck
