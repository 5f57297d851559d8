#pragma once

#include <stdexcept>
#include <string>

namespace lxtopic {

enum class ErrorCode {
    FileTooLarge,
    MissingColumn,
    MalformedCsv,
    IoError,
    InvalidConfig,
    EmptyVocabulary,
    DimensionTooLarge,
    DimensionMismatch,
    RowCountMismatch,
    NonFiniteValue,
    InvalidCost,
    NotASimplex,
    ParseError,
    LlmUnavailable,
    EmptyReference,
    LengthMismatch,
    MissingLabels,
    SweepFailed,
    TooManyTopics,
    InvalidCheckpoint,
};

const char* to_string(ErrorCode code) noexcept;

/// Runtime failure tagged with the operation that raised it. The CLI prints
/// `where()` so users can tell which pipeline stage failed.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string where, const std::string& message)
        : std::runtime_error(where + ": " + to_string(code) + ": " + message),
          code_(code),
          where_(std::move(where)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& where() const noexcept { return where_; }

private:
    ErrorCode code_;
    std::string where_;
};

inline const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::FileTooLarge: return "FileTooLarge";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::MalformedCsv: return "MalformedCsv";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::EmptyVocabulary: return "EmptyVocabulary";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::RowCountMismatch: return "RowCountMismatch";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::InvalidCost: return "InvalidCost";
    case ErrorCode::NotASimplex: return "NotASimplex";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::LlmUnavailable: return "LlmUnavailable";
    case ErrorCode::EmptyReference: return "EmptyReference";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::MissingLabels: return "MissingLabels";
    case ErrorCode::SweepFailed: return "SweepFailed";
    case ErrorCode::TooManyTopics: return "TooManyTopics";
    case ErrorCode::InvalidCheckpoint: return "InvalidCheckpoint";
    }
    return "Unknown";
}

} // namespace lxtopic
